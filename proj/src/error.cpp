#include "uws/error.hpp"

#include <fmt/core.h>

namespace uws {

namespace {

std::string compose(const std::string& message, const std::string& source, std::size_t line,
                    const std::string& sentence_id) {
    std::string where;
    if (!source.empty()) where += source;
    if (line > 0) where += fmt::format("{}line {}", where.empty() ? "" : ":", line);
    if (!sentence_id.empty()) {
        where += fmt::format("{}sentence '{}'", where.empty() ? "" : ": ", sentence_id);
    }
    return where.empty() ? message : fmt::format("{}: {}", where, message);
}

}  // namespace

ValidationError::ValidationError(const std::string& message, std::string source,
                                 std::size_t line, std::string sentence_id)
    : Error(compose(message, source, line, sentence_id)),
      detail_(message),
      source_(std::move(source)),
      line_(line),
      sentence_id_(std::move(sentence_id)) {}

ValidationError ValidationError::located(const std::string& source, std::size_t line,
                                         const std::string& sentence_id) const {
    return ValidationError(detail_, source_.empty() ? source : source_,
                           line_ == 0 ? line : line_,
                           sentence_id_.empty() ? sentence_id : sentence_id_);
}

}  // namespace uws
