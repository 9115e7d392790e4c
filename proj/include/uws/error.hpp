#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uws {

/// Base for every error raised by the library. The CLI maps it to exit status 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that violates a data invariant. Carries the location when known so
/// diagnostics can name the file, line and sentence id.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message, std::string source = {},
                             std::size_t line = 0, std::string sentence_id = {});

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& sentence_id() const noexcept { return sentence_id_; }
    const std::string& detail() const noexcept { return detail_; }

    /// Copy of this error with the location fields filled in where still empty.
    ValidationError located(const std::string& source, std::size_t line,
                            const std::string& sentence_id) const;

private:
    std::string detail_;
    std::string source_;
    std::size_t line_ = 0;
    std::string sentence_id_;
};

/// Bad arguments to an operation (out-of-range threshold, empty collection, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace uws
