#include "uws/segmenter.hpp"

#include <fmt/core.h>

#include "uws/entropy.hpp"
#include "uws/error.hpp"

namespace uws {

std::size_t argmax_row(std::span<const double> row) {
    if (row.empty()) throw ArgumentError("argmax of an empty row");
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
        if (row[j] > row[best]) best = j;
    }
    return best;
}

Segmentation segment(const AlignmentRecord& record, const CorpusOptions& options) {
    validate_record(record, options);
    const auto& pair = record.pair;

    // For each silence-free phone: its token, and whether silence preceded it.
    PhoneSeq phones;
    std::vector<bool> after_silence;
    bool pending_silence = false;
    for (const auto& t : pair.target) {
        if (t == options.silence_token) {
            pending_silence = true;
            continue;
        }
        phones.push_back(t);
        after_silence.push_back(pending_silence);
        pending_silence = false;
    }

    const AneReport ne = sentence_ane(record.matrix, pair.id, options.row_tolerance);

    Segmentation seg;
    seg.id = pair.id;
    std::size_t start = 0;
    std::size_t column = argmax_row(record.matrix.row(0));
    auto close_token = [&](std::size_t end) {
        Token token;
        token.phones.assign(phones.begin() + static_cast<std::ptrdiff_t>(start),
                            phones.begin() + static_cast<std::ptrdiff_t>(end));
        token.span = {start, end};
        token.aligned_word_index = column;
        token.aligned_word = pair.source[column];
        double total = 0.0;
        for (std::size_t i = start; i < end; ++i) total += ne.per_phone[i];
        token.token_ane = total / static_cast<double>(end - start);
        if (start > 0) seg.boundaries.push_back(start);
        seg.tokens.push_back(std::move(token));
    };

    for (std::size_t i = 1; i < phones.size(); ++i) {
        const std::size_t c = argmax_row(record.matrix.row(i));
        if (c != column || after_silence[i]) {
            close_token(i);
            start = i;
            column = c;
        }
    }
    close_token(phones.size());
    return seg;
}

std::vector<Segmentation> segment_corpus(const Corpus& corpus, const CorpusOptions& options) {
    std::vector<Segmentation> out;
    out.reserve(corpus.size());
    for (const auto& record : corpus) out.push_back(segment(record, options));
    return out;
}

std::vector<std::size_t> gold_boundaries(const GoldWords& words) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    for (std::size_t w = 0; w + 1 < words.size(); ++w) {
        pos += words[w].size();
        out.push_back(pos);
    }
    return out;
}

void validate_segmentation(const Segmentation& segmentation) {
    std::size_t expected = 0;
    std::vector<std::size_t> boundaries;
    for (const auto& token : segmentation.tokens) {
        if (token.span.begin != expected || token.span.end <= token.span.begin) {
            throw ValidationError(fmt::format("token span [{},{}) does not continue at {}",
                                              token.span.begin, token.span.end, expected),
                                  {}, 0, segmentation.id);
        }
        if (token.phones.size() != token.span.size()) {
            throw ValidationError(fmt::format("token span [{},{}) carries {} phones",
                                              token.span.begin, token.span.end,
                                              token.phones.size()),
                                  {}, 0, segmentation.id);
        }
        if (expected > 0) boundaries.push_back(expected);
        expected = token.span.end;
    }
    if (segmentation.tokens.empty()) {
        throw ValidationError("segmentation has no tokens", {}, 0, segmentation.id);
    }
    if (boundaries != segmentation.boundaries) {
        throw ValidationError("boundary set disagrees with token spans", {}, 0, segmentation.id);
    }
}

}  // namespace uws
