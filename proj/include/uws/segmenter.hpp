#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uws/corpus.hpp"

namespace uws {

/// Half-open [begin, end) range over silence-free phone indices.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const Span&, const Span&) = default;
};

/// One discovered word: a run of neighbouring phones whose alignment rows peak
/// at the same source word.
struct Token {
    PhoneSeq phones;
    Span span;
    std::size_t aligned_word_index = 0;
    std::string aligned_word;
    /// Mean NE of the token's phones.
    double token_ane = 0.0;

    friend bool operator==(const Token&, const Token&) = default;
};

struct Segmentation {
    std::string id;
    std::vector<Token> tokens;
    /// Internal boundaries: the span starts of every token but the first.
    std::vector<std::size_t> boundaries;

    /// Total number of silence-free phones covered by the tokens.
    std::size_t phone_count() const noexcept {
        return tokens.empty() ? 0 : tokens.back().span.end;
    }
    friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax_row(std::span<const double> row);

/// Groups consecutive phones with the same argmax column. A silence marker
/// between two phones in the original target always forces a boundary;
/// runs of silences count once and leading/trailing silence adds nothing.
Segmentation segment(const AlignmentRecord& record, const CorpusOptions& options = {});

std::vector<Segmentation> segment_corpus(const Corpus& corpus, const CorpusOptions& options = {});

/// Internal boundary positions of a gold segmentation (cumulative word lengths,
/// excluding 0 and the total length).
std::vector<std::size_t> gold_boundaries(const GoldWords& words);

/// Rebuilds the boundary list from token spans and checks that the spans tile
/// [0, n) without gaps. Throws ValidationError otherwise.
void validate_segmentation(const Segmentation& segmentation);

}  // namespace uws
