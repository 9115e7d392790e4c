#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uws/alignment_matrix.hpp"

namespace uws {

inline constexpr std::string_view kDefaultSilenceToken = "<sil>";

using PhoneSeq = std::vector<std::string>;
/// Gold segmentation of one sentence: contiguous groupings of non-silence phones.
using GoldWords = std::vector<PhoneSeq>;
/// Sentence id -> gold words. Ordered by id.
using GoldMap = std::map<std::string, GoldWords>;

struct SentencePair {
    std::string id;
    std::vector<std::string> source;
    /// Target phones, possibly containing silence markers.
    std::vector<std::string> target;
    std::optional<GoldWords> gold_words;

    friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

struct AlignmentRecord {
    SentencePair pair;
    AlignmentMatrix matrix;

    friend bool operator==(const AlignmentRecord&, const AlignmentRecord&) = default;
};

using Corpus = std::vector<AlignmentRecord>;

/// Several corpora over the same sentences: one per training run or attention head.
struct RunSet {
    std::vector<Corpus> runs;
    std::vector<std::string> labels;
};

struct CorpusOptions {
    std::string silence_token{kDefaultSilenceToken};
    double row_tolerance = kRowSumTolerance;
};

/// Target phones with every silence marker removed.
PhoneSeq strip_silence(const std::vector<std::string>& target, std::string_view silence_token);

/// Checks the SentencePair and AlignmentRecord invariants: non-empty source and
/// target, matrix shape |t'| x |s| where t' is the silence-free target, valid rows,
/// and (when present) gold words that spell the silence-free target.
void validate_record(const AlignmentRecord& record, const CorpusOptions& options = {});

/// Checks that `words` is non-empty, has no empty grouping and concatenates to `phones`.
void validate_gold(const GoldWords& words, const PhoneSeq& phones);

/// Checks the RunSet invariant: every run holds the same ids in the same order
/// with identical source/target sequences and matrix shapes.
void validate_run_set(const RunSet& runs);

/// Returns `corpus` with gold words attached from `gold`. Every record must have
/// a gold entry that matches its silence-free target.
Corpus attach_gold(Corpus corpus, const GoldMap& gold, const CorpusOptions& options = {});

}  // namespace uws
