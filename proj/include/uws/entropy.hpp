#pragma once

// Normalized-entropy confidence measures over soft-alignment matrices.
//
// For a phone t_i aligned over source words s_1..s_n the normalized entropy is
//
//     NE(t_i) = -sum_j p_ij * log_n(p_ij)        (0 * log 0 = 0, NE = 0 when n = 1)
//
// and the ANE of a sentence is the mean NE over its phones. Corpus ANE is the
// mean of sentence ANEs; token, type and alignment-pair ANEs live in the
// segmenter and lexicon.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uws/alignment_matrix.hpp"
#include "uws/corpus.hpp"

namespace uws {

/// Normalized entropy of one alignment row, in [0,1]. The row is validated
/// (entries in [0,1], sum within `tolerance`) and renormalized before evaluation.
double phone_ne(std::span<const double> row, double tolerance = kRowSumTolerance);

struct AneReport {
    std::string id;
    std::vector<double> per_phone;
    double sentence_ane = 0.0;
};

/// Per-phone NE and their unweighted mean.
AneReport sentence_ane(const AlignmentMatrix& matrix, std::string id = {},
                       double tolerance = kRowSumTolerance);

std::vector<AneReport> corpus_reports(const Corpus& corpus, double tolerance = kRowSumTolerance);

enum class CorpusAneWeighting {
    /// Mean of sentence ANEs (default).
    sentence,
    /// Mean over all phones of the corpus.
    phone,
};

/// Summarizes per-sentence reports. Accumulates in ascending id order so the
/// result does not depend on input order. Throws ArgumentError on an empty set.
double corpus_ane(std::span<const AneReport> reports,
                  CorpusAneWeighting weighting = CorpusAneWeighting::sentence);

double corpus_ane(const Corpus& corpus,
                  CorpusAneWeighting weighting = CorpusAneWeighting::sentence,
                  double tolerance = kRowSumTolerance);

struct AverageOptions {
    /// Divide every averaged row by its sum. Off by default: the element-wise
    /// mean of valid rows is already within tolerance of 1.
    bool renormalize = false;
};

/// Element-wise mean of the run matrices, sentence by sentence. Each cell's
/// mean is computed over the sorted run values, so the result is bit-identical
/// under any permutation of the runs and equals the input on identical runs.
Corpus average_runs(const RunSet& runs, const AverageOptions& options = {});

struct HeadChoice {
    std::size_t index = 0;
    double corpus_ane = 0.0;
    /// Corpus ANE of every head, in input order.
    std::vector<double> head_anes;
};

/// Picks the head (run) with minimal corpus ANE; ties go to the lowest index.
HeadChoice select_head(const RunSet& heads,
                       CorpusAneWeighting weighting = CorpusAneWeighting::sentence);

}  // namespace uws
