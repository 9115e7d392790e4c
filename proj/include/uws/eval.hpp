#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uws/corpus.hpp"
#include "uws/lexicon.hpp"
#include "uws/segmenter.hpp"

namespace uws {

/// Precision, recall and F-score as fractions in [0,1].
struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/// P = hits/hyp, R = hits/gold, F = harmonic mean. A zero denominator yields 1
/// when both totals are zero and 0 otherwise; F is 0 when P + R = 0.
Prf prf_from_counts(std::size_t hits, std::size_t hyp_total, std::size_t gold_total);

struct BoundaryCounts {
    std::size_t hits = 0;
    std::size_t hyp_total = 0;
    std::size_t gold_total = 0;

    friend bool operator==(const BoundaryCounts&, const BoundaryCounts&) = default;
};

struct BoundaryScore {
    Prf prf;
    BoundaryCounts counts;
};

/// Micro-averaged internal-boundary scoring over silence-free phone indices.
/// Every hypothesis needs a gold entry spelling the same phones.
BoundaryScore boundary_prf(std::span<const Segmentation> hyp, const GoldMap& gold);

/// Distinct gold word forms over the corpus.
TypeSet gold_lexicon(const GoldMap& gold);

Prf type_prf(const TypeSet& discovered, const TypeSet& gold);

/// One row of an ANE sweep; precision/recall/f are percentages.
struct SweepRow {
    AneThreshold threshold;
    std::size_t kept = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/// Parses a threshold grid: comma-separated items, each a number, the literal
/// "all", or start:stop:step (inclusive of stop). E.g. "0.1:0.9:0.1,all".
std::vector<AneThreshold> parse_threshold_grid(const std::string& text);

/// Filters the pairs at each threshold and scores the kept types against the
/// gold lexicon. Thresholds must be ascending with "all" only in last place.
std::vector<SweepRow> ane_sweep(std::span<const AlignmentEntry> pairs, const TypeSet& gold,
                                std::span<const AneThreshold> thresholds,
                                FilterRule rule = FilterRule::any_pair);

/// Sample Pearson correlation. Throws ArgumentError on length mismatch, fewer
/// than two points or a constant sequence.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct RunPoint {
    std::string label;
    double corpus_ane = 0.0;
    double boundary_f = 0.0;
};

struct CorrelationReport {
    std::vector<RunPoint> points;
    double rho = 0.0;
};

CorrelationReport correlate_runs(std::vector<RunPoint> points);

}  // namespace uws
