#include "uws/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "uws/error.hpp"

namespace uws {

double phone_ne(std::span<const double> row, double tolerance) {
    validate_row(row, tolerance);
    const std::size_t n = row.size();
    if (n == 1) return 0.0;
    const double sum = row_sum(row);
    double h = 0.0;
    for (double raw : row) {
        const double p = raw / sum;
        if (p > 0.0) h -= p * std::log(p);
    }
    return std::clamp(h / std::log(static_cast<double>(n)), 0.0, 1.0);
}

AneReport sentence_ane(const AlignmentMatrix& matrix, std::string id, double tolerance) {
    AneReport report;
    report.id = std::move(id);
    if (matrix.rows() == 0) throw ValidationError("matrix has no rows", {}, 0, report.id);
    report.per_phone.reserve(matrix.rows());
    double total = 0.0;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        try {
            report.per_phone.push_back(phone_ne(matrix.row(i), tolerance));
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("matrix row {}: {}", i, e.detail()), {}, 0, report.id);
        }
        total += report.per_phone.back();
    }
    report.sentence_ane = total / static_cast<double>(matrix.rows());
    return report;
}

std::vector<AneReport> corpus_reports(const Corpus& corpus, double tolerance) {
    std::vector<AneReport> reports;
    reports.reserve(corpus.size());
    for (const auto& record : corpus) {
        reports.push_back(sentence_ane(record.matrix, record.pair.id, tolerance));
    }
    return reports;
}

double corpus_ane(std::span<const AneReport> reports, CorpusAneWeighting weighting) {
    if (reports.empty()) throw ArgumentError("corpus ANE of an empty corpus is undefined");
    std::vector<std::size_t> order(reports.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return reports[a].id < reports[b].id; });

    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t k : order) {
        if (weighting == CorpusAneWeighting::sentence) {
            total += reports[k].sentence_ane;
            ++count;
        } else {
            for (double ne : reports[k].per_phone) total += ne;
            count += reports[k].per_phone.size();
        }
    }
    if (count == 0) throw ArgumentError("corpus ANE over zero phones is undefined");
    return total / static_cast<double>(count);
}

double corpus_ane(const Corpus& corpus, CorpusAneWeighting weighting, double tolerance) {
    const auto reports = corpus_reports(corpus, tolerance);
    return corpus_ane(std::span<const AneReport>(reports), weighting);
}

Corpus average_runs(const RunSet& runs, const AverageOptions& options) {
    validate_run_set(runs);
    const std::size_t k = runs.runs.size();
    const Corpus& first = runs.runs.front();

    Corpus out;
    out.reserve(first.size());
    std::vector<double> cell(k);
    for (std::size_t s = 0; s < first.size(); ++s) {
        const AlignmentMatrix& shape = first[s].matrix;
        AlignmentMatrix mean(shape.rows(), shape.cols());
        for (std::size_t i = 0; i < shape.rows(); ++i) {
            for (std::size_t j = 0; j < shape.cols(); ++j) {
                for (std::size_t r = 0; r < k; ++r) cell[r] = runs.runs[r][s].matrix(i, j);
                std::sort(cell.begin(), cell.end());
                // Offsets from the minimum: exact zero when all runs agree.
                double spread = 0.0;
                for (std::size_t r = 1; r < k; ++r) spread += cell[r] - cell[0];
                mean(i, j) = cell[0] + spread / static_cast<double>(k);
            }
        }
        if (options.renormalize) mean.renormalize();
        out.push_back(AlignmentRecord{first[s].pair, std::move(mean)});
    }
    return out;
}

HeadChoice select_head(const RunSet& heads, CorpusAneWeighting weighting) {
    if (heads.runs.empty()) throw ArgumentError("cannot select a head from an empty set");
    validate_run_set(heads);
    HeadChoice choice;
    choice.head_anes.reserve(heads.runs.size());
    for (const auto& corpus : heads.runs) choice.head_anes.push_back(corpus_ane(corpus, weighting));
    const auto best = std::min_element(choice.head_anes.begin(), choice.head_anes.end());
    choice.index = static_cast<std::size_t>(best - choice.head_anes.begin());
    choice.corpus_ane = *best;
    return choice;
}

}  // namespace uws
