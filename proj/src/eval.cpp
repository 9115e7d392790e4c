#include "uws/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <fmt/core.h>

#include "uws/error.hpp"

namespace uws {

namespace {

double ratio(std::size_t num, std::size_t den, std::size_t other_total) {
    if (den == 0) return other_total == 0 ? 1.0 : 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_number(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ArgumentError(fmt::format("invalid number '{}' in threshold grid", text));
    }
    return value;
}

}  // namespace

Prf prf_from_counts(std::size_t hits, std::size_t hyp_total, std::size_t gold_total) {
    Prf prf;
    prf.precision = ratio(hits, hyp_total, gold_total);
    prf.recall = ratio(hits, gold_total, hyp_total);
    const double denom = prf.precision + prf.recall;
    prf.f_score = denom > 0.0 ? 2.0 * prf.precision * prf.recall / denom : 0.0;
    return prf;
}

BoundaryScore boundary_prf(std::span<const Segmentation> hyp, const GoldMap& gold) {
    BoundaryScore score;
    auto& counts = score.counts;
    for (const auto& seg : hyp) {
        const auto it = gold.find(seg.id);
        if (it == gold.end()) throw ValidationError("no gold segmentation for sentence", {}, 0, seg.id);
        PhoneSeq phones;
        for (const auto& token : seg.tokens) {
            phones.insert(phones.end(), token.phones.begin(), token.phones.end());
        }
        try {
            validate_gold(it->second, phones);
        } catch (const ValidationError& e) {
            throw e.located({}, 0, seg.id);
        }
        const auto gold_b = gold_boundaries(it->second);
        std::vector<std::size_t> hyp_b = seg.boundaries;
        std::sort(hyp_b.begin(), hyp_b.end());
        std::vector<std::size_t> common;
        std::set_intersection(hyp_b.begin(), hyp_b.end(), gold_b.begin(), gold_b.end(),
                              std::back_inserter(common));
        counts.hits += common.size();
        counts.hyp_total += hyp_b.size();
        counts.gold_total += gold_b.size();
    }
    score.prf = prf_from_counts(counts.hits, counts.hyp_total, counts.gold_total);
    return score;
}

TypeSet gold_lexicon(const GoldMap& gold) {
    TypeSet lex;
    for (const auto& [id, words] : gold) lex.insert(words.begin(), words.end());
    return lex;
}

Prf type_prf(const TypeSet& discovered, const TypeSet& gold) {
    std::size_t hits = 0;
    for (const auto& t : discovered) hits += gold.count(t);
    return prf_from_counts(hits, discovered.size(), gold.size());
}

std::vector<AneThreshold> parse_threshold_grid(const std::string& text) {
    std::vector<AneThreshold> grid;
    for (const auto& item : split(text, ',')) {
        if (item.find(':') == std::string::npos) {
            grid.push_back(AneThreshold::parse(item));
            continue;
        }
        const auto parts = split(item, ':');
        if (parts.size() != 3) {
            throw ArgumentError(fmt::format("range '{}' is not start:stop:step", item));
        }
        const double start = parse_number(parts[0]);
        const double stop = parse_number(parts[1]);
        const double step = parse_number(parts[2]);
        if (!(step > 0.0) || stop < start) {
            throw ArgumentError(fmt::format("range '{}' needs step > 0 and stop >= start", item));
        }
        const auto steps = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
        for (std::size_t i = 0; i <= steps; ++i) {
            // Snap to 1e-9 so 0.1:0.9:0.1 yields 0.3 rather than 0.30000000000000004.
            const double v = std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9;
            grid.emplace_back(v);
        }
    }
    return grid;
}

std::vector<SweepRow> ane_sweep(std::span<const AlignmentEntry> pairs, const TypeSet& gold,
                                std::span<const AneThreshold> thresholds, FilterRule rule) {
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i].is_all()) {
            if (i + 1 != thresholds.size()) throw ArgumentError("'all' must be the last threshold");
        } else if (i > 0 && thresholds[i].value() < thresholds[i - 1].value()) {
            throw ArgumentError(fmt::format("thresholds are not ascending ({} after {})",
                                            thresholds[i].to_string(),
                                            thresholds[i - 1].to_string()));
        }
    }
    std::vector<SweepRow> rows;
    rows.reserve(thresholds.size());
    for (const auto& threshold : thresholds) {
        const TypeSet kept = filter_by_ane(pairs, threshold, rule);
        const Prf prf = type_prf(kept, gold);
        rows.push_back({threshold, kept.size(), 100.0 * prf.precision, 100.0 * prf.recall,
                        100.0 * prf.f_score});
    }
    return rows;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw ArgumentError(fmt::format("pearson: length mismatch ({} vs {})", xs.size(), ys.size()));
    }
    const std::size_t n = xs.size();
    if (n < 2) throw ArgumentError("pearson: need at least two points");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ArgumentError("pearson: constant input, correlation undefined");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport correlate_runs(std::vector<RunPoint> points) {
    if (points.size() < 2) throw ArgumentError("correlation needs at least two runs");
    std::vector<double> anes;
    std::vector<double> fs;
    for (const auto& p : points) {
        anes.push_back(p.corpus_ane);
        fs.push_back(p.boundary_f);
    }
    CorrelationReport report;
    report.rho = pearson(anes, fs);
    report.points = std::move(points);
    return report;
}

}  // namespace uws
