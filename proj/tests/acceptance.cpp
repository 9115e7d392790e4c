// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <fmt/core.h>

#include "test_support.hpp"
#include "uws/cli.hpp"
#include "uws/corpus_io.hpp"
#include "uws/entropy.hpp"
#include "uws/eval.hpp"
#include "uws/lexicon.hpp"
#include "uws/segmenter.hpp"
#include "uws/synth.hpp"

using namespace uws;
using uws::testing::random_row;
using uws::testing::slurp;
using uws::testing::TempDir;

namespace {

constexpr std::uint64_t kSeed = 2024;
constexpr std::size_t kSentences = 500;

/// Collects failures for one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ = failed_ || !ok;
    }
    void note(std::string text) { notes_ = std::move(text); }
    bool ok() const { return !failed_; }
    std::string summary() const {
        std::string s = notes_;
        for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
        return s;
    }

private:
    bool failed_ = false;
    std::vector<std::string> failures_;
    std::string notes_;
};

struct Criterion {
    std::string name;
    double time_limit_s;  // <= 0: no limit
    std::function<void(Check&)> body;
};

SynthConfig base_config() {
    SynthConfig c;
    c.seed = kSeed;
    c.n_sentences = kSentences;
    c.source_vocab = 60;
    c.word_len = {2, 5};
    c.sent_len = {3, 8};
    c.silence_prob = 0.2;
    return c;
}

double ne_oracle(const std::vector<std::string>& decimal_row) {
    using big = boost::multiprecision::cpp_dec_float_50;
    const big n(static_cast<int>(decimal_row.size()));
    big h = 0;
    for (const auto& s : decimal_row) {
        const big p(s);
        if (p > 0) h -= p * boost::multiprecision::log(p);
    }
    return static_cast<double>(h / boost::multiprecision::log(n));
}

bool harmonic(double p, double r, double f) {
    const double expected = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    return std::abs(expected - f) <= 1e-9;
}

// ---------------------------------------------------------------------------

void entropy_exactness(Check& check) {
    for (std::size_t n = 2; n <= 64; ++n) {
        const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
        check.expect(std::abs(phone_ne(uniform) - 1.0) <= 1e-9, fmt::format("uniform n={}", n));
        for (std::size_t hot = 0; hot < n; ++hot) {
            std::vector<double> onehot(n, 0.0);
            onehot[hot] = 1.0;
            check.expect(std::abs(phone_ne(onehot)) <= 1e-9, fmt::format("one-hot n={}", n));
        }
    }
    const double oracle = ne_oracle({"0.9", "0.1"});
    const double value = phone_ne(std::vector<double>{0.9, 0.1});
    check.expect(std::abs(oracle - 0.468996) <= 1e-5, "oracle(0.9,0.1) != 0.468996");
    check.expect(std::abs(value - 0.468996) <= 1e-5, fmt::format("phone_ne(0.9,0.1)={}", value));
    check.expect(std::abs(value - oracle) <= 1e-12, "phone_ne disagrees with 50-digit oracle");
    check.note(fmt::format("NE(0.9,0.1)={:.9f} oracle={:.9f}", value, oracle));
}

void oracle_fixed_point(Check& check) {
    const SynthCorpus s = generate(base_config());
    const auto segs = segment_corpus(s.records);
    bool equal = true;
    for (const auto& seg : segs) {
        const auto& gold = s.gold.at(seg.id);
        if (seg.tokens.size() != gold.size()) {
            equal = false;
            continue;
        }
        for (std::size_t k = 0; k < gold.size(); ++k) equal = equal && seg.tokens[k].phones == gold[k];
    }
    check.expect(equal, "segmentation differs from gold");
    const auto score = boundary_prf(segs, s.gold);
    check.expect(score.prf.precision == 1.0 && score.prf.recall == 1.0 && score.prf.f_score == 1.0,
                 fmt::format("P/R/F = {}/{}/{}", score.prf.precision, score.prf.recall,
                             score.prf.f_score));
    const double ane = corpus_ane(s.records);
    check.expect(ane == 0.0, fmt::format("corpus ANE = {}", ane));
    check.note(fmt::format("{} sentences, {} gold boundaries", segs.size(), score.counts.gold_total));
}

void correlation_direction(Check& check) {
    SynthConfig c = base_config();
    c.distractor_noise = 0.5;
    // Evenly spaced in the mixing weight w = T/(1+T), i.e. w = 0.0, 0.1, ..., 0.9.
    std::vector<double> temps;
    for (int k = 0; k < 10; ++k) {
        const double w = 0.1 * k;
        temps.push_back(w / (1.0 - w));
    }
    const RunSet set = temperature_sweep(c, temps);
    const GoldMap gold = generate(c).gold;
    std::vector<RunPoint> points;
    for (std::size_t i = 0; i < set.runs.size(); ++i) {
        points.push_back({set.labels[i], corpus_ane(set.runs[i]),
                          boundary_prf(segment_corpus(set.runs[i]), gold).prf.f_score});
    }
    const auto report = correlate_runs(points);
    check.expect(report.rho <= -0.9, fmt::format("rho = {:.4f}", report.rho));
    check.note(fmt::format("rho={:.4f}, F from {:.3f} to {:.3f}", report.rho,
                           points.front().boundary_f, points.back().boundary_f));
}

void sweep_shape(Check& check) {
    SynthConfig c = base_config();
    c.temperature = 1.0;
    c.distractor_noise = 0.4;
    const SynthCorpus s = generate(c);
    const Lexicon lex = build_lexicon(segment_corpus(s.records));
    const auto grid = parse_threshold_grid("0.1:0.9:0.1,all");
    const auto rows = ane_sweep(lex.pairs, s.gold_lexicon, grid);
    check.expect(rows.size() == 10, fmt::format("{} rows", rows.size()));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        check.expect(rows[i].recall >= rows[i - 1].recall,
                     fmt::format("recall drops at row {}", rows[i].threshold.to_string()));
    }
    const Prf unfiltered = type_prf(filter_by_ane(lex.pairs, AneThreshold::all()), s.gold_lexicon);
    const auto& last = rows.back();
    check.expect(last.threshold.is_all(), "last row is not 'all'");
    check.expect(last.precision == 100.0 * unfiltered.precision &&
                     last.recall == 100.0 * unfiltered.recall &&
                     last.f_score == 100.0 * unfiltered.f_score,
                 "'all' row differs from unfiltered type_prf");
    for (const auto& r : rows) {
        check.expect(harmonic(r.precision, r.recall, r.f_score),
                     fmt::format("F not harmonic at {}", r.threshold.to_string()));
    }
    check.note(fmt::format("{} pairs; recall {:.2f}% -> {:.2f}%", lex.pairs.size(),
                           rows.front().recall, rows.back().recall));
}

void precision_at_low_ane(Check& check) {
    // Same seed, so both configs yield the same sentences and gold; only matrices differ.
    SynthConfig sharp = base_config();
    SynthConfig hot = base_config();
    hot.temperature = 16.0;
    hot.distractor_noise = 0.5;
    const SynthCorpus a = generate(sharp);
    const SynthCorpus b = generate(hot);
    Corpus mixed;
    for (std::size_t i = 0; i < kSentences; ++i) {
        mixed.push_back(i < kSentences / 2 ? a.records[i] : b.records[i]);
    }
    const Lexicon lex = build_lexicon(segment_corpus(mixed));
    const std::vector<AneThreshold> grid{AneThreshold(0.1), AneThreshold::all()};
    const auto rows = ane_sweep(lex.pairs, a.gold_lexicon, grid);
    const double gap = rows[0].precision - rows[1].precision;
    check.expect(gap >= 10.0, fmt::format("P@0.1={:.2f}% P@all={:.2f}%", rows[0].precision,
                                          rows[1].precision));
    check.note(fmt::format("P@0.1={:.2f}% P@all={:.2f}% (gap {:.2f} points)", rows[0].precision,
                           rows[1].precision, gap));
}

/// Per-position boundary comparison, written independently of boundary_prf.
BoundaryCounts brute_force_counts(const std::vector<Segmentation>& hyp, const GoldMap& gold) {
    BoundaryCounts counts;
    for (const auto& seg : hyp) {
        const std::size_t n = seg.tokens.back().span.end;
        std::vector<bool> h(n + 1, false);
        std::vector<bool> g(n + 1, false);
        for (const auto& t : seg.tokens) h[t.span.begin] = true;
        std::size_t pos = 0;
        for (const auto& w : gold.at(seg.id)) {
            g[pos] = true;
            pos += w.size();
        }
        for (std::size_t p = 1; p < n; ++p) {
            counts.hits += (h[p] && g[p]) ? 1 : 0;
            counts.hyp_total += h[p] ? 1 : 0;
            counts.gold_total += g[p] ? 1 : 0;
        }
    }
    return counts;
}

std::vector<std::size_t> random_cuts(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> cuts;
    for (std::size_t p = 1; p < n; ++p) {
        if (rng() % 3 == 0) cuts.push_back(p);
    }
    return cuts;
}

Segmentation segmentation_from_cuts(const std::string& id, const PhoneSeq& phones,
                                    std::vector<std::size_t> cuts) {
    Segmentation seg;
    seg.id = id;
    cuts.push_back(phones.size());
    std::size_t start = 0;
    for (std::size_t c : cuts) {
        Token t;
        t.phones.assign(phones.begin() + static_cast<long>(start), phones.begin() + static_cast<long>(c));
        t.span = {start, c};
        t.aligned_word = "w";
        if (start > 0) seg.boundaries.push_back(start);
        seg.tokens.push_back(std::move(t));
        start = c;
    }
    return seg;
}

/// Mean-of-means corpus ANE from the raw entropy formula.
double corpus_ane_oracle(const Corpus& corpus) {
    double total = 0.0;
    for (const auto& rec : corpus) {
        double sentence = 0.0;
        for (std::size_t i = 0; i < rec.matrix.rows(); ++i) {
            const auto row = rec.matrix.row(i);
            double h = 0.0;
            for (double p : row) {
                if (p > 0.0) h -= p * std::log(p);
            }
            sentence += row.size() > 1 ? h / std::log(static_cast<double>(row.size())) : 0.0;
        }
        total += sentence / static_cast<double>(rec.matrix.rows());
    }
    return total / static_cast<double>(corpus.size());
}

RunSet random_run_set(std::mt19937_64& rng, std::size_t runs, std::size_t sentences) {
    RunSet set;
    Corpus shape;
    for (std::size_t s = 0; s < sentences; ++s) {
        AlignmentRecord r;
        r.pair.id = fmt::format("s{}", s);
        const std::size_t cols = 1 + rng() % 5;
        const std::size_t rows = 1 + rng() % 8;
        for (std::size_t j = 0; j < cols; ++j) r.pair.source.push_back(fmt::format("w{}", j));
        for (std::size_t i = 0; i < rows; ++i) r.pair.target.push_back(fmt::format("P{}", rng() % 7));
        r.matrix = AlignmentMatrix(rows, cols);
        shape.push_back(std::move(r));
    }
    for (std::size_t k = 0; k < runs; ++k) {
        Corpus c = shape;
        for (auto& rec : c) {
            for (std::size_t i = 0; i < rec.matrix.rows(); ++i) {
                const auto row = random_row(rng, rec.matrix.cols());
                std::copy(row.begin(), row.end(), rec.matrix.row(i).begin());
            }
        }
        set.runs.push_back(std::move(c));
        set.labels.push_back(fmt::format("run{}", k));
    }
    return set;
}

void brute_force_equivalence(Check& check) {
    std::mt19937_64 rng(kSeed);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t sentences = 1 + rng() % 10;
        std::vector<Segmentation> hyp;
        GoldMap gold;
        for (std::size_t s = 0; s < sentences; ++s) {
            const std::string id = fmt::format("t{}", s);
            const std::size_t n = 1 + rng() % 12;
            PhoneSeq phones;
            for (std::size_t i = 0; i < n; ++i) phones.push_back(fmt::format("P{}", rng() % 5));
            hyp.push_back(segmentation_from_cuts(id, phones, random_cuts(rng, n)));
            GoldWords words;
            for (const auto& t : segmentation_from_cuts(id, phones, random_cuts(rng, n)).tokens) {
                words.push_back(t.phones);
            }
            gold.emplace(id, std::move(words));
        }
        const BoundaryScore score = boundary_prf(hyp, gold);
        const BoundaryCounts expected = brute_force_counts(hyp, gold);
        const auto ratio = [](std::size_t num, std::size_t den, std::size_t other) {
            return den == 0 ? (other == 0 ? 1.0 : 0.0) : static_cast<double>(num) / den;
        };
        const double p = ratio(expected.hits, expected.hyp_total, expected.gold_total);
        const double r = ratio(expected.hits, expected.gold_total, expected.hyp_total);
        const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        if (!(score.counts == expected) || score.prf.precision != p || score.prf.recall != r ||
            std::abs(score.prf.f_score - f) > 1e-12) {
            ++mismatches;
        }
    }
    check.expect(mismatches == 0, fmt::format("boundary_prf mismatches: {}", mismatches));

    std::size_t head_mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        RunSet set = random_run_set(rng, 1 + rng() % 6, 1 + rng() % 6);
        if (set.runs.size() > 1 && rng() % 4 == 0) {
            set.runs[1] = set.runs[0];  // exact tie
        }
        std::size_t best = 0;
        double best_ane = corpus_ane_oracle(set.runs[0]);
        for (std::size_t k = 1; k < set.runs.size(); ++k) {
            const double ane = corpus_ane_oracle(set.runs[k]);
            if (ane < best_ane) {
                best = k;
                best_ane = ane;
            }
        }
        if (select_head(set).index != best) ++head_mismatches;
    }
    check.expect(head_mismatches == 0, fmt::format("select_head mismatches: {}", head_mismatches));
    check.note("1000 boundary corpora, 100 head sets");
}

void averaging_algebra(Check& check) {
    std::mt19937_64 rng(kSeed + 1);
    for (std::size_t k = 1; k <= 5; ++k) {
        const RunSet single = random_run_set(rng, 1, 8);
        RunSet copies;
        copies.runs.assign(k, single.runs[0]);
        const Corpus avg = average_runs(copies);
        bool same = avg.size() == single.runs[0].size();
        for (std::size_t s = 0; same && s < avg.size(); ++s) {
            same = avg[s].matrix == single.runs[0][s].matrix && avg[s].pair == single.runs[0][s].pair;
        }
        check.expect(same, fmt::format("not idempotent for k={}", k));

        const RunSet distinct = random_run_set(rng, k, 8);
        const Corpus reference = average_runs(distinct);
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::size_t perms = 0;
        while (std::next_permutation(perm.begin(), perm.end())) {
            RunSet shuffled;
            for (std::size_t i : perm) shuffled.runs.push_back(distinct.runs[i]);
            const Corpus avg2 = average_runs(shuffled);
            bool equal = true;
            for (std::size_t s = 0; s < avg2.size(); ++s) equal = equal && avg2[s].matrix == reference[s].matrix;
            check.expect(equal, fmt::format("order-dependent for k={}", k));
            ++perms;
        }
        (void)perms;
    }
    check.note("k = 1..5, all run orders compared bit for bit");
}

void cli_determinism(Check& check) {
    TempDir dir;
    const auto in = [&](const std::string& name) { return dir.file("in/" + name); };
    std::filesystem::create_directories(dir.path() / "in");

    SynthConfig c = base_config();
    c.n_sentences = 60;
    c.distractor_noise = 0.3;
    const RunSet set = temperature_sweep(c, {0.3, 1.0, 3.0});
    for (std::size_t i = 0; i < set.runs.size(); ++i) save_run(in(fmt::format("r{}.jsonl", i)), set.runs[i]);
    save_gold(in("gold.jsonl"), generate(c).gold);
    std::vector<std::string> runs{in("r0.jsonl"), in("r1.jsonl"), in("r2.jsonl")};

    // Produce inputs for the downstream subcommands once.
    std::ostringstream sink;
    cli::run({"segment", "--runs", runs[0], runs[1], runs[2], "--average", "--out", in("seg.jsonl"),
              "--lexicon", in("lex.tsv")},
             sink, sink);

    using Args = std::vector<std::string>;
    const std::vector<std::pair<std::string, std::function<Args(const std::string&)>>> commands{
        {"synth", [&](const std::string& o) {
             return Args{"synth", "--out", o, "--seed", "7", "--sentences", "30", "--noise", "0.2",
                         "--temps", "0,1,4"};
         }},
        {"validate", [&](const std::string& o) {
             return Args{"validate", "--runs", runs[0], runs[1], "--gold", in("gold.jsonl"), "--out", o};
         }},
        {"average", [&](const std::string& o) {
             return Args{"average", "--runs", runs[0], runs[1], runs[2], "--out", o};
         }},
        {"select-head", [&](const std::string& o) {
             return Args{"select-head", "--runs", runs[0], runs[1], runs[2], "--out", o};
         }},
        {"ane", [&](const std::string& o) {
             return Args{"ane", "--runs", runs[0], runs[1], runs[2], "--average", "--out", o};
         }},
        {"segment", [&](const std::string& o) {
             return Args{"segment", "--runs", runs[0], runs[1], runs[2], "--average", "--out", o};
         }},
        {"lexicon", [&](const std::string& o) {
             return Args{"lexicon", "--segmentation", in("seg.jsonl"), "--out", o};
         }},
        {"eval-boundary", [&](const std::string& o) {
             return Args{"eval-boundary", "--segmentation", in("seg.jsonl"), "--gold",
                         in("gold.jsonl"), "--out", o};
         }},
        {"eval-types", [&](const std::string& o) {
             return Args{"eval-types", "--pairs", in("lex.tsv"), "--gold", in("gold.jsonl"),
                         "--threshold", "0.4", "--out", o};
         }},
        {"sweep-ane", [&](const std::string& o) {
             return Args{"sweep-ane", "--pairs", in("lex.tsv"), "--gold", in("gold.jsonl"),
                         "--thresholds", "0.1:0.9:0.1,all", "--out", o};
         }},
        {"correlate", [&](const std::string& o) {
             return Args{"correlate", "--runs", runs[0], runs[1], runs[2], "--gold",
                         in("gold.jsonl"), "--out", o};
         }},
        {"rank-types", [&](const std::string& o) {
             return Args{"rank-types", "--pairs", in("lex.tsv"), "--direction", "desc", "--out", o};
         }},
    };

    for (const auto& [name, make_args] : commands) {
        std::vector<std::string> outputs;
        for (int round = 0; round < 2; ++round) {
            const auto target = dir.file(fmt::format("{}-{}", name, round));
            std::ostringstream out;
            std::ostringstream err;
            const int status = cli::run(make_args(target), out, err);
            check.expect(status == 0, fmt::format("{} exited {}: {}", name, status, err.str()));
            std::string bytes;
            if (std::filesystem::is_directory(target)) {
                std::vector<std::filesystem::path> files;
                for (const auto& e : std::filesystem::directory_iterator(target)) files.push_back(e.path());
                std::sort(files.begin(), files.end());
                for (const auto& f : files) bytes += f.filename().string() + "\n" + slurp(f);
            } else {
                bytes = slurp(target);
            }
            check.expect(!bytes.empty(), fmt::format("{} wrote nothing", name));
            outputs.push_back(bytes + out.str());
        }
        check.expect(outputs[0] == outputs[1], fmt::format("{} output differs between runs", name));
    }
    check.note(fmt::format("{} subcommands", commands.size()));
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"entropy exactness", 1.0, entropy_exactness},
        {"oracle fixed point", 5.0, oracle_fixed_point},
        {"correlation directionality", 30.0, correlation_direction},
        {"sweep shape", 0.0, sweep_shape},
        {"precision at low ANE", 0.0, precision_at_low_ane},
        {"brute-force equivalence", 0.0, brute_force_equivalence},
        {"averaging algebra", 0.0, averaging_algebra},
        {"CLI determinism", 0.0, cli_determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(check);
        } catch (const std::exception& e) {
            check.expect(false, fmt::format("exception: {}", e.what()));
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0) {
            check.expect(seconds < c.time_limit_s,
                         fmt::format("took {:.2f}s, limit {:.0f}s", seconds, c.time_limit_s));
        }
        std::cout << fmt::format("[{}] {}: {} ({:.2f}s)\n", check.ok() ? "PASS" : "FAIL", c.name,
                                 check.summary(), seconds);
        if (!check.ok()) ++failed;
    }
    std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
