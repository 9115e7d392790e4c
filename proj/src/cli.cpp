#include "uws/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "uws/corpus_io.hpp"
#include "uws/entropy.hpp"
#include "uws/error.hpp"
#include "uws/eval.hpp"
#include "uws/lexicon.hpp"
#include "uws/segmenter.hpp"
#include "uws/synth.hpp"

namespace uws::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { text, tsv };

/// Plain table printed either as aligned columns or as TSV.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out, Format format) const {
        if (format == Format::tsv) {
            print_tsv(out, header_);
            for (const auto& r : rows_) print_tsv(out, r);
            return;
        }
        std::vector<std::size_t> width(header_.size());
        for (std::size_t c = 0; c < header_.size(); ++c) width[c] = header_[c].size();
        for (const auto& r : rows_) {
            for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
        }
        print_aligned(out, header_, width);
        for (const auto& r : rows_) print_aligned(out, r, width);
    }

private:
    static void print_tsv(std::ostream& out, const std::vector<std::string>& r) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "\t" : "") << r[c];
        out << '\n';
    }
    // First column left-aligned, the rest right-aligned.
    static void print_aligned(std::ostream& out, const std::vector<std::string>& r,
                              const std::vector<std::size_t>& width) {
        std::string line;
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c == 0) {
                line += fmt::format("{:<{}}", r[c], width[c]);
            } else {
                line += fmt::format("  {:>{}}", r[c], width[c]);
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string percent(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }
std::string percent_value(double pct) { return fmt::format("{:.2f}", pct); }

/// Sends output to --out when given, otherwise to `out`.
void emit(const std::string& path, std::ostream& out,
          const std::function<void(std::ostream&)>& writer) {
    if (path.empty()) {
        writer(out);
    } else {
        write_file(path, writer);
    }
}

SizeRange parse_size_range(const std::string& text, const char* flag) {
    const auto colon = text.find(':');
    try {
        std::size_t used = 0;
        if (colon == std::string::npos) {
            const auto v = std::stoul(text, &used);
            if (used == text.size()) return {v, v};
        } else {
            const auto lo_text = text.substr(0, colon);
            const auto hi_text = text.substr(colon + 1);
            const auto lo = std::stoul(lo_text, &used);
            if (used == lo_text.size()) {
                const auto hi = std::stoul(hi_text, &used);
                if (used == hi_text.size()) return {lo, hi};
            }
        }
    } catch (const std::exception&) {
    }
    throw UsageError(fmt::format("{}: expected N or MIN:MAX, got '{}'", flag, text));
}

std::vector<double> parse_temperatures(const std::string& text) {
    // Same grammar as ANE thresholds, but values are not limited to [0,1].
    std::vector<double> temps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::vector<std::string> parts;
        std::stringstream is(item);
        std::string part;
        while (std::getline(is, part, ':')) parts.push_back(part);
        try {
            if (parts.size() == 1) {
                std::size_t used = 0;
                temps.push_back(std::stod(parts[0], &used));
                if (used != parts[0].size()) throw std::invalid_argument("trailing");
            } else if (parts.size() == 3) {
                const double start = std::stod(parts[0]);
                const double stop = std::stod(parts[1]);
                const double step = std::stod(parts[2]);
                if (!(step > 0.0) || stop < start) throw std::invalid_argument("range");
                const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
                for (std::size_t i = 0; i <= n; ++i) {
                    temps.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
                }
            } else {
                throw std::invalid_argument("shape");
            }
        } catch (const std::exception&) {
            throw UsageError(fmt::format("--temps: invalid item '{}'", item));
        }
    }
    if (temps.empty()) throw UsageError("--temps: empty grid");
    return temps;
}

FilterRule parse_rule(const std::string& text) {
    return text == "all" ? FilterRule::all_pairs : FilterRule::any_pair;
}

struct Common {
    std::string out;
    std::string silence = std::string(kDefaultSilenceToken);
    std::string format = "text";

    CorpusOptions corpus_options() const {
        CorpusOptions o;
        o.silence_token = silence;
        return o;
    }
    Format table_format() const { return format == "tsv" ? Format::tsv : Format::text; }
};

struct RunSelection {
    std::vector<std::string> runs;
    bool average = false;
    bool select_head = false;
    bool renormalize = false;
};

std::vector<fs::path> as_paths(const std::vector<std::string>& files) {
    return {files.begin(), files.end()};
}

/// Turns --runs into one corpus: the single run, the average, or the best head.
Corpus resolve_corpus(const RunSelection& sel, const CorpusOptions& options, std::ostream& err) {
    RunSet set = load_runs(as_paths(sel.runs), options);
    if (sel.average) return average_runs(set, AverageOptions{sel.renormalize});
    if (sel.select_head) {
        const auto choice = select_head(set);
        err << fmt::format("selected head {} ({}) with corpus ANE {}\n", choice.index,
                           set.labels[choice.index], format_float(choice.corpus_ane));
        return std::move(set.runs[choice.index]);
    }
    if (set.runs.size() != 1) {
        throw UsageError("several --runs given: pass --average or --select-head");
    }
    return std::move(set.runs.front());
}

void add_common(CLI::App* cmd, Common& c, bool with_format, bool out_required = false) {
    auto* out = cmd->add_option("--out", c.out,
                                out_required ? "Output file" : "Output file (default: standard output)");
    if (out_required) out->required();
    cmd->add_option("--silence-token", c.silence, "Silence marker in target sequences")
        ->capture_default_str();
    if (with_format) {
        cmd->add_option("--format", c.format, "Table format")
            ->check(CLI::IsMember({"text", "tsv"}))
            ->capture_default_str();
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Unsupervised word segmentation from soft-alignment matrices, with "
                 "average normalized entropy (ANE) confidence scoring.",
                 "uws"};
    app.set_config("--config", "", "Read options from a TOML/INI file");
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    app.require_subcommand(0, 1);

    Common common;
    RunSelection sel;
    std::string gold_path;
    std::string seg_path;
    std::string pairs_path;
    std::string types_path;
    std::string lexicon_path;
    std::string thresholds = "0.1:0.9:0.1,all";
    std::string threshold = "all";
    std::string rule = "any";
    std::string direction = "asc";
    std::size_t limit = 5;
    bool phone_weighted = false;

    SynthConfig synth;
    std::string word_len = "2:5";
    std::string sent_len = "3:8";
    std::string temps;

    std::function<int()> action;

    // validate
    auto* validate = app.add_subcommand("validate", "Check run files (and gold) for consistency");
    validate->add_option("--runs", sel.runs, "Alignment run files")->required();
    validate->add_option("--gold", gold_path, "Gold segmentation file");
    add_common(validate, common, false);
    validate->callback([&] {
        action = [&] {
            const auto options = common.corpus_options();
            const RunSet set = load_runs(as_paths(sel.runs), options);
            std::optional<GoldMap> gold;
            if (!gold_path.empty()) gold = load_gold(gold_path);
            emit(common.out, out, [&](std::ostream& o) {
                for (std::size_t r = 0; r < set.runs.size(); ++r) {
                    if (gold) {
                        try {
                            attach_gold(set.runs[r], *gold, options);
                        } catch (const ValidationError& e) {
                            throw e.located(set.labels[r], 0, {});
                        }
                    }
                    std::size_t phones = 0;
                    for (const auto& rec : set.runs[r]) phones += rec.matrix.rows();
                    o << fmt::format("ok {}: {} sentences, {} phones\n", set.labels[r],
                                     set.runs[r].size(), phones);
                }
            });
            return kExitOk;
        };
    });

    // average
    auto* average = app.add_subcommand("average", "Average the matrices of several runs");
    average->add_option("--runs", sel.runs, "Alignment run files")->required();
    average->add_flag("--renormalize", sel.renormalize, "Divide averaged rows by their sum");
    add_common(average, common, false, true);
    average->callback([&] {
        action = [&] {
            const RunSet set = load_runs(as_paths(sel.runs), common.corpus_options());
            const Corpus avg = average_runs(set, AverageOptions{sel.renormalize});
            save_run(common.out, avg);
            return kExitOk;
        };
    });

    // select-head
    auto* head = app.add_subcommand("select-head", "Pick the head with minimum corpus ANE");
    head->add_option("--runs", sel.runs, "One run file per attention head")->required();
    head->add_flag("--phone-weighted", phone_weighted, "Weight corpus ANE by phones");
    add_common(head, common, true);
    head->callback([&] {
        action = [&] {
            const RunSet set = load_runs(as_paths(sel.runs), common.corpus_options());
            const auto choice = select_head(
                set, phone_weighted ? CorpusAneWeighting::phone : CorpusAneWeighting::sentence);
            Table table({"head", "label", "corpus_ane", "selected"});
            for (std::size_t h = 0; h < set.runs.size(); ++h) {
                table.add({std::to_string(h), set.labels[h], format_float(choice.head_anes[h]),
                           h == choice.index ? "*" : ""});
            }
            emit(common.out, out, [&](std::ostream& o) { table.print(o, common.table_format()); });
            return kExitOk;
        };
    });

    // ane
    auto* ane = app.add_subcommand("ane", "Per-sentence and corpus ANE report");
    ane->add_option("--runs", sel.runs, "Alignment run files")->required();
    auto* ane_avg = ane->add_flag("--average", sel.average, "Average runs first");
    ane->add_flag("--select-head", sel.select_head, "Use the minimum-ANE run")->excludes(ane_avg);
    ane->add_flag("--renormalize", sel.renormalize, "Renormalize averaged rows");
    ane->add_flag("--phone-weighted", phone_weighted, "Weight corpus ANE by phones");
    add_common(ane, common, false);
    ane->callback([&] {
        action = [&] {
            const Corpus corpus = resolve_corpus(sel, common.corpus_options(), err);
            const auto reports = corpus_reports(corpus);
            const double total = corpus_ane(
                std::span<const AneReport>(reports),
                phone_weighted ? CorpusAneWeighting::phone : CorpusAneWeighting::sentence);
            emit(common.out, out, [&](std::ostream& o) { write_ane_report(o, reports, total); });
            return kExitOk;
        };
    });

    // segment
    auto* seg = app.add_subcommand("segment", "Segment target phones by alignment peaks");
    seg->add_option("--runs", sel.runs, "Alignment run files")->required();
    auto* seg_avg = seg->add_flag("--average", sel.average, "Average runs before segmenting");
    seg->add_flag("--select-head", sel.select_head, "Segment with the minimum-ANE run")
        ->excludes(seg_avg);
    seg->add_flag("--renormalize", sel.renormalize, "Renormalize averaged rows");
    seg->add_option("--lexicon", lexicon_path, "Also write the alignment-pair lexicon (TSV)");
    seg->add_option("--types", types_path, "Also write the type lexicon (TSV)");
    add_common(seg, common, false, true);
    seg->callback([&] {
        action = [&] {
            const auto options = common.corpus_options();
            const Corpus corpus = resolve_corpus(sel, options, err);
            const auto segs = segment_corpus(corpus, options);
            save_segmentation(common.out, segs);
            if (!lexicon_path.empty() || !types_path.empty()) {
                const Lexicon lex = build_lexicon(segs);
                if (!lexicon_path.empty()) save_lexicon(lexicon_path, lex.pairs);
                if (!types_path.empty()) {
                    write_file(types_path, [&](std::ostream& o) { write_types(o, lex.types); });
                }
            }
            return kExitOk;
        };
    });

    // lexicon
    auto* lexicon = app.add_subcommand("lexicon", "Build type and alignment-pair lexicons");
    lexicon->add_option("--segmentation", seg_path, "Segmentation file")->required();
    lexicon->add_option("--types", types_path, "Also write the type lexicon (TSV)");
    add_common(lexicon, common, false, true);
    lexicon->callback([&] {
        action = [&] {
            const auto segs = load_segmentation(seg_path);
            const Lexicon lex = build_lexicon(segs);
            save_lexicon(common.out, lex.pairs);
            if (!types_path.empty()) {
                write_file(types_path, [&](std::ostream& o) { write_types(o, lex.types); });
            }
            return kExitOk;
        };
    });

    // eval-boundary
    auto* eb = app.add_subcommand("eval-boundary", "Boundary precision/recall/F-score");
    eb->add_option("--segmentation", seg_path, "Segmentation file")->required();
    eb->add_option("--gold", gold_path, "Gold segmentation file")->required();
    add_common(eb, common, true);
    eb->callback([&] {
        action = [&] {
            const auto segs = load_segmentation(seg_path);
            const auto score = boundary_prf(segs, load_gold(gold_path));
            Table table({"metric", "precision", "recall", "f_score", "hits", "hyp", "gold"});
            table.add({"boundary", percent(score.prf.precision), percent(score.prf.recall),
                       percent(score.prf.f_score), std::to_string(score.counts.hits),
                       std::to_string(score.counts.hyp_total),
                       std::to_string(score.counts.gold_total)});
            emit(common.out, out, [&](std::ostream& o) { table.print(o, common.table_format()); });
            return kExitOk;
        };
    });

    // eval-types
    auto* et = app.add_subcommand("eval-types", "Type retrieval precision/recall/F-score");
    et->add_option("--pairs", pairs_path, "Alignment-pair lexicon (TSV)")->required();
    et->add_option("--gold", gold_path, "Gold segmentation file")->required();
    et->add_option("--threshold", threshold, "ANE cutoff in [0,1] or 'all'")->capture_default_str();
    et->add_option("--rule", rule, "Keep a type when any / all of its pairs pass")
        ->check(CLI::IsMember({"any", "all"}))
        ->capture_default_str();
    add_common(et, common, true);
    et->callback([&] {
        action = [&] {
            AneThreshold cut;
            try {
                cut = AneThreshold::parse(threshold);
            } catch (const ArgumentError& e) {
                throw UsageError(fmt::format("--threshold: {}", e.what()));
            }
            const auto pairs = load_lexicon(pairs_path);
            const TypeSet kept = filter_by_ane(pairs, cut, parse_rule(rule));
            const Prf prf = type_prf(kept, gold_lexicon(load_gold(gold_path)));
            Table table({"ane", "types", "precision", "recall", "f_score"});
            table.add({cut.to_string(), std::to_string(kept.size()), percent(prf.precision),
                       percent(prf.recall), percent(prf.f_score)});
            emit(common.out, out, [&](std::ostream& o) { table.print(o, common.table_format()); });
            return kExitOk;
        };
    });

    // sweep-ane
    auto* sweep = app.add_subcommand("sweep-ane", "Type retrieval across ANE thresholds");
    sweep->add_option("--pairs", pairs_path, "Alignment-pair lexicon (TSV)")->required();
    sweep->add_option("--gold", gold_path, "Gold segmentation file")->required();
    sweep->add_option("--thresholds", thresholds, "Grid, e.g. 0.1:0.9:0.1,all")
        ->capture_default_str();
    sweep->add_option("--rule", rule, "Keep a type when any / all of its pairs pass")
        ->check(CLI::IsMember({"any", "all"}))
        ->capture_default_str();
    add_common(sweep, common, true);
    sweep->callback([&] {
        action = [&] {
            std::vector<AneThreshold> grid;
            try {
                grid = parse_threshold_grid(thresholds);
            } catch (const ArgumentError& e) {
                throw UsageError(fmt::format("--thresholds: {}", e.what()));
            }
            const auto pairs = load_lexicon(pairs_path);
            const auto rows =
                ane_sweep(pairs, gold_lexicon(load_gold(gold_path)), grid, parse_rule(rule));
            Table table({"ane", "types", "precision", "recall", "f_score"});
            for (const auto& r : rows) {
                table.add({r.threshold.to_string(), std::to_string(r.kept),
                           percent_value(r.precision), percent_value(r.recall),
                           percent_value(r.f_score)});
            }
            emit(common.out, out, [&](std::ostream& o) { table.print(o, common.table_format()); });
            return kExitOk;
        };
    });

    // correlate
    auto* corr = app.add_subcommand("correlate", "Pearson correlation of corpus ANE and boundary F");
    corr->add_option("--runs", sel.runs, "One run file per model/run (at least two)")->required();
    corr->add_option("--gold", gold_path, "Gold segmentation file")->required();
    add_common(corr, common, true);
    corr->callback([&] {
        action = [&] {
            const auto options = common.corpus_options();
            const GoldMap gold = load_gold(gold_path);
            std::vector<RunPoint> points;
            for (const auto& path : sel.runs) {
                const Corpus corpus = load_run(path, options);
                const auto segs = segment_corpus(corpus, options);
                points.push_back({path, corpus_ane(corpus), boundary_prf(segs, gold).prf.f_score});
            }
            const auto report = correlate_runs(std::move(points));
            Table table({"run", "corpus_ane", "boundary_f"});
            for (const auto& p : report.points) {
                table.add({p.label, format_float(p.corpus_ane), format_float(p.boundary_f)});
            }
            table.add({"pearson_rho", format_float(report.rho), ""});
            emit(common.out, out, [&](std::ostream& o) { table.print(o, common.table_format()); });
            return kExitOk;
        };
    });

    // rank-types
    auto* rank = app.add_subcommand("rank-types", "List alignment pairs ranked by ANE");
    rank->add_option("--pairs", pairs_path, "Alignment-pair lexicon (TSV)")->required();
    rank->add_option("--direction", direction, "asc (most confident first) or desc")
        ->check(CLI::IsMember({"asc", "desc"}))
        ->capture_default_str();
    rank->add_option("--limit", limit, "Number of entries")->capture_default_str();
    add_common(rank, common, true);
    rank->callback([&] {
        action = [&] {
            const auto pairs = load_lexicon(pairs_path);
            const auto ranked = rank_types(
                pairs, direction == "asc" ? RankDirection::ascending : RankDirection::descending,
                limit);
            Table table({"type", "translation", "alignment_ane", "count"});
            for (const auto& p : ranked) {
                table.add({join_phones(p.type_form), p.translation, format_float(p.alignment_ane),
                           std::to_string(p.count)});
            }
            emit(common.out, out, [&](std::ostream& o) { table.print(o, common.table_format()); });
            return kExitOk;
        };
    });

    // synth
    auto* syn = app.add_subcommand("synth", "Generate a synthetic corpus with gold segmentation");
    syn->add_option("--out", common.out, "Output directory")->required();
    syn->add_option("--seed", synth.seed, "RNG seed")->capture_default_str();
    syn->add_option("--sentences", synth.n_sentences, "Number of sentences")->capture_default_str();
    syn->add_option("--vocab", synth.source_vocab, "Word types (= source words)")
        ->capture_default_str();
    syn->add_option("--word-len", word_len, "Phones per word, MIN:MAX")->capture_default_str();
    syn->add_option("--sent-len", sent_len, "Words per sentence, MIN:MAX")->capture_default_str();
    syn->add_option("--temperature", synth.temperature, "Softening toward uniform (>= 0)")
        ->capture_default_str();
    syn->add_option("--noise", synth.distractor_noise, "Random distractor weight in [0,1)")
        ->capture_default_str();
    syn->add_option("--silence-prob", synth.silence_prob, "Silence at an optional boundary")
        ->capture_default_str();
    syn->add_flag("--ambiguous", synth.ambiguous, "Allow types to share translations");
    syn->add_option("--temps", temps, "Temperature grid; writes one run per value");
    syn->add_option("--silence-token", common.silence, "Silence marker")->capture_default_str();
    syn->callback([&] {
        action = [&] {
            synth.word_len = parse_size_range(word_len, "--word-len");
            synth.sent_len = parse_size_range(sent_len, "--sent-len");
            synth.silence_token = common.silence;
            const fs::path dir = common.out;
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec) throw Error(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));

            const SynthCorpus corpus = generate(synth);
            save_gold(dir / "gold.jsonl", corpus.gold);
            if (temps.empty()) {
                save_run(dir / "run.jsonl", corpus.records);
            } else {
                const RunSet set = temperature_sweep(synth, parse_temperatures(temps));
                write_file(dir / "runs.tsv", [&](std::ostream& o) {
                    o << "index\tlabel\tfile\n";
                    for (std::size_t i = 0; i < set.runs.size(); ++i) {
                        const auto name = fmt::format("run_{:02}.jsonl", i);
                        save_run(dir / name, set.runs[i]);
                        o << i << '\t' << set.labels[i] << '\t' << name << '\n';
                    }
                });
            }
            return kExitOk;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (!action) {
            err << app.help();
            return kExitUsage;
        }
        return action();
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace uws::cli
