#include "uws/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include <fmt/core.h>
#include <json.hpp>

namespace uws {

namespace {

using nlohmann::json;

bool skippable(const std::string& line) {
    const auto first = line.find_first_not_of(" \t");
    return first == std::string::npos || line[first] == '#';
}

/// Calls `fn(line, line_number)` for every content line, with '\r' stripped.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        fn(line, number);
    }
}

json parse_object(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ValidationError(fmt::format("malformed JSON: {}", e.what()));
    }
    if (!j.is_object()) throw ValidationError("record is not a JSON object");
    return j;
}

const json& field(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(fmt::format("missing field '{}'", key));
    return *it;
}

std::string string_field(const json& obj, const char* key) {
    const json& v = field(obj, key);
    if (!v.is_string()) throw ValidationError(fmt::format("field '{}' must be a string", key));
    return v.get<std::string>();
}

std::string symbol(const json& v, const char* what) {
    if (!v.is_string()) throw ValidationError(fmt::format("{} must contain strings", what));
    auto s = v.get<std::string>();
    if (s.empty()) throw ValidationError(fmt::format("{} contains an empty token", what));
    if (s.find_first_of(" \t\r\n") != std::string::npos) {
        throw ValidationError(fmt::format("{} token '{}' contains whitespace", what, s));
    }
    return s;
}

std::vector<std::string> symbol_array(const json& v, const char* what) {
    if (!v.is_array()) throw ValidationError(fmt::format("field '{}' must be an array", what));
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(symbol(e, what));
    return out;
}

std::size_t index_value(const json& v, const char* what) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ValidationError(fmt::format("{} must be a non-negative integer", what));
    }
    return v.get<std::size_t>();
}

double number_value(const json& v, const char* what) {
    if (!v.is_number()) throw ValidationError(fmt::format("{} must be a number", what));
    return v.get<double>();
}

std::string quoted(const std::string& s) { return json(s).dump(); }

void write_string_array(std::ostream& out, const std::vector<std::string>& values) {
    out << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out << ',';
        out << quoted(values[i]);
    }
    out << ']';
}

void write_float_array(std::ostream& out, std::span<const double> values) {
    out << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out << ',';
        out << format_float(values[i]);
    }
    out << ']';
}

template <typename T>
std::vector<std::size_t> order_by_id(std::span<const T> items) {
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return items[a].id < items[b].id; });
    return order;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        cols.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return cols;
}

PhoneSeq split_phones(const std::string& text) {
    PhoneSeq phones;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find(' ', start);
        const auto piece = text.substr(start, pos - start);
        if (piece.empty()) throw ValidationError(fmt::format("malformed type form '{}'", text));
        phones.push_back(piece);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return phones;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file", path.string());
    return in;
}

}  // namespace

std::string format_float(double value) { return fmt::format("{:.6f}", value); }

AlignmentRecord parse_record(const std::string& line, const CorpusOptions& options) {
    const json j = parse_object(line);
    AlignmentRecord record;
    record.pair.id = string_field(j, "id");
    try {
        record.pair.source = symbol_array(field(j, "source"), "source");
        record.pair.target = symbol_array(field(j, "target"), "target");
        const json& m = field(j, "matrix");
        if (!m.is_array()) throw ValidationError("field 'matrix' must be an array of rows");
        std::vector<std::vector<double>> rows;
        rows.reserve(m.size());
        for (const auto& r : m) {
            if (!r.is_array()) throw ValidationError("field 'matrix' must be an array of rows");
            auto& row = rows.emplace_back();
            row.reserve(r.size());
            for (const auto& v : r) row.push_back(number_value(v, "matrix entry"));
        }
        record.matrix = AlignmentMatrix::from_rows(rows);
        validate_record(record, options);
    } catch (const ValidationError& e) {
        throw e.located({}, 0, record.pair.id);
    }
    return record;
}

Corpus read_run(std::istream& in, const std::string& source_name, const CorpusOptions& options) {
    Corpus corpus;
    std::set<std::string> seen;
    for_each_line(in, [&](const std::string& line, std::size_t number) {
        try {
            auto record = parse_record(line, options);
            if (!seen.insert(record.pair.id).second) {
                throw ValidationError("duplicate sentence id", {}, 0, record.pair.id);
            }
            corpus.push_back(std::move(record));
        } catch (const ValidationError& e) {
            throw e.located(source_name, number, {});
        }
    });
    if (in.bad()) throw ValidationError("read failure", source_name);
    return corpus;
}

Corpus load_run(const std::filesystem::path& path, const CorpusOptions& options) {
    auto in = open_input(path);
    return read_run(in, path.string(), options);
}

RunSet load_runs(const std::vector<std::filesystem::path>& paths, const CorpusOptions& options) {
    if (paths.empty()) throw ArgumentError("no run files given");
    RunSet set;
    for (const auto& p : paths) {
        set.runs.push_back(load_run(p, options));
        set.labels.push_back(p.string());
    }
    try {
        validate_run_set(set);
    } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("run files disagree: {}", e.detail()), {}, 0,
                              e.sentence_id());
    }
    return set;
}

GoldMap read_gold(std::istream& in, const std::string& source_name) {
    GoldMap gold;
    for_each_line(in, [&](const std::string& line, std::size_t number) {
        std::string id;
        try {
            const json j = parse_object(line);
            id = string_field(j, "id");
            const json& words = field(j, "words");
            if (!words.is_array() || words.empty()) {
                throw ValidationError("field 'words' must be a non-empty array");
            }
            GoldWords groupings;
            for (const auto& w : words) {
                auto phones = symbol_array(w, "words");
                if (phones.empty()) throw ValidationError("empty gold word");
                groupings.push_back(std::move(phones));
            }
            if (!gold.emplace(id, std::move(groupings)).second) {
                throw ValidationError("duplicate sentence id");
            }
        } catch (const ValidationError& e) {
            throw e.located(source_name, number, id);
        }
    });
    if (in.bad()) throw ValidationError("read failure", source_name);
    return gold;
}

GoldMap load_gold(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_gold(in, path.string());
}

std::vector<Segmentation> read_segmentation(std::istream& in, const std::string& source_name) {
    std::vector<Segmentation> out;
    std::set<std::string> seen;
    for_each_line(in, [&](const std::string& line, std::size_t number) {
        Segmentation seg;
        try {
            const json j = parse_object(line);
            seg.id = string_field(j, "id");
            const json& tokens = field(j, "tokens");
            if (!tokens.is_array()) throw ValidationError("field 'tokens' must be an array");
            for (const auto& t : tokens) {
                if (!t.is_object()) throw ValidationError("token must be an object");
                Token token;
                token.phones = symbol_array(field(t, "phones"), "phones");
                const json& span = field(t, "span");
                if (!span.is_array() || span.size() != 2) {
                    throw ValidationError("token span must be [begin, end]");
                }
                token.span = {index_value(span[0], "span"), index_value(span[1], "span")};
                token.aligned_word = symbol(field(t, "aligned_word"), "aligned_word");
                token.aligned_word_index = index_value(field(t, "aligned_word_index"),
                                                       "aligned_word_index");
                token.token_ane = number_value(field(t, "token_ane"), "token_ane");
                if (!(token.token_ane >= 0.0 && token.token_ane <= 1.0)) {
                    throw ValidationError("token_ane outside [0,1]");
                }
                if (token.span.begin > 0) seg.boundaries.push_back(token.span.begin);
                seg.tokens.push_back(std::move(token));
            }
            validate_segmentation(seg);
            if (!seen.insert(seg.id).second) throw ValidationError("duplicate sentence id");
        } catch (const ValidationError& e) {
            throw e.located(source_name, number, seg.id);
        }
        out.push_back(std::move(seg));
    });
    if (in.bad()) throw ValidationError("read failure", source_name);
    return out;
}

std::vector<Segmentation> load_segmentation(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_segmentation(in, path.string());
}

std::vector<AlignmentEntry> read_lexicon(std::istream& in, const std::string& source_name) {
    std::vector<AlignmentEntry> pairs;
    std::string line;
    std::size_t number = 0;
    bool header = false;
    std::set<std::pair<PhoneSeq, std::string>> seen;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cols = split_tabs(line);
        if (!header) {
            if (cols != std::vector<std::string>{"type", "translation", "count", "alignment_ane"}) {
                throw ValidationError("expected header 'type\\ttranslation\\tcount\\talignment_ane'",
                                      source_name, number);
            }
            header = true;
            continue;
        }
        try {
            if (cols.size() != 4) {
                throw ValidationError(fmt::format("expected 4 columns, found {}", cols.size()));
            }
            AlignmentEntry entry;
            entry.type_form = split_phones(cols[0]);
            if (cols[1].empty()) throw ValidationError("empty translation");
            entry.translation = cols[1];
            const auto& c = cols[2];
            const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), entry.count);
            if (ec != std::errc{} || ptr != c.data() + c.size() || entry.count == 0) {
                throw ValidationError(fmt::format("invalid count '{}'", c));
            }
            const auto& a = cols[3];
            const auto [aptr, aec] = std::from_chars(a.data(), a.data() + a.size(), entry.alignment_ane);
            if (aec != std::errc{} || aptr != a.data() + a.size() ||
                !(entry.alignment_ane >= 0.0 && entry.alignment_ane <= 1.0)) {
                throw ValidationError(fmt::format("invalid alignment_ane '{}'", a));
            }
            if (!seen.emplace(entry.type_form, entry.translation).second) {
                throw ValidationError("duplicate (type, translation) pair");
            }
            pairs.push_back(std::move(entry));
        } catch (const ValidationError& e) {
            throw e.located(source_name, number, {});
        }
    }
    if (!header) throw ValidationError("missing header line", source_name);
    return pairs;
}

std::vector<AlignmentEntry> load_lexicon(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_lexicon(in, path.string());
}

void write_run(std::ostream& out, const Corpus& corpus) {
    for (const auto& record : corpus) {
        out << "{\"id\":" << quoted(record.pair.id) << ",\"source\":";
        write_string_array(out, record.pair.source);
        out << ",\"target\":";
        write_string_array(out, record.pair.target);
        out << ",\"matrix\":[";
        for (std::size_t i = 0; i < record.matrix.rows(); ++i) {
            if (i > 0) out << ',';
            write_float_array(out, record.matrix.row(i));
        }
        out << "]}\n";
    }
}

void write_gold(std::ostream& out, const GoldMap& gold) {
    for (const auto& [id, words] : gold) {
        out << "{\"id\":" << quoted(id) << ",\"words\":[";
        for (std::size_t w = 0; w < words.size(); ++w) {
            if (w > 0) out << ',';
            write_string_array(out, words[w]);
        }
        out << "]}\n";
    }
}

void write_segmentation(std::ostream& out, std::span<const Segmentation> segmentations) {
    out << "# uws segmentation v1: spans are half-open over silence-free phone indices\n";
    for (std::size_t k : order_by_id(segmentations)) {
        const auto& seg = segmentations[k];
        out << "{\"id\":" << quoted(seg.id) << ",\"tokens\":[";
        for (std::size_t t = 0; t < seg.tokens.size(); ++t) {
            const auto& token = seg.tokens[t];
            if (t > 0) out << ',';
            out << "{\"phones\":";
            write_string_array(out, token.phones);
            out << ",\"span\":[" << token.span.begin << ',' << token.span.end << ']'
                << ",\"aligned_word\":" << quoted(token.aligned_word)
                << ",\"aligned_word_index\":" << token.aligned_word_index
                << ",\"token_ane\":" << format_float(token.token_ane) << '}';
        }
        out << "]}\n";
    }
}

void write_lexicon(std::ostream& out, std::span<const AlignmentEntry> pairs) {
    const auto sorted = rank_types(pairs, RankDirection::ascending, pairs.size());
    out << "type\ttranslation\tcount\talignment_ane\n";
    for (const auto& p : sorted) {
        out << join_phones(p.type_form) << '\t' << p.translation << '\t' << p.count << '\t'
            << format_float(p.alignment_ane) << '\n';
    }
}

void write_types(std::ostream& out, std::span<const TypeEntry> types) {
    std::vector<TypeEntry> sorted(types.begin(), types.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.type_ane != b.type_ane) return a.type_ane < b.type_ane;
        return a.type_form < b.type_form;
    });
    out << "type\tcount\ttype_ane\n";
    for (const auto& t : sorted) {
        out << join_phones(t.type_form) << '\t' << t.count << '\t' << format_float(t.type_ane) << '\n';
    }
}

void write_ane_report(std::ostream& out, std::span<const AneReport> reports, double corpus_ane) {
    for (std::size_t k : order_by_id(reports)) {
        const auto& r = reports[k];
        out << "{\"id\":" << quoted(r.id) << ",\"sentence_ane\":" << format_float(r.sentence_ane)
            << ",\"per_phone\":";
        write_float_array(out, r.per_phone);
        out << "}\n";
    }
    out << "{\"corpus_ane\":" << format_float(corpus_ane) << "}\n";
}

void save_run(const std::filesystem::path& path, const Corpus& corpus) {
    write_file(path, [&](std::ostream& out) { write_run(out, corpus); });
}

void save_gold(const std::filesystem::path& path, const GoldMap& gold) {
    write_file(path, [&](std::ostream& out) { write_gold(out, gold); });
}

void save_segmentation(const std::filesystem::path& path, std::span<const Segmentation> segmentations) {
    write_file(path, [&](std::ostream& out) { write_segmentation(out, segmentations); });
}

void save_lexicon(const std::filesystem::path& path, std::span<const AlignmentEntry> pairs) {
    write_file(path, [&](std::ostream& out) { write_lexicon(out, pairs); });
}

}  // namespace uws
