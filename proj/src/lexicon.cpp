#include "uws/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <map>
#include <tuple>
#include <utility>

#include <fmt/core.h>

#include "uws/error.hpp"

namespace uws {

namespace {

struct Accumulator {
    std::size_t count = 0;
    double ane_total = 0.0;

    void add(double ane) {
        ++count;
        ane_total += ane;
    }
    double mean() const { return ane_total / static_cast<double>(count); }
};

bool pair_less(const AlignmentEntry& a, const AlignmentEntry& b) {
    return std::tie(a.type_form, a.translation) < std::tie(b.type_form, b.translation);
}

}  // namespace

Lexicon build_lexicon(std::span<const Segmentation> segmentations) {
    std::map<PhoneSeq, Accumulator> types;
    std::map<std::pair<PhoneSeq, std::string>, Accumulator> pairs;
    for (const auto& seg : segmentations) {
        for (const auto& token : seg.tokens) {
            types[token.phones].add(token.token_ane);
            pairs[{token.phones, token.aligned_word}].add(token.token_ane);
        }
    }

    Lexicon lex;
    lex.types.reserve(types.size());
    for (const auto& [form, acc] : types) lex.types.push_back({form, acc.count, acc.mean()});
    lex.pairs.reserve(pairs.size());
    for (const auto& [key, acc] : pairs) {
        lex.pairs.push_back({key.first, key.second, acc.count, acc.mean()});
    }

    std::stable_sort(lex.types.begin(), lex.types.end(), [](const auto& a, const auto& b) {
        return std::tie(a.type_ane, a.type_form) < std::tie(b.type_ane, b.type_form);
    });
    std::stable_sort(lex.pairs.begin(), lex.pairs.end(), [](const auto& a, const auto& b) {
        if (a.alignment_ane != b.alignment_ane) return a.alignment_ane < b.alignment_ane;
        return pair_less(a, b);
    });
    return lex;
}

AneThreshold::AneThreshold(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ArgumentError(fmt::format("ANE threshold {} outside [0,1]", value));
    }
}

AneThreshold AneThreshold::parse(std::string_view text) {
    if (text == "all") return all();
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ArgumentError(fmt::format("invalid ANE threshold '{}'", text));
    }
    return AneThreshold(value);
}

std::string AneThreshold::to_string() const {
    if (!value_) return "all";
    std::string s = fmt::format("{:.6f}", *value_);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.push_back('0');
    return s;
}

TypeSet filter_by_ane(std::span<const AlignmentEntry> pairs, const AneThreshold& threshold,
                      FilterRule rule) {
    if (rule == FilterRule::any_pair) {
        TypeSet kept;
        for (const auto& p : pairs) {
            if (threshold.admits(p.alignment_ane)) kept.insert(p.type_form);
        }
        return kept;
    }
    TypeSet seen;
    TypeSet rejected;
    for (const auto& p : pairs) {
        seen.insert(p.type_form);
        if (!threshold.admits(p.alignment_ane)) rejected.insert(p.type_form);
    }
    TypeSet kept;
    std::set_difference(seen.begin(), seen.end(), rejected.begin(), rejected.end(),
                        std::inserter(kept, kept.end()));
    return kept;
}

TypeSet filter_types_by_ane(std::span<const TypeEntry> types, const AneThreshold& threshold) {
    TypeSet kept;
    for (const auto& t : types) {
        if (threshold.admits(t.type_ane)) kept.insert(t.type_form);
    }
    return kept;
}

std::vector<AlignmentEntry> rank_types(std::span<const AlignmentEntry> pairs,
                                       RankDirection direction, std::size_t limit) {
    std::vector<AlignmentEntry> ranked(pairs.begin(), pairs.end());
    const bool ascending = direction == RankDirection::ascending;
    std::stable_sort(ranked.begin(), ranked.end(), [ascending](const auto& a, const auto& b) {
        if (a.alignment_ane != b.alignment_ane) {
            return ascending ? a.alignment_ane < b.alignment_ane : a.alignment_ane > b.alignment_ane;
        }
        return pair_less(a, b);
    });
    if (ranked.size() > limit) ranked.resize(limit);
    return ranked;
}

std::string join_phones(const PhoneSeq& phones) {
    std::string out;
    for (std::size_t i = 0; i < phones.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += phones[i];
    }
    return out;
}

}  // namespace uws
