#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uws/corpus.hpp"
#include "uws/segmenter.hpp"

namespace uws {

/// A discovered type: every token with this exact phone sequence.
struct TypeEntry {
    PhoneSeq type_form;
    std::size_t count = 0;
    double type_ane = 0.0;

    friend bool operator==(const TypeEntry&, const TypeEntry&) = default;
};

/// A (type, translation word) alignment pair.
struct AlignmentEntry {
    PhoneSeq type_form;
    std::string translation;
    std::size_t count = 0;
    double alignment_ane = 0.0;

    friend bool operator==(const AlignmentEntry&, const AlignmentEntry&) = default;
};

struct Lexicon {
    /// Ascending type_ane, then type_form.
    std::vector<TypeEntry> types;
    /// Ascending alignment_ane, then type_form, then translation.
    std::vector<AlignmentEntry> pairs;
};

using TypeSet = std::set<PhoneSeq>;

/// Aggregates tokens into types and alignment pairs; ANEs are unweighted means
/// of token ANE over occurrences.
Lexicon build_lexicon(std::span<const Segmentation> segmentations);

/// ANE cutoff: a value in [0,1], or "all" (no filtering).
class AneThreshold {
public:
    /// The "all" threshold.
    AneThreshold() = default;
    /// Throws ArgumentError outside [0,1].
    explicit AneThreshold(double value);

    static AneThreshold all() { return {}; }
    /// Parses a number or the literal "all".
    static AneThreshold parse(std::string_view text);

    bool is_all() const noexcept { return !value_.has_value(); }
    double value() const { return value_.value(); }
    bool admits(double ane) const noexcept { return !value_ || ane <= *value_; }
    /// "all" or the value with up to 6 decimals, trailing zeros stripped.
    std::string to_string() const;

    friend bool operator==(const AneThreshold&, const AneThreshold&) = default;

private:
    std::optional<double> value_;
};

enum class FilterRule {
    /// Keep a type when at least one of its pairs passes.
    any_pair,
    /// Keep a type only when all of its pairs pass.
    all_pairs,
};

TypeSet filter_by_ane(std::span<const AlignmentEntry> pairs, const AneThreshold& threshold,
                      FilterRule rule = FilterRule::any_pair);

/// Type-level variant: keeps types whose Type ANE passes.
TypeSet filter_types_by_ane(std::span<const TypeEntry> types, const AneThreshold& threshold);

enum class RankDirection { ascending, descending };

/// Pairs ordered by alignment ANE in `direction`, ties by type_form then
/// translation, truncated to `limit` entries.
std::vector<AlignmentEntry> rank_types(std::span<const AlignmentEntry> pairs,
                                       RankDirection direction, std::size_t limit);

/// Phones joined with single spaces.
std::string join_phones(const PhoneSeq& phones);

}  // namespace uws
