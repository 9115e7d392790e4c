#include "uws/corpus.hpp"

#include <fmt/core.h>

#include "uws/error.hpp"

namespace uws {

PhoneSeq strip_silence(const std::vector<std::string>& target, std::string_view silence_token) {
    PhoneSeq phones;
    phones.reserve(target.size());
    for (const auto& t : target) {
        if (t != silence_token) phones.push_back(t);
    }
    return phones;
}

void validate_gold(const GoldWords& words, const PhoneSeq& phones) {
    if (words.empty()) throw ValidationError("gold segmentation has no words");
    std::size_t pos = 0;
    for (std::size_t w = 0; w < words.size(); ++w) {
        if (words[w].empty()) throw ValidationError(fmt::format("gold word {} is empty", w));
        for (const auto& phone : words[w]) {
            if (pos >= phones.size() || phones[pos] != phone) {
                throw ValidationError(fmt::format(
                    "gold words do not spell the silence-free target (mismatch at phone {})", pos));
            }
            ++pos;
        }
    }
    if (pos != phones.size()) {
        throw ValidationError(fmt::format("gold words cover {} phones but target has {}", pos,
                                          phones.size()));
    }
}

void validate_record(const AlignmentRecord& record, const CorpusOptions& options) {
    const auto& pair = record.pair;
    try {
        if (pair.id.empty()) throw ValidationError("empty sentence id");
        if (pair.source.empty()) throw ValidationError("empty source sequence");
        if (pair.target.empty()) throw ValidationError("empty target sequence");
        const PhoneSeq phones = strip_silence(pair.target, options.silence_token);
        if (phones.empty()) throw ValidationError("target contains only silence");
        if (record.matrix.rows() != phones.size()) {
            throw ValidationError(fmt::format(
                "dimension mismatch: matrix has {} rows but target has {} non-silence phones",
                record.matrix.rows(), phones.size()));
        }
        if (record.matrix.cols() != pair.source.size()) {
            throw ValidationError(fmt::format(
                "dimension mismatch: matrix has {} columns but source has {} words",
                record.matrix.cols(), pair.source.size()));
        }
        record.matrix.validate(options.row_tolerance);
        if (pair.gold_words) validate_gold(*pair.gold_words, phones);
    } catch (const ValidationError& e) {
        throw e.located({}, 0, pair.id);
    }
}

void validate_run_set(const RunSet& runs) {
    if (runs.runs.empty()) throw ArgumentError("run set is empty");
    if (!runs.labels.empty() && runs.labels.size() != runs.runs.size()) {
        throw ArgumentError("run set has a label count different from its run count");
    }
    const Corpus& first = runs.runs.front();
    for (std::size_t r = 1; r < runs.runs.size(); ++r) {
        const Corpus& other = runs.runs[r];
        if (other.size() != first.size()) {
            throw ValidationError(fmt::format("run {} has {} sentences, run 0 has {}", r,
                                              other.size(), first.size()));
        }
        for (std::size_t i = 0; i < first.size(); ++i) {
            const auto& a = first[i];
            const auto& b = other[i];
            if (a.pair.id != b.pair.id) {
                throw ValidationError(fmt::format("run {} sentence {}: id mismatch with run 0 ('{}')",
                                                  r, i, a.pair.id),
                                      {}, 0, b.pair.id);
            }
            if (a.pair.source != b.pair.source || a.pair.target != b.pair.target) {
                throw ValidationError(fmt::format("run {}: source/target differ from run 0", r), {},
                                      0, b.pair.id);
            }
            if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols()) {
                throw ValidationError(fmt::format("run {}: matrix is {}x{}, run 0 has {}x{}", r,
                                                  b.matrix.rows(), b.matrix.cols(),
                                                  a.matrix.rows(), a.matrix.cols()),
                                      {}, 0, b.pair.id);
            }
        }
    }
}

Corpus attach_gold(Corpus corpus, const GoldMap& gold, const CorpusOptions& options) {
    for (auto& record : corpus) {
        auto it = gold.find(record.pair.id);
        if (it == gold.end()) {
            throw ValidationError("no gold segmentation for sentence", {}, 0, record.pair.id);
        }
        try {
            validate_gold(it->second, strip_silence(record.pair.target, options.silence_token));
        } catch (const ValidationError& e) {
            throw e.located({}, 0, record.pair.id);
        }
        record.pair.gold_words = it->second;
    }
    return corpus;
}

}  // namespace uws
