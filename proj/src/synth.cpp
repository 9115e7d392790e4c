#include "uws/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string_view>

#include <fmt/core.h>

#include "uws/error.hpp"

namespace uws {

namespace {

constexpr std::array<std::string_view, 39> kPhones = {
    "AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH", "EH", "ER", "EY",
    "F",  "G",  "HH", "IH", "IY", "JH", "K",  "L",  "M",  "N",  "NG", "OW", "OY",
    "P",  "R",  "S",  "SH", "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH"};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform integer in [0, n) by rejection; std distributions are not portable.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return static_cast<std::size_t>(x % bound);
}

/// Uniform real in [0, 1) from the top 53 bits.
double uniform_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t in_range(std::mt19937_64& rng, const SizeRange& r) {
    return r.min + uniform_index(rng, r.max - r.min + 1);
}

/// Number of distinct phone strings with length in `r`, saturating.
double form_capacity(const SizeRange& r) {
    double total = 0.0;
    for (std::size_t len = r.min; len <= r.max && total < 1e18; ++len) {
        total += std::pow(static_cast<double>(kPhones.size()), static_cast<double>(len));
    }
    return total;
}

struct SynthLexicon {
    std::vector<PhoneSeq> forms;
    std::vector<std::size_t> translation;  // type -> source word index
};

SynthLexicon make_lexicon(const SynthConfig& config, std::mt19937_64& rng) {
    SynthLexicon lex;
    std::set<PhoneSeq> used;
    while (lex.forms.size() < config.source_vocab) {
        PhoneSeq form(in_range(rng, config.word_len));
        for (auto& p : form) p = std::string(kPhones[uniform_index(rng, kPhones.size())]);
        if (!used.insert(form).second) continue;
        lex.forms.push_back(std::move(form));
    }
    lex.translation.resize(config.source_vocab);
    for (std::size_t t = 0; t < config.source_vocab; ++t) {
        lex.translation[t] = config.ambiguous ? uniform_index(rng, config.source_vocab) : t;
    }
    return lex;
}

std::string source_word(std::size_t index) { return fmt::format("w{}", index); }

}  // namespace

double temperature_weight(double temperature) { return temperature / (1.0 + temperature); }

void SynthConfig::validate() const {
    if (n_sentences == 0) throw ArgumentError("synth: n_sentences must be positive");
    if (source_vocab == 0) throw ArgumentError("synth: source_vocab must be positive");
    if (word_len.min == 0 || word_len.min > word_len.max) {
        throw ArgumentError("synth: word length range must satisfy 1 <= min <= max");
    }
    if (sent_len.min == 0 || sent_len.min > sent_len.max) {
        throw ArgumentError("synth: sentence length range must satisfy 1 <= min <= max");
    }
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw ArgumentError("synth: temperature must be finite and >= 0");
    }
    if (!(distractor_noise >= 0.0 && distractor_noise < 1.0)) {
        throw ArgumentError("synth: distractor noise must lie in [0,1)");
    }
    if (!(silence_prob >= 0.0 && silence_prob <= 1.0)) {
        throw ArgumentError("synth: silence probability must lie in [0,1]");
    }
    if (silence_token.empty()) throw ArgumentError("synth: empty silence token");
    // Leave room so rejection sampling of distinct forms terminates quickly.
    if (form_capacity(word_len) < 2.0 * static_cast<double>(source_vocab)) {
        throw ArgumentError(fmt::format(
            "synth: word lengths {}..{} cannot give {} distinct word forms", word_len.min,
            word_len.max, source_vocab));
    }
}

SynthCorpus generate(const SynthConfig& config) {
    config.validate();
    std::mt19937_64 structure(config.seed);
    std::mt19937_64 noise(splitmix64(config.seed));

    const SynthLexicon lex = make_lexicon(config, structure);

    SynthCorpus out;
    for (std::size_t t = 0; t < lex.forms.size(); ++t) {
        out.bilingual_lexicon.emplace_back(lex.forms[t], source_word(lex.translation[t]));
    }

    const double w = temperature_weight(config.temperature);
    const double nu = config.distractor_noise;
    const int id_width = std::max(4, static_cast<int>(std::to_string(config.n_sentences).size()));

    out.records.reserve(config.n_sentences);
    for (std::size_t s = 0; s < config.n_sentences; ++s) {
        const std::size_t n_words = in_range(structure, config.sent_len);
        std::vector<std::size_t> words(n_words);
        for (auto& word : words) word = uniform_index(structure, lex.forms.size());

        AlignmentRecord record;
        SentencePair& pair = record.pair;
        pair.id = fmt::format("synth-{:0{}}", s, id_width);

        // Source side: distinct translations in order of first appearance.
        std::vector<std::size_t> columns;
        std::vector<std::size_t> column_of_source;  // source word index -> column
        for (std::size_t word : words) {
            const std::size_t src = lex.translation[word];
            std::size_t col = 0;
            while (col < column_of_source.size() && column_of_source[col] != src) ++col;
            if (col == column_of_source.size()) {
                column_of_source.push_back(src);
                pair.source.push_back(source_word(src));
            }
            columns.push_back(col);
        }

        GoldWords gold;
        std::vector<std::size_t> phone_columns;
        for (std::size_t k = 0; k < n_words; ++k) {
            if (k > 0) {
                const bool coin = uniform_real(structure) < config.silence_prob;
                const bool forced = !config.ambiguous && columns[k] == columns[k - 1];
                if (coin || forced) pair.target.push_back(config.silence_token);
            }
            const PhoneSeq& form = lex.forms[words[k]];
            pair.target.insert(pair.target.end(), form.begin(), form.end());
            phone_columns.insert(phone_columns.end(), form.size(), columns[k]);
            gold.push_back(form);
            out.gold_lexicon.insert(form);
        }

        const std::size_t n_cols = pair.source.size();
        AlignmentMatrix m(phone_columns.size(), n_cols);
        std::vector<double> simplex(n_cols);
        for (std::size_t i = 0; i < phone_columns.size(); ++i) {
            auto row = m.row(i);
            for (std::size_t j = 0; j < n_cols; ++j) {
                const double onehot = j == phone_columns[i] ? 1.0 : 0.0;
                row[j] = (1.0 - w) * onehot + w / static_cast<double>(n_cols);
            }
            if (nu > 0.0) {
                double total = 0.0;
                for (auto& e : simplex) {
                    e = -std::log1p(-uniform_real(noise));
                    total += e;
                }
                for (std::size_t j = 0; j < n_cols; ++j) {
                    row[j] = (1.0 - nu) * row[j] + nu * simplex[j] / total;
                }
            }
        }
        m.renormalize();
        record.matrix = std::move(m);

        out.gold.emplace(pair.id, std::move(gold));
        out.records.push_back(std::move(record));
    }
    return out;
}

RunSet temperature_sweep(const SynthConfig& config, const std::vector<double>& temperatures) {
    if (temperatures.empty()) throw ArgumentError("temperature grid is empty");
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
        if (!(temperatures[i] >= 0.0) || !std::isfinite(temperatures[i])) {
            throw ArgumentError(fmt::format("temperature {} must be finite and >= 0", temperatures[i]));
        }
        if (i > 0 && !(temperatures[i] > temperatures[i - 1])) {
            throw ArgumentError("temperature grid must be strictly ascending");
        }
    }
    RunSet set;
    for (double t : temperatures) {
        SynthConfig c = config;
        c.temperature = t;
        set.runs.push_back(generate(c).records);
        set.labels.push_back(fmt::format("T={}", t));
    }
    return set;
}

}  // namespace uws
