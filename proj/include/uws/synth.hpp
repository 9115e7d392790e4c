#pragma once

// Seeded synthetic parallel corpora with known gold segmentation.
//
// A fixed bilingual lexicon maps every target word type (a phone sequence) to
// one source word. Each sentence draws target words uniformly; its source side
// is the distinct translations in order of first appearance. The gold row of a
// phone is one-hot at its word's source column, and the emitted row is
//
//     row = renorm((1 - noise) * ((1 - w) * onehot + w * uniform) + noise * r)
//
// with w = T / (1 + T) for temperature T and r a uniform draw from the simplex.
//
// Randomness comes from two std::mt19937_64 streams (sentence structure, and
// row noise seeded from splitmix64(seed)) mapped to integers by rejection and
// to reals by taking the top 53 bits, so output is identical on every platform.
// Because the structure stream never depends on temperature or noise, configs
// that differ only in those produce the same sentences.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uws/corpus.hpp"
#include "uws/lexicon.hpp"

namespace uws {

struct SizeRange {
    std::size_t min = 1;
    std::size_t max = 1;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_sentences = 100;
    std::size_t source_vocab = 50;
    SizeRange word_len{2, 5};
    SizeRange sent_len{3, 8};
    double temperature = 0.0;
    /// Weight in [0,1) of the random simplex point mixed into every row.
    double distractor_noise = 0.0;
    /// Chance of a silence marker at a gold boundary that does not need one.
    double silence_prob = 0.0;
    /// Non-injective lexicon: distinct types may share a translation, and
    /// neighbouring same-column words get no forced silence.
    bool ambiguous = false;
    std::string silence_token{kDefaultSilenceToken};

    /// Throws ArgumentError on an invalid configuration.
    void validate() const;
};

struct SynthCorpus {
    Corpus records;
    GoldMap gold;
    TypeSet gold_lexicon;
    /// Type form -> translation, indexed by type.
    std::vector<std::pair<PhoneSeq, std::string>> bilingual_lexicon;
};

SynthCorpus generate(const SynthConfig& config);

/// One corpus per temperature; sentences and gold are shared, only matrices
/// differ. Temperatures must be non-negative and strictly ascending.
/// Labels are "T=<temperature>".
RunSet temperature_sweep(const SynthConfig& config, const std::vector<double>& temperatures);

/// Mixing weight toward uniform for temperature T: T / (1 + T).
double temperature_weight(double temperature);

}  // namespace uws
