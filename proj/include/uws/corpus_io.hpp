#pragma once

// Line-oriented file formats.
//
// JSON-lines files (one object per line; blank lines and lines starting with
// '#' are skipped):
//   run          {"id", "source": [str], "target": [str], "matrix": [[num]]}
//   gold         {"id", "words": [[str]]}
//   segmentation {"id", "tokens": [{"phones", "span": [b, e], "aligned_word",
//                                   "aligned_word_index", "token_ane"}]}
//   ANE report   {"id", "sentence_ane", "per_phone"} ... then {"corpus_ane"}
// Tab-separated files with a header row:
//   lexicon      type  translation  count  alignment_ane
//   types        type  count  type_ane
// Type forms in TSV files are phones joined by single spaces. Every float is
// written with 6 decimals.

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uws/corpus.hpp"
#include "uws/entropy.hpp"
#include "uws/error.hpp"
#include "uws/lexicon.hpp"
#include "uws/segmenter.hpp"

namespace uws {

/// Parses one run-file line. Throws ValidationError (without location).
AlignmentRecord parse_record(const std::string& line, const CorpusOptions& options = {});

Corpus read_run(std::istream& in, const std::string& source_name, const CorpusOptions& options = {});
Corpus load_run(const std::filesystem::path& path, const CorpusOptions& options = {});
/// Loads every file and checks the RunSet invariant. Labels are the paths.
RunSet load_runs(const std::vector<std::filesystem::path>& paths, const CorpusOptions& options = {});

GoldMap read_gold(std::istream& in, const std::string& source_name);
GoldMap load_gold(const std::filesystem::path& path);

std::vector<Segmentation> read_segmentation(std::istream& in, const std::string& source_name);
std::vector<Segmentation> load_segmentation(const std::filesystem::path& path);

std::vector<AlignmentEntry> read_lexicon(std::istream& in, const std::string& source_name);
std::vector<AlignmentEntry> load_lexicon(const std::filesystem::path& path);

/// Records in the given order.
void write_run(std::ostream& out, const Corpus& corpus);
void write_gold(std::ostream& out, const GoldMap& gold);
/// Sorted by sentence id, preceded by a '#' header line.
void write_segmentation(std::ostream& out, std::span<const Segmentation> segmentations);
/// Sorted by alignment ANE, then type form, then translation.
void write_lexicon(std::ostream& out, std::span<const AlignmentEntry> pairs);
/// Sorted by type ANE, then type form.
void write_types(std::ostream& out, std::span<const TypeEntry> types);
/// Sorted by sentence id, followed by the corpus summary line.
void write_ane_report(std::ostream& out, std::span<const AneReport> reports, double corpus_ane);

/// Writes through `writer` to `path`, throwing Error on I/O failure.
template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    writer(out);
    out.flush();
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

void save_run(const std::filesystem::path& path, const Corpus& corpus);
void save_gold(const std::filesystem::path& path, const GoldMap& gold);
void save_segmentation(const std::filesystem::path& path, std::span<const Segmentation> segmentations);
void save_lexicon(const std::filesystem::path& path, std::span<const AlignmentEntry> pairs);

/// Float with 6 decimals, as used by every writer.
std::string format_float(double value);

}  // namespace uws
