#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inspectkit/corpus/corpus.hpp"

namespace inspectkit {

/// Canonical column order of the corpus CSV.
inline constexpr std::array<std::string_view, 18> kCsvHeader{
    "comment_id", "year",     "group",     "source",   "artifact", "author_role",
    "created_at", "body",     "labels",    "labeler",  "project_id", "frame_id",
    "x",          "y",        "repo",      "pr_number", "file_path",  "image_path"};

/// One row per comment, ordered by comment id. Labels are the effective
/// labels in taxonomy order, `;`-joined. Records end in CRLF.
std::string export_csv_text(const Corpus& corpus);

/// Writes export_csv_text to `destination`; returns the number of data rows.
/// Throws TransportError if the file cannot be written.
std::size_t export_csv(const Corpus& corpus, const std::filesystem::path& destination);

/// A parsed CSV row before it is placed into a corpus.
struct CsvRecord {
  InspectionComment comment;
  std::optional<Provenance> provenance;
  LabelSet labels;
  std::optional<Labeler> labeler;
};

/// Throws ParseError on a header mismatch (naming the first mismatched
/// column) and on row-level problems (naming the line).
std::vector<CsvRecord> parse_corpus_csv(std::string_view text);

/// Builds a corpus whose effective labels equal the CSV label cells. The
/// synthesized assignments carry the row's labeler and created_at.
Corpus import_csv_text(std::string_view text);
Corpus import_csv(const std::filesystem::path& source);

/// Shortest decimal form that reads back to the same double.
std::string format_coordinate(double v);

}  // namespace inspectkit
