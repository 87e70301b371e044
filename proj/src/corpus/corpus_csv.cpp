#include "inspectkit/corpus/corpus_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "inspectkit/core/error.hpp"
#include "inspectkit/corpus/csv.hpp"

namespace inspectkit {

namespace {

enum Column : std::size_t {
  kId,
  kYear,
  kGroup,
  kSource,
  kArtifact,
  kAuthorRole,
  kCreatedAt,
  kBody,
  kLabels,
  kLabeler,
  kProjectId,
  kFrameId,
  kX,
  kY,
  kRepo,
  kPrNumber,
  kFilePath,
  kImagePath,
};

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

int parse_int(std::string_view s, std::size_t line, std::string_view column) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    row_error(line, "invalid " + std::string(column) + " '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s, std::size_t line, std::string_view column) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    row_error(line, "invalid " + std::string(column) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_coordinate(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string export_csv_text(const Corpus& corpus) {
  std::string out;
  std::vector<std::string> fields(kCsvHeader.begin(), kCsvHeader.end());
  csv::append_row(out, fields);

  for (const auto& [id, c] : corpus.comments()) {
    std::fill(fields.begin(), fields.end(), std::string());
    fields[kId] = c.id;
    fields[kYear] = std::to_string(c.year);
    fields[kGroup] = c.group;
    fields[kSource] = to_string(c.source);
    fields[kArtifact] = slug(c.artifact);
    fields[kAuthorRole] = to_string(c.author_role);
    fields[kCreatedAt] = format_iso8601(c.created_at);
    fields[kBody] = c.body;
    if (const auto* a = corpus.effective_assignment(id)) {
      fields[kLabels] = a->labels.join(';');
      fields[kLabeler] = a->labeler.to_string();
    }
    if (const auto* d = std::get_if<DesignLocation>(&c.location)) {
      fields[kProjectId] = d->project_id;
      fields[kFrameId] = d->frame_id;
      fields[kX] = format_coordinate(d->x);
      fields[kY] = format_coordinate(d->y);
      if (const auto* p = corpus.provenance(id)) {
        fields[kRepo] = p->repo;
        if (p->pr_number > 0) fields[kPrNumber] = std::to_string(p->pr_number);
        fields[kImagePath] = p->image_path;
      }
    } else if (const auto* h = std::get_if<CodeHostLocation>(&c.location)) {
      fields[kRepo] = h->repo;
      fields[kPrNumber] = std::to_string(h->pr_number);
      fields[kFilePath] = h->file_path.value_or("");
    }
    csv::append_row(out, fields);
  }
  return out;
}

std::size_t export_csv(const Corpus& corpus, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw TransportError("cannot write " + destination.string());
  out << export_csv_text(corpus);
  out.flush();
  if (!out) throw TransportError("cannot write " + destination.string());
  return corpus.size();
}

std::vector<CsvRecord> parse_corpus_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError("header mismatch at column 1: file is empty");
  const auto& header = rows.front().fields;
  for (std::size_t i = 0; i < kCsvHeader.size(); ++i) {
    if (i >= header.size() || header[i] != kCsvHeader[i]) {
      throw ParseError("header mismatch at column " + std::to_string(i + 1) + ": expected '" +
                       std::string(kCsvHeader[i]) + "', got '" +
                       (i < header.size() ? header[i] : std::string("<missing>")) + "'");
    }
  }
  if (header.size() != kCsvHeader.size()) {
    throw ParseError("header mismatch at column " + std::to_string(kCsvHeader.size() + 1) +
                     ": unexpected extra column '" + header[kCsvHeader.size()] + "'");
  }

  std::vector<CsvRecord> records;
  records.reserve(rows.size() - 1);
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto& f = row.fields;
    if (f.size() != kCsvHeader.size()) {
      row_error(row.line, "expected " + std::to_string(kCsvHeader.size()) + " fields, got " +
                              std::to_string(f.size()));
    }
    CsvRecord rec;
    auto& c = rec.comment;
    c.id = f[kId];
    if (!seen.insert(c.id).second) row_error(row.line, "duplicate comment id '" + c.id + "'");
    c.year = parse_int(f[kYear], row.line, "year");
    c.group = f[kGroup];
    auto source = parse_source(f[kSource]);
    if (!source) row_error(row.line, "unknown source '" + f[kSource] + "'");
    c.source = *source;
    auto artifact = parse_artifact_kind(f[kArtifact]);
    if (!artifact) row_error(row.line, "unknown artifact '" + f[kArtifact] + "'");
    c.artifact = *artifact;
    auto role = parse_author_role(f[kAuthorRole]);
    if (!role) row_error(row.line, "unknown author role '" + f[kAuthorRole] + "'");
    c.author_role = *role;
    auto created = parse_iso8601(f[kCreatedAt]);
    if (!created) row_error(row.line, "unparseable timestamp '" + f[kCreatedAt] + "'");
    c.created_at = *created;
    c.body = f[kBody];

    try {
      rec.labels = LabelSet::parse(f[kLabels], ';');
      if (!f[kLabeler].empty()) rec.labeler = Labeler::parse(f[kLabeler]);
    } catch (const InvalidArgument& e) {
      row_error(row.line, e.what());
    }
    if (!rec.labels.empty() && !rec.labeler) row_error(row.line, "labels without labeler");

    if (c.source == CommentSource::kDesignTool) {
      DesignLocation loc;
      loc.project_id = f[kProjectId];
      loc.frame_id = f[kFrameId];
      loc.x = parse_double(f[kX], row.line, "x");
      loc.y = parse_double(f[kY], row.line, "y");
      c.location = loc;
      if (!f[kRepo].empty() || !f[kPrNumber].empty() || !f[kImagePath].empty()) {
        Provenance p;
        p.repo = f[kRepo];
        if (!f[kPrNumber].empty()) p.pr_number = parse_int(f[kPrNumber], row.line, "pr_number");
        p.image_path = f[kImagePath];
        rec.provenance = p;
      }
    } else {
      CodeHostLocation loc;
      loc.repo = f[kRepo];
      loc.pr_number = parse_int(f[kPrNumber], row.line, "pr_number");
      if (!f[kFilePath].empty()) loc.file_path = f[kFilePath];
      c.location = loc;
    }

    auto violations = validate_comment(c);
    if (!violations.empty()) row_error(row.line, violations.front());
    records.push_back(std::move(rec));
  }
  return records;
}

Corpus import_csv_text(std::string_view text) {
  auto records = parse_corpus_csv(text);
  Corpus corpus;
  std::vector<InspectionComment> comments;
  std::map<std::string, Provenance> provenance;
  comments.reserve(records.size());
  for (const auto& r : records) {
    comments.push_back(r.comment);
    if (r.provenance) provenance[r.comment.id] = *r.provenance;
  }
  auto result = corpus.ingest(comments, provenance);
  if (!result.violations.empty()) {
    throw ParseError("comment " + result.violations.front().first + ": " +
                     result.violations.front().second);
  }
  for (const auto& r : records) {
    if (!r.labels.empty()) {
      corpus.append_assignment({r.comment.id, r.labels, *r.labeler, std::nullopt,
                                r.comment.created_at});
    }
  }
  return corpus;
}

Corpus import_csv(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw TransportError("cannot read " + source.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return import_csv_text(ss.str());
}

}  // namespace inspectkit
