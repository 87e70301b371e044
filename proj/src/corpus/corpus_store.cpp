#include "inspectkit/corpus/corpus_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "inspectkit/core/error.hpp"
#include "inspectkit/corpus/corpus_csv.hpp"

namespace inspectkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw TransportError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& p, const std::string& content) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw TransportError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw TransportError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw TransportError("cannot replace " + p.string() + ": " + ec.message());
}

}  // namespace

CorpusLock::CorpusLock(const fs::path& dir) {
  fs::path lock_path = dir / ".lock";
  fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw TransportError("cannot open " + lock_path.string() + ": " + std::strerror(errno));
  }
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    int err = errno;
    ::close(fd_);
    fd_ = -1;
    if (err == EWOULDBLOCK) throw Conflict("corpus is locked by another writer");
    throw TransportError("cannot lock " + lock_path.string() + ": " + std::strerror(err));
  }
}

CorpusLock::~CorpusLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

CorpusLock::CorpusLock(CorpusLock&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

std::string assignment_to_json_line(const LabelAssignment& a) {
  json j;
  j["comment_id"] = a.comment_id;
  json labels = json::array();
  for (auto c : a.labels.to_vector()) labels.push_back(std::string(slug(c)));
  j["labels"] = labels;
  j["labeler"] = a.labeler.to_string();
  if (a.scores) {
    json scores = json::object();
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      scores[std::string(slug(category_at(i)))] = (*a.scores)[i];
    }
    j["scores"] = scores;
  }
  j["assigned_at"] = format_iso8601(a.assigned_at);
  return j.dump();
}

LabelAssignment assignment_from_json_line(const std::string& line) {
  try {
    json j = json::parse(line);
    LabelAssignment a;
    a.comment_id = j.at("comment_id").get<std::string>();
    for (const auto& s : j.at("labels")) {
      auto c = parse_category(s.get<std::string>());
      if (!c) throw ParseError("unknown label: " + s.get<std::string>());
      a.labels.insert(*c);
    }
    a.labeler = Labeler::parse(j.at("labeler").get<std::string>());
    if (j.contains("scores")) {
      CategoryScores scores{};
      for (std::size_t i = 0; i < kCategoryCount; ++i) {
        scores[i] = j["scores"].at(std::string(slug(category_at(i)))).get<double>();
      }
      a.scores = scores;
    }
    auto at = parse_iso8601(j.at("assigned_at").get<std::string>());
    if (!at) throw ParseError("unparseable assigned_at");
    a.assigned_at = *at;
    return a;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

CorpusStore::CorpusStore(fs::path dir) : dir_(std::move(dir)) {}

bool CorpusStore::exists() const { return fs::exists(csv_path()); }

Corpus CorpusStore::load(std::vector<std::string>* warnings) const {
  std::vector<CsvRecord> records;
  if (fs::exists(csv_path())) records = parse_corpus_csv(read_file(csv_path()));

  std::map<std::string, std::string> parents;
  if (fs::exists(threads_path())) {
    try {
      parents = json::parse(read_file(threads_path())).get<std::map<std::string, std::string>>();
    } catch (const json::exception& e) {
      throw ParseError(threads_path().string() + ": " + e.what());
    }
  }

  std::vector<InspectionComment> comments;
  std::map<std::string, Provenance> provenance;
  for (auto& r : records) {
    if (auto it = parents.find(r.comment.id); it != parents.end()) r.comment.parent_id = it->second;
    comments.push_back(r.comment);
    if (r.provenance) provenance[r.comment.id] = *r.provenance;
  }

  Corpus corpus;
  auto ingest = corpus.ingest(comments, provenance);
  if (!ingest.violations.empty()) {
    throw ParseError(csv_path().string() + ": comment " + ingest.violations.front().first + ": " +
                     ingest.violations.front().second);
  }

  if (fs::exists(assignments_path())) {
    std::ifstream in(assignments_path(), std::ios::binary);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        corpus.append_assignment(assignment_from_json_line(line));
      } catch (const Error& e) {
        throw ParseError(assignments_path().string() + ":" + std::to_string(line_no) + ": " +
                         e.what());
      }
    }
  }

  for (const auto& r : records) {
    const auto* eff = corpus.effective_assignment(r.comment.id);
    if (r.labels.empty()) {
      if (eff && warnings) {
        warnings->push_back(r.comment.id + ": CSV has no labels but the log does; keeping log");
      }
      continue;
    }
    if (eff && eff->labels == r.labels && eff->labeler == *r.labeler) continue;
    corpus.append_assignment({r.comment.id, r.labels, *r.labeler, std::nullopt,
                              r.comment.created_at});
    if (eff && warnings) {
      warnings->push_back(r.comment.id + ": CSV labels override the assignment log");
    }
  }
  return corpus;
}

void CorpusStore::save(const Corpus& corpus) const {
  fs::create_directories(dir_);
  std::string log;
  for (const auto& a : corpus.log().entries()) {
    log += assignment_to_json_line(a);
    log += '\n';
  }
  json threads = json::object();
  for (const auto& [id, c] : corpus.comments()) {
    if (c.parent_id) threads[id] = *c.parent_id;
  }
  write_atomic(assignments_path(), log);
  write_atomic(threads_path(), threads.dump(2) + "\n");
  write_atomic(csv_path(), export_csv_text(corpus));
}

CorpusLock CorpusStore::lock() const {
  fs::create_directories(dir_);
  return CorpusLock(dir_);
}

}  // namespace inspectkit
