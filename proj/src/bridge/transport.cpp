#include "inspectkit/bridge/transport.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "inspectkit/core/error.hpp"

namespace inspectkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw TransportError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) {
  try {
    return json::parse(slurp(p));
  } catch (const json::parse_error& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
}

void write_json_atomic(const fs::path& p, const json& j) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw TransportError("cannot write " + tmp.string());
    out << j.dump(2) << "\n";
    if (!out) throw TransportError("cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

bool safe_segment(std::string_view s) {
  return !s.empty() && s != "." && s != ".." && s.find('/') == std::string_view::npos &&
         s.find('\\') == std::string_view::npos && s.find('\0') == std::string_view::npos;
}

bool safe_relative(std::string_view s) {
  if (s.empty() || s.front() == '/') return false;
  std::size_t pos = 0;
  for (;;) {
    auto cut = s.find('/', pos);
    if (!safe_segment(s.substr(pos, cut == std::string_view::npos ? cut : cut - pos))) return false;
    if (cut == std::string_view::npos) return true;
    pos = cut + 1;
  }
}

std::string json_id(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError("comment id must be a string or integer");
}

}  // namespace

std::string sanitize_id_part(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                c == '.' || c == '_' || c == '-';
    out += keep ? static_cast<char>(c) : '_';
  }
  return out;
}

// ---------------------------------------------------------------------------
// FixtureDesignTool

FixtureDesignTool::FixtureDesignTool(fs::path root) : root_(std::move(root)) {}

DesignFetchResult FixtureDesignTool::fetch_comments(const std::string& project_id) {
  if (!fs::is_directory(root_)) {
    throw TransportError("fixture directory unreachable: " + root_.string());
  }
  if (!safe_segment(project_id)) throw InvalidArgument("invalid project id: " + project_id);
  fs::path dir = root_ / "project" / project_id;
  if (!fs::is_directory(dir)) throw NotFound("project not found: " + project_id);

  json doc = read_json(dir / "comments.json");
  if (!doc.is_array()) throw ParseError("comments.json: expected an array");

  DesignFetchResult result;
  std::map<std::string, std::optional<Image>> frames;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    std::string label = "record " + std::to_string(i);
    auto fail = [&](const std::string& what) -> ParseError {
      return ParseError("comments.json " + label + ": " + what);
    };
    if (!rec.is_object()) throw fail("expected an object");
    auto str = [&](const char* key) {
      if (!rec.contains(key) || !rec[key].is_string()) throw fail(std::string("missing string '") + key + "'");
      return rec[key].get<std::string>();
    };
    auto num = [&](const char* key) {
      if (!rec.contains(key) || !rec[key].is_number()) throw fail(std::string("missing number '") + key + "'");
      double v = rec[key].get<double>();
      if (!std::isfinite(v)) throw fail(std::string("non-finite '") + key + "'");
      return v;
    };

    DesignToolComment c;
    c.remote_id = str("remote_id");
    label += " (" + c.remote_id + ")";
    if (c.remote_id.empty()) throw fail("empty remote_id");
    if (!seen.insert(c.remote_id).second) throw fail("duplicate remote_id");
    c.frame_id = str("frame_id");
    c.x = num("x");
    c.y = num("y");
    c.body = str("body");
    auto created = parse_iso8601(str("created_at"));
    if (!created) throw fail("unparseable created_at");
    c.created_at = *created;
    if (rec.contains("parent_remote_id") && !rec["parent_remote_id"].is_null()) {
      if (!rec["parent_remote_id"].is_string()) throw fail("parent_remote_id must be a string");
      c.parent_remote_id = rec["parent_remote_id"].get<std::string>();
    }

    if (!safe_segment(c.frame_id)) {
      result.failures.push_back({c.remote_id, "invalid frame id"});
      continue;
    }
    auto it = frames.find(c.frame_id);
    if (it == frames.end()) {
      std::optional<Image> image;
      fs::path png = dir / "frames" / (c.frame_id + ".png");
      if (fs::exists(png)) {
        try {
          image = decode_png(slurp(png));
        } catch (const ParseError&) {
          image = std::nullopt;
        }
      }
      it = frames.emplace(c.frame_id, std::move(image)).first;
    }
    if (!it->second) {
      result.failures.push_back({c.remote_id, "missing frame image"});
      continue;
    }
    c.frame_image = *it->second;
    result.comments.push_back(std::move(c));
  }
  return result;
}

// ---------------------------------------------------------------------------
// FixtureCodeHost

FixtureCodeHost::FixtureCodeHost(fs::path root) : root_(std::move(root)) {}

fs::path FixtureCodeHost::pr_dir(const std::string& repo, int pr_number) const {
  if (!safe_relative(repo)) throw InvalidArgument("invalid repo name: " + repo);
  return root_ / "repo" / repo / "pr" / std::to_string(pr_number);
}

std::vector<PullRequestComment> FixtureCodeHost::list_comments(const std::string& repo,
                                                               int pr_number) {
  if (!fs::is_directory(root_)) {
    throw TransportError("fixture directory unreachable: " + root_.string());
  }
  fs::path dir = pr_dir(repo, pr_number);
  if (!fs::is_directory(dir)) throw NotFound("PR not found: " + repo + "#" + std::to_string(pr_number));
  std::vector<PullRequestComment> out;
  fs::path file = dir / "comments.json";
  if (!fs::exists(file)) return out;
  json doc = read_json(file);
  if (!doc.is_array()) throw ParseError(file.string() + ": expected an array");
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    try {
      PullRequestComment c;
      c.id = json_id(rec.at("id"));
      c.body = rec.at("body").get<std::string>();
      auto at = parse_iso8601(rec.at("created_at").get<std::string>());
      if (!at) throw ParseError("unparseable created_at");
      c.created_at = *at;
      c.author = rec.value("author", std::string());
      if (rec.contains("file_path") && rec["file_path"].is_string()) {
        c.file_path = rec["file_path"].get<std::string>();
      }
      out.push_back(std::move(c));
    } catch (const json::exception& e) {
      throw ParseError(file.string() + " record " + std::to_string(i) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(file.string() + " record " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::string FixtureCodeHost::post_comment(const std::string& repo, int pr_number,
                                          const std::string& body, Timestamp created_at) {
  if (!fs::is_directory(root_)) {
    throw TransportError("fixture directory unreachable: " + root_.string());
  }
  fs::path dir = pr_dir(repo, pr_number);
  if (!fs::is_directory(dir)) throw NotFound("PR not found: " + repo + "#" + std::to_string(pr_number));
  fs::path file = dir / "comments.json";
  json doc = fs::exists(file) ? read_json(file) : json::array();
  long long next = 1;
  for (const auto& rec : doc) {
    std::string id = json_id(rec.at("id"));
    try {
      next = std::max(next, std::stoll(id) + 1);
    } catch (const std::exception&) {
    }
  }
  std::string id = std::to_string(next);
  doc.push_back({{"id", id},
                 {"body", body},
                 {"created_at", format_iso8601(created_at)},
                 {"author", "inspectkit-bridge"}});
  write_json_atomic(file, doc);
  return id;
}

fs::path fixture_image_store_dir(const fs::path& root, const std::string& repo) {
  if (!safe_relative(repo)) throw InvalidArgument("invalid repo name: " + repo);
  return root / "repo" / repo / "images.git";
}

// ---------------------------------------------------------------------------
// Memory transports

void MemoryDesignTool::add_frame(const std::string& project, const std::string& frame_id,
                                 Image image) {
  projects_[project].frames[frame_id] = std::move(image);
}

void MemoryDesignTool::add_comment(const std::string& project, Record record) {
  projects_[project].comments.push_back(std::move(record));
}

DesignFetchResult MemoryDesignTool::fetch_comments(const std::string& project_id) {
  if (fail_next_) {
    fail_next_ = false;
    throw TransportError("design tool unreachable");
  }
  auto it = projects_.find(project_id);
  if (it == projects_.end()) throw NotFound("project not found: " + project_id);
  DesignFetchResult result;
  for (const auto& r : it->second.comments) {
    auto frame = it->second.frames.find(r.frame_id);
    if (frame == it->second.frames.end()) {
      result.failures.push_back({r.remote_id, "missing frame image"});
      continue;
    }
    result.comments.push_back(
        {r.remote_id, r.frame_id, frame->second, r.x, r.y, r.body, r.created_at, r.parent_remote_id});
  }
  return result;
}

void MemoryCodeHost::add_pull_request(const std::string& repo, int pr_number) {
  prs_[{repo, pr_number}];
}

std::string MemoryCodeHost::add_native_comment(const std::string& repo, int pr_number,
                                               std::string body, Timestamp at,
                                               std::optional<std::string> file_path) {
  auto it = prs_.find({repo, pr_number});
  if (it == prs_.end()) throw NotFound("PR not found: " + repo + "#" + std::to_string(pr_number));
  std::string id = std::to_string(next_id_++);
  it->second.push_back({id, std::move(body), at, "reviewer", std::move(file_path)});
  return id;
}

std::vector<PullRequestComment> MemoryCodeHost::list_comments(const std::string& repo,
                                                              int pr_number) {
  auto it = prs_.find({repo, pr_number});
  if (it == prs_.end()) throw NotFound("PR not found: " + repo + "#" + std::to_string(pr_number));
  return it->second;
}

std::string MemoryCodeHost::post_comment(const std::string& repo, int pr_number,
                                         const std::string& body, Timestamp created_at) {
  auto it = prs_.find({repo, pr_number});
  if (it == prs_.end()) throw NotFound("PR not found: " + repo + "#" + std::to_string(pr_number));
  if (failing_posts_ > 0) {
    --failing_posts_;
    throw TransportError("code host unreachable");
  }
  std::string id = std::to_string(next_id_++);
  it->second.push_back({id, body, created_at, "inspectkit-bridge", std::nullopt});
  ++posts_;
  return id;
}

}  // namespace inspectkit
