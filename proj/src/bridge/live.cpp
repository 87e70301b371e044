#include "inspectkit/bridge/live.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "inspectkit/core/error.hpp"

namespace inspectkit {

using nlohmann::json;

namespace {

struct Response {
  int status = 0;
  std::string body;
};

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/' or is empty
};

SplitUrl split_url(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw InvalidArgument("URL without scheme: " + url);
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, ""};
  return {url.substr(0, slash), url.substr(slash)};
}

std::string url_escape(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                c == '-' || c == '.' || c == '_' || c == '~';
    if (keep) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

json parse_body(const Response& r, const std::string& what) {
  try {
    return json::parse(r.body);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

std::string split_author_name(const std::string& author, std::string* email) {
  auto lt = author.find('<');
  auto gt = author.find('>', lt == std::string::npos ? 0 : lt);
  if (lt == std::string::npos || gt == std::string::npos) {
    *email = "";
    return author;
  }
  *email = author.substr(lt + 1, gt - lt - 1);
  std::string name = author.substr(0, lt);
  while (!name.empty() && name.back() == ' ') name.pop_back();
  return name;
}

git::ObjectId sha_field(const json& j, const std::string& what) {
  if (!j.is_string()) throw ParseError(what + ": missing sha");
  auto id = git::ObjectId::from_hex(j.get<std::string>());
  if (!id) throw ParseError(what + ": malformed sha");
  return *id;
}

}  // namespace

class HttpSession {
 public:
  HttpSession(const std::string& base_url, httplib::Headers headers)
      : base_(split_url(base_url)), headers_(std::move(headers)) {}

  Response request(const std::string& method, const std::string& path,
                   const std::string& body = {}) {
    httplib::Client client(base_.origin);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    client.set_follow_location(true);
    std::string full = base_.path + path;
    httplib::Result res{nullptr, httplib::Error::Unknown};
    if (method == "GET") {
      res = client.Get(full, headers_);
    } else if (method == "POST") {
      res = client.Post(full, headers_, body, "application/json");
    } else if (method == "PATCH") {
      res = client.Patch(full, headers_, body, "application/json");
    } else {
      throw InvalidArgument("unsupported method " + method);
    }
    if (!res) {
      throw TransportError(method + " " + base_.origin + full + ": " + httplib::to_string(res.error()));
    }
    if (res->status >= 500) {
      throw TransportError(method + " " + full + ": HTTP " + std::to_string(res->status));
    }
    return {res->status, res->body};
  }

  static Response get_absolute(const std::string& url) {
    SplitUrl u = split_url(url);
    httplib::Client client(u.origin);
    client.set_follow_location(true);
    client.set_read_timeout(60);
    auto res = client.Get(u.path.empty() ? "/" : u.path);
    if (!res) throw TransportError("GET " + url + ": " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  SplitUrl base_;
  httplib::Headers headers_;
};

// ---------------------------------------------------------------------------

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(bytes.data()),
                          static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  std::string clean;
  for (char c : text) {
    if (c != '\n' && c != '\r' && c != ' ' && c != '\t') clean += c;
  }
  if (clean.size() % 4 != 0) throw ParseError("base64: length not a multiple of 4");
  std::string out(3 * clean.size() / 4, '\0');
  int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(clean.data()),
                          static_cast<int>(clean.size()));
  if (n < 0) throw ParseError("base64: invalid input");
  std::size_t pad = 0;
  if (!clean.empty() && clean.back() == '=') ++pad;
  if (clean.size() > 1 && clean[clean.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string token_from_env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) throw InvalidArgument(std::string("environment variable ") + name + " is not set");
  return v;
}

// ---------------------------------------------------------------------------
// Design tool

LiveDesignTool::LiveDesignTool(ApiEndpoint endpoint)
    : endpoint_(std::move(endpoint)),
      http_(std::make_unique<HttpSession>(endpoint_.base_url,
                                          httplib::Headers{{"X-Figma-Token", endpoint_.token}})) {}

LiveDesignTool::~LiveDesignTool() = default;

DesignFetchResult LiveDesignTool::fetch_comments(const std::string& project_id) {
  std::string key = url_escape(project_id);
  Response r = http_->request("GET", "/v1/files/" + key + "/comments");
  if (r.status == 404) throw NotFound("project not found: " + project_id);
  if (r.status != 200) throw TransportError("comments request: HTTP " + std::to_string(r.status));
  json doc = parse_body(r, "comments");
  if (!doc.contains("comments") || !doc["comments"].is_array()) {
    throw ParseError("comments: missing 'comments' array");
  }

  struct Raw {
    DesignToolComment c;
    std::optional<std::string> node;
  };
  std::vector<Raw> raws;
  std::map<std::string, std::size_t> by_id;
  const json& list = doc["comments"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& rec = list[i];
    std::string label = "comments record " + std::to_string(i);
    try {
      Raw raw;
      raw.c.remote_id = rec.at("id").get<std::string>();
      label += " (" + raw.c.remote_id + ")";
      raw.c.body = rec.at("message").get<std::string>();
      auto at = parse_iso8601(rec.at("created_at").get<std::string>());
      if (!at) throw ParseError("unparseable created_at");
      raw.c.created_at = *at;
      if (rec.contains("parent_id") && rec["parent_id"].is_string() &&
          !rec["parent_id"].get<std::string>().empty()) {
        raw.c.parent_remote_id = rec["parent_id"].get<std::string>();
      }
      if (rec.contains("client_meta") && rec["client_meta"].is_object()) {
        const json& meta = rec["client_meta"];
        if (meta.contains("node_id") && meta["node_id"].is_string()) {
          raw.node = meta["node_id"].get<std::string>();
          raw.c.frame_id = *raw.node;
        }
        const json& off = meta.contains("node_offset") ? meta["node_offset"] : meta;
        if (off.contains("x")) raw.c.x = off.at("x").get<double>();
        if (off.contains("y")) raw.c.y = off.at("y").get<double>();
      }
      by_id[raw.c.remote_id] = raws.size();
      raws.push_back(std::move(raw));
    } catch (const json::exception& e) {
      throw ParseError(label + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(label + ": " + e.what());
    }
  }

  for (auto& raw : raws) {
    if (raw.node || !raw.c.parent_remote_id) continue;
    auto p = by_id.find(*raw.c.parent_remote_id);
    if (p == by_id.end()) continue;
    const Raw& parent = raws[p->second];
    raw.node = parent.node;
    raw.c.frame_id = parent.c.frame_id;
    raw.c.x = parent.c.x;
    raw.c.y = parent.c.y;
  }

  std::vector<std::string> nodes;
  for (const auto& raw : raws) {
    if (raw.node && std::find(nodes.begin(), nodes.end(), *raw.node) == nodes.end()) {
      nodes.push_back(*raw.node);
    }
  }
  std::map<std::string, std::optional<Image>> frames;
  if (!nodes.empty()) {
    std::string ids;
    for (const auto& n : nodes) ids += (ids.empty() ? "" : ",") + url_escape(n);
    Response img = http_->request("GET", "/v1/images/" + key + "?ids=" + ids + "&format=png");
    if (img.status != 200) throw TransportError("image export: HTTP " + std::to_string(img.status));
    json images = parse_body(img, "image export");
    for (const auto& n : nodes) {
      std::optional<Image> frame;
      if (images.contains("images") && images["images"].contains(n) && images["images"][n].is_string()) {
        Response png = HttpSession::get_absolute(images["images"][n].get<std::string>());
        if (png.status == 200) {
          try {
            frame = decode_png(png.body);
          } catch (const ParseError&) {
          }
        }
      }
      frames[n] = std::move(frame);
    }
  }

  std::sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
    if (a.c.created_at != b.c.created_at) return a.c.created_at < b.c.created_at;
    return a.c.remote_id < b.c.remote_id;
  });
  DesignFetchResult result;
  for (auto& raw : raws) {
    if (!raw.node || !frames[*raw.node]) {
      result.failures.push_back({raw.c.remote_id, "missing frame image"});
      continue;
    }
    raw.c.frame_image = *frames[*raw.node];
    result.comments.push_back(std::move(raw.c));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Code host

namespace {

httplib::Headers code_host_headers(const std::string& token) {
  return {{"Authorization", "Bearer " + token},
          {"Accept", "application/vnd.github+json"},
          {"User-Agent", "inspectkit"}};
}

}  // namespace

LiveCodeHost::LiveCodeHost(ApiEndpoint endpoint)
    : endpoint_(std::move(endpoint)),
      http_(std::make_unique<HttpSession>(endpoint_.base_url, code_host_headers(endpoint_.token))) {}

LiveCodeHost::~LiveCodeHost() = default;

std::vector<PullRequestComment> LiveCodeHost::list_comments(const std::string& repo, int pr_number) {
  std::vector<PullRequestComment> out;
  auto fetch_pages = [&](const std::string& kind, bool review) {
    for (int page = 1;; ++page) {
      std::string path = "/repos/" + repo + "/" + kind + "/" + std::to_string(pr_number) +
                         "/comments?per_page=100&page=" + std::to_string(page);
      Response r = http_->request("GET", path);
      if (r.status == 404) throw NotFound("PR not found: " + repo + "#" + std::to_string(pr_number));
      if (r.status != 200) throw TransportError(kind + " comments: HTTP " + std::to_string(r.status));
      json list = parse_body(r, kind + " comments");
      if (!list.is_array()) throw ParseError(kind + " comments: expected an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const json& rec = list[i];
        try {
          PullRequestComment c;
          c.id = (review ? "review-" : "") + std::to_string(rec.at("id").get<long long>());
          c.body = rec.at("body").is_string() ? rec["body"].get<std::string>() : "";
          auto at = parse_iso8601(rec.at("created_at").get<std::string>());
          if (!at) throw ParseError("unparseable created_at");
          c.created_at = *at;
          if (rec.contains("user") && rec["user"].is_object()) c.author = rec["user"].value("login", "");
          if (review && rec.contains("path") && rec["path"].is_string()) {
            c.file_path = rec["path"].get<std::string>();
          }
          out.push_back(std::move(c));
        } catch (const json::exception& e) {
          throw ParseError(kind + " comments page " + std::to_string(page) + " record " +
                           std::to_string(i) + ": " + e.what());
        }
      }
      if (list.size() < 100) break;
    }
  };
  fetch_pages("issues", false);
  fetch_pages("pulls", true);
  std::stable_sort(out.begin(), out.end(), [](const PullRequestComment& a, const PullRequestComment& b) {
    return a.created_at < b.created_at;
  });
  return out;
}

std::string LiveCodeHost::post_comment(const std::string& repo, int pr_number,
                                       const std::string& body, Timestamp) {
  Response r = http_->request("POST",
                              "/repos/" + repo + "/issues/" + std::to_string(pr_number) + "/comments",
                              json{{"body", body}}.dump());
  if (r.status == 404) throw NotFound("PR not found: " + repo + "#" + std::to_string(pr_number));
  if (r.status != 201 && r.status != 200) {
    throw TransportError("post comment: HTTP " + std::to_string(r.status));
  }
  json doc = parse_body(r, "post comment");
  return std::to_string(doc.at("id").get<long long>());
}

// ---------------------------------------------------------------------------
// Git data store

LiveGitDataStore::LiveGitDataStore(ApiEndpoint endpoint, std::string repo)
    : endpoint_(std::move(endpoint)),
      repo_(std::move(repo)),
      http_(std::make_unique<HttpSession>(endpoint_.base_url, code_host_headers(endpoint_.token))) {}

LiveGitDataStore::~LiveGitDataStore() = default;

std::string LiveGitDataStore::repo_path(const std::string& rest) const {
  return "/repos/" + repo_ + "/git/" + rest;
}

std::optional<git::ObjectId> LiveGitDataStore::read_ref(const std::string& name) {
  if (name.rfind("refs/", 0) != 0) throw InvalidArgument("ref must start with refs/: " + name);
  Response r = http_->request("GET", repo_path("ref/" + name.substr(5)));
  if (r.status == 404) return std::nullopt;
  if (r.status != 200) throw TransportError("read ref: HTTP " + std::to_string(r.status));
  json doc = parse_body(r, "read ref");
  if (doc.is_array()) return std::nullopt;  // prefix match, no exact ref
  return sha_field(doc.at("object").at("sha"), "read ref");
}

git::Commit LiveGitDataStore::read_commit(const git::ObjectId& id) {
  Response r = http_->request("GET", repo_path("commits/" + id.hex()));
  if (r.status == 404) throw NotFound("unknown commit " + id.hex());
  if (r.status != 200) throw TransportError("read commit: HTTP " + std::to_string(r.status));
  json doc = parse_body(r, "read commit");
  try {
    git::Commit c;
    c.tree = sha_field(doc.at("tree").at("sha"), "commit tree");
    for (const auto& p : doc.at("parents")) c.parents.push_back(sha_field(p.at("sha"), "commit parent"));
    const json& a = doc.at("author");
    c.author = a.at("name").get<std::string>() + " <" + a.at("email").get<std::string>() + ">";
    auto when = parse_iso8601(a.at("date").get<std::string>());
    if (!when) throw ParseError("read commit: unparseable date");
    c.when = *when;
    c.message = doc.at("message").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("read commit: ") + e.what());
  }
}

git::ObjectId LiveGitDataStore::create_blob(std::string_view bytes) {
  git::ObjectId local = git::ObjectId::of(git::frame_object(git::ObjectType::kBlob, bytes));
  Response r = http_->request("POST", repo_path("blobs"),
                              json{{"content", base64_encode(bytes)}, {"encoding", "base64"}}.dump());
  if (r.status != 201 && r.status != 200) {
    throw TransportError("create blob: HTTP " + std::to_string(r.status));
  }
  git::ObjectId remote = sha_field(parse_body(r, "create blob").at("sha"), "create blob");
  if (remote != local) throw TransportError("create blob: server digest " + remote.hex() + " != " + local.hex());
  return remote;
}

git::ObjectId LiveGitDataStore::create_tree(const std::optional<git::ObjectId>& base_tree,
                                            const std::vector<git::TreeUpsert>& upserts) {
  json entries = json::array();
  for (const auto& u : upserts) {
    git::split_path(u.path);
    entries.push_back({{"path", u.path}, {"mode", "100644"}, {"type", "blob"}, {"sha", u.blob.hex()}});
  }
  json req = {{"tree", entries}};
  if (base_tree) req["base_tree"] = base_tree->hex();
  Response r = http_->request("POST", repo_path("trees"), req.dump());
  if (r.status == 422 || r.status == 404) throw InvalidArgument("create tree rejected: " + r.body);
  if (r.status != 201 && r.status != 200) {
    throw TransportError("create tree: HTTP " + std::to_string(r.status));
  }
  return sha_field(parse_body(r, "create tree").at("sha"), "create tree");
}

git::ObjectId LiveGitDataStore::create_commit(const git::Commit& commit) {
  std::string email;
  std::string name = split_author_name(commit.author, &email);
  json parents = json::array();
  for (const auto& p : commit.parents) parents.push_back(p.hex());
  json signature = {{"name", name}, {"email", email}, {"date", format_iso8601(commit.when)}};
  json req = {{"message", commit.message},
              {"tree", commit.tree.hex()},
              {"parents", parents},
              {"author", signature},
              {"committer", signature}};
  Response r = http_->request("POST", repo_path("commits"), req.dump());
  if (r.status == 422 || r.status == 404) throw InvalidArgument("create commit rejected: " + r.body);
  if (r.status != 201 && r.status != 200) {
    throw TransportError("create commit: HTTP " + std::to_string(r.status));
  }
  return sha_field(parse_body(r, "create commit").at("sha"), "create commit");
}

bool LiveGitDataStore::compare_and_swap_ref(const std::string& name,
                                            const std::optional<git::ObjectId>& expected,
                                            const git::ObjectId& desired) {
  if (name.rfind("refs/", 0) != 0) throw InvalidArgument("ref must start with refs/: " + name);
  Response r;
  if (!expected) {
    r = http_->request("POST", repo_path("refs"), json{{"ref", name}, {"sha", desired.hex()}}.dump());
  } else {
    r = http_->request("PATCH", repo_path("refs/" + name.substr(5)),
                       json{{"sha", desired.hex()}, {"force", false}}.dump());
  }
  if (r.status == 200 || r.status == 201) return true;
  if (r.status == 422 || r.status == 409) return false;
  throw TransportError("update ref: HTTP " + std::to_string(r.status));
}

std::string LiveGitDataStore::read_blob(const git::ObjectId& id) {
  Response r = http_->request("GET", repo_path("blobs/" + id.hex()));
  if (r.status == 404) throw NotFound("unknown blob " + id.hex());
  if (r.status != 200) throw TransportError("read blob: HTTP " + std::to_string(r.status));
  json doc = parse_body(r, "read blob");
  if (doc.value("encoding", "") != "base64") throw ParseError("read blob: unexpected encoding");
  return base64_decode(doc.at("content").get<std::string>());
}

std::vector<git::TreeEntry> LiveGitDataStore::read_tree(const git::ObjectId& id) {
  Response r = http_->request("GET", repo_path("trees/" + id.hex()));
  if (r.status == 404) throw NotFound("unknown tree " + id.hex());
  if (r.status != 200) throw TransportError("read tree: HTTP " + std::to_string(r.status));
  json doc = parse_body(r, "read tree");
  std::vector<git::TreeEntry> out;
  for (const auto& e : doc.at("tree")) {
    git::TreeEntry t;
    t.name = e.at("path").get<std::string>();
    t.mode = e.at("type").get<std::string>() == "tree" ? std::string(git::kModeTree) : std::string(git::kModeBlob);
    t.id = sha_field(e.at("sha"), "read tree");
    out.push_back(std::move(t));
  }
  git::sort_tree_entries(out);
  return out;
}

}  // namespace inspectkit
