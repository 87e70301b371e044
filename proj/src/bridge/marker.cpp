#include "inspectkit/bridge/marker.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "inspectkit/corpus/corpus_csv.hpp"

namespace inspectkit {

namespace {

constexpr std::string_view kOpen = "<!-- [marker] ";
constexpr std::string_view kClose = " -->";
// U+200B zero-width space, inserted after "scenecommenter" to defuse tokens
// that occur inside comment text.
constexpr std::string_view kDefusedToken = "scenecommenter\xE2\x80\x8B:figma-comment-id=";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string replace_all(std::string_view text, std::string_view from, std::string_view to) {
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    auto hit = text.find(from, pos);
    if (hit == std::string_view::npos) break;
    out.append(text.substr(pos, hit - pos));
    out.append(to);
    pos = hit + from.size();
  }
  out.append(text.substr(pos));
  return out;
}

std::vector<std::string_view> split_lines(std::string_view body) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  for (;;) {
    auto eol = body.find('\n', pos);
    lines.push_back(body.substr(pos, eol == std::string_view::npos ? eol : eol - pos));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return lines;
}

std::optional<std::string> remote_id_after_token(std::string_view line) {
  auto at = line.find(kMarkerToken);
  if (at == std::string_view::npos) return std::nullopt;
  auto rest = line.substr(at + kMarkerToken.size());
  auto end = rest.find_first_of(" \t\r");
  auto value = percent_decode(rest.substr(0, end));
  if (!value || value->empty()) return std::nullopt;
  return value;
}

}  // namespace

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                c == '-' || c == '.' || c == '_' || c == '~' || c == '/' || c == ':';
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

std::optional<std::string> percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
    if (ec != std::errc() || p != s.data() + i + 3) return std::nullopt;
    out += static_cast<char>(v);
    i += 2;
  }
  return out;
}

std::string encode_marker(const SyncMarker& m) {
  std::string out(kOpen);
  out += kMarkerToken;
  out += percent_encode(m.remote_id);
  out += " project=" + percent_encode(m.project_id);
  out += " frame=" + percent_encode(m.frame_id);
  out += " x=" + format_coordinate(m.x);
  out += " y=" + format_coordinate(m.y);
  out += " created_at=" + format_iso8601(m.created_at);
  out += " image=" + percent_encode(m.image_path);
  if (m.parent_remote_id) out += " parent=" + percent_encode(*m.parent_remote_id);
  out += kClose;
  return out;
}

std::optional<SyncMarker> decode_marker_line(std::string_view line) {
  line = trim(line);
  std::string prefix = std::string(kOpen) + std::string(kMarkerToken);
  if (line.rfind(prefix, 0) != 0 || line.size() < prefix.size() + kClose.size() ||
      line.substr(line.size() - kClose.size()) != kClose) {
    return std::nullopt;
  }
  auto inner = line.substr(prefix.size(), line.size() - prefix.size() - kClose.size());

  std::map<std::string, std::string, std::less<>> fields;
  bool first = true;
  while (!inner.empty()) {
    auto sp = inner.find(' ');
    auto item = inner.substr(0, sp);
    inner = sp == std::string_view::npos ? std::string_view{} : inner.substr(sp + 1);
    if (item.empty()) return std::nullopt;
    std::string key = "id";
    std::string_view value = item;
    if (!first) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos) return std::nullopt;
      key = std::string(item.substr(0, eq));
      value = item.substr(eq + 1);
    }
    first = false;
    auto decoded = percent_decode(value);
    if (!decoded || !fields.emplace(key, *decoded).second) return std::nullopt;
  }

  SyncMarker m;
  auto take = [&](const char* key) -> const std::string* {
    auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second;
  };
  const std::string *id = take("id"), *project = take("project"), *frame = take("frame"),
                    *x = take("x"), *y = take("y"), *created = take("created_at"),
                    *image = take("image");
  if (!id || id->empty() || !project || project->empty() || !frame || frame->empty() || !x ||
      !y || !created || !image) {
    return std::nullopt;
  }
  auto parse_num = [](const std::string& s, double& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
  };
  if (!parse_num(*x, m.x) || !parse_num(*y, m.y)) return std::nullopt;
  auto ts = parse_iso8601(*created);
  if (!ts) return std::nullopt;
  m.remote_id = *id;
  m.project_id = *project;
  m.frame_id = *frame;
  m.created_at = *ts;
  m.image_path = *image;
  if (const auto* parent = take("parent")) {
    if (parent->empty()) return std::nullopt;
    m.parent_remote_id = *parent;
  }
  return m;
}

MarkerScan scan_for_marker(std::string_view body) {
  MarkerScan scan;
  std::vector<std::string_view> marker_lines;
  for (auto line : split_lines(body)) {
    if (line.find(kMarkerToken) != std::string_view::npos) marker_lines.push_back(line);
  }
  if (marker_lines.empty()) return scan;
  scan.remote_id = remote_id_after_token(marker_lines.front());
  if (marker_lines.size() > 1) {
    scan.status = MarkerScan::Status::kMalformed;
    scan.problem = "multiple marker lines";
    return scan;
  }
  scan.marker = decode_marker_line(marker_lines.front());
  if (!scan.marker) {
    scan.status = MarkerScan::Status::kMalformed;
    scan.problem = "unparseable marker line";
    return scan;
  }
  scan.status = MarkerScan::Status::kValid;
  scan.remote_id = scan.marker->remote_id;
  return scan;
}

std::string compose_pr_comment(const RelayedComment& c) {
  std::string out;
  if (c.reply_to_label) out += "> reply to " + *c.reply_to_label + "\n\n";
  out += replace_all(c.body, kMarkerToken, kDefusedToken);
  out += "\n\n![pin " + std::to_string(c.index) + "](" + c.image_url + ")";
  out += "\n\n" + encode_marker(c.marker);
  return out;
}

std::optional<std::string> original_text_of(std::string_view posted, bool has_parent) {
  auto marker_at = posted.rfind(std::string("\n\n") + std::string(kOpen));
  if (marker_at == std::string_view::npos) return std::nullopt;
  auto head = posted.substr(0, marker_at);
  auto image_at = head.rfind("\n\n![pin ");
  if (image_at == std::string_view::npos || head.find('\n', image_at + 2) != std::string_view::npos) {
    return std::nullopt;
  }
  auto text = head.substr(0, image_at);
  if (has_parent) {
    if (text.rfind("> reply to ", 0) != 0) return std::nullopt;
    auto blank = text.find("\n\n");
    if (blank == std::string_view::npos) return std::nullopt;
    text = text.substr(blank + 2);
  }
  return replace_all(text, kDefusedToken, kMarkerToken);
}

}  // namespace inspectkit
