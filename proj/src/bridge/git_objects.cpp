#include "inspectkit/bridge/git_objects.hpp"

#include <algorithm>
#include <charconv>

#include "inspectkit/core/error.hpp"

namespace inspectkit::git {

std::string_view to_string(ObjectType t) {
  switch (t) {
    case ObjectType::kBlob:
      return "blob";
    case ObjectType::kTree:
      return "tree";
    case ObjectType::kCommit:
      return "commit";
  }
  return "blob";
}

std::string frame_object(ObjectType type, std::string_view payload) {
  std::string out(to_string(type));
  out += ' ';
  out += std::to_string(payload.size());
  out += '\0';
  out += payload;
  return out;
}

RawObject unframe_object(std::string_view framed) {
  auto space = framed.find(' ');
  auto nul = framed.find('\0');
  if (space == std::string_view::npos || nul == std::string_view::npos || space > nul) {
    throw ParseError("malformed object header");
  }
  auto type_name = framed.substr(0, space);
  RawObject raw;
  if (type_name == "blob") {
    raw.type = ObjectType::kBlob;
  } else if (type_name == "tree") {
    raw.type = ObjectType::kTree;
  } else if (type_name == "commit") {
    raw.type = ObjectType::kCommit;
  } else {
    throw ParseError("unknown object type " + std::string(type_name));
  }
  std::size_t size = 0;
  auto digits = framed.substr(space + 1, nul - space - 1);
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), size);
  if (ec != std::errc() || p != digits.data() + digits.size() ||
      size != framed.size() - nul - 1) {
    throw ParseError("object size mismatch");
  }
  raw.payload = std::string(framed.substr(nul + 1));
  return raw;
}

void sort_tree_entries(std::vector<TreeEntry>& entries) {
  auto key = [](const TreeEntry& e) { return e.is_tree() ? e.name + '/' : e.name; };
  std::sort(entries.begin(), entries.end(),
            [&](const TreeEntry& a, const TreeEntry& b) { return key(a) < key(b); });
}

std::string encode_tree(std::vector<TreeEntry> entries) {
  sort_tree_entries(entries);
  std::string out;
  for (const auto& e : entries) {
    out += e.mode;
    out += ' ';
    out += e.name;
    out += '\0';
    out.append(reinterpret_cast<const char*>(e.id.bytes().data()), 20);
  }
  return out;
}

std::vector<TreeEntry> decode_tree(std::string_view payload) {
  std::vector<TreeEntry> entries;
  std::size_t pos = 0;
  while (pos < payload.size()) {
    auto space = payload.find(' ', pos);
    auto nul = payload.find('\0', pos);
    if (space == std::string_view::npos || nul == std::string_view::npos || space > nul ||
        nul + 21 > payload.size()) {
      throw ParseError("malformed tree entry");
    }
    TreeEntry e;
    e.mode = std::string(payload.substr(pos, space - pos));
    e.name = std::string(payload.substr(space + 1, nul - space - 1));
    std::array<std::uint8_t, 20> bytes;
    std::copy_n(reinterpret_cast<const std::uint8_t*>(payload.data() + nul + 1), 20, bytes.begin());
    e.id = ObjectId(bytes);
    entries.push_back(std::move(e));
    pos = nul + 21;
  }
  return entries;
}

std::string encode_commit(const Commit& c) {
  std::string out = "tree " + c.tree.hex() + "\n";
  for (const auto& p : c.parents) out += "parent " + p.hex() + "\n";
  auto epoch = std::to_string(c.when.time_since_epoch().count());
  out += "author " + c.author + " " + epoch + " +0000\n";
  out += "committer " + c.author + " " + epoch + " +0000\n";
  out += "\n";
  out += c.message;
  if (c.message.empty() || c.message.back() != '\n') out += '\n';
  return out;
}

Commit decode_commit(std::string_view payload) {
  Commit c;
  auto blank = payload.find("\n\n");
  if (blank == std::string_view::npos) throw ParseError("commit without message separator");
  auto headers = payload.substr(0, blank + 1);
  c.message = std::string(payload.substr(blank + 2));
  bool have_tree = false;
  std::size_t pos = 0;
  while (pos < headers.size()) {
    auto eol = headers.find('\n', pos);
    auto line = headers.substr(pos, eol - pos);
    pos = eol + 1;
    auto read_id = [&](std::string_view hex) {
      auto id = ObjectId::from_hex(hex);
      if (!id) throw ParseError("bad object id in commit");
      return *id;
    };
    if (line.rfind("tree ", 0) == 0) {
      c.tree = read_id(line.substr(5));
      have_tree = true;
    } else if (line.rfind("parent ", 0) == 0) {
      c.parents.push_back(read_id(line.substr(7)));
    } else if (line.rfind("author ", 0) == 0) {
      // author <ident> <epoch> <tz>
      auto rest = line.substr(7);
      auto tz = rest.rfind(' ');
      auto ep = rest.rfind(' ', tz - 1);
      if (tz == std::string_view::npos || ep == std::string_view::npos) {
        throw ParseError("malformed author line");
      }
      c.author = std::string(rest.substr(0, ep));
      long long secs = 0;
      auto digits = rest.substr(ep + 1, tz - ep - 1);
      std::from_chars(digits.data(), digits.data() + digits.size(), secs);
      c.when = Timestamp{std::chrono::seconds{secs}};
    }
  }
  if (!have_tree) throw ParseError("commit without tree");
  return c;
}

std::vector<std::string> split_path(std::string_view path) {
  if (path.empty()) throw InvalidArgument("path empty");
  if (path.front() == '/') throw InvalidArgument("path must be relative: " + std::string(path));
  if (path.find('\0') != std::string_view::npos) throw InvalidArgument("path contains NUL");
  std::vector<std::string> parts;
  std::size_t pos = 0;
  for (;;) {
    auto cut = path.find('/', pos);
    auto seg = path.substr(pos, cut == std::string_view::npos ? std::string_view::npos : cut - pos);
    if (seg.empty() || seg == "." || seg == "..") {
      throw InvalidArgument("invalid path segment in " + std::string(path));
    }
    parts.emplace_back(seg);
    if (cut == std::string_view::npos) break;
    pos = cut + 1;
  }
  return parts;
}

}  // namespace inspectkit::git
