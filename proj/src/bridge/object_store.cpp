#include "inspectkit/bridge/object_store.hpp"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "inspectkit/core/error.hpp"

namespace inspectkit::git {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// LocalObjectStore

bool LocalObjectStore::contains(const ObjectId& id) { return get_raw(id).has_value(); }

RawObject LocalObjectStore::load(const ObjectId& id, ObjectType expected) {
  auto framed = get_raw(id);
  if (!framed) throw NotFound("object " + id.hex() + " not found");
  auto raw = unframe_object(*framed);
  if (raw.type != expected) {
    throw InvalidArgument("object " + id.hex() + " is a " + std::string(to_string(raw.type)) +
                          ", expected " + std::string(to_string(expected)));
  }
  return raw;
}

ObjectId LocalObjectStore::store(ObjectType type, std::string_view payload) {
  std::string framed = frame_object(type, payload);
  ObjectId id = ObjectId::of(framed);
  if (!contains(id)) put_raw(id, framed);
  return id;
}

Commit LocalObjectStore::read_commit(const ObjectId& id) {
  return decode_commit(load(id, ObjectType::kCommit).payload);
}

ObjectId LocalObjectStore::create_blob(std::string_view bytes) {
  return store(ObjectType::kBlob, bytes);
}

std::string LocalObjectStore::read_blob(const ObjectId& id) {
  return load(id, ObjectType::kBlob).payload;
}

std::vector<TreeEntry> LocalObjectStore::read_tree(const ObjectId& id) {
  return decode_tree(load(id, ObjectType::kTree).payload);
}

ObjectId LocalObjectStore::write_subtree(
    const std::optional<ObjectId>& base,
    const std::vector<std::pair<std::vector<std::string>, ObjectId>>& files, std::size_t depth) {
  std::map<std::string, TreeEntry> entries;
  if (base) {
    for (auto& e : read_tree(*base)) entries[e.name] = std::move(e);
  }

  std::map<std::string, std::vector<std::pair<std::vector<std::string>, ObjectId>>> nested;
  for (const auto& [segments, blob] : files) {
    const std::string& name = segments[depth];
    if (depth + 1 == segments.size()) {
      entries[name] = TreeEntry{name, std::string(kModeBlob), blob};
      nested.erase(name);
    } else {
      nested[name].emplace_back(segments, blob);
    }
  }
  for (const auto& [name, sub_files] : nested) {
    std::optional<ObjectId> sub_base;
    if (auto it = entries.find(name); it != entries.end() && it->second.is_tree()) {
      sub_base = it->second.id;
    }
    ObjectId sub = write_subtree(sub_base, sub_files, depth + 1);
    entries[name] = TreeEntry{name, std::string(kModeTree), sub};
  }

  std::vector<TreeEntry> list;
  list.reserve(entries.size());
  for (auto& [name, e] : entries) list.push_back(std::move(e));
  return store(ObjectType::kTree, encode_tree(std::move(list)));
}

ObjectId LocalObjectStore::create_tree(const std::optional<ObjectId>& base_tree,
                                       const std::vector<TreeUpsert>& upserts) {
  if (base_tree) load(*base_tree, ObjectType::kTree);
  std::vector<std::pair<std::vector<std::string>, ObjectId>> files;
  for (const auto& u : upserts) {
    auto segments = split_path(u.path);
    if (!contains(u.blob)) throw InvalidArgument("tree references unknown blob " + u.blob.hex());
    files.emplace_back(std::move(segments), u.blob);
  }
  return write_subtree(base_tree, files, 0);
}

ObjectId LocalObjectStore::create_commit(const Commit& commit) {
  auto tree = get_raw(commit.tree);
  if (!tree || unframe_object(*tree).type != ObjectType::kTree) {
    throw InvalidArgument("commit references unknown tree " + commit.tree.hex());
  }
  for (const auto& p : commit.parents) {
    auto parent = get_raw(p);
    if (!parent || unframe_object(*parent).type != ObjectType::kCommit) {
      throw InvalidArgument("commit references unknown parent " + p.hex());
    }
  }
  return store(ObjectType::kCommit, encode_commit(commit));
}

// ---------------------------------------------------------------------------
// MemoryObjectStore

std::optional<ObjectId> MemoryObjectStore::read_ref(const std::string& name) {
  std::lock_guard lock(mu_);
  auto it = refs_.find(name);
  if (it == refs_.end()) return std::nullopt;
  return it->second;
}

bool MemoryObjectStore::compare_and_swap_ref(const std::string& name,
                                             const std::optional<ObjectId>& expected,
                                             const ObjectId& desired) {
  std::function<void()> action;
  {
    std::lock_guard lock(mu_);
    if (!running_injection_ && !injections_.empty()) {
      action = std::move(injections_.front());
      injections_.pop_front();
      running_injection_ = true;
    }
  }
  if (action) {
    struct Reset {
      MemoryObjectStore* self;
      ~Reset() {
        std::lock_guard lock(self->mu_);
        self->running_injection_ = false;
      }
    } reset{this};
    action();
  }

  std::lock_guard lock(mu_);
  if (!get_raw_locked_commit(desired)) {
    throw InvalidArgument("ref target " + desired.hex() + " is not a commit");
  }
  auto it = refs_.find(name);
  std::optional<ObjectId> current;
  if (it != refs_.end()) current = it->second;
  if (current != expected) return false;
  refs_[name] = desired;
  return true;
}

bool MemoryObjectStore::get_raw_locked_commit(const ObjectId& id) const {
  auto it = objects_.find(id.hex());
  return it != objects_.end() && it->second.rfind("commit ", 0) == 0;
}

std::optional<std::string> MemoryObjectStore::get_raw(const ObjectId& id) {
  std::lock_guard lock(mu_);
  auto it = objects_.find(id.hex());
  if (it == objects_.end()) return std::nullopt;
  return it->second;
}

void MemoryObjectStore::put_raw(const ObjectId& id, const std::string& framed) {
  std::lock_guard lock(mu_);
  objects_.emplace(id.hex(), framed);
}

void MemoryObjectStore::inject_before_cas(std::function<void()> action) {
  std::lock_guard lock(mu_);
  injections_.push_back(std::move(action));
}

std::size_t MemoryObjectStore::pending_injections() const {
  std::lock_guard lock(mu_);
  return injections_.size();
}

std::size_t MemoryObjectStore::object_count() const {
  std::lock_guard lock(mu_);
  return objects_.size();
}

std::map<std::string, ObjectId> MemoryObjectStore::refs() const {
  std::lock_guard lock(mu_);
  return refs_;
}

// ---------------------------------------------------------------------------
// LooseObjectStore

namespace {

std::string deflate_bytes(const std::string& in) {
  uLongf bound = compressBound(static_cast<uLong>(in.size()));
  std::string out(bound, '\0');
  if (compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                reinterpret_cast<const Bytef*>(in.data()), static_cast<uLong>(in.size()),
                Z_DEFAULT_COMPRESSION) != Z_OK) {
    throw Error("zlib compression failed");
  }
  out.resize(bound);
  return out;
}

std::string inflate_bytes(const std::string& in) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw Error("zlib init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  std::string out;
  char chunk[16384];
  int rc;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(chunk);
    zs.avail_out = sizeof chunk;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw ParseError("corrupt loose object");
    }
    out.append(chunk, sizeof chunk - zs.avail_out);
  } while (rc != Z_STREAM_END);
  inflateEnd(&zs);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw TransportError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_new_file(const fs::path& p, const std::string& content) {
  fs::path tmp = p;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw TransportError("cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

}  // namespace

LooseObjectStore::LooseObjectStore(fs::path git_dir) : git_dir_(std::move(git_dir)) {
  fs::create_directories(git_dir_ / "objects");
  fs::create_directories(git_dir_ / "refs" / "heads");
  if (!fs::exists(git_dir_ / "HEAD")) write_new_file(git_dir_ / "HEAD", "ref: refs/heads/main\n");
}

fs::path LooseObjectStore::object_path(const ObjectId& id) const {
  auto hex = id.hex();
  return git_dir_ / "objects" / hex.substr(0, 2) / hex.substr(2);
}

fs::path LooseObjectStore::ref_path(const std::string& name) const {
  if (name.rfind("refs/", 0) != 0) throw InvalidArgument("ref name must start with refs/: " + name);
  split_path(name);
  return git_dir_ / name;
}

std::optional<std::string> LooseObjectStore::get_raw(const ObjectId& id) {
  auto p = object_path(id);
  if (!fs::exists(p)) return std::nullopt;
  return inflate_bytes(slurp(p));
}

void LooseObjectStore::put_raw(const ObjectId& id, const std::string& framed) {
  auto p = object_path(id);
  if (fs::exists(p)) return;
  fs::create_directories(p.parent_path());
  write_new_file(p, deflate_bytes(framed));
}

std::optional<ObjectId> LooseObjectStore::read_ref(const std::string& name) {
  auto p = ref_path(name);
  if (!fs::exists(p)) return std::nullopt;
  auto text = slurp(p);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  auto id = ObjectId::from_hex(text);
  if (!id) throw ParseError("corrupt ref " + name);
  return id;
}

bool LooseObjectStore::compare_and_swap_ref(const std::string& name,
                                            const std::optional<ObjectId>& expected,
                                            const ObjectId& desired) {
  auto p = ref_path(name);
  auto commit = get_raw(desired);
  if (!commit || unframe_object(*commit).type != ObjectType::kCommit) {
    throw InvalidArgument("ref target " + desired.hex() + " is not a commit");
  }
  fs::create_directories(p.parent_path());
  fs::path lock_path = p;
  lock_path += ".lock";
  int fd = ::open(lock_path.c_str(), O_CREAT | O_EXCL | O_WRONLY | O_CLOEXEC, 0644);
  if (fd < 0) return false;  // another writer is mid-update

  bool swapped = false;
  try {
    if (read_ref(name) == expected) {
      std::string line = desired.hex() + "\n";
      if (::write(fd, line.data(), line.size()) != static_cast<ssize_t>(line.size())) {
        throw TransportError("cannot write " + lock_path.string());
      }
      ::close(fd);
      fd = -1;
      fs::rename(lock_path, p);
      swapped = true;
    }
  } catch (...) {
    if (fd >= 0) ::close(fd);
    std::error_code ec;
    fs::remove(lock_path, ec);
    throw;
  }
  if (fd >= 0) {
    ::close(fd);
    std::error_code ec;
    fs::remove(lock_path, ec);
  }
  return swapped;
}

// ---------------------------------------------------------------------------

std::vector<ObjectId> first_parent_history(ObjectStore& store, const ObjectId& head) {
  std::vector<ObjectId> out;
  std::optional<ObjectId> cur = head;
  while (cur) {
    out.push_back(*cur);
    auto c = store.read_commit(*cur);
    cur = c.parents.empty() ? std::nullopt : std::optional<ObjectId>(c.parents.front());
  }
  return out;
}

std::optional<ObjectId> lookup_path(ObjectStore& store, const ObjectId& tree,
                                    std::string_view path) {
  auto segments = split_path(path);
  ObjectId cur = tree;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto entries = store.read_tree(cur);
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const TreeEntry& e) { return e.name == segments[i]; });
    if (it == entries.end()) return std::nullopt;
    bool last = i + 1 == segments.size();
    if (last != !it->is_tree()) return std::nullopt;
    cur = it->id;
  }
  return cur;
}

}  // namespace inspectkit::git
