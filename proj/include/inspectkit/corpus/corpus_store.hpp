#pragma once

#include <filesystem>
#include <string>
#include <type_traits>
#include <vector>

#include "inspectkit/corpus/corpus.hpp"

namespace inspectkit {

/// Exclusive advisory lock on a corpus directory, held for the object's
/// lifetime. Acquisition never blocks: a held lock raises Conflict.
class CorpusLock {
 public:
  explicit CorpusLock(const std::filesystem::path& dir);
  ~CorpusLock();
  CorpusLock(CorpusLock&& other) noexcept;
  CorpusLock& operator=(CorpusLock&&) = delete;
  CorpusLock(const CorpusLock&) = delete;
  CorpusLock& operator=(const CorpusLock&) = delete;

 private:
  int fd_ = -1;
};

/// On-disk corpus:
///
///   <dir>/comments.csv       canonical CSV, source of truth for comments
///   <dir>/assignments.jsonl  full label assignment log, one JSON per line
///   <dir>/threads.json       reply links {child id: parent id}
///
/// Writers must hold a CorpusLock while calling save().
class CorpusStore {
 public:
  explicit CorpusStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path csv_path() const { return dir_ / "comments.csv"; }
  std::filesystem::path assignments_path() const { return dir_ / "assignments.jsonl"; }
  std::filesystem::path threads_path() const { return dir_ / "threads.json"; }

  bool exists() const;

  /// Missing files load as an empty corpus. When a CSV label cell disagrees
  /// with the log's effective labels the CSV wins: an assignment carrying the
  /// cell's labels and labeler is appended and reported in `warnings`.
  Corpus load(std::vector<std::string>* warnings = nullptr) const;

  /// Atomically rewrites all three files. Creates the directory if needed.
  void save(const Corpus& corpus) const;

  CorpusLock lock() const;

  /// Locks, loads, applies `mutate`, saves. Returns whatever `mutate` returns.
  template <typename F>
  auto modify(F&& mutate) const {
    std::filesystem::create_directories(dir_);
    CorpusLock guard = lock();
    Corpus corpus = load();
    if constexpr (std::is_void_v<decltype(mutate(corpus))>) {
      mutate(corpus);
      save(corpus);
    } else {
      auto result = mutate(corpus);
      save(corpus);
      return result;
    }
  }

 private:
  std::filesystem::path dir_;
};

/// JSON line form of a label assignment; scores keyed by slug.
std::string assignment_to_json_line(const LabelAssignment& a);
LabelAssignment assignment_from_json_line(const std::string& line);

}  // namespace inspectkit
