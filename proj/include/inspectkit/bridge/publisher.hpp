#pragma once

#include <functional>
#include <string>

#include "inspectkit/bridge/object_store.hpp"

namespace inspectkit {

inline constexpr const char* kDefaultImageRef = "refs/heads/inspection-images";
inline constexpr const char* kBridgeAuthor = "inspectkit-bridge <bridge@inspectkit.invalid>";

struct PublishPolicy {
  /// Retries after the first CAS failure.
  int max_cas_retries = 3;
  /// Called with the 1-based retry number before each retry. Empty means
  /// retry immediately.
  std::function<void(int)> backoff;
  std::string author = kBridgeAuthor;
};

struct PublishResult {
  git::ObjectId commit;
  git::ObjectId blob;
  int attempts = 1;
};

/// Stores `bytes` at `path` on `ref_name`: read ref, read head commit,
/// create blob, create tree (head tree with `path` upserted), create commit
/// with the old head as parent, compare-and-swap the ref. A missing ref is
/// created with a root commit. On CAS failure the whole sequence is re-run,
/// up to `policy.max_cas_retries` times, then Conflict is thrown.
/// Throws InvalidArgument for an empty or malformed path.
PublishResult publish_image(git::ObjectStore& store, const std::string& ref_name,
                            const std::string& path, std::string_view bytes,
                            const std::string& message, Timestamp when,
                            const PublishPolicy& policy = {});

/// Backoff sleeping base*2^(n-1) plus up to 50% random jitter.
std::function<void(int)> jittered_backoff(std::chrono::milliseconds base);

}  // namespace inspectkit
