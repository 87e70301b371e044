#include "inspectkit/bridge/publisher.hpp"

#include <random>
#include <thread>

#include "inspectkit/core/error.hpp"

namespace inspectkit {

PublishResult publish_image(git::ObjectStore& store, const std::string& ref_name,
                            const std::string& path, std::string_view bytes,
                            const std::string& message, Timestamp when,
                            const PublishPolicy& policy) {
  git::split_path(path);

  for (int attempt = 0; attempt <= policy.max_cas_retries; ++attempt) {
    if (attempt > 0 && policy.backoff) policy.backoff(attempt);

    std::optional<git::ObjectId> head = store.read_ref(ref_name);
    std::optional<git::ObjectId> base_tree;
    if (head) base_tree = store.read_commit(*head).tree;

    git::ObjectId blob = store.create_blob(bytes);
    git::ObjectId tree = store.create_tree(base_tree, {{path, blob}});

    git::Commit commit;
    commit.tree = tree;
    if (head) commit.parents.push_back(*head);
    commit.author = policy.author;
    commit.when = when;
    commit.message = message;
    git::ObjectId commit_id = store.create_commit(commit);

    if (store.compare_and_swap_ref(ref_name, head, commit_id)) {
      return {commit_id, blob, attempt + 1};
    }
  }
  throw Conflict("CAS exhausted after " + std::to_string(policy.max_cas_retries) +
                 " retries on " + ref_name);
}

std::function<void(int)> jittered_backoff(std::chrono::milliseconds base) {
  return [base](int retry) {
    thread_local std::mt19937 rng{std::random_device{}()};
    auto delay = base * (1 << (retry - 1));
    std::uniform_int_distribution<long long> jitter(0, delay.count() / 2);
    std::this_thread::sleep_for(delay + std::chrono::milliseconds(jitter(rng)));
  };
}

}  // namespace inspectkit
