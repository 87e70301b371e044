#include "inspectkit/bridge/sync.hpp"

#include <set>
#include <unordered_map>

#include "inspectkit/bridge/marker.hpp"
#include "inspectkit/core/error.hpp"
#include "inspectkit/kernels/pin_batch.hpp"

namespace inspectkit {

namespace {

std::set<std::string> marked_remote_ids(const std::vector<PullRequestComment>& comments) {
  std::set<std::string> ids;
  for (const auto& c : comments) {
    auto scan = scan_for_marker(c.body);
    if (scan.remote_id) ids.insert(*scan.remote_id);
  }
  return ids;
}

std::string strip_marker_line(std::string_view body) {
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    auto eol = body.find('\n', pos);
    auto line = body.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    if (line.find(kMarkerToken) == std::string_view::npos) {
      if (!out.empty()) out += '\n';
      out += line;
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
  return out;
}

}  // namespace

std::string design_comment_id(std::string_view project_id, std::string_view remote_id) {
  return "fig-" + sanitize_id_part(project_id) + "-" + sanitize_id_part(remote_id);
}

std::string code_host_comment_id(std::string_view repo, int pr_number,
                                 std::string_view comment_id) {
  return "gh-" + sanitize_id_part(repo) + "-" + std::to_string(pr_number) + "-" +
         sanitize_id_part(comment_id);
}

std::string image_path_for(const SyncOptions& options, int pr_number, std::string_view remote_id) {
  std::string path = options.image_dir;
  if (!path.empty() && path.back() != '/') path += '/';
  return path + "pr" + std::to_string(pr_number) + "/" + sanitize_id_part(remote_id) + ".png";
}

SyncReport sync(const std::string& project_id, const std::string& repo, int pr_number,
                DesignToolTransport& design, CodeHostTransport& code_host,
                git::ObjectStore& store, const SyncOptions& options) {
  SyncReport report;
  DesignFetchResult fetched = design.fetch_comments(project_id);
  report.fetched = fetched.comments.size() + fetched.failures.size();
  report.failures = fetched.failures;

  std::set<std::string> already = marked_remote_ids(code_host.list_comments(repo, pr_number));

  std::unordered_map<std::string, int> index_of;
  for (std::size_t i = 0; i < fetched.comments.size(); ++i) {
    index_of.emplace(fetched.comments[i].remote_id, static_cast<int>(i) + 1);
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < fetched.comments.size(); ++i) {
    if (already.count(fetched.comments[i].remote_id)) {
      ++report.skipped_duplicates;
    } else {
      pending.push_back(i);
    }
  }

  std::vector<kernels::PinJob> jobs;
  jobs.reserve(pending.size());
  for (auto i : pending) {
    const auto& c = fetched.comments[i];
    jobs.push_back({&c.frame_image, c.x, c.y, static_cast<int>(i) + 1});
  }
  auto rendered = options.parallel_render ? kernels::render_pins_parallel(jobs)
                                          : kernels::render_pins_serial(jobs);

  struct Ready {
    std::size_t comment;
    std::string image_path;
  };
  std::vector<Ready> ready;
  for (std::size_t k = 0; k < pending.size(); ++k) {
    const auto& c = fetched.comments[pending[k]];
    std::string path = image_path_for(options, pr_number, c.remote_id);
    try {
      publish_image(store, options.image_ref, path, rendered[k].png,
                    "Add pin image for design comment " + c.remote_id, c.created_at,
                    options.publish);
      ++report.published_images;
      ready.push_back({pending[k], path});
    } catch (const Error& e) {
      report.failures.push_back({c.remote_id, std::string("publish failed: ") + e.what()});
    }
  }

  // Another sync of the same pair may have posted while images were being
  // published.
  if (!ready.empty()) already = marked_remote_ids(code_host.list_comments(repo, pr_number));

  for (const auto& r : ready) {
    const auto& c = fetched.comments[r.comment];
    if (already.count(c.remote_id)) {
      ++report.skipped_duplicates;
      continue;
    }
    RelayedComment relay;
    relay.body = c.body;
    relay.index = static_cast<int>(r.comment) + 1;
    relay.image_url = options.image_url_base + r.image_path;
    if (c.parent_remote_id) {
      auto p = index_of.find(*c.parent_remote_id);
      relay.reply_to_label =
          p != index_of.end() ? "#" + std::to_string(p->second) : *c.parent_remote_id;
    }
    relay.marker = {c.remote_id, project_id,   c.frame_id,          c.x,
                    c.y,         c.created_at, r.image_path,        c.parent_remote_id};
    try {
      code_host.post_comment(repo, pr_number, compose_pr_comment(relay), c.created_at);
      ++report.posted_comments;
      already.insert(c.remote_id);
    } catch (const Error& e) {
      report.failures.push_back({c.remote_id, std::string("post failed: ") + e.what()});
    }
  }
  return report;
}

CodeHostFetch fetch_code_host_comments(const std::string& repo, int pr_number,
                                       CodeHostTransport& transport,
                                       const CollectOptions& options) {
  CodeHostFetch out;
  std::set<std::string> design_ids;
  std::vector<std::pair<std::size_t, std::string>> parent_refs;

  for (const auto& pc : transport.list_comments(repo, pr_number)) {
    InspectionComment c;
    c.author_role = options.author_role;
    c.group = options.group;

    auto scan = scan_for_marker(pc.body);
    if (scan.status == MarkerScan::Status::kValid) {
      const SyncMarker& m = *scan.marker;
      c.id = design_comment_id(m.project_id, m.remote_id);
      if (!design_ids.insert(c.id).second) {
        out.warnings.push_back("comment " + pc.id + ": duplicate relay of design comment " +
                               m.remote_id + "; ignored");
        continue;
      }
      auto text = original_text_of(pc.body, m.parent_remote_id.has_value());
      if (!text) {
        out.warnings.push_back("comment " + pc.id + ": relay layout was edited; using raw text");
        text = strip_marker_line(pc.body);
      }
      c.source = CommentSource::kDesignTool;
      c.artifact = ArtifactKind::kScreenTransition;
      c.body = *text;
      c.created_at = m.created_at;
      c.location = DesignLocation{m.project_id, m.frame_id, m.x, m.y};
      if (m.parent_remote_id) {
        parent_refs.emplace_back(out.comments.size(),
                                 design_comment_id(m.project_id, *m.parent_remote_id));
      }
      out.provenance[c.id] = Provenance{repo, pr_number, m.image_path};
    } else {
      if (scan.status == MarkerScan::Status::kMalformed) {
        out.warnings.push_back("comment " + pc.id + ": malformed marker (" + scan.problem +
                               "); kept as code-host comment");
      }
      c.id = code_host_comment_id(repo, pr_number, pc.id);
      c.source = CommentSource::kCodeHost;
      c.artifact = artifact_from_path(pc.file_path.value_or(""));
      c.body = pc.body;
      c.created_at = pc.created_at;
      c.location = CodeHostLocation{repo, pr_number, pc.file_path};
    }
    if (!has_visible_text(c.body)) {
      out.warnings.push_back("comment " + pc.id + ": empty body; skipped");
      out.provenance.erase(c.id);
      continue;
    }
    c.year = options.year.value_or(utc_year(c.created_at));
    out.comments.push_back(std::move(c));
  }

  for (const auto& [idx, parent] : parent_refs) {
    if (design_ids.count(parent)) {
      out.comments[idx].parent_id = parent;
    } else {
      out.warnings.push_back("comment " + out.comments[idx].id + ": parent " + parent +
                             " is not in the PR; reply link dropped");
    }
  }
  return out;
}

}  // namespace inspectkit
