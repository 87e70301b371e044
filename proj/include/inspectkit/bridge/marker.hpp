#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inspectkit/core/timestamp.hpp"

namespace inspectkit {

/// Text every idempotency marker line contains.
inline constexpr std::string_view kMarkerToken = "scenecommenter:figma-comment-id=";

/// Data carried by the hidden marker line of a relayed design comment. The
/// line is an HTML comment, invisible in rendered Markdown:
///
///   <!-- [marker] scenecommenter:figma-comment-id=<id> project=<p> frame=<f>
///        x=<x> y=<y> created_at=<iso> image=<path> [parent=<id>] -->
///
/// (on one line). Values are percent-encoded.
struct SyncMarker {
  std::string remote_id;
  std::string project_id;
  std::string frame_id;
  double x = 0;
  double y = 0;
  Timestamp created_at{};
  std::string image_path;
  std::optional<std::string> parent_remote_id;

  friend bool operator==(const SyncMarker&, const SyncMarker&) = default;
};

std::string encode_marker(const SyncMarker& m);
/// Parses one marker line (surrounding whitespace allowed).
std::optional<SyncMarker> decode_marker_line(std::string_view line);

struct MarkerScan {
  enum class Status { kNone, kValid, kMalformed };
  Status status = Status::kNone;
  std::optional<SyncMarker> marker;
  /// Remote id recovered even from a malformed marker, when readable.
  std::optional<std::string> remote_id;
  std::string problem;
};

/// Looks for marker lines in a PR comment body. More than one marker line
/// is reported as malformed.
MarkerScan scan_for_marker(std::string_view body);

struct RelayedComment {
  std::string body;
  /// Shown as "> reply to <label>" above the text, e.g. "#2".
  std::optional<std::string> reply_to_label;
  int index = 1;
  std::string image_url;
  SyncMarker marker;
};

/// Body posted to the PR: optional reply line, the original text, the pin
/// image reference and the marker line. Any marker token inside the original
/// text is defused so the result always holds exactly one marker.
std::string compose_pr_comment(const RelayedComment& c);

/// Inverse of compose_pr_comment for the text part. Returns nullopt when
/// the body does not have the composed shape.
std::optional<std::string> original_text_of(std::string_view posted_body, bool has_parent);

std::string percent_encode(std::string_view s);
std::optional<std::string> percent_decode(std::string_view s);

}  // namespace inspectkit
