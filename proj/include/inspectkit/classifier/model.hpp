#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "inspectkit/classifier/tokenizer.hpp"
#include "inspectkit/core/comment.hpp"
#include "inspectkit/core/labels.hpp"
#include "inspectkit/core/taxonomy.hpp"

namespace inspectkit {

class Corpus;

/// One-vs-rest binary sub-model for a single category.
struct BinaryModel {
  enum class Kind { kTrained, kAlwaysNegative, kAlwaysPositive };
  Kind kind = Kind::kAlwaysNegative;
  std::uint32_t positives = 0;
  std::uint32_t negatives = 0;
  double log_prior_pos = 0;
  double log_prior_neg = 0;
  /// Indexed by vocabulary id; empty unless kind == kTrained.
  std::vector<double> log_likelihood_pos;
  std::vector<double> log_likelihood_neg;

  friend bool operator==(const BinaryModel&, const BinaryModel&) = default;
};

/// Token ids with counts; tokens outside the vocabulary are dropped.
struct EncodedDoc {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;
};

struct MultiLabelModel {
  static constexpr int kFormatVersion = 1;

  std::string version;
  double alpha = 1.0;
  double threshold = 0.5;
  /// Sorted; a token's id is its position.
  std::vector<std::string> vocabulary;
  std::array<BinaryModel, kCategoryCount> per_category;

  std::optional<std::uint32_t> token_id(std::string_view token) const;
  EncodedDoc encode(const TokenVector& tokens) const;
  CategoryScores score(const EncodedDoc& doc) const;
  CategoryScores score(const TokenVector& tokens) const { return score(encode(tokens)); }

  /// Labels at or above threshold; if none, the best-scoring category that
  /// has training positives, ties going to the earlier taxonomy row.
  LabelSet decide(const CategoryScores& scores) const;

  /// Parameter equality (ignores the lookup index).
  bool same_parameters(const MultiLabelModel& o) const;

  void rebuild_index();

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct TrainingExample {
  TokenVector tokens;
  LabelSet labels;
};

/// Throws InvalidArgument("empty corpus") when `examples` is empty or no
/// example carries a label.
MultiLabelModel train(const std::vector<TrainingExample>& examples, std::string version);

/// Trains on every comment whose effective labels come from a human or the
/// rule baseline. Model-produced labels are never fed back.
MultiLabelModel train(const Corpus& corpus, std::string version);

std::vector<TrainingExample> training_examples(const Corpus& corpus);

/// Throws InvalidArgument("empty text") for a blank body.
LabelAssignment predict(const MultiLabelModel& model, const InspectionComment& comment,
                        Timestamp at = now_utc());

std::string model_to_json(const MultiLabelModel& model);
/// Throws ParseError for malformed or non-finite content.
MultiLabelModel model_from_json(std::string_view text);
void save_model(const MultiLabelModel& model, const std::filesystem::path& path);
/// Throws NotFound("no model") when the file does not exist.
MultiLabelModel load_model(const std::filesystem::path& path);

/// Numerically stable logistic function.
double sigmoid(double z);

}  // namespace inspectkit
