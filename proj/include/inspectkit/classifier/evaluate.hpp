#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "inspectkit/classifier/model.hpp"

namespace inspectkit {

struct CategoryMetrics {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  /// Test documents carrying the category, pooled over folds.
  std::size_t support = 0;
  /// Unset when the category never occurs in a test fold.
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct EvaluationReport {
  std::array<CategoryMetrics, kCategoryCount> per_category;
  /// Mean F1 over categories with a defined F1; 0 if none is defined.
  double macro_f1 = 0;
  std::size_t defined_categories = 0;
  std::size_t folds = 0;
  std::size_t documents = 0;
};

inline constexpr std::uint64_t kDefaultEvaluationSeed = 42;

/// Assigns each example to one of `k` folds, stratified by its first label in
/// taxonomy order. Deterministic for a given seed.
std::vector<std::size_t> assign_folds(const std::vector<TrainingExample>& examples, std::size_t k,
                                      std::uint64_t seed = kDefaultEvaluationSeed);

/// k-fold cross-validation with TP/FP/FN pooled over folds.
/// Throws InvalidArgument("corpus too small") if k < 2 or fewer than k
/// labelled examples exist.
EvaluationReport evaluate(const std::vector<TrainingExample>& examples, std::size_t k,
                          std::uint64_t seed = kDefaultEvaluationSeed);

}  // namespace inspectkit
