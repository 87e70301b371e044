#include "inspectkit/classifier/evaluate.hpp"

#include <random>

#include "inspectkit/core/error.hpp"
#include "inspectkit/kernels/score_batch.hpp"

namespace inspectkit {

std::vector<std::size_t> assign_folds(const std::vector<TrainingExample>& examples, std::size_t k,
                                      std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kCategoryCount> strata;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].labels.empty()) continue;
    strata[index_of(examples[i].labels.to_vector().front())].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold(examples.size(), k);
  std::size_t next = 0;
  for (auto& stratum : strata) {
    for (std::size_t i = stratum.size(); i > 1; --i) {
      std::swap(stratum[i - 1], stratum[rng() % i]);
    }
    for (auto idx : stratum) fold[idx] = next++ % k;
  }
  return fold;
}

EvaluationReport evaluate(const std::vector<TrainingExample>& examples, std::size_t k,
                          std::uint64_t seed) {
  std::size_t labelled = 0;
  for (const auto& ex : examples) labelled += ex.labels.empty() ? 0 : 1;
  if (k < 2 || labelled < k) throw InvalidArgument("corpus too small");

  auto fold = assign_folds(examples, k, seed);
  EvaluationReport report;
  report.folds = k;
  report.documents = labelled;

  for (std::size_t f = 0; f < k; ++f) {
    std::vector<TrainingExample> train_set;
    std::vector<const TrainingExample*> test_set;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (fold[i] == k) continue;
      if (fold[i] == f) {
        test_set.push_back(&examples[i]);
      } else {
        train_set.push_back(examples[i]);
      }
    }
    if (test_set.empty() || train_set.empty()) continue;
    MultiLabelModel model = train(train_set, "eval");

    std::vector<EncodedDoc> docs;
    docs.reserve(test_set.size());
    for (const auto* ex : test_set) docs.push_back(model.encode(ex->tokens));
    auto scores = kernels::score_batch_parallel(model, docs);

    for (std::size_t d = 0; d < test_set.size(); ++d) {
      LabelSet predicted = model.decide(scores[d]);
      const LabelSet& truth = test_set[d]->labels;
      for (std::size_t c = 0; c < kCategoryCount; ++c) {
        bool p = predicted.contains(category_at(c));
        bool t = truth.contains(category_at(c));
        auto& m = report.per_category[c];
        if (t) ++m.support;
        if (p && t) ++m.true_positives;
        if (p && !t) ++m.false_positives;
        if (!p && t) ++m.false_negatives;
      }
    }
  }

  double sum = 0;
  for (auto& m : report.per_category) {
    if (m.support == 0) continue;
    double tp = static_cast<double>(m.true_positives);
    double predicted = tp + static_cast<double>(m.false_positives);
    m.precision = predicted > 0 ? tp / predicted : 0.0;
    m.recall = tp / static_cast<double>(m.support);
    m.f1 = 2 * tp / (2 * tp + static_cast<double>(m.false_positives + m.false_negatives));
    sum += *m.f1;
    ++report.defined_categories;
  }
  report.macro_f1 = report.defined_categories ? sum / report.defined_categories : 0.0;
  return report;
}

}  // namespace inspectkit
