#include "inspectkit/classifier/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "inspectkit/core/error.hpp"
#include "inspectkit/corpus/corpus.hpp"

namespace inspectkit {

using nlohmann::json;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

std::optional<std::uint32_t> MultiLabelModel::token_id(std::string_view token) const {
  if (index_.size() != vocabulary.size()) {
    auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), token);
    if (it == vocabulary.end() || *it != token) return std::nullopt;
    return static_cast<std::uint32_t>(it - vocabulary.begin());
  }
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void MultiLabelModel::rebuild_index() {
  index_.clear();
  index_.reserve(vocabulary.size());
  for (std::uint32_t i = 0; i < vocabulary.size(); ++i) index_.emplace(vocabulary[i], i);
}

EncodedDoc MultiLabelModel::encode(const TokenVector& tokens) const {
  EncodedDoc doc;
  for (const auto& [token, count] : tokens) {
    if (auto id = token_id(token)) doc.terms.emplace_back(*id, count);
  }
  return doc;
}

CategoryScores MultiLabelModel::score(const EncodedDoc& doc) const {
  CategoryScores out{};
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    const BinaryModel& m = per_category[c];
    switch (m.kind) {
      case BinaryModel::Kind::kAlwaysNegative:
        out[c] = 0.0;
        break;
      case BinaryModel::Kind::kAlwaysPositive:
        out[c] = 1.0;
        break;
      case BinaryModel::Kind::kTrained: {
        double z = m.log_prior_pos - m.log_prior_neg;
        for (auto [id, count] : doc.terms) {
          z += count * (m.log_likelihood_pos[id] - m.log_likelihood_neg[id]);
        }
        out[c] = sigmoid(z);
        break;
      }
    }
  }
  return out;
}

LabelSet MultiLabelModel::decide(const CategoryScores& scores) const {
  LabelSet labels;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    if (scores[c] >= threshold) labels.insert(category_at(c));
  }
  if (!labels.empty()) return labels;
  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    if (per_category[c].kind == BinaryModel::Kind::kAlwaysNegative) continue;
    if (!best || scores[c] > scores[*best]) best = c;
  }
  labels.insert(category_at(best.value_or(0)));
  return labels;
}

bool MultiLabelModel::same_parameters(const MultiLabelModel& o) const {
  return version == o.version && alpha == o.alpha && threshold == o.threshold &&
         vocabulary == o.vocabulary && per_category == o.per_category;
}

MultiLabelModel train(const std::vector<TrainingExample>& examples, std::string version) {
  std::size_t labelled = 0;
  std::set<std::string_view> vocab_set;
  for (const auto& ex : examples) {
    if (ex.labels.empty()) continue;
    ++labelled;
    for (const auto& [token, count] : ex.tokens) vocab_set.insert(token);
  }
  if (labelled == 0) throw InvalidArgument("empty corpus");

  MultiLabelModel model;
  model.version = std::move(version);
  model.vocabulary.assign(vocab_set.begin(), vocab_set.end());
  model.rebuild_index();
  const std::size_t v = model.vocabulary.size();

  // Integer counts first so the result does not depend on example order.
  struct Counts {
    std::uint32_t docs = 0;
    std::uint64_t total = 0;
    std::vector<std::uint64_t> per_token;
  };
  std::array<Counts, kCategoryCount> pos, neg;
  for (auto& c : pos) c.per_token.assign(v, 0);
  for (auto& c : neg) c.per_token.assign(v, 0);

  for (const auto& ex : examples) {
    if (ex.labels.empty()) continue;
    EncodedDoc doc = model.encode(ex.tokens);
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      Counts& side = ex.labels.contains(category_at(c)) ? pos[c] : neg[c];
      ++side.docs;
      for (auto [id, count] : doc.terms) {
        side.per_token[id] += count;
        side.total += count;
      }
    }
  }

  const double alpha = model.alpha;
  const double n = static_cast<double>(labelled);
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    BinaryModel& m = model.per_category[c];
    m.positives = pos[c].docs;
    m.negatives = neg[c].docs;
    if (m.positives == 0) {
      m.kind = BinaryModel::Kind::kAlwaysNegative;
      continue;
    }
    if (m.negatives == 0) {
      m.kind = BinaryModel::Kind::kAlwaysPositive;
      continue;
    }
    m.kind = BinaryModel::Kind::kTrained;
    m.log_prior_pos = std::log(m.positives / n);
    m.log_prior_neg = std::log(m.negatives / n);
    const double denom_pos = static_cast<double>(pos[c].total) + alpha * static_cast<double>(v);
    const double denom_neg = static_cast<double>(neg[c].total) + alpha * static_cast<double>(v);
    m.log_likelihood_pos.resize(v);
    m.log_likelihood_neg.resize(v);
    for (std::size_t t = 0; t < v; ++t) {
      m.log_likelihood_pos[t] = std::log((static_cast<double>(pos[c].per_token[t]) + alpha) / denom_pos);
      m.log_likelihood_neg[t] = std::log((static_cast<double>(neg[c].per_token[t]) + alpha) / denom_neg);
    }
  }
  return model;
}

std::vector<TrainingExample> training_examples(const Corpus& corpus) {
  std::vector<TrainingExample> out;
  for (const auto& [id, comment] : corpus.comments()) {
    const LabelAssignment* a = corpus.effective_assignment(id);
    if (!a || a->labeler.kind == Labeler::Kind::kModel) continue;
    if (!has_visible_text(comment.body)) continue;
    out.push_back({tokenize(comment.body), a->labels});
  }
  return out;
}

MultiLabelModel train(const Corpus& corpus, std::string version) {
  return train(training_examples(corpus), std::move(version));
}

LabelAssignment predict(const MultiLabelModel& model, const InspectionComment& comment,
                        Timestamp at) {
  CategoryScores scores = model.score(tokenize(comment.body));
  return {comment.id, model.decide(scores), Labeler::model(model.version), scores, at};
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string_view kind_name(BinaryModel::Kind k) {
  switch (k) {
    case BinaryModel::Kind::kTrained:
      return "trained";
    case BinaryModel::Kind::kAlwaysNegative:
      return "always-negative";
    case BinaryModel::Kind::kAlwaysPositive:
      return "always-positive";
  }
  return "trained";
}

BinaryModel::Kind parse_kind(const std::string& s) {
  if (s == "trained") return BinaryModel::Kind::kTrained;
  if (s == "always-negative") return BinaryModel::Kind::kAlwaysNegative;
  if (s == "always-positive") return BinaryModel::Kind::kAlwaysPositive;
  throw ParseError("unknown sub-model kind: " + s);
}

double finite(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string("model: ") + what + " is not a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(std::string("model: ") + what + " is not finite");
  return d;
}

}  // namespace

std::string model_to_json(const MultiLabelModel& model) {
  json cats = json::array();
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    const BinaryModel& m = model.per_category[c];
    cats.push_back({{"slug", slug(category_at(c))},
                    {"kind", kind_name(m.kind)},
                    {"positives", m.positives},
                    {"negatives", m.negatives},
                    {"log_prior_pos", m.log_prior_pos},
                    {"log_prior_neg", m.log_prior_neg},
                    {"log_likelihood_pos", m.log_likelihood_pos},
                    {"log_likelihood_neg", m.log_likelihood_neg}});
  }
  json doc = {{"format", "inspectkit-naive-bayes"},
              {"format_version", MultiLabelModel::kFormatVersion},
              {"version", model.version},
              {"alpha", model.alpha},
              {"threshold", model.threshold},
              {"vocabulary", model.vocabulary},
              {"categories", cats}};
  return doc.dump() + "\n";
}

MultiLabelModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "inspectkit-naive-bayes") throw ParseError("model: unknown format");
    if (doc.at("format_version").get<int>() != MultiLabelModel::kFormatVersion) {
      throw ParseError("model: unsupported format_version");
    }
    MultiLabelModel model;
    model.version = doc.at("version").get<std::string>();
    model.alpha = finite(doc.at("alpha"), "alpha");
    model.threshold = finite(doc.at("threshold"), "threshold");
    if (model.threshold < 0 || model.threshold > 1) throw ParseError("model: threshold outside [0,1]");
    model.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
    if (!std::is_sorted(model.vocabulary.begin(), model.vocabulary.end()) ||
        std::adjacent_find(model.vocabulary.begin(), model.vocabulary.end()) != model.vocabulary.end()) {
      throw ParseError("model: vocabulary must be sorted and unique");
    }
    const json& cats = doc.at("categories");
    if (!cats.is_array() || cats.size() != kCategoryCount) {
      throw ParseError("model: expected 13 categories");
    }
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      const json& j = cats[c];
      if (j.at("slug").get<std::string>() != slug(category_at(c))) {
        throw ParseError("model: category " + std::to_string(c) + " out of order");
      }
      BinaryModel& m = model.per_category[c];
      m.kind = parse_kind(j.at("kind").get<std::string>());
      m.positives = j.at("positives").get<std::uint32_t>();
      m.negatives = j.at("negatives").get<std::uint32_t>();
      m.log_prior_pos = finite(j.at("log_prior_pos"), "log_prior_pos");
      m.log_prior_neg = finite(j.at("log_prior_neg"), "log_prior_neg");
      for (const auto& v : j.at("log_likelihood_pos")) m.log_likelihood_pos.push_back(finite(v, "likelihood"));
      for (const auto& v : j.at("log_likelihood_neg")) m.log_likelihood_neg.push_back(finite(v, "likelihood"));
      std::size_t want = m.kind == BinaryModel::Kind::kTrained ? model.vocabulary.size() : 0;
      if (m.log_likelihood_pos.size() != want || m.log_likelihood_neg.size() != want) {
        throw ParseError("model: likelihood table size mismatch for " +
                         std::string(slug(category_at(c))));
      }
    }
    model.rebuild_index();
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

void save_model(const MultiLabelModel& model, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw TransportError("cannot write " + tmp.string());
    out << model_to_json(model);
    if (!out) throw TransportError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

MultiLabelModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("no model");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace inspectkit
