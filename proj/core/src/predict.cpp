#include "crossnet/predict.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "crossnet/errors.hpp"
#include "crossnet/rng.hpp"
#include "crossnet/tsv.hpp"

namespace crossnet {

std::string to_string(Measure m) {
  switch (m) {
    case Measure::CN: return "CN";
    case Measure::JC: return "JC";
    case Measure::AA: return "AA";
  }
  return "?";
}

Measure parse_measure(std::string_view s) {
  if (s == "CN") return Measure::CN;
  if (s == "JC") return Measure::JC;
  if (s == "AA") return Measure::AA;
  throw ParseError("unknown measure '" + std::string(s) + "'");
}

void RankedList::sort() {
  std::sort(entries.begin(), entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.pair < b.pair;
            });
}

RankedList rank_pairs(const std::vector<std::pair<PairKey, int>>& instances,
                      Measure measure, const NetworkId& network,
                      const MultiNetworkGraph& scoring_graph,
                      const IdentityMap& match) {
  if (!scoring_graph.has_network(network))
    throw ValidationError("rank_pairs: unknown network '" + network + "'");

  auto score_ids = [&](const std::string& a, const std::string& b) {
    switch (measure) {
      case Measure::CN:
        return static_cast<double>(
            common_neighbors_count(scoring_graph, network, a, b));
      case Measure::JC:
        return jaccard(scoring_graph, network, a, b);
      case Measure::AA:
        return adamic_adar(scoring_graph, network, a, b);
    }
    return 0.0;
  };

  RankedList out;
  out.entries.reserve(instances.size());
  for (const auto& [pair, label] : instances) {
    double score = 0.0;
    if (network == pair.target_network) {
      score = score_ids(pair.u, pair.v);
    } else {
      auto cu = match.counterpart_in({pair.target_network, pair.u}, network);
      auto cv = match.counterpart_in({pair.target_network, pair.v}, network);
      if (cu && cv) score = score_ids(*cu, *cv);
    }
    out.entries.push_back({pair, score, label});
  }
  out.sort();
  return out;
}

MetricsAtK metrics_at_k(const RankedList& ranked, std::size_t k,
                        std::size_t total_positives) {
  if (k < 1 || k > ranked.entries.size())
    throw ValidationError("metrics_at_k: k out of range");
  if (total_positives == 0)
    throw ValidationError("metrics_at_k: total_positives must be positive");
  std::size_t tp = 0;
  for (std::size_t i = 0; i < k; ++i)
    if (ranked.entries[i].label == 1) ++tp;
  MetricsAtK m;
  m.k = k;
  m.precision = static_cast<double>(tp) / static_cast<double>(k);
  m.recall = static_cast<double>(tp) / static_cast<double>(total_positives);
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

void LinearModel::save(std::ostream& out) const {
  out << "# crossnet model v1\n";
  out << "# config\t" << to_string(config) << "\n";
  out << "# lambda\t" << tsv::full(trained_with.lambda) << "\n";
  out << "# epochs\t" << trained_with.epochs << "\n";
  out << "# seed\t" << trained_with.seed << "\n";
  out << "# standardize\t" << (trained_with.standardize ? 1 : 0) << "\n";
  out << "# objective\t" << tsv::full(final_objective) << "\n";
  for (std::size_t i = 0; i < feature_names.size(); ++i)
    out << feature_names[i] << "\t" << tsv::full(weights[i]) << "\n";
  out << "__bias__\t" << tsv::full(bias) << "\n";
}

LinearModel LinearModel::load(std::istream& in) {
  LinearModel model;
  std::string line;
  std::size_t lineno = 0;
  bool saw_bias = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = tsv::trim(line);
    if (t.empty()) continue;
    auto fields = tsv::split(line);
    if (t.front() == '#') {
      if (fields.size() != 2) continue;
      std::string_view key = tsv::trim(fields[0]);
      std::string_view val = tsv::trim(fields[1]);
      if (key == "# config") model.config = parse_feature_config(val);
      else if (key == "# lambda") tsv::parse_double(val, model.trained_with.lambda);
      else if (key == "# epochs") {
        std::uint64_t e;
        if (tsv::parse_u64(val, e)) model.trained_with.epochs = e;
      } else if (key == "# seed") {
        std::uint64_t s;
        if (tsv::parse_u64(val, s)) model.trained_with.seed = s;
      } else if (key == "# standardize") {
        model.trained_with.standardize = val == "1";
      } else if (key == "# objective") {
        tsv::parse_double(val, model.final_objective);
      }
      continue;
    }
    if (fields.size() != 2)
      throw ParseError("model file line " + std::to_string(lineno) +
                       ": expected name<TAB>weight");
    double w;
    if (!tsv::parse_double(tsv::trim(fields[1]), w))
      throw ParseError("model file line " + std::to_string(lineno) +
                       ": bad weight");
    std::string name(tsv::trim(fields[0]));
    if (name == "__bias__") {
      model.bias = w;
      saw_bias = true;
    } else {
      model.feature_names.push_back(std::move(name));
      model.weights.push_back(w);
    }
  }
  if (!saw_bias) throw ParseError("model file: missing __bias__ line");
  return model;
}

LinearModel train(const std::vector<LabeledInstance>& instances,
                  const std::vector<std::string>& names, FeatureConfig config,
                  const SvmTrainConfig& train_config) {
  const std::size_t m = instances.size();
  if (m == 0) throw ValidationError("train: empty training set");
  const std::size_t dim = names.size();
  std::size_t pos = 0;
  for (const auto& inst : instances) {
    if (inst.features.size() != dim)
      throw ValidationError("train: feature dimension mismatch for pair (" +
                            inst.pair.u + ", " + inst.pair.v + ")");
    for (double x : inst.features)
      if (!std::isfinite(x))
        throw ValidationError("train: non-finite feature value for pair (" +
                              inst.pair.u + ", " + inst.pair.v + ")");
    if (inst.label == 1) ++pos;
  }
  if (pos == 0 || pos == m)
    throw ValidationError("train: both classes must be present");
  if (train_config.lambda <= 0.0)
    throw ValidationError("train: lambda must be positive");

  // Standardization statistics on the training data; constant columns keep
  // scale 1 so they contribute nothing after centering.
  std::vector<double> mu(dim, 0.0), sigma(dim, 1.0);
  if (train_config.standardize) {
    for (const auto& inst : instances)
      for (std::size_t j = 0; j < dim; ++j) mu[j] += inst.features[j];
    for (std::size_t j = 0; j < dim; ++j) mu[j] /= static_cast<double>(m);
    std::vector<double> var(dim, 0.0);
    for (const auto& inst : instances)
      for (std::size_t j = 0; j < dim; ++j) {
        double d = inst.features[j] - mu[j];
        var[j] += d * d;
      }
    for (std::size_t j = 0; j < dim; ++j) {
      double s = std::sqrt(var[j] / static_cast<double>(m));
      if (s > 0.0) sigma[j] = s;
    }
  }

  // Dense standardized matrix with a trailing constant column for the bias.
  const std::size_t d = dim + 1;
  std::vector<double> xs(m * d);
  std::vector<double> y(m);
  std::vector<double> qii(m);
  for (std::size_t i = 0; i < m; ++i) {
    double q = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      double v = (instances[i].features[j] - mu[j]) / sigma[j];
      xs[i * d + j] = v;
      q += v * v;
    }
    xs[i * d + dim] = 1.0;
    qii[i] = q + 1.0;
    y[i] = instances[i].label == 1 ? 1.0 : -1.0;
  }

  // Dual coordinate descent on the equivalent C-SVM with C = 1/(lambda*m).
  // Deterministic given the seed; converges to the unique primal optimum, so
  // retraining on a duplicated dataset lands on the same weights.
  const double C = 1.0 / (train_config.lambda * static_cast<double>(m));
  std::vector<double> alpha(m, 0.0);
  std::vector<double> w(d, 0.0);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(train_config.seed);
  for (std::size_t epoch = 0; epoch < train_config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      const double* xi = &xs[i * d];
      double wx = 0.0;
      for (std::size_t j = 0; j < d; ++j) wx += w[j] * xi[j];
      double grad = y[i] * wx - 1.0;
      if (alpha[i] <= 0.0 && grad >= 0.0) continue;
      if (alpha[i] >= C && grad <= 0.0) continue;
      double a_new = std::clamp(alpha[i] - grad / qii[i], 0.0, C);
      double delta = (a_new - alpha[i]) * y[i];
      if (delta == 0.0) continue;
      alpha[i] = a_new;
      for (std::size_t j = 0; j < d; ++j) w[j] += delta * xi[j];
    }
  }

  double norm2 = 0.0;
  for (double v : w) norm2 += v * v;
  double hinge = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* xi = &xs[i * d];
    double wx = 0.0;
    for (std::size_t j = 0; j < d; ++j) wx += w[j] * xi[j];
    hinge += std::max(0.0, 1.0 - y[i] * wx);
  }
  double objective =
      0.5 * train_config.lambda * norm2 + hinge / static_cast<double>(m);

  LinearModel model;
  model.config = config;
  model.feature_names = names;
  model.trained_with = train_config;
  model.final_objective = objective;
  model.weights.resize(dim);
  double bias = w[dim];
  for (std::size_t j = 0; j < dim; ++j) {
    model.weights[j] = w[j] / sigma[j];
    bias -= w[j] * mu[j] / sigma[j];
  }
  model.bias = bias;
  return model;
}

std::pair<int, double> predict(const LinearModel& model,
                               std::span<const double> features) {
  if (features.size() != model.weights.size())
    throw ValidationError("predict: feature dimension mismatch (got " +
                          std::to_string(features.size()) + ", model has " +
                          std::to_string(model.weights.size()) + ")");
  double margin = model.bias;
  for (std::size_t j = 0; j < features.size(); ++j)
    margin += model.weights[j] * features[j];
  return {margin > 0.0 ? 1 : 0, margin};
}

ClassMetrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                            : 0.0;
  m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                         : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

ClassMetrics evaluate_classifier(const LinearModel& model,
                                 const std::vector<LabeledInstance>& test) {
  if (test.empty()) throw ValidationError("evaluate_classifier: empty test set");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& inst : test) {
    int predicted = predict(model, inst.features).first;
    if (predicted == 1 && inst.label == 1) ++tp;
    else if (predicted == 1) ++fp;
    else if (inst.label == 1) ++fn;
  }
  return metrics_from_counts(tp, fp, fn);
}

void save_feature_dump(std::ostream& out, const std::vector<std::string>& names,
                       const std::vector<LabeledInstance>& instances) {
  out << "u\tv\tlabel";
  for (const auto& n : names) out << "\t" << n;
  out << "\n";
  for (const auto& inst : instances) {
    out << inst.pair.u << "\t" << inst.pair.v << "\t" << inst.label;
    for (double x : inst.features) out << "\t" << tsv::fixed(x, 6);
    out << "\n";
  }
}

void save_ranked(std::ostream& out, const RankedList& ranked) {
  out << "u\tv\tscore\tlabel\n";
  for (const auto& e : ranked.entries)
    out << e.pair.u << "\t" << e.pair.v << "\t" << tsv::fixed(e.score, 6) << "\t"
        << e.label << "\n";
}

}  // namespace crossnet
