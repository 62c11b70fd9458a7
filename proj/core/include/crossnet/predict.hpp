#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "crossnet/features.hpp"
#include "crossnet/graph.hpp"
#include "crossnet/identity.hpp"

namespace crossnet {

enum class Measure { CN, JC, AA };
std::string to_string(Measure m);
Measure parse_measure(std::string_view s);

struct RankedEntry {
  PairKey pair;
  double score = 0.0;
  int label = 0;
};

/// Candidate pairs sorted by score descending; ties broken by the canonical
/// pair order so identical inputs always rank identically.
struct RankedList {
  std::vector<RankedEntry> entries;

  void sort();
};

/// Scores every instance with the measure evaluated in `network`. When the
/// network is not the pair's target network, users are mapped through the
/// identity map; pairs without counterparts score 0. The scoring graph must
/// already exclude held-out positive edges.
RankedList rank_pairs(const std::vector<std::pair<PairKey, int>>& instances,
                      Measure measure, const NetworkId& network,
                      const MultiNetworkGraph& scoring_graph,
                      const IdentityMap& match);

struct MetricsAtK {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision, recall and F1 over the top k entries. k must lie in
/// [1, |ranked|] and total_positives must be positive.
MetricsAtK metrics_at_k(const RankedList& ranked, std::size_t k,
                        std::size_t total_positives);

struct SvmTrainConfig {
  double lambda = 1.0;       // L2 regularization strength
  std::size_t epochs = 50;   // passes over the training set
  std::uint64_t seed = 0;    // drives the per-epoch instance order
  bool standardize = true;   // z-score features on training statistics
};

struct LinearModel {
  FeatureConfig config = FeatureConfig::ALL;
  std::vector<std::string> feature_names;
  std::vector<double> weights;  // raw-feature space
  double bias = 0.0;
  SvmTrainConfig trained_with;
  double final_objective = 0.0;

  void save(std::ostream& out) const;
  static LinearModel load(std::istream& in);
};

struct LabeledInstance {
  PairKey pair;
  int label = 0;
  std::vector<double> features;
};

/// Trains a linear max-margin classifier: the L2-regularized hinge objective
/// (lambda/2)|w|^2 + mean hinge, minimized by deterministic dual coordinate
/// descent over seed-shuffled instance orders. Standardization statistics are
/// folded back so the returned weights apply to raw features.
LinearModel train(const std::vector<LabeledInstance>& instances,
                  const std::vector<std::string>& names, FeatureConfig config,
                  const SvmTrainConfig& train_config);

/// Label in {0,1} (margin 0 maps to 0) plus the signed margin.
std::pair<int, double> predict(const LinearModel& model,
                               std::span<const double> features);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

ClassMetrics evaluate_classifier(const LinearModel& model,
                                 const std::vector<LabeledInstance>& test);
ClassMetrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

/// Feature dump: a header naming the active features in canonical order,
/// then u<TAB>v<TAB>label<TAB>values.
void save_feature_dump(std::ostream& out, const std::vector<std::string>& names,
                       const std::vector<LabeledInstance>& instances);

/// Ranked list file: u<TAB>v<TAB>score<TAB>label in rank order.
void save_ranked(std::ostream& out, const RankedList& ranked);

}  // namespace crossnet
