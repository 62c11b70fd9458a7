#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crossnet/features.hpp"
#include "crossnet/graph.hpp"
#include "crossnet/identity.hpp"
#include "crossnet/maintenance.hpp"
#include "crossnet/predict.hpp"
#include "crossnet/stats.hpp"

namespace crossnet {

// ---------------------------------------------------------------------------
// Instance sampling
// ---------------------------------------------------------------------------

struct SamplingConfig {
  std::size_t positives = 5000;
  std::size_t negatives = 25000;  // five times the positives by default
  std::size_t min_negatives_with_common_neighbor = 5000;
  std::uint64_t seed = 0;
  NetworkId target_network;
  NetworkId source_network;
};

struct Instances {
  std::vector<PairKey> positives;
  std::vector<PairKey> negatives;

  std::vector<std::pair<PairKey, int>> flattened() const;
};

/// Samples positive instances uniformly from target-network friend pairs of
/// the cross-linked population, and negatives from non-friend pairs with at
/// least `min_negatives_with_common_neighbor` of them having a common
/// neighbor in either network. Deterministic per seed. Pairs listed in
/// `exclude` are never drawn (train/test disjointness).
Instances sample_instances(const MultiNetworkGraph& g, const IdentityMap& match,
                           const SamplingConfig& cfg,
                           const std::vector<PairKey>* exclude = nullptr);

/// Scoring graph with the positive friend edges removed from the target
/// network only. A positive that is not an edge is an error.
MultiNetworkGraph holdout_graph(const MultiNetworkGraph& g,
                                const std::vector<PairKey>& positives);

/// Instance file: header records the task, rows are u<TAB>v<TAB>label.
void save_instances(std::ostream& out, const Instances& instances,
                    const NetworkId& target, const NetworkId& source);
Instances load_instances(std::istream& in, NetworkId* target = nullptr,
                         NetworkId* source = nullptr);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct MethodResult {
  std::string name;
  std::vector<ClassMetrics> per_run;
  ClassMetrics averaged;
  bool precision_gt_recall = false;
  std::vector<MetricsAtK> curve;          // unsupervised rows
  std::vector<std::size_t> subset_sizes;  // subset-analysis rows
  bool subset_empty = false;
};

struct EvalReport {
  NetworkId target;
  NetworkId source;
  std::vector<std::pair<std::string, std::string>> config_fields;
  std::string fingerprint;
  std::vector<MethodResult> methods;
  std::optional<double> best_unsupervised_avg_f1;

  const MethodResult* method(const std::string& name) const;
  std::string to_kv() const;
  std::string to_csv() const;
};

// ---------------------------------------------------------------------------
// Unsupervised ranking study
// ---------------------------------------------------------------------------

struct UnsupervisedRow {
  Measure measure = Measure::JC;
  NetworkId network;

  std::string name() const { return to_string(measure) + "_" + network; }
};

struct KGrid {
  std::vector<std::size_t> ks;

  /// 1,000 to 10,000 step 1,000.
  static KGrid default_grid();
};

/// F1@K curves for each measure over one sampled instance pool, plus the
/// analytic expectation of the random baseline.
EvalReport run_unsupervised(const MultiNetworkGraph& g, const IdentityMap& match,
                            const SamplingConfig& cfg,
                            const std::vector<UnsupervisedRow>& rows,
                            const KGrid& grid = KGrid::default_grid(),
                            int jobs = 1);

// ---------------------------------------------------------------------------
// Supervised study
// ---------------------------------------------------------------------------

struct SupervisedOptions {
  SamplingConfig sampling;
  std::vector<FeatureConfig> configs{FeatureConfig::NBO,   FeatureConfig::NFM,
                                     FeatureConfig::NBOFM, FeatureConfig::NBCL,
                                     FeatureConfig::NFMCL, FeatureConfig::ALL};
  std::size_t runs = 3;  // run r uses seed, seed+1, seed+2, ...
  SvmTrainConfig train_config;
  int jobs = 1;
};

struct RunData {
  Instances train;
  Instances test;
  std::vector<std::pair<PairKey, int>> test_flat;
  /// Test instances with at least one profiled common neighbor in the target
  /// network (evaluated on the run's scoring graph).
  std::vector<char> test_qualifies;
  std::map<std::string, std::vector<int>> predictions;  // per config name
};

struct SupervisedResult {
  EvalReport report;
  std::vector<RunData> runs;
};

/// Per feature configuration: train on a fresh sample, evaluate on a disjoint
/// test sample, repeat and average. Also reports the best unsupervised F1@P
/// on the same test sets for comparison.
SupervisedResult run_supervised(const MultiNetworkGraph& g,
                                const IdentityMap& match,
                                const ProfileTable& profiles,
                                const SupervisedOptions& opts);

/// Metrics recomputed on the test instances that have at least one profiled
/// common neighbor in the target network. An empty subset is flagged, not an
/// error.
EvalReport subset_analysis(const SupervisedResult& result,
                           const std::vector<FeatureConfig>& configs = {
                               FeatureConfig::NBO, FeatureConfig::NFM});

// ---------------------------------------------------------------------------
// Distribution statistics
// ---------------------------------------------------------------------------

struct MeasureDistribution {
  double mean = 0.0;
  double q1 = 0.0, q2 = 0.0, q3 = 0.0;
  std::array<std::size_t, 20> histogram{};  // fixed-width bins over [0, 1]
};

struct DistributionStats {
  std::size_t count = 0;
  MeasureDistribution sim;
  MeasureDistribution even;
  std::size_t decile_size = 0;
  double top_even_decile_mean_sim = 0.0;
  double bottom_even_decile_mean_sim = 0.0;

  std::string to_kv() const;
};

DistributionStats distribution_stats(const ProfileTable& profiles);

/// Chi-squared test of independence between f_sim and f_even over quantile
/// bins (bins x bins contingency table, dof = (bins-1)^2).
stats::Chi2Result independence_test(const ProfileTable& profiles, int bins = 4);

/// Pearson correlation between f_sim and f_even.
double correlation(const ProfileTable& profiles);

// ---------------------------------------------------------------------------
// Synthetic two-network population
// ---------------------------------------------------------------------------

struct SynthConfig {
  std::size_t users = 1000;
  NetworkId target_network = "A";
  NetworkId source_network = "B";
  double mean_degree = 16.0;           // expected target-network friend degree
  double target_similarity = 0.2;      // expected person-level overlap ratio
  double target_evenness_skew = 1.0;   // expected source/target degree ratio
  /// Expected fraction of target friend pairs duplicated in the source
  /// network. Implied by similarity and skew; when set explicitly it must
  /// agree with the implied value within 0.05.
  std::optional<double> cross_link_correlation;
  std::size_t group_size = 8;
  double within_group_prob = 0.9;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  double shared_degree = 0.0;       // expected per-user friends in both networks
  double target_only_degree = 0.0;
  double source_only_degree = 0.0;
  double implied_cross_link_correlation = 0.0;
  double similarity_upper_bound = 1.0;
  std::vector<std::pair<std::string, std::string>> fields;

  std::string to_kv() const;
};

struct SynthOutput {
  MultiNetworkGraph graph;
  IdentityMap identity;  // every user cross-linked
  GroundTruth truth;
};

/// Overlapping friend-group construction: shared groups produce edges in both
/// networks, per-network groups produce exclusive edges, with group counts
/// solved from the requested similarity, skew and mean degree. Refuses
/// configurations whose similarity exceeds the min/max count bound.
SynthOutput generate_synthetic(const SynthConfig& cfg);

}  // namespace crossnet
