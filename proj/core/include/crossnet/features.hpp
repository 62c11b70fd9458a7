#pragma once

#include <map>
#include <string>
#include <vector>

#include "crossnet/graph.hpp"
#include "crossnet/identity.hpp"
#include "crossnet/maintenance.hpp"

namespace crossnet {

/// An unordered candidate pair in the target network, with the source
/// network the features may draw on. Canonicalized so u < v.
struct PairKey {
  std::string u, v;
  NetworkId target_network;
  NetworkId source_network;

  static PairKey make(std::string a, std::string b, NetworkId target,
                      NetworkId source);
  auto operator<=>(const PairKey&) const = default;
};

/// High/low friendship evenness crossed with high/low friendship similarity.
enum class MaintenanceCategory { HEHS, HELS, LEHS, LELS };
std::string to_string(MaintenanceCategory c);

constexpr MaintenanceCategory kAllCategories[] = {
    MaintenanceCategory::HEHS, MaintenanceCategory::HELS,
    MaintenanceCategory::LEHS, MaintenanceCategory::LELS};

/// Population means splitting "high" (strictly greater) from "low".
struct CategoryThresholds {
  double mean_sim = 0.0;
  double mean_even = 0.0;
  std::size_t population_size = 0;

  static CategoryThresholds from_profiles(const ProfileTable& profiles);
};

MaintenanceCategory category_of(const MaintenanceProfile& profile,
                                const CategoryThresholds& thresholds);

// Neighborhood measures within one network. Unknown local ids behave as
// users with empty friend sets; unknown networks are an error.
std::size_t common_neighbors_count(const MultiNetworkGraph& g, const NetworkId& n,
                                   const std::string& u, const std::string& v);
double jaccard(const MultiNetworkGraph& g, const NetworkId& n,
               const std::string& u, const std::string& v);
/// Sum of 1/ln(degree) over common neighbors with degree >= 2.
double adamic_adar(const MultiNetworkGraph& g, const NetworkId& n,
                   const std::string& u, const std::string& v);

/// Per-category share of profiled common neighbors relative to the union of
/// the two friend sets. Neighbors without a profile count toward nothing.
std::map<MaintenanceCategory, double> nfm_features(
    const MultiNetworkGraph& g, const NetworkId& n, const std::string& u,
    const std::string& v, const ProfileTable& profiles,
    const CategoryThresholds& thresholds);

/// 1 iff both users have counterparts in the source network and those
/// counterparts are friends there.
int cross_link(const MultiNetworkGraph& g, const IdentityMap& match,
               const PairKey& pair);

/// Feature-family selections of the supervised experiments.
enum class FeatureConfig { NBO, NFM, NBOFM, NBCL, NFMCL, ALL };
std::string to_string(FeatureConfig c);
FeatureConfig parse_feature_config(std::string_view s);
constexpr FeatureConfig kAllFeatureConfigs[] = {
    FeatureConfig::NBO,  FeatureConfig::NFM,   FeatureConfig::NBOFM,
    FeatureConfig::NBCL, FeatureConfig::NFMCL, FeatureConfig::ALL};

/// Active feature names in the fixed canonical order: CN_src, CN_tgt,
/// JC_src, JC_tgt, AA_src, AA_tgt, HEHS_tgt..LELS_tgt, HEHS_src..LELS_src, CL.
std::vector<std::string> feature_names(FeatureConfig config);

/// Extracts the selected families for the pair; values align with
/// feature_names(config). The scoring graph must already have held-out
/// positive edges removed. Users without source-network counterparts get 0
/// for source-side features.
std::vector<double> extract(const PairKey& pair, const MultiNetworkGraph& g,
                            const IdentityMap& match, const ProfileTable& profiles,
                            const CategoryThresholds& thresholds,
                            FeatureConfig config);

/// Batch extraction over labeled pairs; per-pair extraction is independent
/// and runs on up to `jobs` threads with deterministic output.
std::vector<std::vector<double>> extract_batch(
    const std::vector<std::pair<PairKey, int>>& instances,
    const MultiNetworkGraph& g, const IdentityMap& match,
    const ProfileTable& profiles, const CategoryThresholds& thresholds,
    FeatureConfig config, int jobs = 1);

}  // namespace crossnet
