#include "crossnet/features.hpp"

#include <algorithm>
#include <cmath>

#include "crossnet/errors.hpp"
#include "crossnet/parallel.hpp"

namespace crossnet {

PairKey PairKey::make(std::string a, std::string b, NetworkId target,
                      NetworkId source) {
  if (a == b) throw ValidationError("pair with identical users '" + a + "'");
  if (target == source)
    throw ValidationError("target and source network must differ");
  PairKey k;
  if (b < a) std::swap(a, b);
  k.u = std::move(a);
  k.v = std::move(b);
  k.target_network = std::move(target);
  k.source_network = std::move(source);
  return k;
}

std::string to_string(MaintenanceCategory c) {
  switch (c) {
    case MaintenanceCategory::HEHS: return "HEHS";
    case MaintenanceCategory::HELS: return "HELS";
    case MaintenanceCategory::LEHS: return "LEHS";
    case MaintenanceCategory::LELS: return "LELS";
  }
  return "?";
}

CategoryThresholds CategoryThresholds::from_profiles(const ProfileTable& profiles) {
  if (profiles.empty())
    throw ValidationError("category thresholds need a non-empty population");
  double sim = 0.0, even = 0.0;
  for (const auto& e : profiles.entries()) {
    sim += e.profile.f_sim;
    even += e.profile.f_even;
  }
  auto n = static_cast<double>(profiles.size());
  return {sim / n, even / n, profiles.size()};
}

MaintenanceCategory category_of(const MaintenanceProfile& profile,
                                const CategoryThresholds& thresholds) {
  bool high_even = profile.f_even > thresholds.mean_even;
  bool high_sim = profile.f_sim > thresholds.mean_sim;
  if (high_even) return high_sim ? MaintenanceCategory::HEHS : MaintenanceCategory::HELS;
  return high_sim ? MaintenanceCategory::LEHS : MaintenanceCategory::LELS;
}

namespace {

struct NeighborSets {
  const std::vector<std::uint32_t>* a = nullptr;
  const std::vector<std::uint32_t>* b = nullptr;
  bool valid = false;
};

NeighborSets lookup(const MultiNetworkGraph& g, const NetworkId& n,
                    const std::string& u, const std::string& v) {
  NeighborSets s;
  auto iu = g.user_index(n, u);
  auto iv = g.user_index(n, v);
  if (!iu || !iv) return s;
  s.a = &g.friends_by_index(n, *iu);
  s.b = &g.friends_by_index(n, *iv);
  s.valid = true;
  return s;
}

std::size_t intersection_size(const std::vector<std::uint32_t>& a,
                              const std::vector<std::uint32_t>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) {
      ++count;
      ++ia;
      ++ib;
    } else if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return count;
}

}  // namespace

std::size_t common_neighbors_count(const MultiNetworkGraph& g, const NetworkId& n,
                                   const std::string& u, const std::string& v) {
  auto s = lookup(g, n, u, v);
  if (!s.valid) return 0;
  return intersection_size(*s.a, *s.b);
}

double jaccard(const MultiNetworkGraph& g, const NetworkId& n,
               const std::string& u, const std::string& v) {
  auto s = lookup(g, n, u, v);
  if (!s.valid) return 0.0;
  std::size_t inter = intersection_size(*s.a, *s.b);
  std::size_t uni = s.a->size() + s.b->size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double adamic_adar(const MultiNetworkGraph& g, const NetworkId& n,
                   const std::string& u, const std::string& v) {
  auto s = lookup(g, n, u, v);
  if (!s.valid) return 0.0;
  double score = 0.0;
  auto ia = s.a->begin();
  auto ib = s.b->begin();
  while (ia != s.a->end() && ib != s.b->end()) {
    if (*ia == *ib) {
      std::size_t deg = g.friends_by_index(n, *ia).size();
      if (deg >= 2) score += 1.0 / std::log(static_cast<double>(deg));
      ++ia;
      ++ib;
    } else if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return score;
}

std::map<MaintenanceCategory, double> nfm_features(
    const MultiNetworkGraph& g, const NetworkId& n, const std::string& u,
    const std::string& v, const ProfileTable& profiles,
    const CategoryThresholds& thresholds) {
  std::map<MaintenanceCategory, double> out;
  for (auto c : kAllCategories) out[c] = 0.0;
  auto s = lookup(g, n, u, v);
  if (!s.valid) return out;
  std::size_t inter = 0;
  std::map<MaintenanceCategory, std::size_t> counts;
  auto ia = s.a->begin();
  auto ib = s.b->begin();
  while (ia != s.a->end() && ib != s.b->end()) {
    if (*ia == *ib) {
      ++inter;
      const std::string& zid = g.user_id(n, *ia);
      if (const MaintenanceProfile* p = profiles.by_account(n, zid))
        ++counts[category_of(*p, thresholds)];
      ++ia;
      ++ib;
    } else if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  std::size_t uni = s.a->size() + s.b->size() - inter;
  if (uni == 0) return out;
  for (const auto& [c, cnt] : counts)
    out[c] = static_cast<double>(cnt) / static_cast<double>(uni);
  return out;
}

int cross_link(const MultiNetworkGraph& g, const IdentityMap& match,
               const PairKey& pair) {
  auto cu = match.counterpart_in({pair.target_network, pair.u}, pair.source_network);
  auto cv = match.counterpart_in({pair.target_network, pair.v}, pair.source_network);
  if (!cu || !cv) return 0;
  return g.are_friends(pair.source_network, *cu, *cv) ? 1 : 0;
}

std::string to_string(FeatureConfig c) {
  switch (c) {
    case FeatureConfig::NBO: return "NBO";
    case FeatureConfig::NFM: return "NFM";
    case FeatureConfig::NBOFM: return "NBOFM";
    case FeatureConfig::NBCL: return "NBCL";
    case FeatureConfig::NFMCL: return "NFMCL";
    case FeatureConfig::ALL: return "ALL";
  }
  return "?";
}

FeatureConfig parse_feature_config(std::string_view s) {
  for (auto c : kAllFeatureConfigs)
    if (s == to_string(c)) return c;
  throw ParseError("unknown feature config '" + std::string(s) + "'");
}

namespace {

bool has_neighborhood(FeatureConfig c) {
  return c == FeatureConfig::NBO || c == FeatureConfig::NBOFM ||
         c == FeatureConfig::NBCL || c == FeatureConfig::ALL;
}

bool has_nfm(FeatureConfig c) {
  return c == FeatureConfig::NFM || c == FeatureConfig::NBOFM ||
         c == FeatureConfig::NFMCL || c == FeatureConfig::ALL;
}

bool has_cross_link(FeatureConfig c) {
  return c == FeatureConfig::NBCL || c == FeatureConfig::NFMCL ||
         c == FeatureConfig::ALL;
}

}  // namespace

std::vector<std::string> feature_names(FeatureConfig config) {
  std::vector<std::string> names;
  if (has_neighborhood(config)) {
    names.insert(names.end(),
                 {"CN_src", "CN_tgt", "JC_src", "JC_tgt", "AA_src", "AA_tgt"});
  }
  if (has_nfm(config)) {
    for (const char* side : {"tgt", "src"})
      for (auto c : kAllCategories)
        names.push_back(to_string(c) + std::string("_") + side);
  }
  if (has_cross_link(config)) names.push_back("CL");
  return names;
}

std::vector<double> extract(const PairKey& pair, const MultiNetworkGraph& g,
                            const IdentityMap& match, const ProfileTable& profiles,
                            const CategoryThresholds& thresholds,
                            FeatureConfig config) {
  const NetworkId& tgt = pair.target_network;
  const NetworkId& src = pair.source_network;
  auto su = match.counterpart_in({tgt, pair.u}, src);
  auto sv = match.counterpart_in({tgt, pair.v}, src);
  const bool src_ok = su.has_value() && sv.has_value();

  std::vector<double> values;
  if (has_neighborhood(config)) {
    values.push_back(src_ok ? static_cast<double>(common_neighbors_count(
                                  g, src, *su, *sv))
                            : 0.0);
    values.push_back(static_cast<double>(common_neighbors_count(g, tgt, pair.u, pair.v)));
    values.push_back(src_ok ? jaccard(g, src, *su, *sv) : 0.0);
    values.push_back(jaccard(g, tgt, pair.u, pair.v));
    values.push_back(src_ok ? adamic_adar(g, src, *su, *sv) : 0.0);
    values.push_back(adamic_adar(g, tgt, pair.u, pair.v));
  }
  if (has_nfm(config)) {
    auto tgt_nfm = nfm_features(g, tgt, pair.u, pair.v, profiles, thresholds);
    for (auto c : kAllCategories) values.push_back(tgt_nfm[c]);
    if (src_ok) {
      auto src_nfm = nfm_features(g, src, *su, *sv, profiles, thresholds);
      for (auto c : kAllCategories) values.push_back(src_nfm[c]);
    } else {
      for (std::size_t i = 0; i < 4; ++i) values.push_back(0.0);
    }
  }
  if (has_cross_link(config))
    values.push_back(static_cast<double>(cross_link(g, match, pair)));
  return values;
}

std::vector<std::vector<double>> extract_batch(
    const std::vector<std::pair<PairKey, int>>& instances,
    const MultiNetworkGraph& g, const IdentityMap& match,
    const ProfileTable& profiles, const CategoryThresholds& thresholds,
    FeatureConfig config, int jobs) {
  std::vector<std::vector<double>> out(instances.size());
  parallel_for(instances.size(), jobs, [&](std::size_t i) {
    out[i] = extract(instances[i].first, g, match, profiles, thresholds, config);
  });
  return out;
}

}  // namespace crossnet
