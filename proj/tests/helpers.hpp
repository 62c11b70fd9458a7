#pragma once

// Shared fixtures and independent brute-force oracles for the test suites.
// The oracles deliberately avoid the library's code paths: they work on
// std::set copies of the friend sets and evaluate the defining formulas
// directly in floating point.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crossnet/features.hpp"
#include "crossnet/graph.hpp"
#include "crossnet/identity.hpp"
#include "crossnet/maintenance.hpp"
#include "crossnet/rng.hpp"

namespace testutil {

using namespace crossnet;

inline MultiNetworkGraph graph_from_friend_pairs(
    const std::vector<std::tuple<std::string, std::string, std::string>>& pairs,
    const std::vector<NetworkId>& networks = {}) {
  MultiNetworkGraph g;
  for (const auto& n : networks) g.ensure_network(n);
  for (const auto& [net, u, v] : pairs) g.add_friendship(net, u, v);
  return g;
}

/// Random symmetric friendship graph on one network.
inline void add_random_friendships(MultiNetworkGraph& g, const NetworkId& net,
                                   std::size_t users, double p, Rng& rng,
                                   const std::string& prefix = "u") {
  g.ensure_network(net);
  for (std::size_t i = 0; i < users; ++i)
    g.ensure_user(net, prefix + std::to_string(i));
  for (std::size_t i = 0; i < users; ++i)
    for (std::size_t j = i + 1; j < users; ++j)
      if (rng.bernoulli(p))
        g.add_friendship(net, prefix + std::to_string(i),
                         prefix + std::to_string(j));
}

inline std::set<std::string> friend_set(const MultiNetworkGraph& g,
                                        const NetworkId& net,
                                        const std::string& id) {
  auto v = g.friends({net, id});
  return {v.begin(), v.end()};
}

// -- brute-force neighborhood measures --------------------------------------

inline std::set<std::string> brute_common(const std::set<std::string>& a,
                                          const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
  return out;
}

inline double brute_jaccard(const std::set<std::string>& a,
                            const std::set<std::string>& b) {
  std::set<std::string> uni = a;
  uni.insert(b.begin(), b.end());
  if (uni.empty()) return 0.0;
  return static_cast<double>(brute_common(a, b).size()) /
         static_cast<double>(uni.size());
}

inline double brute_adamic_adar(const MultiNetworkGraph& g, const NetworkId& net,
                                const std::string& u, const std::string& v) {
  double score = 0.0;
  for (const auto& z : brute_common(friend_set(g, net, u), friend_set(g, net, v))) {
    std::size_t deg = friend_set(g, net, z).size();
    if (deg >= 2) score += 1.0 / std::log(static_cast<double>(deg));
  }
  return score;
}

// -- brute-force maintenance measures ---------------------------------------

struct BruteProfile {
  double f_sim = 0, f_sim_upper = 0, f_equal = 0, f_even = 0;
  std::map<NetworkId, double> f_in;
};

/// Direct evaluation of the maintenance formulas over person-key sets.
inline BruteProfile brute_profile(
    const std::map<NetworkId, std::set<std::string>>& sets) {
  BruteProfile p;
  auto n = static_cast<double>(sets.size());
  std::set<std::string> uni;
  for (const auto& [net, s] : sets) uni.insert(s.begin(), s.end());
  std::set<std::string> inter = sets.begin()->second;
  for (const auto& [net, s] : sets) inter = brute_common(inter, s);

  double u = static_cast<double>(uni.size());
  p.f_sim = u > 0 ? static_cast<double>(inter.size()) / u : 0.0;
  double lo = 1e300, hi = 0;
  for (const auto& [net, s] : sets) {
    lo = std::min(lo, static_cast<double>(s.size()));
    hi = std::max(hi, static_cast<double>(s.size()));
  }
  p.f_sim_upper = hi == 0 ? 1.0 : lo / hi;
  p.f_equal = (1.0 + (n - 1.0) * p.f_sim) / n;
  double dev = 0;
  for (const auto& [net, s] : sets) {
    double fin = u > 0 ? static_cast<double>(s.size()) / u : 0.0;
    p.f_in[net] = fin;
    dev += std::fabs(fin - p.f_equal);
  }
  p.f_even = u > 0 ? 1.0 - dev : 0.0;
  return p;
}

/// Person-key resolution done by hand through the identity map.
inline std::map<NetworkId, std::set<std::string>> brute_person_sets(
    const LinkedUser& user, const MultiNetworkGraph& g, const IdentityMap& match) {
  std::map<NetworkId, std::set<std::string>> out;
  for (const auto& [net, id] : user.accounts) {
    std::set<std::string> keys;
    for (const auto& f : g.friends({net, id})) {
      UserRef ref{net, f};
      auto cp = match.counterpart(ref);
      std::string key = ref.key();
      if (cp) key = std::min(key, cp->key());
      keys.insert(key);
    }
    out[net] = std::move(keys);
  }
  return out;
}

inline std::string save_to_string(const MultiNetworkGraph& g) {
  std::ostringstream os;
  g.save(os);
  return os.str();
}

}  // namespace testutil
