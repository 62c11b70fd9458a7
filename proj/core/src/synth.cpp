#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "crossnet/errors.hpp"
#include "crossnet/experiment.hpp"
#include "crossnet/rng.hpp"
#include "crossnet/tsv.hpp"

namespace crossnet {

namespace {

std::string user_id(std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "u%0*zu", width, i);
  return buf;
}

}  // namespace

std::string GroundTruth::to_kv() const {
  std::ostringstream os;
  os << "# crossnet synth truth v1\n";
  for (const auto& [k, v] : fields) os << k << ": " << v << "\n";
  return os.str();
}

SynthOutput generate_synthetic(const SynthConfig& cfg) {
  if (cfg.users < 4) throw ValidationError("synth: need at least 4 users");
  if (cfg.group_size < 2 || cfg.group_size > cfg.users)
    throw ValidationError("synth: group_size must lie in [2, users]");
  if (!(cfg.within_group_prob > 0.0 && cfg.within_group_prob <= 1.0))
    throw ValidationError("synth: within_group_prob must lie in (0, 1]");
  if (cfg.mean_degree <= 0.0)
    throw ValidationError("synth: mean_degree must be positive");
  if (cfg.target_similarity < 0.0 || cfg.target_similarity > 1.0)
    throw ValidationError("synth: target_similarity must lie in [0, 1]");
  if (cfg.target_evenness_skew <= 0.0)
    throw ValidationError("synth: target_evenness_skew must be positive");
  if (cfg.target_network == cfg.source_network)
    throw ValidationError("synth: target and source network must differ");

  const double s = cfg.target_similarity;
  const double skew = cfg.target_evenness_skew;
  const double bound = std::min(skew, 1.0 / skew);
  if (s > bound + 1e-12)
    throw InfeasibleError(
        "synth: target_similarity " + tsv::fixed(s, 4) +
        " exceeds the similarity upper bound min/max = " + tsv::fixed(bound, 4) +
        " implied by target_evenness_skew " + tsv::fixed(skew, 4));

  // Split the expected degrees into shared, target-only and source-only
  // parts: d_shared/(d_shared + d_a_only + d_b_only) = s with d_target = m
  // and d_source = skew * m.
  const double m = cfg.mean_degree;
  const double d_shared = s * (1.0 + skew) * m / (1.0 + s);
  const double d_target_only = std::max(0.0, m - d_shared);
  const double d_source_only = std::max(0.0, skew * m - d_shared);
  const double implied_cl = m > 0.0 ? d_shared / m : 0.0;

  if (cfg.cross_link_correlation) {
    double given = *cfg.cross_link_correlation;
    if (given < 0.0 || given > 1.0)
      throw ValidationError("synth: cross_link_correlation must lie in [0, 1]");
    if (std::fabs(given - implied_cl) > 0.05)
      throw InfeasibleError(
          "synth: cross_link_correlation " + tsv::fixed(given, 4) +
          " conflicts with the value " + tsv::fixed(implied_cl, 4) +
          " implied by target_similarity and target_evenness_skew");
  }

  const int width = static_cast<int>(std::to_string(cfg.users - 1).size());
  SynthOutput out;
  out.graph.ensure_network(cfg.target_network);
  out.graph.ensure_network(cfg.source_network);
  for (std::size_t i = 0; i < cfg.users; ++i) {
    std::string id = user_id(i, width);
    out.graph.ensure_user(cfg.target_network, id);
    out.graph.ensure_user(cfg.source_network, id);
    out.identity.add({{cfg.target_network, id},
                      {cfg.source_network, id},
                      MatchMethod::self_report,
                      1.0});
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> everyone(cfg.users);
  std::iota(everyone.begin(), everyone.end(), 0);

  auto emit_group = [&](const std::vector<std::size_t>& members, bool in_target,
                        bool in_source) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        if (cfg.within_group_prob < 1.0 && !rng.bernoulli(cfg.within_group_prob))
          continue;
        std::string ua = user_id(members[a], width);
        std::string ub = user_id(members[b], width);
        if (in_target) out.graph.add_friendship(cfg.target_network, ua, ub);
        if (in_source) out.graph.add_friendship(cfg.source_network, ua, ub);
      }
    }
  };

  // Users are chopped into groups of group_size; each full round gives every
  // user one group, a partial round covers a prefix of a fresh shuffle.
  auto build_class = [&](double degree, bool in_target, bool in_source) {
    if (degree <= 1e-12) return;
    double per_user_groups =
        degree / (static_cast<double>(cfg.group_size - 1) * cfg.within_group_prob);
    auto rounds = static_cast<std::size_t>(per_user_groups);
    double frac = per_user_groups - static_cast<double>(rounds);
    auto chop = [&](const std::vector<std::size_t>& order) {
      for (std::size_t start = 0; start + 2 <= order.size();
           start += cfg.group_size) {
        std::size_t end = std::min(order.size(), start + cfg.group_size);
        if (end - start < 2) break;
        std::vector<std::size_t> members(order.begin() + start,
                                         order.begin() + end);
        emit_group(members, in_target, in_source);
      }
    };
    std::vector<std::size_t> order = everyone;
    for (std::size_t r = 0; r < rounds; ++r) {
      rng.shuffle(order);
      chop(order);
    }
    auto partial = static_cast<std::size_t>(
        std::llround(frac * static_cast<double>(cfg.users)));
    if (partial >= 2) {
      rng.shuffle(order);
      std::vector<std::size_t> prefix(order.begin(),
                                      order.begin() + static_cast<std::ptrdiff_t>(partial));
      chop(prefix);
    }
  };

  build_class(d_shared, true, true);
  build_class(d_target_only, true, false);
  build_class(d_source_only, false, true);

  GroundTruth& truth = out.truth;
  truth.shared_degree = d_shared;
  truth.target_only_degree = d_target_only;
  truth.source_only_degree = d_source_only;
  truth.implied_cross_link_correlation = implied_cl;
  truth.similarity_upper_bound = bound;
  truth.fields = {
      {"users", std::to_string(cfg.users)},
      {"target_network", cfg.target_network},
      {"source_network", cfg.source_network},
      {"seed", std::to_string(cfg.seed)},
      {"mean_degree", tsv::full(cfg.mean_degree)},
      {"target_similarity", tsv::full(cfg.target_similarity)},
      {"target_evenness_skew", tsv::full(cfg.target_evenness_skew)},
      {"group_size", std::to_string(cfg.group_size)},
      {"within_group_prob", tsv::full(cfg.within_group_prob)},
      {"shared_degree", tsv::full(d_shared)},
      {"target_only_degree", tsv::full(d_target_only)},
      {"source_only_degree", tsv::full(d_source_only)},
      {"implied_cross_link_correlation", tsv::full(implied_cl)},
      {"similarity_upper_bound", tsv::full(bound)},
  };
  return out;
}

}  // namespace crossnet
