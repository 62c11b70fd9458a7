#include "crossnet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "crossnet/errors.hpp"
#include "crossnet/parallel.hpp"
#include "crossnet/rng.hpp"
#include "crossnet/tsv.hpp"

namespace crossnet {

namespace {

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string graph_signature(const MultiNetworkGraph& g) {
  std::ostringstream os;
  g.save(os);
  return hex64(fnv1a(os.str()));
}

std::pair<std::string, std::string> pair_ids(const PairKey& p) {
  return {p.u, p.v};
}

}  // namespace

std::vector<std::pair<PairKey, int>> Instances::flattened() const {
  std::vector<std::pair<PairKey, int>> out;
  out.reserve(positives.size() + negatives.size());
  for (const auto& p : positives) out.emplace_back(p, 1);
  for (const auto& p : negatives) out.emplace_back(p, 0);
  return out;
}

Instances sample_instances(const MultiNetworkGraph& g, const IdentityMap& match,
                           const SamplingConfig& cfg,
                           const std::vector<PairKey>* exclude) {
  if (cfg.positives == 0) throw ValidationError("sampling: positives must be > 0");
  if (cfg.min_negatives_with_common_neighbor > cfg.negatives)
    throw ValidationError(
        "sampling: min_negatives_with_common_neighbor exceeds negatives");
  if (cfg.target_network == cfg.source_network)
    throw ValidationError("sampling: target and source network must differ");
  if (!g.has_network(cfg.target_network) || !g.has_network(cfg.source_network))
    throw ValidationError("sampling: unknown network in config");

  // Cross-linked population, keyed by target-network account id.
  std::vector<std::string> ids;
  for (const auto& e : match.edges()) {
    if (e.left.network == cfg.target_network && e.right.network == cfg.source_network)
      ids.push_back(e.left.local_id);
    else if (e.left.network == cfg.source_network &&
             e.right.network == cfg.target_network)
      ids.push_back(e.right.local_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() < 2)
    throw ValidationError("sampling: fewer than two cross-linked users");
  std::unordered_set<std::string> linked(ids.begin(), ids.end());

  std::set<std::pair<std::string, std::string>> excluded;
  if (exclude)
    for (const auto& p : *exclude) excluded.insert(pair_ids(p));

  // Positive pool: observed target-network friend pairs within the linked
  // population, minus exclusions.
  std::vector<PairKey> pool;
  for (const auto& id : ids) {
    for (const auto& f : g.friends({cfg.target_network, id})) {
      if (!(id < f)) continue;
      if (!linked.count(f)) continue;
      if (excluded.count({id, f})) continue;
      pool.push_back(PairKey::make(id, f, cfg.target_network, cfg.source_network));
    }
  }
  std::sort(pool.begin(), pool.end());
  if (cfg.positives > pool.size())
    throw ValidationError("sampling: requested " + std::to_string(cfg.positives) +
                          " positives but only " + std::to_string(pool.size()) +
                          " target friend pairs are available");

  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.positives; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  Instances out;
  out.positives.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(cfg.positives));
  std::sort(out.positives.begin(), out.positives.end());

  // Negatives by rejection sampling, then topping up the common-neighbor
  // constraint by replacing negatives that lack one. Capped at 100x draws.
  auto has_common_neighbor = [&](const std::string& u, const std::string& v) {
    if (common_neighbors_count(g, cfg.target_network, u, v) > 0) return true;
    auto cu = match.counterpart_in({cfg.target_network, u}, cfg.source_network);
    auto cv = match.counterpart_in({cfg.target_network, v}, cfg.source_network);
    return cu && cv && common_neighbors_count(g, cfg.source_network, *cu, *cv) > 0;
  };

  std::set<std::pair<std::string, std::string>> used = excluded;
  for (const auto& p : out.positives) used.insert(pair_ids(p));

  std::vector<PairKey> negatives;
  std::vector<char> has_cn;
  std::vector<std::size_t> without_cn;  // indices into negatives
  std::size_t cn_count = 0;
  const std::uint64_t max_draws = 100ull * cfg.negatives;
  std::uint64_t draws = 0;

  auto draw_negative = [&](bool require_cn) -> bool {
    while (draws < max_draws) {
      ++draws;
      auto i = static_cast<std::size_t>(rng.below(ids.size()));
      auto j = static_cast<std::size_t>(rng.below(ids.size()));
      if (i == j) continue;
      const std::string& u = ids[std::min(i, j)];
      const std::string& v = ids[std::max(i, j)];
      std::pair<std::string, std::string> key{std::min(u, v), std::max(u, v)};
      if (used.count(key)) continue;
      if (g.are_friends(cfg.target_network, key.first, key.second)) continue;
      bool cn = has_common_neighbor(key.first, key.second);
      if (require_cn && !cn) continue;
      used.insert(key);
      if (require_cn) {
        // Swap out a negative that lacks a common neighbor.
        std::size_t victim = without_cn.back();
        without_cn.pop_back();
        negatives[victim] =
            PairKey::make(key.first, key.second, cfg.target_network,
                          cfg.source_network);
        has_cn[victim] = 1;
      } else {
        negatives.push_back(PairKey::make(key.first, key.second,
                                          cfg.target_network, cfg.source_network));
        has_cn.push_back(cn ? 1 : 0);
        if (!cn) without_cn.push_back(negatives.size() - 1);
      }
      if (cn) ++cn_count;
      return true;
    }
    return false;
  };

  while (negatives.size() < cfg.negatives) {
    if (!draw_negative(false))
      throw InfeasibleError(
          "sampling: exhausted " + std::to_string(max_draws) +
          " draws with only " + std::to_string(negatives.size()) + " of " +
          std::to_string(cfg.negatives) + " negatives found");
  }
  while (cn_count < cfg.min_negatives_with_common_neighbor) {
    if (without_cn.empty() || !draw_negative(true))
      throw InfeasibleError(
          "sampling: only " + std::to_string(cn_count) + " of " +
          std::to_string(cfg.min_negatives_with_common_neighbor) +
          " required negatives with >= 1 common neighbor (shortfall " +
          std::to_string(cfg.min_negatives_with_common_neighbor - cn_count) +
          ")");
  }
  std::sort(negatives.begin(), negatives.end());
  out.negatives = std::move(negatives);
  return out;
}

MultiNetworkGraph holdout_graph(const MultiNetworkGraph& g,
                                const std::vector<PairKey>& positives) {
  MultiNetworkGraph out = g;
  if (positives.empty()) return out;
  const NetworkId& target = positives.front().target_network;
  for (const auto& p : positives) {
    if (p.target_network != target)
      throw ValidationError("holdout_graph: positives span multiple targets");
    out.remove_friendship(target, p.u, p.v);
  }
  return out;
}

void save_instances(std::ostream& out, const Instances& instances,
                    const NetworkId& target, const NetworkId& source) {
  out << "# crossnet instances v1\n";
  out << "# task\t" << target << "\t" << source << "\n";
  for (const auto& [pair, label] : instances.flattened())
    out << pair.u << "\t" << pair.v << "\t" << label << "\n";
}

Instances load_instances(std::istream& in, NetworkId* target, NetworkId* source) {
  Instances out;
  NetworkId tgt, src;
  std::string line;
  std::size_t lineno = 0;
  bool have_task = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = tsv::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      auto fields = tsv::split(t);
      if (fields.size() == 3 && fields[0] == "# task") {
        tgt = std::string(fields[1]);
        src = std::string(fields[2]);
        have_task = true;
      }
      continue;
    }
    if (!have_task)
      throw ParseError("instance file: missing '# task' header");
    auto fields = tsv::split(line);
    if (fields.size() != 3)
      throw ParseError("instance file line " + std::to_string(lineno) +
                       ": expected u<TAB>v<TAB>label");
    std::string u(tsv::trim(fields[0])), v(tsv::trim(fields[1]));
    std::string_view label = tsv::trim(fields[2]);
    if (label != "0" && label != "1")
      throw ParseError("instance file line " + std::to_string(lineno) +
                       ": label must be 0 or 1");
    PairKey key = PairKey::make(u, v, tgt, src);
    if (label == "1")
      out.positives.push_back(std::move(key));
    else
      out.negatives.push_back(std::move(key));
  }
  if (!have_task) throw ParseError("instance file: missing '# task' header");
  if (target) *target = tgt;
  if (source) *source = src;
  return out;
}

const MethodResult* EvalReport::method(const std::string& name) const {
  for (const auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

std::string EvalReport::to_kv() const {
  std::ostringstream os;
  os << "# crossnet report v1\n";
  os << "task.target: " << target << "\n";
  os << "task.source: " << source << "\n";
  os << "fingerprint: " << fingerprint << "\n";
  for (const auto& [k, v] : config_fields) os << "config." << k << ": " << v << "\n";
  for (const auto& m : methods) {
    const std::string p = "method." + m.name + ".";
    os << p << "runs: " << m.per_run.size() << "\n";
    for (std::size_t r = 0; r < m.per_run.size(); ++r) {
      const std::string rp = p + "run" + std::to_string(r + 1) + ".";
      os << rp << "precision: " << tsv::fixed(m.per_run[r].precision, 6) << "\n";
      os << rp << "recall: " << tsv::fixed(m.per_run[r].recall, 6) << "\n";
      os << rp << "f1: " << tsv::fixed(m.per_run[r].f1, 6) << "\n";
    }
    os << p << "avg.precision: " << tsv::fixed(m.averaged.precision, 6) << "\n";
    os << p << "avg.recall: " << tsv::fixed(m.averaged.recall, 6) << "\n";
    os << p << "avg.f1: " << tsv::fixed(m.averaged.f1, 6) << "\n";
    os << p << "precision_gt_recall: " << (m.precision_gt_recall ? 1 : 0) << "\n";
    if (!m.subset_sizes.empty() || m.subset_empty) {
      os << p << "subset_empty: " << (m.subset_empty ? 1 : 0) << "\n";
      for (std::size_t r = 0; r < m.subset_sizes.size(); ++r)
        os << p << "run" << r + 1 << ".subset_size: " << m.subset_sizes[r] << "\n";
    }
    for (const auto& at : m.curve) {
      const std::string kp = p + "curve.k" + std::to_string(at.k) + ".";
      os << kp << "precision: " << tsv::fixed(at.precision, 6) << "\n";
      os << kp << "recall: " << tsv::fixed(at.recall, 6) << "\n";
      os << kp << "f1: " << tsv::fixed(at.f1, 6) << "\n";
    }
  }
  if (best_unsupervised_avg_f1)
    os << "unsupervised_best.avg_f1: " << tsv::fixed(*best_unsupervised_avg_f1, 6)
       << "\n";
  return os.str();
}

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os << "task,method,avg_precision,avg_recall,avg_f1,precision_gt_recall\n";
  const std::string task = target + "<-" + source;
  for (const auto& m : methods) {
    os << task << "," << m.name << "," << tsv::fixed(m.averaged.precision, 6)
       << "," << tsv::fixed(m.averaged.recall, 6) << ","
       << tsv::fixed(m.averaged.f1, 6) << "," << (m.precision_gt_recall ? 1 : 0)
       << "\n";
  }
  return os.str();
}

KGrid KGrid::default_grid() {
  KGrid g;
  for (std::size_t k = 1000; k <= 10000; k += 1000) g.ks.push_back(k);
  return g;
}

namespace {

ClassMetrics average(const std::vector<ClassMetrics>& runs) {
  ClassMetrics avg;
  if (runs.empty()) return avg;
  for (const auto& r : runs) {
    avg.precision += r.precision;
    avg.recall += r.recall;
    avg.f1 += r.f1;
  }
  auto n = static_cast<double>(runs.size());
  avg.precision /= n;
  avg.recall /= n;
  avg.f1 /= n;
  return avg;
}

void add_sampling_fields(std::vector<std::pair<std::string, std::string>>& fields,
                         const SamplingConfig& cfg) {
  fields.emplace_back("positives", std::to_string(cfg.positives));
  fields.emplace_back("negatives", std::to_string(cfg.negatives));
  fields.emplace_back("min_negatives_with_common_neighbor",
                      std::to_string(cfg.min_negatives_with_common_neighbor));
  fields.emplace_back("seed", std::to_string(cfg.seed));
}

std::string fingerprint_of(const EvalReport& report) {
  std::uint64_t h = fnv1a(report.target);
  h = fnv1a(report.source, h);
  for (const auto& [k, v] : report.config_fields) {
    h = fnv1a(k, h);
    h = fnv1a(v, h);
  }
  return hex64(h);
}

}  // namespace

EvalReport run_unsupervised(const MultiNetworkGraph& g, const IdentityMap& match,
                            const SamplingConfig& cfg,
                            const std::vector<UnsupervisedRow>& rows,
                            const KGrid& grid, int jobs) {
  (void)jobs;
  if (rows.empty()) throw ValidationError("run_unsupervised: no measures given");
  Instances ins = sample_instances(g, match, cfg);
  MultiNetworkGraph scoring = holdout_graph(g, ins.positives);
  auto flat = ins.flattened();
  const std::size_t P = ins.positives.size();
  const std::size_t N = flat.size();

  // K grid clipped to the pool size, K = P always included.
  std::vector<std::size_t> ks;
  for (std::size_t k : grid.ks)
    if (k >= 1 && k <= N) ks.push_back(k);
  ks.push_back(P);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  EvalReport report;
  report.target = cfg.target_network;
  report.source = cfg.source_network;
  add_sampling_fields(report.config_fields, cfg);
  {
    std::string m;
    for (const auto& row : rows) {
      if (!m.empty()) m += "+";
      m += row.name();
    }
    report.config_fields.emplace_back("measures", m);
    std::string kstr;
    for (std::size_t k : ks) {
      if (!kstr.empty()) kstr += "+";
      kstr += std::to_string(k);
    }
    report.config_fields.emplace_back("k_grid", kstr);
    report.config_fields.emplace_back("graph", graph_signature(g));
  }

  for (const auto& row : rows) {
    RankedList ranked = rank_pairs(flat, row.measure, row.network, scoring, match);
    MethodResult mr;
    mr.name = row.name();
    for (std::size_t k : ks) mr.curve.push_back(metrics_at_k(ranked, k, P));
    MetricsAtK at_p = metrics_at_k(ranked, P, P);
    mr.per_run.push_back({at_p.precision, at_p.recall, at_p.f1});
    mr.averaged = mr.per_run.front();
    mr.precision_gt_recall = mr.averaged.precision > mr.averaged.recall;
    report.methods.push_back(std::move(mr));
  }

  // Analytic expectation of the random baseline: Prec@K = P/N, Rec@K = K/N.
  {
    MethodResult base;
    base.name = "random_baseline";
    auto dP = static_cast<double>(P), dN = static_cast<double>(N);
    for (std::size_t k : ks) {
      MetricsAtK at;
      at.k = k;
      at.precision = dP / dN;
      at.recall = static_cast<double>(k) / dN;
      at.f1 = (at.precision + at.recall) > 0.0
                  ? 2.0 * at.precision * at.recall / (at.precision + at.recall)
                  : 0.0;
      base.curve.push_back(at);
    }
    base.per_run.push_back({dP / dN, dP / dN, dP / dN});
    base.averaged = base.per_run.front();
    report.methods.push_back(std::move(base));
  }

  report.fingerprint = fingerprint_of(report);
  return report;
}

SupervisedResult run_supervised(const MultiNetworkGraph& g,
                                const IdentityMap& match,
                                const ProfileTable& profiles,
                                const SupervisedOptions& opts) {
  if (opts.runs == 0) throw ValidationError("run_supervised: runs must be >= 1");
  if (opts.configs.empty())
    throw ValidationError("run_supervised: no feature configs given");

  const CategoryThresholds thresholds = CategoryThresholds::from_profiles(profiles);
  const auto all_names = feature_names(FeatureConfig::ALL);
  std::map<std::string, std::size_t> column_of;
  for (std::size_t j = 0; j < all_names.size(); ++j) column_of[all_names[j]] = j;

  SupervisedResult result;
  EvalReport& report = result.report;
  report.target = opts.sampling.target_network;
  report.source = opts.sampling.source_network;
  add_sampling_fields(report.config_fields, opts.sampling);
  report.config_fields.emplace_back("runs", std::to_string(opts.runs));
  {
    std::string cfgs;
    for (auto c : opts.configs) {
      if (!cfgs.empty()) cfgs += "+";
      cfgs += to_string(c);
    }
    report.config_fields.emplace_back("feature_configs", cfgs);
  }
  report.config_fields.emplace_back("svm_lambda",
                                    tsv::full(opts.train_config.lambda));
  report.config_fields.emplace_back("svm_epochs",
                                    std::to_string(opts.train_config.epochs));
  report.config_fields.emplace_back("category_mean_sim",
                                    tsv::full(thresholds.mean_sim));
  report.config_fields.emplace_back("category_mean_even",
                                    tsv::full(thresholds.mean_even));
  report.config_fields.emplace_back("graph", graph_signature(g));

  std::map<std::string, std::vector<ClassMetrics>> per_config_runs;
  std::vector<double> best_unsup_per_run;

  for (std::size_t r = 0; r < opts.runs; ++r) {
    const std::uint64_t run_seed = opts.sampling.seed + r;
    RunData run;

    SamplingConfig train_cfg = opts.sampling;
    train_cfg.seed = run_seed;
    run.train = sample_instances(g, match, train_cfg);

    std::vector<PairKey> exclude;
    exclude.insert(exclude.end(), run.train.positives.begin(),
                   run.train.positives.end());
    exclude.insert(exclude.end(), run.train.negatives.begin(),
                   run.train.negatives.end());
    SamplingConfig test_cfg = opts.sampling;
    test_cfg.seed = run_seed + (1ull << 32);  // distinct from every run seed
    run.test = sample_instances(g, match, test_cfg, &exclude);

    MultiNetworkGraph train_scoring = holdout_graph(g, run.train.positives);
    MultiNetworkGraph test_scoring = holdout_graph(g, run.test.positives);

    auto train_flat = run.train.flattened();
    run.test_flat = run.test.flattened();

    auto train_features = extract_batch(train_flat, train_scoring, match, profiles,
                                        thresholds, FeatureConfig::ALL, opts.jobs);
    auto test_features = extract_batch(run.test_flat, test_scoring, match, profiles,
                                       thresholds, FeatureConfig::ALL, opts.jobs);

    run.test_qualifies.resize(run.test_flat.size(), 0);
    const NetworkId& tgt = opts.sampling.target_network;
    parallel_for(run.test_flat.size(), opts.jobs, [&](std::size_t i) {
      const PairKey& p = run.test_flat[i].first;
      for (const auto& z : test_scoring.common_friends(tgt, p.u, p.v)) {
        if (profiles.by_account(tgt, z)) {
          run.test_qualifies[i] = 1;
          break;
        }
      }
    });

    for (FeatureConfig config : opts.configs) {
      auto names = feature_names(config);
      std::vector<std::size_t> cols;
      cols.reserve(names.size());
      for (const auto& n : names) cols.push_back(column_of.at(n));

      auto project = [&](const std::vector<std::pair<PairKey, int>>& flat,
                         const std::vector<std::vector<double>>& full) {
        std::vector<LabeledInstance> out(flat.size());
        for (std::size_t i = 0; i < flat.size(); ++i) {
          out[i].pair = flat[i].first;
          out[i].label = flat[i].second;
          out[i].features.reserve(cols.size());
          for (std::size_t c : cols) out[i].features.push_back(full[i][c]);
        }
        return out;
      };

      auto train_set = project(train_flat, train_features);
      auto test_set = project(run.test_flat, test_features);

      SvmTrainConfig tc = opts.train_config;
      tc.seed = run_seed;
      LinearModel model = train(train_set, names, config, tc);

      std::vector<int>& preds = run.predictions[to_string(config)];
      preds.resize(test_set.size());
      std::size_t tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < test_set.size(); ++i) {
        preds[i] = predict(model, test_set[i].features).first;
        if (preds[i] == 1 && test_set[i].label == 1) ++tp;
        else if (preds[i] == 1) ++fp;
        else if (test_set[i].label == 1) ++fn;
      }
      per_config_runs[to_string(config)].push_back(metrics_from_counts(tp, fp, fn));
    }

    // Best unsupervised F1 at K = P on this run's test pool, for comparison.
    double best = 0.0;
    const std::size_t P = run.test.positives.size();
    for (Measure m : {Measure::CN, Measure::JC, Measure::AA}) {
      for (const NetworkId& net :
           {opts.sampling.target_network, opts.sampling.source_network}) {
        RankedList ranked = rank_pairs(run.test_flat, m, net, test_scoring, match);
        best = std::max(best, metrics_at_k(ranked, P, P).f1);
      }
    }
    best_unsup_per_run.push_back(best);

    result.runs.push_back(std::move(run));
  }

  for (FeatureConfig config : opts.configs) {
    MethodResult mr;
    mr.name = to_string(config);
    mr.per_run = per_config_runs[mr.name];
    mr.averaged = average(mr.per_run);
    mr.precision_gt_recall = mr.averaged.precision > mr.averaged.recall;
    report.methods.push_back(std::move(mr));
  }
  report.best_unsupervised_avg_f1 =
      std::accumulate(best_unsup_per_run.begin(), best_unsup_per_run.end(), 0.0) /
      static_cast<double>(best_unsup_per_run.size());
  report.fingerprint = fingerprint_of(report);
  return result;
}

EvalReport subset_analysis(const SupervisedResult& result,
                           const std::vector<FeatureConfig>& configs) {
  EvalReport report;
  report.target = result.report.target;
  report.source = result.report.source;
  report.config_fields = result.report.config_fields;
  report.config_fields.emplace_back("subset",
                                    "test instances with >= 1 profiled common "
                                    "neighbor in the target network");

  for (FeatureConfig config : configs) {
    MethodResult mr;
    mr.name = to_string(config);
    bool any = false;
    for (const auto& run : result.runs) {
      auto it = run.predictions.find(mr.name);
      if (it == run.predictions.end())
        throw ValidationError("subset_analysis: no predictions for config " +
                              mr.name);
      const auto& preds = it->second;
      std::size_t tp = 0, fp = 0, fn = 0, size = 0;
      for (std::size_t i = 0; i < run.test_flat.size(); ++i) {
        if (!run.test_qualifies[i]) continue;
        ++size;
        int label = run.test_flat[i].second;
        if (preds[i] == 1 && label == 1) ++tp;
        else if (preds[i] == 1) ++fp;
        else if (label == 1) ++fn;
      }
      mr.subset_sizes.push_back(size);
      if (size > 0) any = true;
      mr.per_run.push_back(metrics_from_counts(tp, fp, fn));
    }
    mr.subset_empty = !any;
    mr.averaged = average(mr.per_run);
    mr.precision_gt_recall = mr.averaged.precision > mr.averaged.recall;
    report.methods.push_back(std::move(mr));
  }
  report.fingerprint = fingerprint_of(report);
  return report;
}

namespace {

MeasureDistribution distribution_of(std::vector<double> values) {
  MeasureDistribution d;
  d.mean = stats::mean(values);
  std::sort(values.begin(), values.end());
  d.q1 = stats::quantile_sorted(values, 0.25);
  d.q2 = stats::quantile_sorted(values, 0.50);
  d.q3 = stats::quantile_sorted(values, 0.75);
  for (double v : values) {
    auto bin = static_cast<long>(v * 20.0);
    bin = std::clamp(bin, 0l, 19l);
    ++d.histogram[static_cast<std::size_t>(bin)];
  }
  return d;
}

}  // namespace

DistributionStats distribution_stats(const ProfileTable& profiles) {
  if (profiles.empty())
    throw ValidationError("distribution_stats: empty profile table");
  std::vector<double> sim, even;
  sim.reserve(profiles.size());
  even.reserve(profiles.size());
  for (const auto& e : profiles.entries()) {
    sim.push_back(e.profile.f_sim);
    even.push_back(e.profile.f_even);
  }

  DistributionStats out;
  out.count = profiles.size();
  out.sim = distribution_of(sim);
  out.even = distribution_of(even);

  // Top/bottom f_even deciles and their mean f_sim.
  std::vector<std::size_t> order(profiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (even[a] != even[b]) return even[a] < even[b];
    return a < b;
  });
  out.decile_size = std::max<std::size_t>(1, profiles.size() / 10);
  double bottom = 0.0, top = 0.0;
  for (std::size_t i = 0; i < out.decile_size; ++i) {
    bottom += sim[order[i]];
    top += sim[order[order.size() - 1 - i]];
  }
  out.bottom_even_decile_mean_sim = bottom / static_cast<double>(out.decile_size);
  out.top_even_decile_mean_sim = top / static_cast<double>(out.decile_size);
  return out;
}

std::string DistributionStats::to_kv() const {
  std::ostringstream os;
  os << "count: " << count << "\n";
  auto emit = [&os](const char* name, const MeasureDistribution& d) {
    os << name << ".mean: " << tsv::fixed(d.mean, 6) << "\n";
    os << name << ".q1: " << tsv::fixed(d.q1, 6) << "\n";
    os << name << ".q2: " << tsv::fixed(d.q2, 6) << "\n";
    os << name << ".q3: " << tsv::fixed(d.q3, 6) << "\n";
    for (std::size_t b = 0; b < d.histogram.size(); ++b)
      os << name << ".hist." << b << ": " << d.histogram[b] << "\n";
  };
  emit("f_sim", sim);
  emit("f_even", even);
  os << "decile_size: " << decile_size << "\n";
  os << "top_even_decile.mean_f_sim: " << tsv::fixed(top_even_decile_mean_sim, 6)
     << "\n";
  os << "bottom_even_decile.mean_f_sim: "
     << tsv::fixed(bottom_even_decile_mean_sim, 6) << "\n";
  return os.str();
}

stats::Chi2Result independence_test(const ProfileTable& profiles, int bins) {
  if (bins < 2) throw ValidationError("independence_test: need >= 2 bins");
  if (profiles.empty())
    throw ValidationError("independence_test: empty profile table");
  std::vector<double> sim, even;
  for (const auto& e : profiles.entries()) {
    sim.push_back(e.profile.f_sim);
    even.push_back(e.profile.f_even);
  }
  auto sim_bins = stats::quantile_bins(sim, bins);
  auto even_bins = stats::quantile_bins(even, bins);
  std::vector<std::vector<std::int64_t>> table(
      static_cast<std::size_t>(bins),
      std::vector<std::int64_t>(static_cast<std::size_t>(bins), 0));
  for (std::size_t i = 0; i < sim_bins.size(); ++i)
    ++table[sim_bins[i]][even_bins[i]];
  return stats::chi2_independence(table);
}

double correlation(const ProfileTable& profiles) {
  std::vector<double> sim, even;
  for (const auto& e : profiles.entries()) {
    sim.push_back(e.profile.f_sim);
    even.push_back(e.profile.f_even);
  }
  return stats::pearson(sim, even);
}

}  // namespace crossnet
