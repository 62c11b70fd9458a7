#include "crossnet/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "crossnet/errors.hpp"
#include "crossnet/tsv.hpp"

namespace crossnet {

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::string IngestSummary::to_report() const {
  std::ostringstream os;
  os << "records_read\t" << records_read << "\n";
  os << "duplicate_records\t" << duplicate_records << "\n";
  for (const auto& [n, c] : users_filtered)
    os << "users_filtered\t" << n << "\t" << c << "\n";
  for (const auto& [n, c] : users_kept)
    os << "users_kept\t" << n << "\t" << c << "\n";
  for (const auto& [n, c] : friend_pairs)
    os << "friend_pairs\t" << n << "\t" << c << "\n";
  return os.str();
}

std::string IngestSummary::one_line() const {
  std::uint64_t filtered = 0, users = 0, pairs = 0;
  for (const auto& [n, c] : users_filtered) filtered += c;
  for (const auto& [n, c] : users_kept) users += c;
  for (const auto& [n, c] : friend_pairs) pairs += c;
  std::ostringstream os;
  os << "records=" << records_read << " duplicates=" << duplicate_records
     << " filtered_users=" << filtered << " users=" << users
     << " friend_pairs=" << pairs;
  return os.str();
}

MultiNetworkGraph MultiNetworkGraph::from_records(
    const std::vector<EdgeRecord>& records, const IngestConfig& config,
    IngestSummary* summary) {
  struct Raw {
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::uint32_t> index;
    std::unordered_set<std::uint64_t> edges;
    std::vector<std::uint32_t> indeg;
  };
  std::map<NetworkId, Raw> raw;
  const bool declared = !config.networks_expected.empty();
  for (const auto& n : config.networks_expected) raw[n];

  IngestSummary local;
  IngestSummary& sum = summary ? *summary : local;
  sum = IngestSummary{};

  auto intern = [](Raw& r, const std::string& id) -> std::uint32_t {
    auto it = r.index.find(id);
    if (it != r.index.end()) return it->second;
    auto idx = static_cast<std::uint32_t>(r.ids.size());
    r.ids.push_back(id);
    r.index.emplace(id, idx);
    r.indeg.push_back(0);
    return idx;
  };

  for (const auto& rec : records) {
    ++sum.records_read;
    if (rec.network.empty() || rec.follower.empty() || rec.followee.empty())
      throw ValidationError("edge record with empty field");
    if (rec.follower == rec.followee)
      throw ValidationError("self-follow record for user '" + rec.follower +
                            "' in network '" + rec.network + "'");
    if (declared && raw.find(rec.network) == raw.end())
      throw ValidationError("unknown network label '" + rec.network + "'");
    Raw& r = raw[rec.network];
    std::uint32_t a = intern(r, rec.follower);
    std::uint32_t b = intern(r, rec.followee);
    if (r.edges.insert(pack(a, b)).second)
      ++r.indeg[b];
    else
      ++sum.duplicate_records;
  }

  MultiNetworkGraph g;
  for (auto& [name, r] : raw) {
    // Popularity filter: raw follower count per network, one pass.
    std::vector<char> removed(r.ids.size(), 0);
    std::uint64_t filtered = 0;
    if (config.max_followers > 0) {
      for (std::size_t i = 0; i < r.ids.size(); ++i) {
        if (r.indeg[i] > config.max_followers) {
          removed[i] = 1;
          ++filtered;
        }
      }
    }

    Network& out = g.nets_[name];
    std::vector<std::uint32_t> survivors;
    for (std::uint32_t i = 0; i < r.ids.size(); ++i)
      if (!removed[i]) survivors.push_back(i);
    std::sort(survivors.begin(), survivors.end(),
              [&](std::uint32_t a, std::uint32_t b) { return r.ids[a] < r.ids[b]; });
    std::vector<std::uint32_t> remap(r.ids.size(), 0);
    out.ids.reserve(survivors.size());
    out.adj.resize(survivors.size());
    for (std::uint32_t ni = 0; ni < survivors.size(); ++ni) {
      remap[survivors[ni]] = ni;
      out.ids.push_back(r.ids[survivors[ni]]);
      out.index.emplace(r.ids[survivors[ni]], ni);
    }

    std::uint64_t pairs = 0;
    for (std::uint64_t e : r.edges) {
      auto a = static_cast<std::uint32_t>(e >> 32);
      auto b = static_cast<std::uint32_t>(e & 0xffffffffu);
      if (a > b) continue;  // visit each unordered pair once
      if (removed[a] || removed[b]) continue;
      if (r.edges.count(pack(b, a)) == 0) continue;
      out.adj[remap[a]].push_back(remap[b]);
      out.adj[remap[b]].push_back(remap[a]);
      ++pairs;
    }
    for (auto& nbrs : out.adj) std::sort(nbrs.begin(), nbrs.end());

    sum.users_filtered[name] = filtered;
    sum.users_kept[name] = out.ids.size();
    sum.friend_pairs[name] = pairs;
  }
  return g;
}

MultiNetworkGraph MultiNetworkGraph::load_edge_file(std::istream& in,
                                                    const IngestConfig& config,
                                                    IngestSummary* summary) {
  std::vector<EdgeRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (tsv::is_comment_or_blank(line)) continue;
    auto fields = tsv::split(line);
    if (fields.size() != 3)
      throw ParseError("edge file line " + std::to_string(lineno) +
                       ": expected 3 tab-separated fields, got " +
                       std::to_string(fields.size()));
    std::string network(tsv::trim(fields[0]));
    std::string follower(tsv::trim(fields[1]));
    std::string followee(tsv::trim(fields[2]));
    if (network.empty() || follower.empty() || followee.empty())
      throw ParseError("edge file line " + std::to_string(lineno) +
                       ": empty field");
    if (follower == followee)
      throw ParseError("edge file line " + std::to_string(lineno) +
                       ": self-follow record");
    if (!config.networks_expected.empty() &&
        std::find(config.networks_expected.begin(),
                  config.networks_expected.end(),
                  network) == config.networks_expected.end())
      throw ParseError("edge file line " + std::to_string(lineno) +
                       ": unknown network label '" + network + "'");
    records.push_back({std::move(network), std::move(follower), std::move(followee)});
  }
  return from_records(records, config, summary);
}

void MultiNetworkGraph::save(std::ostream& out) const {
  out << "# crossnet graph v1\n";
  for (const auto& [name, n] : nets_) out << "network\t" << name << "\n";
  for (const auto& [name, n] : nets_) {
    std::vector<std::uint32_t> order(n.ids.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return n.ids[a] < n.ids[b];
    });
    for (std::uint32_t i : order) out << "user\t" << name << "\t" << n.ids[i] << "\n";
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::uint32_t u = 0; u < n.adj.size(); ++u) {
      for (std::uint32_t v : n.adj[u]) {
        if (n.ids[u] < n.ids[v]) pairs.emplace_back(n.ids[u], n.ids[v]);
      }
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [u, v] : pairs)
      out << "friend\t" << name << "\t" << u << "\t" << v << "\n";
  }
}

MultiNetworkGraph MultiNetworkGraph::load(std::istream& in) {
  MultiNetworkGraph g;
  std::string line;
  std::size_t lineno = 0;
  bool headed = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!headed) {
      if (tsv::trim(line) != "# crossnet graph v1")
        throw ParseError("graph file: missing '# crossnet graph v1' header");
      headed = true;
      continue;
    }
    if (tsv::is_comment_or_blank(line)) continue;
    auto fields = tsv::split(line);
    const std::string kind(fields[0]);
    if (kind == "network" && fields.size() == 2) {
      g.ensure_network(std::string(fields[1]));
    } else if (kind == "user" && fields.size() == 3) {
      g.ensure_user(std::string(fields[1]), std::string(fields[2]));
    } else if (kind == "friend" && fields.size() == 4) {
      g.add_friendship(std::string(fields[1]), std::string(fields[2]),
                       std::string(fields[3]));
    } else {
      throw ParseError("graph file line " + std::to_string(lineno) +
                       ": unrecognized record");
    }
  }
  if (!headed) throw ParseError("graph file: empty input");
  return g;
}

std::vector<NetworkId> MultiNetworkGraph::network_ids() const {
  std::vector<NetworkId> out;
  out.reserve(nets_.size());
  for (const auto& [name, n] : nets_) out.push_back(name);
  return out;
}

const MultiNetworkGraph::Network& MultiNetworkGraph::net(const NetworkId& n) const {
  auto it = nets_.find(n);
  if (it == nets_.end())
    throw ValidationError("unknown network '" + n + "'");
  return it->second;
}

MultiNetworkGraph::Network& MultiNetworkGraph::net_mut(const NetworkId& n) {
  auto it = nets_.find(n);
  if (it == nets_.end())
    throw ValidationError("unknown network '" + n + "'");
  return it->second;
}

std::size_t MultiNetworkGraph::user_count(const NetworkId& n) const {
  return net(n).ids.size();
}

void MultiNetworkGraph::ensure_network(const NetworkId& n) {
  if (n.empty()) throw ValidationError("empty network id");
  nets_[n];
}

std::uint32_t MultiNetworkGraph::ensure_user(const NetworkId& n,
                                             const std::string& local_id) {
  if (local_id.empty()) throw ValidationError("empty local id");
  ensure_network(n);
  Network& net = nets_[n];
  auto it = net.index.find(local_id);
  if (it != net.index.end()) return it->second;
  auto idx = static_cast<std::uint32_t>(net.ids.size());
  net.ids.push_back(local_id);
  net.index.emplace(local_id, idx);
  net.adj.emplace_back();
  return idx;
}

std::optional<std::uint32_t> MultiNetworkGraph::user_index(
    const NetworkId& n, const std::string& local_id) const {
  const Network& network = net(n);
  auto it = network.index.find(local_id);
  if (it == network.index.end()) return std::nullopt;
  return it->second;
}

const std::string& MultiNetworkGraph::user_id(const NetworkId& n,
                                              std::uint32_t index) const {
  return net(n).ids.at(index);
}

std::vector<std::string> MultiNetworkGraph::user_ids(const NetworkId& n) const {
  std::vector<std::string> out = net(n).ids;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> MultiNetworkGraph::friends(const UserRef& u) const {
  const Network& network = net(u.network);
  auto it = network.index.find(u.local_id);
  if (it == network.index.end()) return {};
  std::vector<std::string> out;
  out.reserve(network.adj[it->second].size());
  for (std::uint32_t v : network.adj[it->second]) out.push_back(network.ids[v]);
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::uint32_t>& MultiNetworkGraph::friends_by_index(
    const NetworkId& n, std::uint32_t index) const {
  return net(n).adj.at(index);
}

std::size_t MultiNetworkGraph::friend_degree(const NetworkId& n,
                                             const std::string& local_id) const {
  const Network& network = net(n);
  auto it = network.index.find(local_id);
  if (it == network.index.end()) return 0;
  return network.adj[it->second].size();
}

bool MultiNetworkGraph::are_friends(const NetworkId& n, const std::string& u,
                                    const std::string& v) const {
  const Network& network = net(n);
  auto iu = network.index.find(u);
  auto iv = network.index.find(v);
  if (iu == network.index.end() || iv == network.index.end()) return false;
  const auto& nbrs = network.adj[iu->second];
  return std::binary_search(nbrs.begin(), nbrs.end(), iv->second);
}

std::vector<std::string> MultiNetworkGraph::common_friends(
    const NetworkId& n, const std::string& u, const std::string& v) const {
  const Network& network = net(n);
  auto iu = network.index.find(u);
  auto iv = network.index.find(v);
  if (iu == network.index.end() || iv == network.index.end()) return {};
  const auto& a = network.adj[iu->second];
  const auto& b = network.adj[iv->second];
  std::vector<std::uint32_t> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(inter));
  std::vector<std::string> out;
  out.reserve(inter.size());
  for (std::uint32_t z : inter) out.push_back(network.ids[z]);
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::size_t, std::size_t> MultiNetworkGraph::degree_histogram(
    const NetworkId& n) const {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& nbrs : net(n).adj) ++hist[nbrs.size()];
  return hist;
}

std::size_t MultiNetworkGraph::friend_pair_count(const NetworkId& n) const {
  std::size_t degree_sum = 0;
  for (const auto& nbrs : net(n).adj) degree_sum += nbrs.size();
  return degree_sum / 2;
}

void MultiNetworkGraph::add_friendship(const NetworkId& n, const std::string& u,
                                       const std::string& v) {
  if (u == v)
    throw ValidationError("self friendship for '" + u + "' in '" + n + "'");
  std::uint32_t iu = ensure_user(n, u);
  std::uint32_t iv = ensure_user(n, v);
  Network& network = nets_[n];
  auto insert_sorted = [](std::vector<std::uint32_t>& vec, std::uint32_t x) {
    auto it = std::lower_bound(vec.begin(), vec.end(), x);
    if (it == vec.end() || *it != x) vec.insert(it, x);
  };
  insert_sorted(network.adj[iu], iv);
  insert_sorted(network.adj[iv], iu);
}

void MultiNetworkGraph::remove_friendship(const NetworkId& n, const std::string& u,
                                          const std::string& v) {
  Network& network = net_mut(n);
  auto iu = network.index.find(u);
  auto iv = network.index.find(v);
  auto erase_sorted = [](std::vector<std::uint32_t>& vec, std::uint32_t x) {
    auto it = std::lower_bound(vec.begin(), vec.end(), x);
    if (it == vec.end() || *it != x) return false;
    vec.erase(it);
    return true;
  };
  if (iu == network.index.end() || iv == network.index.end() ||
      !erase_sorted(network.adj[iu->second], iv->second) ||
      !erase_sorted(network.adj[iv->second], iu->second))
    throw ValidationError("friend pair (" + u + ", " + v + ") not present in '" +
                          n + "'");
}

void MultiNetworkGraph::check_invariants() const {
  for (const auto& [name, network] : nets_) {
    for (std::uint32_t u = 0; u < network.adj.size(); ++u) {
      for (std::uint32_t v : network.adj[u]) {
        if (v == u)
          throw ValidationError("self loop in friend adjacency of '" + name + "'");
        const auto& back = network.adj[v];
        if (!std::binary_search(back.begin(), back.end(), u))
          throw ValidationError("asymmetric friend adjacency in '" + name + "'");
      }
    }
  }
}

bool MultiNetworkGraph::operator==(const MultiNetworkGraph& other) const {
  std::ostringstream a, b;
  save(a);
  other.save(b);
  return a.str() == b.str();
}

}  // namespace crossnet
