#include "crossnet/maintenance.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

#include "crossnet/errors.hpp"
#include "crossnet/parallel.hpp"
#include "crossnet/tsv.hpp"

namespace crossnet {

std::string LinkedUser::key() const {
  std::string out;
  for (const auto& [net, id] : accounts) {
    if (!out.empty()) out.push_back('|');
    out += net;
    out.push_back(':');
    out += id;
  }
  return out;
}

PersonFriendSets resolve_person_sets(
    const std::map<NetworkId, std::vector<std::string>>& friend_sets,
    const IdentityMap& match) {
  PersonFriendSets out;
  for (const auto& [net, ids] : friend_sets) {
    std::vector<std::string> keys;
    keys.reserve(ids.size());
    for (const auto& id : ids) keys.push_back(match.person_key({net, id}));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    out.emplace(net, std::move(keys));
  }
  return out;
}

PersonFriendSets person_friend_sets(const LinkedUser& user,
                                    const MultiNetworkGraph& g,
                                    const IdentityMap& match) {
  std::map<NetworkId, std::vector<std::string>> raw;
  for (const auto& [net, id] : user.accounts) raw.emplace(net, g.friends({net, id}));
  return resolve_person_sets(raw, match);
}

namespace {

struct SetCounts {
  std::size_t n = 0;              // number of networks
  std::int64_t union_size = 0;    // distinct persons across networks
  std::int64_t inter_size = 0;    // persons present in every network
  std::vector<std::pair<NetworkId, std::int64_t>> per_network;
};

SetCounts count_sets(const PersonFriendSets& sets) {
  SetCounts c;
  c.n = sets.size();
  std::map<std::string, std::size_t> occurrences;
  for (const auto& [net, keys] : sets) {
    c.per_network.emplace_back(net, static_cast<std::int64_t>(keys.size()));
    for (const auto& k : keys) ++occurrences[k];
  }
  c.union_size = static_cast<std::int64_t>(occurrences.size());
  for (const auto& [k, cnt] : occurrences)
    if (cnt == c.n) ++c.inter_size;
  return c;
}

void require_multi(const SetCounts& c) {
  if (c.n < 2)
    throw ValidationError("friendship measures need at least two networks");
}

}  // namespace

double friendship_similarity(const PersonFriendSets& sets) {
  SetCounts c = count_sets(sets);
  require_multi(c);
  if (c.union_size == 0) return 0.0;
  return static_cast<double>(c.inter_size) / static_cast<double>(c.union_size);
}

double similarity_upper_bound(const PersonFriendSets& sets) {
  SetCounts c = count_sets(sets);
  require_multi(c);
  std::int64_t lo = c.per_network.front().second, hi = lo;
  for (const auto& [net, cnt] : c.per_network) {
    lo = std::min(lo, cnt);
    hi = std::max(hi, cnt);
  }
  if (hi == 0) return 1.0;  // no friends anywhere: F_sim = 0 bounds vacuously
  return static_cast<double>(lo) / static_cast<double>(hi);
}

double expected_even_share(double f_sim, std::size_t n) {
  if (n < 2) throw ValidationError("expected_even_share: n must be >= 2");
  auto dn = static_cast<double>(n);
  return (1.0 + (dn - 1.0) * f_sim) / dn;
}

double friend_ratio(const PersonFriendSets& sets, const NetworkId& network) {
  SetCounts c = count_sets(sets);
  require_multi(c);
  auto it = std::find_if(c.per_network.begin(), c.per_network.end(),
                         [&](const auto& p) { return p.first == network; });
  if (it == c.per_network.end())
    throw ValidationError("friend_ratio: unknown network '" + network + "'");
  if (c.union_size == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(c.union_size);
}

namespace {

// F_even = (n*U - sum_i |n*c_i - U - (n-1)*I|) / (n*U), all terms integral.
double evenness_from_counts(const SetCounts& c) {
  if (c.union_size == 0) return 0.0;
  auto n = static_cast<std::int64_t>(c.n);
  std::int64_t expected_num = c.union_size + (n - 1) * c.inter_size;  // of /(n*U)
  std::int64_t deviation = 0;
  for (const auto& [net, cnt] : c.per_network)
    deviation += std::llabs(n * cnt - expected_num);
  return static_cast<double>(n * c.union_size - deviation) /
         static_cast<double>(n * c.union_size);
}

}  // namespace

double friendship_evenness(const PersonFriendSets& sets) {
  SetCounts c = count_sets(sets);
  require_multi(c);
  return evenness_from_counts(c);
}

MaintenanceProfile profile_from_sets(const PersonFriendSets& sets) {
  SetCounts c = count_sets(sets);
  require_multi(c);
  MaintenanceProfile p;
  p.total_unique_friends = static_cast<std::size_t>(c.union_size);

  std::int64_t lo = c.per_network.front().second, hi = lo;
  for (const auto& [net, cnt] : c.per_network) {
    lo = std::min(lo, cnt);
    hi = std::max(hi, cnt);
  }
  p.f_sim_upper = hi == 0 ? 1.0
                          : static_cast<double>(lo) / static_cast<double>(hi);
  if (c.union_size > 0)
    p.f_sim = static_cast<double>(c.inter_size) / static_cast<double>(c.union_size);
  p.f_equal = expected_even_share(p.f_sim, c.n);
  for (const auto& [net, cnt] : c.per_network)
    p.f_in[net] = c.union_size == 0
                      ? 0.0
                      : static_cast<double>(cnt) / static_cast<double>(c.union_size);
  p.f_even = evenness_from_counts(c);
  p.f_even_out_of_range = c.n > 2 && (p.f_even < 0.0 || p.f_even > 1.0);
  return p;
}

double friendship_similarity(
    const std::map<NetworkId, std::vector<std::string>>& friend_sets,
    const IdentityMap& match) {
  return friendship_similarity(resolve_person_sets(friend_sets, match));
}

double friend_ratio(
    const std::map<NetworkId, std::vector<std::string>>& friend_sets,
    const NetworkId& network, const IdentityMap& match) {
  return friend_ratio(resolve_person_sets(friend_sets, match), network);
}

double friendship_evenness(
    const std::map<NetworkId, std::vector<std::string>>& friend_sets,
    const IdentityMap& match) {
  return friendship_evenness(resolve_person_sets(friend_sets, match));
}

MaintenanceProfile profile(const LinkedUser& user, const MultiNetworkGraph& g,
                           const IdentityMap& match) {
  return profile_from_sets(person_friend_sets(user, g, match));
}

void ProfileTable::add(LinkedUser user, MaintenanceProfile profile) {
  std::size_t idx = entries_.size();
  for (const auto& [net, id] : user.accounts) {
    if (!by_account_.emplace(UserRef{net, id}.key(), idx).second)
      throw ValidationError("account " + net + ":" + id +
                            " already has a profile");
  }
  entries_.push_back({std::move(user), std::move(profile)});
}

const MaintenanceProfile* ProfileTable::by_account(
    const NetworkId& n, const std::string& local_id) const {
  auto it = by_account_.find(UserRef{n, local_id}.key());
  if (it == by_account_.end()) return nullptr;
  return &entries_[it->second].profile;
}

ProfileTable ProfileTable::compute(const std::vector<LinkedUser>& users,
                                   const MultiNetworkGraph& g,
                                   const IdentityMap& match, int jobs) {
  std::vector<LinkedUser> order = users;
  std::sort(order.begin(), order.end(),
            [](const LinkedUser& a, const LinkedUser& b) { return a.key() < b.key(); });
  std::vector<MaintenanceProfile> profiles(order.size());
  parallel_for(order.size(), jobs, [&](std::size_t i) {
    profiles[i] = profile(order[i], g, match);
  });
  ProfileTable table;
  for (std::size_t i = 0; i < order.size(); ++i)
    table.add(std::move(order[i]), std::move(profiles[i]));
  return table;
}

void ProfileTable::save(std::ostream& out) const {
  out << "# crossnet profiles v1\n";
  std::vector<const Entry*> order;
  order.reserve(entries_.size());
  for (const auto& e : entries_) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Entry* a, const Entry* b) {
    return a->user.key() < b->user.key();
  });
  for (const Entry* e : order) {
    out << e->user.key() << "\t" << tsv::fixed(e->profile.f_sim, 6) << "\t"
        << tsv::fixed(e->profile.f_sim_upper, 6) << "\t"
        << tsv::fixed(e->profile.f_equal, 6) << "\t"
        << tsv::fixed(e->profile.f_even, 6) << "\tf_in:";
    bool first = true;
    for (const auto& [net, v] : e->profile.f_in) {
      if (!first) out << ";";
      out << net << "=" << tsv::fixed(v, 6);
      first = false;
    }
    out << "\n";
  }
}

ProfileTable ProfileTable::load(std::istream& in) {
  ProfileTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (tsv::is_comment_or_blank(line)) continue;
    auto fields = tsv::split(line);
    if (fields.size() != 6)
      throw ParseError("profile file line " + std::to_string(lineno) +
                       ": expected 6 fields");
    Entry e;
    // user key: net:id parts joined by '|'
    std::string_view key = tsv::trim(fields[0]);
    std::size_t start = 0;
    std::string key_str(key);
    while (start <= key_str.size()) {
      std::size_t bar = key_str.find('|', start);
      std::string part = key_str.substr(
          start, bar == std::string::npos ? std::string::npos : bar - start);
      auto colon = part.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == part.size())
        throw ParseError("profile file line " + std::to_string(lineno) +
                         ": bad user key '" + key_str + "'");
      e.user.accounts[part.substr(0, colon)] = part.substr(colon + 1);
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    auto need_double = [&](std::string_view s, double& out_val) {
      if (!tsv::parse_double(tsv::trim(s), out_val))
        throw ParseError("profile file line " + std::to_string(lineno) +
                         ": bad number '" + std::string(s) + "'");
    };
    need_double(fields[1], e.profile.f_sim);
    need_double(fields[2], e.profile.f_sim_upper);
    need_double(fields[3], e.profile.f_equal);
    need_double(fields[4], e.profile.f_even);
    std::string_view fin = tsv::trim(fields[5]);
    if (fin.substr(0, 5) != "f_in:")
      throw ParseError("profile file line " + std::to_string(lineno) +
                       ": missing f_in section");
    fin.remove_prefix(5);
    std::string fin_str(fin);
    start = 0;
    while (start < fin_str.size()) {
      std::size_t semi = fin_str.find(';', start);
      std::string part = fin_str.substr(
          start, semi == std::string::npos ? std::string::npos : semi - start);
      auto eq = part.find('=');
      if (eq == std::string::npos)
        throw ParseError("profile file line " + std::to_string(lineno) +
                         ": bad f_in entry '" + part + "'");
      double v;
      need_double(part.substr(eq + 1), v);
      e.profile.f_in[part.substr(0, eq)] = v;
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    table.add(std::move(e.user), std::move(e.profile));
  }
  return table;
}

std::vector<LinkedUser> linked_users(
    const IdentityMap& match,
    const std::vector<std::pair<UserRef, UserRef>>& base_pairs) {
  std::map<std::string, LinkedUser> users;
  auto insert_pair = [&](const UserRef& a, const UserRef& b) {
    LinkedUser u;
    u.accounts[a.network] = a.local_id;
    u.accounts[b.network] = b.local_id;
    users.emplace(u.key(), std::move(u));
  };
  for (const auto& e : match.edges()) insert_pair(e.left, e.right);
  for (const auto& [a, b] : base_pairs) insert_pair(a, b);
  std::vector<LinkedUser> out;
  out.reserve(users.size());
  for (auto& [key, u] : users) out.push_back(std::move(u));
  return out;
}

}  // namespace crossnet
