#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "crossnet/graph.hpp"
#include "crossnet/identity.hpp"

namespace crossnet {

/// A person with one account per network in the measurement set.
struct LinkedUser {
  std::map<NetworkId, std::string> accounts;

  std::string key() const;  // "netA:idA|netB:idB" with networks sorted
};

struct MaintenanceProfile {
  double f_sim = 0.0;
  double f_sim_upper = 0.0;
  double f_equal = 0.0;
  double f_even = 0.0;
  std::map<NetworkId, double> f_in;
  std::size_t total_unique_friends = 0;
  /// Only reachable with more than two networks, where the evenness formula
  /// is evaluated as written and may leave [0, 1].
  bool f_even_out_of_range = false;
};

/// Person-level friend sets: per network, the sorted set of person keys a
/// user is friends with. Friends matched across networks share one key.
using PersonFriendSets = std::map<NetworkId, std::vector<std::string>>;

/// Resolves account-level friend sets to person keys through the identity
/// map: two accounts count as one person iff the map links them.
PersonFriendSets resolve_person_sets(
    const std::map<NetworkId, std::vector<std::string>>& friend_sets,
    const IdentityMap& match);
PersonFriendSets person_friend_sets(const LinkedUser& user,
                                    const MultiNetworkGraph& g,
                                    const IdentityMap& match);

// Measures over person-level sets. All ratios are formed from integer counts
// with a single final division, so worked examples are bit-stable.
double friendship_similarity(const PersonFriendSets& sets);
double similarity_upper_bound(const PersonFriendSets& sets);
double expected_even_share(double f_sim, std::size_t n);
double friend_ratio(const PersonFriendSets& sets, const NetworkId& network);
double friendship_evenness(const PersonFriendSets& sets);
MaintenanceProfile profile_from_sets(const PersonFriendSets& sets);

// Convenience overloads that resolve through the identity map first.
double friendship_similarity(
    const std::map<NetworkId, std::vector<std::string>>& friend_sets,
    const IdentityMap& match);
double friend_ratio(
    const std::map<NetworkId, std::vector<std::string>>& friend_sets,
    const NetworkId& network, const IdentityMap& match);
double friendship_evenness(
    const std::map<NetworkId, std::vector<std::string>>& friend_sets,
    const IdentityMap& match);

/// All five measures for one user, computed from the same person-level sets.
MaintenanceProfile profile(const LinkedUser& user, const MultiNetworkGraph& g,
                           const IdentityMap& match);

/// Profile collection with per-account lookup and the on-disk format
/// user_key<TAB>f_sim<TAB>f_sim_upper<TAB>f_equal<TAB>f_even<TAB>f_in:...
class ProfileTable {
 public:
  struct Entry {
    LinkedUser user;
    MaintenanceProfile profile;
  };

  void add(LinkedUser user, MaintenanceProfile profile);
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const MaintenanceProfile* by_account(const NetworkId& n,
                                       const std::string& local_id) const;

  /// Profiles every linked user; deterministic order (sorted user keys).
  static ProfileTable compute(const std::vector<LinkedUser>& users,
                              const MultiNetworkGraph& g,
                              const IdentityMap& match, int jobs = 1);

  void save(std::ostream& out) const;
  static ProfileTable load(std::istream& in);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> by_account_;
};

/// Linked users implied by an identity map (one per match edge), plus any
/// extra base pairs; deduplicated and sorted by key.
std::vector<LinkedUser> linked_users(
    const IdentityMap& match,
    const std::vector<std::pair<UserRef, UserRef>>& base_pairs = {});

}  // namespace crossnet
