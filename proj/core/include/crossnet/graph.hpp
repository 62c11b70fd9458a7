#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace crossnet {

using NetworkId = std::string;

struct UserRef {
  NetworkId network;
  std::string local_id;

  auto operator<=>(const UserRef&) const = default;
  std::string key() const { return network + ":" + local_id; }
};

struct EdgeRecord {
  NetworkId network;
  std::string follower;
  std::string followee;
};

struct IngestConfig {
  /// Users with more followers than this (raw in-degree, per network) are
  /// dropped with their edges. 0 disables the filter.
  std::uint32_t max_followers = 2000;
  /// When non-empty the graph contains exactly these networks and records
  /// naming any other network are rejected. Empty: networks come from data.
  std::vector<NetworkId> networks_expected;
};

struct IngestSummary {
  std::uint64_t records_read = 0;
  std::uint64_t duplicate_records = 0;
  std::map<NetworkId, std::uint64_t> users_filtered;
  std::map<NetworkId, std::uint64_t> users_kept;
  std::map<NetworkId, std::uint64_t> friend_pairs;

  std::string to_report() const;
  std::string one_line() const;
};

/// Per-network directed follow relations reduced to their mutual-follow
/// ("friend") adjacency. Immutable after construction in normal pipelines;
/// all query methods are safe for concurrent reads.
class MultiNetworkGraph {
 public:
  MultiNetworkGraph() = default;

  static MultiNetworkGraph from_records(const std::vector<EdgeRecord>& records,
                                        const IngestConfig& config,
                                        IngestSummary* summary = nullptr);
  /// Parses `network<TAB>follower<TAB>followee` lines. `#` and blank lines
  /// are skipped. Malformed records are rejected with their line number.
  static MultiNetworkGraph load_edge_file(std::istream& in,
                                          const IngestConfig& config,
                                          IngestSummary* summary = nullptr);

  /// Graph snapshot: a line-oriented format with network/user/friend records.
  void save(std::ostream& out) const;
  static MultiNetworkGraph load(std::istream& in);

  // -- network / user registry --------------------------------------------
  std::vector<NetworkId> network_ids() const;
  bool has_network(const NetworkId& n) const { return nets_.count(n) > 0; }
  std::size_t network_count() const { return nets_.size(); }
  std::size_t user_count(const NetworkId& n) const;
  void ensure_network(const NetworkId& n);
  std::uint32_t ensure_user(const NetworkId& n, const std::string& local_id);
  std::optional<std::uint32_t> user_index(const NetworkId& n,
                                          const std::string& local_id) const;
  const std::string& user_id(const NetworkId& n, std::uint32_t index) const;
  std::vector<std::string> user_ids(const NetworkId& n) const;

  // -- friendship queries ---------------------------------------------------
  /// Mutual-follow set of u in its network, as sorted local ids. Unknown
  /// local ids yield an empty set; unknown networks are an error.
  std::vector<std::string> friends(const UserRef& u) const;
  const std::vector<std::uint32_t>& friends_by_index(const NetworkId& n,
                                                     std::uint32_t index) const;
  std::size_t friend_degree(const NetworkId& n, const std::string& local_id) const;
  bool are_friends(const NetworkId& n, const std::string& u,
                   const std::string& v) const;
  /// Sorted intersection of the two friend sets; symmetric in u and v.
  std::vector<std::string> common_friends(const NetworkId& n,
                                          const std::string& u,
                                          const std::string& v) const;
  /// Friend-degree histogram including isolated users at degree 0.
  std::map<std::size_t, std::size_t> degree_histogram(const NetworkId& n) const;
  std::size_t friend_pair_count(const NetworkId& n) const;

  // -- mutation (synthetic data, holdout graphs) ----------------------------
  /// Inserts the symmetric friend pair, registering users as needed.
  /// Idempotent; self-pairs are rejected.
  void add_friendship(const NetworkId& n, const std::string& u,
                      const std::string& v);
  /// Removes the symmetric friend pair; missing pair is an error.
  void remove_friendship(const NetworkId& n, const std::string& u,
                         const std::string& v);

  /// Asserts friend-adjacency symmetry and absence of self loops.
  void check_invariants() const;

  bool operator==(const MultiNetworkGraph& other) const;

 private:
  struct Network {
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::vector<std::uint32_t>> adj;  // sorted neighbor lists
  };

  const Network& net(const NetworkId& n) const;
  Network& net_mut(const NetworkId& n);

  std::map<NetworkId, Network> nets_;
};

}  // namespace crossnet
