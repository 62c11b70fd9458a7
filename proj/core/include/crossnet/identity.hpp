#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crossnet/graph.hpp"

namespace crossnet {

struct AccountRecord {
  NetworkId network;
  std::string local_id;
  std::string username;
  std::optional<UserRef> declared_counterpart;
};

/// Character-bigram occurrence counts of a normalized username. Bigrams are
/// packed into 16 bits; the vector is sorted by bigram.
struct BigramVector {
  std::vector<std::pair<std::uint16_t, std::uint32_t>> weights;

  bool empty() const { return weights.empty(); }
  double norm() const;
};

/// Lowercases, strips one leading '@' and surrounding whitespace.
std::string normalize_username(std::string_view username);

/// Bigram counts of the normalized username; empty for length < 2.
BigramVector bigram_vector(std::string_view username);

/// Cosine similarity in [0, 1]; 0 when either vector is empty.
double bigram_cosine(const BigramVector& a, const BigramVector& b);

enum class MatchMethod { self_report, exact_username, bigram };
std::string to_string(MatchMethod m);
MatchMethod parse_match_method(std::string_view s);

struct MatchEdge {
  UserRef left;   // canonical: left.network < right.network
  UserRef right;
  MatchMethod method = MatchMethod::self_report;
  double score = 1.0;
};

/// One-to-one cross-network account pairing. Each account appears in at most
/// one edge.
class IdentityMap {
 public:
  double threshold = 0.63;

  void add(MatchEdge edge);
  const std::vector<MatchEdge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }

  std::optional<UserRef> counterpart(const UserRef& u) const;
  /// Counterpart local id of u in network n, if u is matched into n.
  std::optional<std::string> counterpart_in(const UserRef& u,
                                            const NetworkId& n) const;
  bool linked(const UserRef& a, const UserRef& b) const;
  /// Canonical person key: the lexicographically smallest account key of the
  /// match class containing u (u itself when unmatched).
  std::string person_key(const UserRef& u) const;

  void save(std::ostream& out) const;
  static IdentityMap load(std::istream& in);

 private:
  std::vector<MatchEdge> edges_;
  std::unordered_map<std::string, std::size_t> by_account_;
};

struct MatchSummary {
  std::size_t self_report_pairs = 0;
  std::size_t exact_username_pairs = 0;
  std::size_t bigram_pairs = 0;
  std::size_t self_report_conflicts = 0;
  std::size_t candidate_pairs = 0;
  // Friend-slot coverage: candidate occurrences across base neighborhoods
  // that ended up matched, per method (the "friends matched" counter).
  std::size_t exact_username_friend_slots = 0;
  std::size_t bigram_friend_slots = 0;

  std::string to_report() const;
  std::string one_line() const;
};

/// Three-tier matching cascade: self-reported counterparts, exact normalized
/// username equality among friends of the same base pair, then bigram-cosine
/// matching of the remaining candidates at `threshold`. Output is one-to-one
/// and deterministic.
IdentityMap match_accounts(const MultiNetworkGraph& g,
                           const std::vector<AccountRecord>& accounts,
                           const std::vector<std::pair<UserRef, UserRef>>& base_pairs,
                           double threshold,
                           MatchSummary* summary = nullptr);

/// Median bigram cosine over candidate username pairs. Errors on empty input.
double derive_threshold(
    const std::vector<std::pair<std::string, std::string>>& username_pairs);

/// Account file: network<TAB>local_id<TAB>username[<TAB>net:id]
std::vector<AccountRecord> load_account_file(std::istream& in);

/// Base-pair file: net:id<TAB>net:id (extra columns ignored, so an identity
/// map file is accepted as well).
std::vector<std::pair<UserRef, UserRef>> load_base_pairs(std::istream& in);

}  // namespace crossnet
