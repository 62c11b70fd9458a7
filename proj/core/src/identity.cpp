#include "crossnet/identity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "crossnet/errors.hpp"
#include "crossnet/tsv.hpp"

namespace crossnet {

std::string normalize_username(std::string_view username) {
  auto t = tsv::trim(username);
  if (!t.empty() && t.front() == '@') t.remove_prefix(1);
  std::string out;
  out.reserve(t.size());
  for (char c : t)
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

double BigramVector::norm() const {
  double s = 0.0;
  for (const auto& [bg, w] : weights) s += static_cast<double>(w) * w;
  return std::sqrt(s);
}

BigramVector bigram_vector(std::string_view username) {
  std::string norm = normalize_username(username);
  BigramVector v;
  if (norm.size() < 2) return v;
  std::map<std::uint16_t, std::uint32_t> counts;
  for (std::size_t i = 0; i + 1 < norm.size(); ++i) {
    auto hi = static_cast<unsigned char>(norm[i]);
    auto lo = static_cast<unsigned char>(norm[i + 1]);
    ++counts[static_cast<std::uint16_t>((hi << 8) | lo)];
  }
  v.weights.assign(counts.begin(), counts.end());
  return v;
}

double bigram_cosine(const BigramVector& a, const BigramVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0;
  auto ia = a.weights.begin();
  auto ib = b.weights.begin();
  while (ia != a.weights.end() && ib != b.weights.end()) {
    if (ia->first == ib->first) {
      dot += static_cast<double>(ia->second) * ib->second;
      ++ia;
      ++ib;
    } else if (ia->first < ib->first) {
      ++ia;
    } else {
      ++ib;
    }
  }
  if (dot == 0.0) return 0.0;
  double c = dot / (a.norm() * b.norm());
  return std::min(c, 1.0);
}

std::string to_string(MatchMethod m) {
  switch (m) {
    case MatchMethod::self_report: return "self_report";
    case MatchMethod::exact_username: return "exact_username";
    case MatchMethod::bigram: return "bigram";
  }
  return "?";
}

MatchMethod parse_match_method(std::string_view s) {
  if (s == "self_report") return MatchMethod::self_report;
  if (s == "exact_username") return MatchMethod::exact_username;
  if (s == "bigram") return MatchMethod::bigram;
  throw ParseError("unknown match method '" + std::string(s) + "'");
}

void IdentityMap::add(MatchEdge edge) {
  if (edge.left.network == edge.right.network)
    throw ValidationError("match edge within one network '" +
                          edge.left.network + "'");
  if (edge.right.network < edge.left.network) std::swap(edge.left, edge.right);
  std::string kl = edge.left.key(), kr = edge.right.key();
  if (by_account_.count(kl))
    throw ValidationError("account " + kl + " already matched");
  if (by_account_.count(kr))
    throw ValidationError("account " + kr + " already matched");
  by_account_.emplace(kl, edges_.size());
  by_account_.emplace(kr, edges_.size());
  edges_.push_back(std::move(edge));
}

std::optional<UserRef> IdentityMap::counterpart(const UserRef& u) const {
  auto it = by_account_.find(u.key());
  if (it == by_account_.end()) return std::nullopt;
  const MatchEdge& e = edges_[it->second];
  return e.left == u ? e.right : e.left;
}

std::optional<std::string> IdentityMap::counterpart_in(const UserRef& u,
                                                       const NetworkId& n) const {
  auto cp = counterpart(u);
  if (!cp || cp->network != n) return std::nullopt;
  return cp->local_id;
}

bool IdentityMap::linked(const UserRef& a, const UserRef& b) const {
  auto cp = counterpart(a);
  return cp && *cp == b;
}

std::string IdentityMap::person_key(const UserRef& u) const {
  auto cp = counterpart(u);
  std::string self = u.key();
  if (!cp) return self;
  std::string other = cp->key();
  return self < other ? self : other;
}

void IdentityMap::save(std::ostream& out) const {
  out << "# crossnet identity v1\n";
  out << "# threshold\t" << tsv::fixed(threshold, 4) << "\n";
  std::vector<const MatchEdge*> order;
  order.reserve(edges_.size());
  for (const auto& e : edges_) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const MatchEdge* a, const MatchEdge* b) {
    return std::tie(a->left.network, a->left.local_id, a->right.network,
                    a->right.local_id) <
           std::tie(b->left.network, b->left.local_id, b->right.network,
                    b->right.local_id);
  });
  for (const MatchEdge* e : order) {
    out << e->left.network << ":" << e->left.local_id << "\t"
        << e->right.network << ":" << e->right.local_id << "\t"
        << to_string(e->method) << "\t" << tsv::fixed(e->score, 4) << "\n";
  }
}

namespace {

UserRef parse_ref(std::string_view field, std::size_t lineno) {
  auto colon = field.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == field.size())
    throw ParseError("line " + std::to_string(lineno) +
                     ": expected net:id, got '" + std::string(field) + "'");
  return {std::string(field.substr(0, colon)), std::string(field.substr(colon + 1))};
}

}  // namespace

IdentityMap IdentityMap::load(std::istream& in) {
  IdentityMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = tsv::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      auto fields = tsv::split(t);
      if (fields.size() == 2 && fields[0] == "# threshold") {
        double thr;
        if (tsv::parse_double(fields[1], thr)) map.threshold = thr;
      }
      continue;
    }
    auto fields = tsv::split(line);
    if (fields.size() != 4)
      throw ParseError("identity file line " + std::to_string(lineno) +
                       ": expected 4 fields");
    MatchEdge e;
    e.left = parse_ref(tsv::trim(fields[0]), lineno);
    e.right = parse_ref(tsv::trim(fields[1]), lineno);
    e.method = parse_match_method(tsv::trim(fields[2]));
    if (!tsv::parse_double(tsv::trim(fields[3]), e.score))
      throw ParseError("identity file line " + std::to_string(lineno) +
                       ": bad score");
    map.add(std::move(e));
  }
  return map;
}

std::string MatchSummary::to_report() const {
  std::ostringstream os;
  os << "pairs_self_report\t" << self_report_pairs << "\n";
  os << "pairs_exact_username\t" << exact_username_pairs << "\n";
  os << "pairs_bigram\t" << bigram_pairs << "\n";
  os << "pairs_total\t"
     << self_report_pairs + exact_username_pairs + bigram_pairs << "\n";
  os << "self_report_conflicts\t" << self_report_conflicts << "\n";
  os << "candidate_pairs\t" << candidate_pairs << "\n";
  os << "friend_slots_exact_username\t" << exact_username_friend_slots << "\n";
  os << "friend_slots_bigram\t" << bigram_friend_slots << "\n";
  return os.str();
}

std::string MatchSummary::one_line() const {
  std::ostringstream os;
  os << "self_report=" << self_report_pairs
     << " exact=" << exact_username_pairs << " bigram=" << bigram_pairs
     << " conflicts=" << self_report_conflicts;
  return os.str();
}

IdentityMap match_accounts(const MultiNetworkGraph& g,
                           const std::vector<AccountRecord>& accounts,
                           const std::vector<std::pair<UserRef, UserRef>>& base_pairs,
                           double threshold,
                           MatchSummary* summary) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw ValidationError("match threshold must lie in (0, 1]");

  MatchSummary local;
  MatchSummary& sum = summary ? *summary : local;
  sum = MatchSummary{};

  std::map<std::string, const AccountRecord*> by_key;
  for (const auto& a : accounts) {
    if (normalize_username(a.username).empty())
      throw ValidationError("account " + a.network + ":" + a.local_id +
                            " has an empty username");
    if (!by_key.emplace(UserRef{a.network, a.local_id}.key(), &a).second)
      throw ValidationError("duplicate account record " + a.network + ":" +
                            a.local_id);
  }

  IdentityMap result;
  result.threshold = threshold;
  std::unordered_set<std::string> taken;
  auto claim = [&](const UserRef& l, const UserRef& r, MatchMethod m, double score) {
    taken.insert(l.key());
    taken.insert(r.key());
    result.add({l, r, m, score});
  };

  // Tier 1: self-reported counterparts. Mutual declarations collapse to one
  // pair; an account claimed by two different pairs rejects them all.
  {
    auto canon = [](UserRef a, UserRef b) {
      if (b.network < a.network || (a.network == b.network && b.local_id < a.local_id))
        std::swap(a, b);
      return std::make_pair(std::move(a), std::move(b));
    };
    std::set<std::pair<UserRef, UserRef>> declared;
    for (const auto& a : accounts) {
      if (!a.declared_counterpart) continue;
      UserRef self{a.network, a.local_id};
      if (a.declared_counterpart->network == a.network)
        throw ValidationError("account " + self.key() +
                              " declares a counterpart in its own network");
      declared.insert(canon(self, *a.declared_counterpart));
    }
    std::map<std::string, std::size_t> occurrences;
    for (const auto& [l, r] : declared) {
      ++occurrences[l.key()];
      ++occurrences[r.key()];
    }
    for (const auto& [l, r] : declared) {
      if (occurrences[l.key()] > 1 || occurrences[r.key()] > 1) {
        ++sum.self_report_conflicts;
        continue;
      }
      claim(l, r, MatchMethod::self_report, 1.0);
      ++sum.self_report_pairs;
    }
  }

  // Candidate pairs: friends of the same base pair, one candidate per
  // distinct (left, right) with its occurrence count across base pairs.
  struct Candidate {
    UserRef left, right;
    std::size_t occurrences = 0;
  };
  std::map<std::pair<std::string, std::string>, Candidate> candidates;
  std::optional<std::pair<NetworkId, NetworkId>> span;
  for (const auto& [ba, bb] : base_pairs) {
    if (ba.network == bb.network)
      throw ValidationError("base pair within one network '" + ba.network + "'");
    UserRef bl = ba, br = bb;
    if (br.network < bl.network) std::swap(bl, br);
    if (!span) span = {bl.network, br.network};
    if (span->first != bl.network || span->second != br.network)
      throw ValidationError("base pairs span more than one network pair");
    auto lf = g.friends(bl);
    auto rf = g.friends(br);
    for (const auto& fl : lf) {
      for (const auto& fr : rf) {
        UserRef l{bl.network, fl}, r{br.network, fr};
        auto key = std::make_pair(l.key(), r.key());
        auto [it, inserted] = candidates.try_emplace(key, Candidate{l, r, 0});
        ++it->second.occurrences;
      }
    }
  }
  sum.candidate_pairs = candidates.size();

  auto username_of = [&](const UserRef& u) -> std::string {
    auto it = by_key.find(u.key());
    if (it == by_key.end()) return {};
    return normalize_username(it->second->username);
  };

  // Tier 2: exact normalized username equality.
  {
    struct ExactRow {
      std::string username;
      const Candidate* cand;
    };
    std::vector<ExactRow> rows;
    for (const auto& [key, cand] : candidates) {
      std::string ul = username_of(cand.left);
      if (ul.empty()) continue;
      if (ul != username_of(cand.right)) continue;
      rows.push_back({std::move(ul), &cand});
    }
    std::sort(rows.begin(), rows.end(), [](const ExactRow& a, const ExactRow& b) {
      return std::tie(a.username, a.cand->left.local_id, a.cand->right.local_id) <
             std::tie(b.username, b.cand->left.local_id, b.cand->right.local_id);
    });
    for (const auto& row : rows) {
      if (taken.count(row.cand->left.key()) || taken.count(row.cand->right.key()))
        continue;
      claim(row.cand->left, row.cand->right, MatchMethod::exact_username, 1.0);
      ++sum.exact_username_pairs;
      sum.exact_username_friend_slots += row.cand->occurrences;
    }
  }

  // Tier 3: bigram cosine at or above the threshold, greedy by descending
  // cosine; ties broken by usernames, then local ids.
  {
    struct Scored {
      double cosine;
      std::string ul, ur;
      const Candidate* cand;
    };
    std::vector<Scored> scored;
    std::map<std::string, BigramVector> vectors;
    auto vec_of = [&](const std::string& username) -> const BigramVector& {
      auto it = vectors.find(username);
      if (it == vectors.end())
        it = vectors.emplace(username, bigram_vector(username)).first;
      return it->second;
    };
    for (const auto& [key, cand] : candidates) {
      if (taken.count(cand.left.key()) || taken.count(cand.right.key())) continue;
      std::string ul = username_of(cand.left);
      std::string ur = username_of(cand.right);
      if (ul.size() < 2 || ur.size() < 2) continue;
      double c = bigram_cosine(vec_of(ul), vec_of(ur));
      if (c >= threshold)
        scored.push_back({c, std::move(ul), std::move(ur), &cand});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.cosine != b.cosine) return a.cosine > b.cosine;
      return std::tie(a.ul, a.ur, a.cand->left.local_id, a.cand->right.local_id) <
             std::tie(b.ul, b.ur, b.cand->left.local_id, b.cand->right.local_id);
    });
    for (const auto& s : scored) {
      if (taken.count(s.cand->left.key()) || taken.count(s.cand->right.key()))
        continue;
      claim(s.cand->left, s.cand->right, MatchMethod::bigram, s.cosine);
      ++sum.bigram_pairs;
      sum.bigram_friend_slots += s.cand->occurrences;
    }
  }

  return result;
}

double derive_threshold(
    const std::vector<std::pair<std::string, std::string>>& username_pairs) {
  if (username_pairs.empty())
    throw ValidationError("derive_threshold: empty candidate list");
  std::vector<double> cosines;
  cosines.reserve(username_pairs.size());
  for (const auto& [a, b] : username_pairs)
    cosines.push_back(bigram_cosine(bigram_vector(a), bigram_vector(b)));
  std::sort(cosines.begin(), cosines.end());
  std::size_t n = cosines.size();
  if (n % 2 == 1) return cosines[n / 2];
  return 0.5 * (cosines[n / 2 - 1] + cosines[n / 2]);
}

std::vector<AccountRecord> load_account_file(std::istream& in) {
  std::vector<AccountRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (tsv::is_comment_or_blank(line)) continue;
    auto fields = tsv::split(line);
    if (fields.size() != 3 && fields.size() != 4)
      throw ParseError("account file line " + std::to_string(lineno) +
                       ": expected 3 or 4 fields");
    AccountRecord rec;
    rec.network = std::string(tsv::trim(fields[0]));
    rec.local_id = std::string(tsv::trim(fields[1]));
    rec.username = std::string(tsv::trim(fields[2]));
    if (rec.network.empty() || rec.local_id.empty())
      throw ParseError("account file line " + std::to_string(lineno) +
                       ": empty field");
    if (fields.size() == 4)
      rec.declared_counterpart = parse_ref(tsv::trim(fields[3]), lineno);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<std::pair<UserRef, UserRef>> load_base_pairs(std::istream& in) {
  std::vector<std::pair<UserRef, UserRef>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (tsv::is_comment_or_blank(line)) continue;
    auto fields = tsv::split(line);
    if (fields.size() < 2)
      throw ParseError("base pair file line " + std::to_string(lineno) +
                       ": expected at least 2 fields");
    out.emplace_back(parse_ref(tsv::trim(fields[0]), lineno),
                     parse_ref(tsv::trim(fields[1]), lineno));
  }
  return out;
}

}  // namespace crossnet
