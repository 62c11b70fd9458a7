#include <doctest.h>

#include <sstream>

#include "crossnet/errors.hpp"
#include "crossnet/graph.hpp"
#include "crossnet/rng.hpp"
#include "helpers.hpp"

using namespace crossnet;

namespace {

MultiNetworkGraph load_edges(const std::string& text, IngestConfig cfg = {},
                             IngestSummary* summary = nullptr) {
  std::istringstream in(text);
  return MultiNetworkGraph::load_edge_file(in, cfg, summary);
}

}  // namespace

TEST_CASE("reciprocal pair becomes a friendship") {
  auto g = load_edges("T\ta\tb\nT\tb\ta\n");
  CHECK(g.friends({"T", "a"}) == std::vector<std::string>{"b"});
  CHECK(g.friends({"T", "b"}) == std::vector<std::string>{"a"});
}

TEST_CASE("one-directional follow is not a friendship") {
  auto g = load_edges("T\ta\tb\n");
  CHECK(g.friends({"T", "a"}).empty());
  CHECK(g.friends({"T", "b"}).empty());
}

TEST_CASE("popularity filter removes user and incident edges") {
  // c has three followers; a and b stay mutual friends.
  std::string text =
      "T\ta\tc\nT\tb\tc\nT\td\tc\n"
      "T\tc\ta\nT\ta\tb\nT\tb\ta\n";
  IngestConfig cfg;
  cfg.max_followers = 2;
  IngestSummary summary;
  auto g = load_edges(text, cfg, &summary);
  CHECK_FALSE(g.user_index("T", "c").has_value());
  CHECK(g.friends({"T", "a"}) == std::vector<std::string>{"b"});
  CHECK(summary.users_filtered.at("T") == 1);

  SUBCASE("max_followers = 0 disables the filter") {
    cfg.max_followers = 0;
    auto g2 = load_edges(text, cfg);
    CHECK(g2.user_index("T", "c").has_value());
    CHECK(g2.friends({"T", "a"}) == std::vector<std::string>{"b", "c"});
  }
}

TEST_CASE("star graph: only followers who are followed back are friends") {
  std::string text;
  for (int i = 0; i < 5; ++i)
    text += "T\thub\tf" + std::to_string(i) + "\n";
  for (int i = 0; i < 3; ++i)
    text += "T\tf" + std::to_string(i) + "\thub\n";
  auto g = load_edges(text);
  CHECK(g.friends({"T", "hub"}).size() == 3);
}

TEST_CASE("friends of unknown user is empty, unknown network throws") {
  auto g = load_edges("T\ta\tb\nT\tb\ta\n");
  CHECK(g.friends({"T", "nobody"}).empty());
  CHECK_THROWS_AS((void)g.friends({"X", "a"}), ValidationError);
}

TEST_CASE("common_friends") {
  MultiNetworkGraph g;
  for (const char* f : {"a", "b", "c"}) g.add_friendship("T", "u", f);
  for (const char* f : {"b", "c", "d"}) g.add_friendship("T", "v", f);
  SUBCASE("intersection") {
    CHECK(g.common_friends("T", "u", "v") == std::vector<std::string>{"b", "c"});
    CHECK(g.common_friends("T", "v", "u") == std::vector<std::string>{"b", "c"});
  }
  SUBCASE("disjoint sets") {
    g.add_friendship("T", "w", "x");
    CHECK(g.common_friends("T", "u", "w").empty());
  }
  SUBCASE("self intersection returns own friend set") {
    CHECK(g.common_friends("T", "u", "u") == g.friends({"T", "u"}));
  }
}

TEST_CASE("degree histogram") {
  SUBCASE("reciprocal pair") {
    auto g = load_edges("T\ta\tb\nT\tb\ta\n");
    auto h = g.degree_histogram("T");
    CHECK(h == std::map<std::size_t, std::size_t>{{1, 2}});
  }
  SUBCASE("empty network") {
    MultiNetworkGraph g;
    g.ensure_network("T");
    CHECK(g.degree_histogram("T").empty());
  }
  SUBCASE("path counts middle user at degree 2") {
    MultiNetworkGraph g;
    g.add_friendship("T", "a", "b");
    g.add_friendship("T", "b", "c");
    auto h = g.degree_histogram("T");
    CHECK(h == std::map<std::size_t, std::size_t>{{1, 2}, {2, 1}});
  }
  SUBCASE("isolated users counted at degree 0") {
    MultiNetworkGraph g;
    g.add_friendship("T", "a", "b");
    g.ensure_user("T", "loner");
    auto h = g.degree_histogram("T");
    CHECK(h == std::map<std::size_t, std::size_t>{{0, 1}, {1, 2}});
  }
}

TEST_CASE("malformed edge records are rejected with line numbers") {
  CHECK_THROWS_WITH_AS(load_edges("T\ta\n"),
                       doctest::Contains("line 1"), ParseError);
  CHECK_THROWS_WITH_AS(load_edges("T\ta\tb\nT\ta\tb\tc\td\n"),
                       doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_AS(load_edges("T\t\tb\n"), ParseError);
  CHECK_THROWS_AS(load_edges("T\ta\ta\n"), ParseError);
  IngestConfig cfg;
  cfg.networks_expected = {"T"};
  CHECK_THROWS_WITH_AS(load_edges("I\ta\tb\n", cfg),
                       doctest::Contains("unknown network"), ParseError);
}

TEST_CASE("comments and blank lines are skipped, duplicates counted") {
  IngestSummary summary;
  auto g = load_edges("# header\n\nT\ta\tb\nT\ta\tb\nT\tb\ta\n", {}, &summary);
  CHECK(summary.records_read == 3);
  CHECK(summary.duplicate_records == 1);
  CHECK(g.friends({"T", "a"}) == std::vector<std::string>{"b"});
}

TEST_CASE("declared networks exist even when empty") {
  IngestConfig cfg;
  cfg.networks_expected = {"T", "I"};
  auto g = load_edges("T\ta\tb\nT\tb\ta\n", cfg);
  CHECK(g.has_network("I"));
  CHECK(g.user_count("I") == 0);
}

TEST_CASE("identifiers are trimmed, case preserved") {
  auto g = load_edges("T\t a \tB\nT\tB\t a \n");
  CHECK(g.friends({"T", "a"}) == std::vector<std::string>{"B"});
  CHECK_FALSE(g.user_index("T", "b").has_value());
}

TEST_CASE("reciprocity matches brute force on random graphs") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + rng.below(199);
    std::vector<EdgeRecord> records;
    std::set<std::pair<std::string, std::string>> edges;
    std::size_t m = rng.below(4 * n);
    for (std::size_t e = 0; e < m; ++e) {
      auto i = rng.below(n), j = rng.below(n);
      if (i == j) continue;
      std::string a = "u" + std::to_string(i), b = "u" + std::to_string(j);
      if (edges.insert({a, b}).second) records.push_back({"T", a, b});
    }
    IngestConfig cfg;
    cfg.max_followers = 0;
    auto g = MultiNetworkGraph::from_records(records, cfg);
    g.check_invariants();
    for (const auto& [a, b] : edges) {
      bool mutual = edges.count({b, a}) > 0;
      CHECK(g.are_friends("T", a, b) == mutual);
    }
  }
}

TEST_CASE("filter monotonicity: raising the cap keeps every user") {
  Rng rng(11);
  std::vector<EdgeRecord> records;
  for (int e = 0; e < 300; ++e) {
    auto i = rng.below(40), j = rng.below(40);
    if (i == j) continue;
    records.push_back({"T", "u" + std::to_string(i), "u" + std::to_string(j)});
  }
  IngestConfig low, high;
  low.max_followers = 3;
  high.max_followers = 6;
  auto g_low = MultiNetworkGraph::from_records(records, low);
  auto g_high = MultiNetworkGraph::from_records(records, high);
  for (const auto& id : g_low.user_ids("T"))
    CHECK(g_high.user_index("T", id).has_value());
}

TEST_CASE("loading the same stream twice is idempotent") {
  std::string text = "T\ta\tb\nT\tb\ta\nI\tx\ty\nI\ty\tx\nT\tc\ta\n";
  auto g1 = load_edges(text);
  auto g2 = load_edges(text);
  CHECK(g1 == g2);
}

TEST_CASE("snapshot round trip") {
  Rng rng(3);
  MultiNetworkGraph g;
  testutil::add_random_friendships(g, "T", 30, 0.1, rng);
  testutil::add_random_friendships(g, "I", 25, 0.15, rng);
  g.ensure_user("T", "isolated");
  std::ostringstream os;
  g.save(os);
  std::istringstream is(os.str());
  auto g2 = MultiNetworkGraph::load(is);
  CHECK(g == g2);
  CHECK(g2.user_index("T", "isolated").has_value());
}

TEST_CASE("remove_friendship errors on missing pair") {
  MultiNetworkGraph g;
  g.add_friendship("T", "a", "b");
  g.remove_friendship("T", "a", "b");
  CHECK_FALSE(g.are_friends("T", "a", "b"));
  CHECK_THROWS_AS(g.remove_friendship("T", "a", "b"), ValidationError);
}
