#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>

#include "trop/rng.hpp"
#include "trop/sampling.hpp"
#include "trop/torus.hpp"
#include "trop/tree.hpp"

using namespace trop;

TEST_SUITE_BEGIN("tree");

TEST_CASE("newick parsing of a three-leaf tree") {
  const Tree t = parse_newick("((A:1,B:1):1,C:2);");
  CHECK(t.leaf_count() == 3);
  CHECK(t.leaf_labels() == std::vector<std::string>{"A", "B", "C"});
  for (const int v : t.leaf_ids()) CHECK(t.depth(v) == 2.0);
}

TEST_CASE("single-leaf statement parses but is rejected downstream") {
  const Tree t = parse_newick("(A:1);");
  CHECK(t.leaf_count() == 1);
  CHECK_THROWS_AS(cophenetic_vector(t), std::invalid_argument);
}

TEST_CASE("malformed newick reports a byte offset") {
  try {
    parse_newick("((A:1,B:1;");
    FAIL("expected a parse error");
  } catch (const ParseError& err) {
    CHECK(err.offset == 10);
  }
  CHECK_THROWS_AS(parse_newick("((A:1,B:1):1,A:2);"), ParseError);  // duplicate label
  CHECK_THROWS_AS(parse_newick("((A:1,B):1,C:2);"), ParseError);    // missing length
}

TEST_CASE("cophenetic vector of the worked examples") {
  const DistanceVector d = cophenetic_vector(parse_newick("((A:1,B:1):1,C:2);"));
  CHECK(d.values == std::vector<double>{2, 4, 4});
  CHECK(d.leaf_order == std::vector<std::string>{"A", "B", "C"});

  // four-leaf equidistant tree: C,D join at 0.5, B at 0.7, A at 1
  const Tree t = parse_newick("(((C:0.5,D:0.5):0.2,B:0.7):0.3,A:1);");
  const DistanceVector u = cophenetic_vector(t);
  CHECK(u.leaf_order == std::vector<std::string>{"A", "B", "C", "D"});
  const std::vector<double> expect{2, 2, 2, 1.4, 1.4, 1};
  REQUIRE(u.values.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(u.values[i] == doctest::Approx(expect[i]).epsilon(1e-12));

  // star tree: all pendant lengths 1 -> all distances 2
  const DistanceVector s = cophenetic_vector(parse_newick("(A:1,B:1,C:1,D:1);"));
  for (const double v : s.values) CHECK(v == 2.0);
}

TEST_CASE("pair_index bijects pairs for m <= 12") {
  for (std::size_t m = 2; m <= 12; ++m) {
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const std::size_t k = pair_index(i, j, m);
        CHECK(k < m * (m - 1) / 2);
        CHECK(seen.insert(k).second);
      }
    CHECK(seen.size() == m * (m - 1) / 2);
  }
  // lexicographic order: (0,1) -> 0, (0,2) -> 1, (1,2) -> m-1
  CHECK(pair_index(0, 1, 4) == 0);
  CHECK(pair_index(0, 3, 4) == 2);
  CHECK(pair_index(1, 2, 4) == 3);
  CHECK(pair_index(2, 3, 4) == 5);
}

TEST_CASE("ultrametric three-point condition") {
  DistanceVector u;
  u.leaf_order = {"A", "B", "C", "D"};
  u.values = {2, 2, 2, 1.4, 1.4, 1};
  CHECK(is_ultrametric(u, 0.0));

  const DistanceVector d = cophenetic_vector(parse_newick("((A:1,B:1):1,C:2);"));
  CHECK(is_ultrametric(d, 0.0));

  DistanceVector bad;
  bad.leaf_order = {"A", "B", "C"};
  bad.values = {1, 2, 4};
  CHECK_FALSE(is_ultrametric(bad, 0.0));
}

TEST_CASE("equidistance of explicit trees") {
  CHECK(is_equidistant(parse_newick("((A:1,B:1):1,C:2);"), 0.0));
  CHECK_FALSE(is_equidistant(parse_newick("((A:1,B:2):1,C:2);"), 0.0));
}

TEST_CASE("equidistant trees are ultrametric and perturbation breaks it") {
  Rng rng(71);
  for (int rep = 0; rep < 1000; ++rep) {
    const int m = 4 + static_cast<int>(rng.below(7));
    Rng sub = rng.stream(static_cast<std::uint64_t>(rep));
    Tree t = yule_tree(m, 1.0, sub);
    REQUIRE(is_equidistant(t, 1e-9));
    REQUIRE(is_ultrametric(cophenetic_vector(t), 1e-9));
    // bump one pendant edge
    const int leaf = t.leaf_ids()[static_cast<std::size_t>(sub.below(
        static_cast<std::uint64_t>(m)))];
    t.set_length(leaf, t.node(leaf).length + 0.1);
    REQUIRE_FALSE(is_equidistant(t, 1e-9));
  }
}

TEST_CASE("newick round-trip preserves cophenetic vectors") {
  Rng rng(72);
  for (int rep = 0; rep < 50; ++rep) {
    Rng sub = rng.stream(static_cast<std::uint64_t>(rep));
    const Tree t = yule_tree(4 + static_cast<int>(sub.below(8)), 1.3, sub);
    const Tree back = parse_newick(write_newick(t));
    const DistanceVector a = cophenetic_vector(t);
    const DistanceVector b = cophenetic_vector(back);
    REQUIRE(a.leaf_order == b.leaf_order);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      REQUIRE(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("clades and Robinson-Foulds distance") {
  const Tree t1 = parse_newick("(((C:0.5,D:0.5):0.2,B:0.7):0.3,A:1);");
  const Tree t2 = parse_newick("(((A:0.3,D:0.3):0.5,B:0.8):0.2,C:1);");
  const std::set<Clade> c1 = clades(t1);
  CHECK(c1 == std::set<Clade>{{"C", "D"}, {"B", "C", "D"}});
  const std::set<Clade> c2 = clades(t2);
  CHECK(c2 == std::set<Clade>{{"A", "D"}, {"A", "B", "D"}});
  CHECK(rf_distance(t1, t2) == 4);
  CHECK(rf_distance(t1, t1) == 0);

  // two distinct resolved 3-leaf trees share no nontrivial clade
  const Tree a = parse_newick("((A:1,B:1):1,C:2);");
  const Tree b = parse_newick("((A:1,C:1):1,B:2);");
  CHECK(rf_distance(a, b) == 2);

  const Tree other = parse_newick("((A:1,B:1):1,D:2);");
  CHECK_THROWS_AS(rf_distance(a, other), std::invalid_argument);
}

TEST_CASE("rf distance is a pseudometric on random trees") {
  Rng rng(73);
  for (int rep = 0; rep < 60; ++rep) {
    Rng sub = rng.stream(static_cast<std::uint64_t>(rep));
    const int m = 5 + static_cast<int>(sub.below(5));
    const Tree a = yule_tree(m, 1.0, sub);
    const Tree b = yule_tree(m, 1.0, sub);
    const Tree c = yule_tree(m, 1.0, sub);
    CHECK(rf_distance(a, b) == rf_distance(b, a));
    CHECK(rf_distance(a, c) <= rf_distance(a, b) + rf_distance(b, c));
  }
}

TEST_CASE("nexus trees block with translate table") {
  const std::string nexus =
      "#NEXUS\n"
      "[generated for a test]\n"
      "begin trees;\n"
      "  translate\n"
      "    1 A,\n"
      "    2 B,\n"
      "    3 C;\n"
      "  tree rep.1 = [&R] ((1:1,2:1):1,3:2);\n"
      "  tree rep.2 = ((1:1,3:1):1,2:2);\n"
      "end;\n";
  const auto trees = parse_nexus_trees(nexus);
  REQUIRE(trees.size() == 2);
  CHECK(trees[0].name == "rep.1");
  CHECK(cophenetic_vector(trees[0].tree).values ==
        cophenetic_vector(parse_newick("((A:1,B:1):1,C:2);")).values);
  CHECK(trees[1].tree.leaf_labels() == std::vector<std::string>{"A", "B", "C"});

  // order preserved, indices replaced
  CHECK(cophenetic_vector(trees[1].tree).leaf_order == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("nexus edge cases") {
  CHECK(parse_nexus_trees("#NEXUS\nbegin trees;\nend;\n").empty());
  CHECK_THROWS_WITH_AS(parse_nexus_trees("#NEXUS\nbegin taxa;\nend;\n"),
                       doctest::Contains("no trees block"), std::runtime_error);
  const std::string unrooted =
      "#NEXUS\nbegin trees;\ntree t1 = [&U] ((A:1,B:1):1,C:2);\nend;\n";
  CHECK_THROWS_WITH_AS(parse_nexus_trees(unrooted), doctest::Contains("unrooted"),
                       std::runtime_error);
  const std::string missing_key =
      "#NEXUS\nbegin trees;\ntranslate 1 A, 2 B;\ntree t1 = ((1:1,2:1):1,3:2);\nend;\n";
  CHECK_THROWS_WITH_AS(parse_nexus_trees(missing_key), doctest::Contains("translate"),
                       std::runtime_error);
}

TEST_SUITE_END();
