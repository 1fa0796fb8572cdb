#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "slg/search.hpp"

using namespace slg;

TEST_CASE("bounded enumeration, hand-enumerated counts") {
  Grammar g = fixtures::g0();

  // No adjunction, at most 4 tree uses. Subject and object each cost 1
  // (alpha2) or 2 (alpha3+delta) uses on top of alpha1: 3 of the 4
  // subject/object combinations fit.
  SearchBounds b4;
  b4.max_tree_uses = 4;
  b4.max_adj_per_node = 0;
  auto d4 = enumerate_derivations(g, b4);
  CHECK(d4.size() == 3);

  // At 5 uses the double-alpha3 combination fits too.
  SearchBounds b5 = b4;
  b5.max_tree_uses = 5;
  CHECK(enumerate_derivations(g, b5).size() == 4);

  // Every enumerated derivation is valid and complete.
  for (const auto& d : d4) CHECK(validate_derivation(g, d).empty());

  // A grammar whose only initial tree has no substitution sites has
  // exactly one derivation under no-adjunction bounds.
  Grammar tiny = parse_grammar("tree t initial\n(S (A \"x\"))\n");
  SearchBounds b1;
  b1.max_tree_uses = 3;
  b1.max_adj_per_node = 0;
  CHECK(enumerate_derivations(tiny, b1).size() == 1);

  // Bounds too small to complete anything: empty stream.
  SearchBounds b0;
  b0.max_tree_uses = 2;
  CHECK(enumerate_derivations(g, b0).empty());
}

TEST_CASE("enumeration is duplicate-free, canonical, deterministic") {
  Grammar g = fixtures::g0();
  SearchBounds b;
  b.max_tree_uses = 6;
  auto ds = enumerate_derivations(g, b);
  std::set<std::string> seen;
  for (const auto& d : ds) CHECK(seen.insert(render_derivation(d)).second);
  for (size_t i = 1; i < ds.size(); ++i) CHECK(compare(ds[i - 1], ds[i]) < 0);

  auto again = enumerate_derivations(g, b);
  REQUIRE(again.size() == ds.size());
  for (size_t i = 0; i < ds.size(); ++i) CHECK(ds[i] == again[i]);
}

TEST_CASE("mass is monotone in the bound and near 1 for the fixture model") {
  Grammar g = fixtures::g0();
  AnyParams p = fixtures::g0_l1_params();

  double prev = 0;
  for (int uses = 1; uses <= 8; ++uses) {
    SearchBounds b;
    b.max_tree_uses = uses;
    double mass = enumeration_mass(p, g, b);
    CHECK(mass >= prev - 1e-12);
    CHECK(mass <= 1.0 + 1e-9);
    prev = mass;
  }

  // Independent oracle for the total mass: the adjunction process at each
  // VP node is a branching process with offspring count geometric(4/5),
  // so P(total betas = k) = Catalan(k) (1/5)^k (4/5)^(k+1), and
  // subject/object cost 1 or 2 uses with probability 1/2 each:
  //   mass(6) = 1/4 P(T<=3) + 1/2 P(T<=2) + 1/4 P(T<=1) = 0.962816
  //   mass(8) = 1/4 P(T<=5) + 1/2 P(T<=4) + 1/4 P(T<=3) = 0.99172982784
  SearchBounds b6;
  b6.max_tree_uses = 6;
  CHECK(enumeration_mass(p, g, b6) == doctest::Approx(0.962816).epsilon(1e-9));
  SearchBounds b8;
  b8.max_tree_uses = 8;
  double m8 = enumeration_mass(p, g, b8);
  CHECK(m8 == doctest::Approx(0.99172982784).epsilon(1e-9));
  CHECK(m8 >= 0.99);
}

TEST_CASE("yield bound filters enumerations") {
  Grammar g = fixtures::g0();
  SearchBounds b;
  b.max_tree_uses = 6;
  auto all = enumerate_derivations(g, b);
  b.max_yield = 4;
  auto short_only = enumerate_derivations(g, b);
  CHECK(short_only.size() < all.size());
  for (const auto& d : short_only) CHECK(yield_of(derive(g, d)).size() <= 4);
}

TEST_CASE("sentence probability") {
  Grammar g = fixtures::g0();
  AnyParams p = fixtures::g0_l1_params();
  SearchBounds b;
  b.max_tree_uses = 6;

  // Unique parse within bounds; equals the derivation's own score.
  std::vector<std::string> s = {"John", "drives", "the", "car", "slowly"};
  CHECK(sentence_probability(p, g, s, b) == doctest::Approx(0.032).epsilon(1e-12));

  std::vector<std::string> oov = {"Mary", "sleeps"};
  CHECK(sentence_probability(p, g, oov, b) == 0.0);

  // Partition check: sentence probabilities over all enumerated yields sum
  // to the total enumerated mass.
  std::set<std::vector<std::string>> yields;
  for (const auto& d : enumerate_derivations(g, b)) yields.insert(yield_of(derive(g, d)));
  double by_sentence = 0;
  for (const auto& y : yields) by_sentence += sentence_probability(p, g, y, b);
  CHECK(by_sentence == doctest::Approx(enumeration_mass(p, g, b)).epsilon(1e-12));
}

TEST_CASE("nbest ranking") {
  // Ambiguous grammar: "John drives the car" parses via the two-site tree
  // or via a subject-anchored tree.
  Grammar g = parse_grammar(R"(start S
tree s1 initial anchor=drives
(S NP! (VP (V "drives") NP!))
tree s2 initial anchor=John
(S (NP (N "John")) (VP (V "drives") NP!))
tree alpha2 initial anchor=John
(NP (N "John"))
tree alpha3 initial anchor=car
(NP Det! (N "car"))
tree delta initial anchor=the
(Det "the")
)");
  auto params = [&](double p_s1) {
    std::string text = "slg1 sub S s1 " + std::to_string(p_s1) + "\n" +
                       "slg1 sub S s2 " + std::to_string(1 - p_s1) + "\n" +
                       R"(slg1 sub NP alpha2 0.5
slg1 sub NP alpha3 0.5
slg1 sub Det delta 1.0
slg1 adj S STOP 1.0
slg1 adj NP STOP 1.0
slg1 adj N STOP 1.0
slg1 adj VP STOP 1.0
slg1 adj V STOP 1.0
slg1 adj Det STOP 1.0
)";
    return parse_params(text);
  };
  SearchBounds b;
  b.max_tree_uses = 6;
  std::vector<std::string> s = {"John", "drives", "the", "car"};

  // P(s1)=0.8: the s1 parse (0.8*0.5*0.5) beats the s2 parse (0.2*0.5).
  auto r1 = nbest(params(0.8), g, s, 5, b);
  REQUIRE(r1.size() == 2);  // k larger than the parse count returns all
  CHECK(r1[0].derivation.tree_name == "s1");
  CHECK(std::exp(r1[0].log_prob) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::exp(r1[1].log_prob) == doctest::Approx(0.1).epsilon(1e-12));

  // Flipping the root probabilities flips the ranking.
  auto r2 = nbest(params(0.2), g, s, 5, b);
  REQUIRE(r2.size() == 2);
  CHECK(r2[0].derivation.tree_name == "s2");

  // k = 1 returns the unique top parse; nbest(k) is a prefix of nbest(k+1).
  auto top1 = nbest(params(0.8), g, s, 1, b);
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].derivation == r1[0].derivation);
}
