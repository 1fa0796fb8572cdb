#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "slg/estimation.hpp"
#include "slg/rational.hpp"
#include "slg/stats.hpp"

using namespace slg;

namespace {

ContingencyTable table2x2(int64_t a, int64_t b, int64_t c, int64_t d) {
  ContingencyTable t;
  t.row_labels = {"r1", "r2"};
  t.col_labels = {"c1", "c2"};
  t.counts = {{a, b}, {c, d}};
  return t;
}

}  // namespace

TEST_CASE("pearson statistic, hand-computed") {
  // Expected counts for [[10,20],[30,40]] are [[12,18],[28,42]]:
  // 4/12 + 4/18 + 4/28 + 4/42 = 50/63.
  auto r = chi_square(table2x2(10, 20, 30, 40));
  CHECK(r.statistic == doctest::Approx(50.0 / 63.0).epsilon(1e-12));
  CHECK(r.df == 1);

  // Perfect independence.
  auto flat = chi_square(table2x2(10, 10, 10, 10));
  CHECK(flat.statistic == 0.0);
  CHECK(flat.p_value == 1.0);

  // Exact rational route agrees.
  CHECK(chi_square_statistic_exact(table2x2(10, 20, 30, 40)) == Rational(50, 63));
}

TEST_CASE("statistic is invariant under permutation and scales with counts") {
  auto r = chi_square(table2x2(10, 20, 30, 40));
  // Swap rows, swap columns, transpose.
  CHECK(chi_square(table2x2(30, 40, 10, 20)).statistic ==
        doctest::Approx(r.statistic).epsilon(1e-12));
  CHECK(chi_square(table2x2(20, 10, 40, 30)).statistic ==
        doctest::Approx(r.statistic).epsilon(1e-12));
  CHECK(chi_square(table2x2(10, 30, 20, 40)).statistic ==
        doctest::Approx(r.statistic).epsilon(1e-12));

  // Scaling all counts by k scales the statistic by exactly k (rational).
  Rational base = chi_square_statistic_exact(table2x2(10, 20, 30, 40));
  Rational scaled = chi_square_statistic_exact(table2x2(70, 140, 210, 280));
  CHECK(scaled == base * 7);
}

TEST_CASE("upper-tail anchors") {
  // Standard-normal-squared critical values at df 1.
  CHECK(chi2_upper_tail(3.841, 1) == doctest::Approx(0.05).epsilon(0.02));
  CHECK(chi2_upper_tail(3.841, 1) >= 0.049);
  CHECK(chi2_upper_tail(3.841, 1) <= 0.051);
  CHECK(chi2_upper_tail(10.83, 1) == doctest::Approx(0.001).epsilon(0.01));
  // The reported pairing: 40.53 at 1 df is significant far below 0.001.
  CHECK(chi2_upper_tail(40.53, 1) < 0.001);
  // At df 2 the tail is exactly exp(-x/2).
  for (double x : {0.5, 1.0, 3.0, 10.0})
    CHECK(chi2_upper_tail(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-12));
  // Degenerate argument handling.
  CHECK(chi2_upper_tail(0.0, 5) == 1.0);
  CHECK_THROWS_AS(chi2_upper_tail(1.0, 0), std::invalid_argument);
}

TEST_CASE("yates continuity correction is off by default") {
  auto plain = chi_square(table2x2(10, 20, 30, 40));
  auto corrected = chi_square(table2x2(10, 20, 30, 40), true);
  CHECK(corrected.statistic < plain.statistic);
  // Hand value: |O-E| drops from 2 to 1.5 in every cell: 50/63 * (1.5/2)^2.
  CHECK(corrected.statistic ==
        doctest::Approx(50.0 / 63.0 * (1.5 * 1.5) / 4.0).epsilon(1e-12));
}

TEST_CASE("chi-square preconditions") {
  ContingencyTable bad;
  bad.row_labels = {"r"};
  bad.col_labels = {"a", "b"};
  bad.counts = {{1, 2}};
  CHECK_THROWS_AS(chi_square(bad), std::invalid_argument);
  // Zero marginal.
  CHECK_THROWS_AS(chi_square(table2x2(0, 0, 5, 5)), std::invalid_argument);
}

TEST_CASE("selector syntax") {
  SiteSelector s = SiteSelector::parse("tree:alpha1@2.2");
  CHECK(s.kind == SiteSelector::MotherKind::Tree);
  CHECK(s.mother == "alpha1");
  CHECK(s.addr == NodeAddress::parse("2.2"));
  SiteSelector f = SiteSelector::parse("family:F1@1");
  CHECK(f.kind == SiteSelector::MotherKind::Family);
  CHECK(SiteSelector::parse(s.str()).mother == "alpha1");
  CHECK_THROWS_AS(SiteSelector::parse("alpha1@1"), std::invalid_argument);
  CHECK_THROWS_AS(SiteSelector::parse("tree:x"), std::invalid_argument);
}

namespace {

const char* kCoupledGrammar = R"(start S
tree s1 initial anchor=sees
(S NP! (VP (V "sees") NP!))
tree na initial anchor=alice
(NP (N "alice"))
tree nb initial anchor=it
(NP (Pro "it"))
)";

const char* kCoupledL3 = R"(
slg3 root s1 1.0
slg3 expand s1 {eps>[]; 1>na; 2>[]; 2.1>[]; 2.2>na} 0.5
slg3 expand s1 {eps>[]; 1>nb; 2>[]; 2.1>[]; 2.2>nb} 0.5
slg3 expand na {eps>[]; 1>[]} 1.0
slg3 expand nb {eps>[]; 1>[]} 1.0
)";

const char* kIndependentL1 = R"(
slg1 sub S s1 1.0
slg1 sub NP na 0.5
slg1 sub NP nb 0.5
slg1 adj S STOP 1.0
slg1 adj NP STOP 1.0
slg1 adj N STOP 1.0
slg1 adj Pro STOP 1.0
slg1 adj VP STOP 1.0
slg1 adj V STOP 1.0
)";

}  // namespace

TEST_CASE("dependency table separates coupled from independent corpora") {
  Grammar g = parse_grammar(kCoupledGrammar);
  SiteSelector row = SiteSelector::parse("tree:s1@1");
  SiteSelector col = SiteSelector::parse("tree:s1@2.2");

  // Corpus sampled from the coupled level-3 model: the table concentrates
  // on the diagonal and independence is rejected hard.
  AnyParams coupled = parse_params(kCoupledL3);
  auto corpus = sample_corpus(coupled, g, 400, 7, 50);
  ContingencyTable t = dependency_table(g, corpus, row, col);
  REQUIRE(t.counts.size() == 2);
  CHECK(t.counts[0][1] == 0);
  CHECK(t.counts[1][0] == 0);
  CHECK(t.total() == 400);
  auto r = chi_square(t);
  CHECK(r.p_value < 0.05);

  // Corpus sampled from an independent model: no signal.
  AnyParams indep = parse_params(kIndependentL1);
  auto corpus2 = sample_corpus(indep, g, 400, 7, 50);
  auto r2 = chi_square(dependency_table(g, corpus2, row, col));
  CHECK(r2.p_value > 0.001);

  // Selector matching nothing is reported.
  SiteSelector wrong = SiteSelector::parse("tree:nosuch@1");
  CHECK_THROWS_AS(dependency_table(g, corpus, wrong, col), std::invalid_argument);

  // A single-derivation corpus gives a degenerate table that chi_square
  // rejects by precondition.
  std::vector<DerivationTree> one = {corpus[0]};
  ContingencyTable degenerate = dependency_table(g, one, row, col);
  CHECK_THROWS_AS(chi_square(degenerate), std::invalid_argument);
}

TEST_CASE("dependency table renders as text and csv") {
  ContingencyTable t = table2x2(1, 2, 3, 4);
  CHECK(t.str().find("r1") != std::string::npos);
  CHECK(t.csv() == ",c1,c2\nr1,1,2\nr2,3,4\n");
}
