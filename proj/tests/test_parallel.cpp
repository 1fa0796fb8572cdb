#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "slg/estimation.hpp"
#include "slg/params_io.hpp"
#include "slg/stats.hpp"

using namespace slg;

// The OpenMP kernels must reproduce the serial reference exactly: counting
// merges integer monoids (order-free), and floating reductions fill
// per-item slots that are summed in fixed index order.

namespace {

std::vector<DerivationTree> big_corpus() {
  Grammar g = fixtures::g0();
  return sample_corpus(fixtures::g0_l1_params(), g, 2000, 123, 80, Exec::Serial);
}

}  // namespace

TEST_CASE("parallel sampling equals serial sampling") {
  Grammar g = fixtures::g0();
  AnyParams p = fixtures::g0_l1_params();
  auto serial = sample_corpus(p, g, 500, 2024, 80, Exec::Serial);
  auto parallel = sample_corpus(p, g, 500, 2024, 80, Exec::Parallel);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("parallel counting equals serial counting at every level") {
  Grammar g = fixtures::g0();
  auto corpus = big_corpus();

  L1Counts c1s = count_events_l1(g, corpus, Exec::Serial);
  L1Counts c1p = count_events_l1(g, corpus, Exec::Parallel);
  CHECK(c1s.sub == c1p.sub);
  CHECK(c1s.adj == c1p.adj);

  L2Counts c2s = count_events_l2(g, corpus, Exec::Serial);
  L2Counts c2p = count_events_l2(g, corpus, Exec::Parallel);
  CHECK(c2s.sub == c2p.sub);
  CHECK(c2s.adj == c2p.adj);
  CHECK(c2s.root == c2p.root);

  L3Counts c3s = count_events_l3(g, corpus, Exec::Serial);
  L3Counts c3p = count_events_l3(g, corpus, Exec::Parallel);
  CHECK(c3s.expand == c3p.expand);
  CHECK(c3s.root == c3p.root);

  // Merge order cannot matter: fold two halves both ways.
  size_t mid = corpus.size() / 2;
  std::vector<DerivationTree> lo(corpus.begin(), corpus.begin() + mid);
  std::vector<DerivationTree> hi(corpus.begin() + mid, corpus.end());
  L1Counts ab = count_events_l1(g, lo);
  ab.merge(count_events_l1(g, hi));
  L1Counts ba = count_events_l1(g, hi);
  ba.merge(count_events_l1(g, lo));
  CHECK(ab.sub == ba.sub);
  CHECK(ab.adj == ba.adj);
  CHECK(ab.sub == c1s.sub);
}

TEST_CASE("parallel log-likelihood is bit-identical to serial") {
  Grammar g = fixtures::g0();
  auto corpus = big_corpus();
  for (int level : {1, 2, 3}) {
    AnyParams p = estimate(g, corpus, level, Exec::Parallel);
    double ls = corpus_log_likelihood(p, g, corpus, Exec::Serial);
    double lp = corpus_log_likelihood(p, g, corpus, Exec::Parallel);
    CHECK(ls == lp);  // exact equality, not approximate
  }
}

TEST_CASE("parallel dependency table equals serial") {
  Grammar g = fixtures::g0();
  auto corpus = big_corpus();
  SiteSelector row = SiteSelector::parse("tree:alpha1@1");
  SiteSelector col = SiteSelector::parse("tree:alpha1@2.2");
  ContingencyTable ts = dependency_table(g, corpus, row, col, OutcomeClassifier::Tree,
                                         Exec::Serial);
  ContingencyTable tp = dependency_table(g, corpus, row, col, OutcomeClassifier::Tree,
                                         Exec::Parallel);
  CHECK(ts.row_labels == tp.row_labels);
  CHECK(ts.col_labels == tp.col_labels);
  CHECK(ts.counts == tp.counts);
}

TEST_CASE("errors propagate out of parallel regions deterministically") {
  Grammar g = fixtures::g0();
  auto corpus = big_corpus();
  Slg1Params broken = fixtures::g0_l1_params();
  broken.adj.erase("VP");
  CHECK_THROWS_AS(
      corpus_log_likelihood(AnyParams{broken}, g, corpus, Exec::Parallel),
      MissingContextError);
}
