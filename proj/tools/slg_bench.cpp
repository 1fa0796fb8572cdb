// Times the corpus-scale kernels in their serial and OpenMP variants and
// checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <string>

#include "slg/estimation.hpp"
#include "slg/params_io.hpp"
#include "slg/stats.hpp"

using namespace slg;

namespace {

const char* kGrammar = R"(start S
tree alpha1 initial anchor=drives
(S NP! (VP (V "drives") NP!))
tree alpha2 initial anchor=John
(NP (N "John"))
tree alpha3 initial anchor=car
(NP Det! (N "car"))
tree beta auxiliary anchor=slowly
(VP VP* (Adj "slowly"))
tree delta initial anchor=the
(Det "the")
)";

const char* kParams = R"(slg1 sub S alpha1 1.0
slg1 sub NP alpha2 0.5
slg1 sub NP alpha3 0.5
slg1 sub Det delta 1.0
slg1 adj VP beta 0.2
slg1 adj VP STOP 0.8
slg1 adj S STOP 1.0
slg1 adj NP STOP 1.0
slg1 adj N STOP 1.0
slg1 adj V STOP 1.0
slg1 adj Det STOP 1.0
slg1 adj Adj STOP 1.0
)";

template <class F>
double time_ms(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const std::string& name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-24s %10.1f ms %10.1f ms   x%-5.2f %s\n", name.c_str(), serial_ms,
              parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 200000;
  Grammar g = parse_grammar(kGrammar);
  AnyParams p = parse_params(kParams);

  std::printf("threads: %d, corpus size: %d\n", hardware_threads(), n);

  std::vector<DerivationTree> cs, cp;
  double t_ss = time_ms([&]() { cs = sample_corpus(p, g, n, 7, 100, Exec::Serial); });
  double t_sp = time_ms([&]() { cp = sample_corpus(p, g, n, 7, 100, Exec::Parallel); });
  row("sample_corpus", t_ss, t_sp, cs == cp);

  L1Counts l1s, l1p;
  double t_c1s = time_ms([&]() { l1s = count_events_l1(g, cs, Exec::Serial); });
  double t_c1p = time_ms([&]() { l1p = count_events_l1(g, cs, Exec::Parallel); });
  row("count_events level 1", t_c1s, t_c1p, l1s.sub == l1p.sub && l1s.adj == l1p.adj);

  L3Counts l3s, l3p;
  double t_c3s = time_ms([&]() { l3s = count_events_l3(g, cs, Exec::Serial); });
  double t_c3p = time_ms([&]() { l3p = count_events_l3(g, cs, Exec::Parallel); });
  row("count_events level 3", t_c3s, t_c3p,
      l3s.expand == l3p.expand && l3s.root == l3p.root);

  double lls = 0, llp = 0;
  double t_lls = time_ms([&]() { lls = corpus_log_likelihood(p, g, cs, Exec::Serial); });
  double t_llp = time_ms([&]() { llp = corpus_log_likelihood(p, g, cs, Exec::Parallel); });
  row("corpus_log_likelihood", t_lls, t_llp, lls == llp);

  SiteSelector r = SiteSelector::parse("tree:alpha1@1");
  SiteSelector c = SiteSelector::parse("tree:alpha1@2.2");
  ContingencyTable ts, tp;
  double t_ts = time_ms(
      [&]() { ts = dependency_table(g, cs, r, c, OutcomeClassifier::Tree, Exec::Serial); });
  double t_tp = time_ms(
      [&]() { tp = dependency_table(g, cs, r, c, OutcomeClassifier::Tree, Exec::Parallel); });
  row("dependency_table", t_ts, t_tp, ts.counts == tp.counts);

  return 0;
}
