#ifndef SLG_TESTS_FIXTURES_HPP
#define SLG_TESTS_FIXTURES_HPP

#include <string>

#include "slg/derivation.hpp"
#include "slg/grammar.hpp"
#include "slg/models.hpp"
#include "slg/params_io.hpp"

namespace fixtures {

// The running example grammar: transitive verb, a bare and a determined
// noun phrase, and one VP modifier.
inline const char* kG0 = R"(start S
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

// G0 plus a second modifier and a second proper noun sharing templates, for
// order-sensitivity and smoothing tests.
inline const char* kG1 = R"(start S
tree alpha1 initial anchor=drives
(S NP! (VP (V "drives") NP!))
tree alpha2 initial anchor=John
(NP (N "John"))
tree alpha2b initial anchor=Mary
(NP (N "Mary"))
tree alpha3 initial anchor=car
(NP Det! (N "car"))
tree beta auxiliary anchor=slowly
(VP VP* (Adj "slowly"))
tree beta2 auxiliary anchor=often
(VP VP* (Adj "often"))
tree delta initial anchor=the
(Det "the")
)";

inline const char* kD1 = "(alpha1 (1 sub (alpha2)) (2.2 sub (alpha3 (1 sub (delta)))))";
inline const char* kD2 =
    "(alpha1 (1 sub (alpha2)) (2 adj (beta)) (2.2 sub (alpha3 (1 sub (delta)))))";

inline const char* kG0L1Params = R"(slg1 sub S alpha1 1.0
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

inline slg::Grammar g0() { return slg::parse_grammar(kG0); }
inline slg::Grammar g1() { return slg::parse_grammar(kG1); }
inline slg::DerivationTree d1() { return slg::parse_derivation(kD1); }
inline slg::DerivationTree d2() { return slg::parse_derivation(kD2); }
inline std::vector<slg::DerivationTree> corpus_d123() { return {d1(), d2(), d1()}; }
inline slg::Slg1Params g0_l1_params() {
  return std::get<slg::Slg1Params>(slg::parse_params(kG0L1Params));
}

}  // namespace fixtures

#endif  // SLG_TESTS_FIXTURES_HPP
