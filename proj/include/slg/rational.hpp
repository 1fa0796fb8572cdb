#ifndef SLG_RATIONAL_HPP
#define SLG_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include "slg/estimation.hpp"
#include "slg/stats.hpp"

namespace slg {

using Rational = boost::multiprecision::cpp_rational;

// Level-4 parameters with exact relative-frequency probabilities. Counts
// are integers throughout; division happens here, exactly.
struct Slg4Rational {
  std::map<std::string, std::pair<Fragment, Rational>> fragments;
};

Slg4Rational estimate_dop_exact(const std::vector<TreeNode>& trees,
                                const FragmentExtractionOptions& opt);

// Exact DOP score: q(node) = sum over matching fragments of P(f) * prod
// q(site images), in rational arithmetic.
Rational score_derived_tree_dop_exact(const Slg4Rational& p, const TreeNode& t);

// Exact Pearson statistic; scaling every count by k scales it by exactly k.
Rational chi_square_statistic_exact(const ContingencyTable& t);

}  // namespace slg

#endif  // SLG_RATIONAL_HPP
