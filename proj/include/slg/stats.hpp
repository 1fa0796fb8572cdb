#ifndef SLG_STATS_HPP
#define SLG_STATS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "slg/derivation.hpp"
#include "slg/grammar.hpp"
#include "slg/parallel.hpp"

namespace slg {

struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<int64_t>> counts;  // counts[r][c]

  int64_t total() const;
  std::string str() const;   // aligned text
  std::string csv() const;
};

struct ChiSquareResult {
  double statistic = 0;
  int df = 0;
  double p_value = 1;
};

// Pearson statistic with expected counts E = row*col/N and upper-tail
// p-value from the chi-square distribution, Q(df/2, x/2). Throws
// std::invalid_argument on tables smaller than 2x2 or with a zero marginal.
ChiSquareResult chi_square(const ContingencyTable& t, bool yates = false);

// Upper regularized incomplete gamma Q(a, x); chi-square upper tail is
// Q(df/2, x/2).
double gamma_q(double a, double x);
double chi2_upper_tail(double statistic, int df);

// Which derivational choice to cross-tabulate: the filler of one site
// (mother tree or family, address). A site is "filled" by its substitution
// child or by the first of its adjunctions.
struct SiteSelector {
  enum class MotherKind { Tree, Family };
  MotherKind kind = MotherKind::Tree;
  std::string mother;
  NodeAddress addr;

  std::string str() const;
  // Syntax: tree:alpha1@1 or family:F2@2.2
  static SiteSelector parse(const std::string& text);
};

enum class OutcomeClassifier { Tree, Family, Template };

// Cross-tabulates the fillers of two sites over every derivation-tree node
// matching both selectors. Throws std::invalid_argument if a selector
// matches nothing.
ContingencyTable dependency_table(const Grammar& g,
                                  const std::vector<DerivationTree>& corpus,
                                  const SiteSelector& row, const SiteSelector& col,
                                  OutcomeClassifier classify = OutcomeClassifier::Tree,
                                  Exec exec = Exec::Serial);

}  // namespace slg

#endif  // SLG_STATS_HPP
