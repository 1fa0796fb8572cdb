#include "slg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace slg {

int64_t ContingencyTable::total() const {
  int64_t n = 0;
  for (const auto& row : counts)
    for (int64_t c : row) n += c;
  return n;
}

std::string ContingencyTable::str() const {
  size_t w = 8;
  for (const auto& l : row_labels) w = std::max(w, l.size() + 2);
  for (const auto& l : col_labels) w = std::max(w, l.size() + 2);
  std::ostringstream os;
  os << std::setw(static_cast<int>(w)) << "";
  for (const auto& l : col_labels) os << std::setw(static_cast<int>(w)) << l;
  os << "\n";
  for (size_t r = 0; r < counts.size(); ++r) {
    os << std::setw(static_cast<int>(w)) << row_labels[r];
    for (int64_t c : counts[r]) os << std::setw(static_cast<int>(w)) << c;
    os << "\n";
  }
  return os.str();
}

std::string ContingencyTable::csv() const {
  std::ostringstream os;
  for (const auto& l : col_labels) os << "," << l;
  os << "\n";
  for (size_t r = 0; r < counts.size(); ++r) {
    os << row_labels[r];
    for (int64_t c : counts[r]) os << "," << c;
    os << "\n";
  }
  return os.str();
}

namespace {

// Regularized incomplete gamma by series expansion, for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction (modified Lentz), for x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_upper_tail(double statistic, int df) {
  if (df < 1) throw std::invalid_argument("chi2_upper_tail: df must be positive");
  if (statistic <= 0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * statistic);
}

ChiSquareResult chi_square(const ContingencyTable& t, bool yates) {
  size_t r = t.counts.size();
  if (r < 2) throw std::invalid_argument("chi_square: need at least 2 rows");
  size_t c = t.counts[0].size();
  if (c < 2) throw std::invalid_argument("chi_square: need at least 2 columns");
  for (const auto& row : t.counts)
    if (row.size() != c) throw std::invalid_argument("chi_square: ragged table");

  std::vector<int64_t> row_sum(r, 0), col_sum(c, 0);
  int64_t n = 0;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      if (t.counts[i][j] < 0) throw std::invalid_argument("chi_square: negative count");
      row_sum[i] += t.counts[i][j];
      col_sum[j] += t.counts[i][j];
      n += t.counts[i][j];
    }
  if (n < 1) throw std::invalid_argument("chi_square: empty table");
  for (size_t i = 0; i < r; ++i)
    if (row_sum[i] == 0) throw std::invalid_argument("chi_square: zero row marginal");
  for (size_t j = 0; j < c; ++j)
    if (col_sum[j] == 0) throw std::invalid_argument("chi_square: zero column marginal");

  double stat = 0;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      double expected = static_cast<double>(row_sum[i]) * static_cast<double>(col_sum[j]) /
                        static_cast<double>(n);
      double diff = std::abs(static_cast<double>(t.counts[i][j]) - expected);
      if (yates) diff = std::max(0.0, diff - 0.5);
      stat += diff * diff / expected;
    }

  ChiSquareResult res;
  res.statistic = stat;
  res.df = static_cast<int>((r - 1) * (c - 1));
  res.p_value = chi2_upper_tail(stat, res.df);
  return res;
}

std::string SiteSelector::str() const {
  return (kind == MotherKind::Tree ? "tree:" : "family:") + mother + "@" + addr.str();
}

SiteSelector SiteSelector::parse(const std::string& text) {
  size_t colon = text.find(':');
  size_t at = text.rfind('@');
  if (colon == std::string::npos || at == std::string::npos || at < colon)
    throw std::invalid_argument("bad selector '" + text + "', expected kind:mother@addr");
  SiteSelector s;
  std::string kind = text.substr(0, colon);
  if (kind == "tree")
    s.kind = MotherKind::Tree;
  else if (kind == "family")
    s.kind = MotherKind::Family;
  else
    throw std::invalid_argument("bad selector kind '" + kind + "'");
  s.mother = text.substr(colon + 1, at - colon - 1);
  s.addr = NodeAddress::parse(text.substr(at + 1));
  if (s.mother.empty()) throw std::invalid_argument("empty selector mother in '" + text + "'");
  return s;
}

namespace {

bool selector_matches(const Grammar& g, const SiteSelector& s, const std::string& tree) {
  if (s.kind == SiteSelector::MotherKind::Tree) return s.mother == tree;
  const auto& fam = g.tree(tree).family;
  return fam && *fam == s.mother;
}

// The filler of the selected site within one derivation node, if any.
std::optional<std::string> filler_at(const DerivationTree& d, const NodeAddress& addr) {
  for (const auto& e : d.edges) {
    if (e.addr != addr) continue;
    if (e.op == OpKind::Sub) return e.child.front().tree_name;
    return e.child.front().tree_name;  // first adjunction in edge order
  }
  return std::nullopt;
}

std::string classify_name(const Grammar& g, OutcomeClassifier c, const std::string& tree) {
  switch (c) {
    case OutcomeClassifier::Tree:
      return tree;
    case OutcomeClassifier::Family: {
      const auto& fam = g.tree(tree).family;
      return fam ? *fam : tree;
    }
    case OutcomeClassifier::Template:
      return g.tree(tree).template_id;
  }
  return tree;
}

void walk_pairs(const Grammar& g, const DerivationTree& d, const SiteSelector& row,
                const SiteSelector& col, OutcomeClassifier classify,
                std::map<std::pair<std::string, std::string>, int64_t>& cells) {
  if (selector_matches(g, row, d.tree_name) && selector_matches(g, col, d.tree_name)) {
    auto rf = filler_at(d, row.addr);
    auto cf = filler_at(d, col.addr);
    if (rf && cf)
      ++cells[{classify_name(g, classify, *rf), classify_name(g, classify, *cf)}];
  }
  for (const auto& e : d.edges) walk_pairs(g, e.child.front(), row, col, classify, cells);
}

}  // namespace

ContingencyTable dependency_table(const Grammar& g,
                                  const std::vector<DerivationTree>& corpus,
                                  const SiteSelector& row, const SiteSelector& col,
                                  OutcomeClassifier classify, Exec exec) {
  using CellMap = std::map<std::pair<std::string, std::string>, int64_t>;
  CellMap cells = reduce_indexed<CellMap>(
      corpus.size(), exec,
      [&](CellMap& acc, size_t i) { walk_pairs(g, corpus[i], row, col, classify, acc); },
      [](CellMap& total, const CellMap& acc) {
        for (const auto& [k, n] : acc) total[k] += n;
      });

  if (cells.empty())
    throw std::invalid_argument("selectors matched nothing: " + row.str() + " x " + col.str());

  std::vector<std::string> rows, cols;
  for (const auto& [k, n] : cells) {
    if (std::find(rows.begin(), rows.end(), k.first) == rows.end()) rows.push_back(k.first);
    if (std::find(cols.begin(), cols.end(), k.second) == cols.end()) cols.push_back(k.second);
  }
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());

  ContingencyTable t;
  t.row_labels = rows;
  t.col_labels = cols;
  t.counts.assign(rows.size(), std::vector<int64_t>(cols.size(), 0));
  for (const auto& [k, n] : cells) {
    size_t r = static_cast<size_t>(std::find(rows.begin(), rows.end(), k.first) - rows.begin());
    size_t c = static_cast<size_t>(std::find(cols.begin(), cols.end(), k.second) - cols.begin());
    t.counts[r][c] = n;
  }
  return t;
}

}  // namespace slg
