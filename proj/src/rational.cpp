#include "slg/rational.hpp"

namespace slg {

Slg4Rational estimate_dop_exact(const std::vector<TreeNode>& trees,
                                const FragmentExtractionOptions& opt) {
  if (trees.empty()) throw std::invalid_argument("nothing to estimate: empty corpus");
  auto counts = extract_fragments(trees, opt);
  std::map<std::string, int64_t> per_root;
  for (const auto& [key, fc] : counts) per_root[fc.first.body.label] += fc.second;
  Slg4Rational p;
  for (const auto& [key, fc] : counts)
    p.fragments.emplace(
        key, std::make_pair(fc.first, Rational(fc.second, per_root[fc.first.body.label])));
  return p;
}

namespace {

bool fragment_matches_exact(const TreeNode& f, const TreeNode& t,
                            std::vector<const TreeNode*>& site_images) {
  if (f.kind == NodeKind::SubstitutionSite) {
    if (t.label != f.label || t.kind == NodeKind::Terminal) return false;
    site_images.push_back(&t);
    return true;
  }
  if (f.kind == NodeKind::Terminal)
    return t.kind == NodeKind::Terminal && t.label == f.label;
  if (t.kind != NodeKind::Interior || t.label != f.label) return false;
  if (f.children.size() != t.children.size()) return false;
  for (size_t i = 0; i < f.children.size(); ++i)
    if (!fragment_matches_exact(f.children[i], t.children[i], site_images)) return false;
  return true;
}

Rational dop_q_exact(const Slg4Rational& p, const TreeNode& t,
                     std::map<const TreeNode*, Rational>& memo) {
  if (auto it = memo.find(&t); it != memo.end()) return it->second;
  Rational q = 0;
  for (const auto& [key, fp] : p.fragments) {
    const auto& [frag, prob] = fp;
    if (frag.body.label != t.label) continue;
    std::vector<const TreeNode*> images;
    if (!fragment_matches_exact(frag.body, t, images)) continue;
    Rational term = prob;
    for (const auto* img : images) term *= dop_q_exact(p, *img, memo);
    q += term;
  }
  memo[&t] = q;
  return q;
}

}  // namespace

Rational score_derived_tree_dop_exact(const Slg4Rational& p, const TreeNode& t) {
  std::map<const TreeNode*, Rational> memo;
  return dop_q_exact(p, t, memo);
}

Rational chi_square_statistic_exact(const ContingencyTable& t) {
  size_t r = t.counts.size();
  if (r < 2) throw std::invalid_argument("chi_square: need at least 2 rows");
  size_t c = t.counts[0].size();
  if (c < 2) throw std::invalid_argument("chi_square: need at least 2 columns");
  std::vector<Rational> row_sum(r, 0), col_sum(c, 0);
  Rational n = 0;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      row_sum[i] += t.counts[i][j];
      col_sum[j] += t.counts[i][j];
      n += t.counts[i][j];
    }
  if (n == 0) throw std::invalid_argument("chi_square: empty table");
  Rational stat = 0;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      if (row_sum[i] == 0 || col_sum[j] == 0)
        throw std::invalid_argument("chi_square: zero marginal");
      Rational expected = row_sum[i] * col_sum[j] / n;
      Rational diff = t.counts[i][j] - expected;
      stat += diff * diff / expected;
    }
  return stat;
}

}  // namespace slg
