#include "slg/models.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>

namespace slg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_or_neg_inf(double p) { return p > 0 ? std::log(p) : kNegInf; }

template <class Outcome>
void check_dist(const Dist<Outcome>& d, const std::string& where,
                std::vector<std::string>& out) {
  double sum = 0;
  for (const auto& [o, v] : d.p) {
    if (v < 0) out.push_back(where + ": negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os << where << ": probabilities sum to " << sum;
    out.push_back(os.str());
  }
}

void check_tree_outcome(const Grammar& g, const std::string& name, TreeKind kind,
                        const std::string& label, const std::string& where,
                        std::vector<std::string>& out) {
  if (!g.has_tree(name)) {
    out.push_back(where + ": unknown tree '" + name + "'");
    return;
  }
  const ElementaryTree& t = g.tree(name);
  if (t.kind != kind)
    out.push_back(where + ": tree '" + name + "' has the wrong kind");
  if (t.root.label != label)
    out.push_back(where + ": tree '" + name + "' is rooted in '" + t.root.label +
                  "', context expects '" + label + "'");
}

}  // namespace

int fragment_depth(const TreeNode& body) {
  int d = 0;
  for (const auto& c : body.children) d = std::max(d, 1 + fragment_depth(c));
  return d;
}

std::string fragment_key(const Fragment& f) { return render_node(f.body); }

std::vector<std::string> check_well_formed(const Slg1Params& p, const Grammar& g) {
  std::vector<std::string> out;
  for (const auto& [label, d] : p.sub) {
    std::string where = "slg1 sub " + label;
    check_dist(d, where, out);
    for (const auto& [o, v] : d.p)
      check_tree_outcome(g, o, TreeKind::Initial, label, where, out);
  }
  for (const auto& [label, d] : p.adj) {
    std::string where = "slg1 adj " + label;
    check_dist(d, where, out);
    for (const auto& [o, v] : d.p)
      if (o != kStop) check_tree_outcome(g, o, TreeKind::Auxiliary, label, where, out);
  }
  return out;
}

std::vector<std::string> check_well_formed(const Slg2Params& p, const Grammar& g) {
  std::vector<std::string> out;
  auto site_label = [&](const Slg2Key& k, std::vector<std::string>& sink) -> std::string {
    if (!g.has_tree(k.host)) {
      sink.push_back("slg2 context " + k.str() + ": unknown host tree");
      return "";
    }
    try {
      return node_at(g.tree(k.host), k.addr).label;
    } catch (const std::out_of_range&) {
      sink.push_back("slg2 context " + k.str() + ": no node at address");
      return "";
    }
  };
  for (const auto& [key, d] : p.sub) {
    std::string where = "slg2 sub " + key.str();
    check_dist(d, where, out);
    std::string label = site_label(key, out);
    if (label.empty()) continue;
    for (const auto& [o, v] : d.p)
      check_tree_outcome(g, o, TreeKind::Initial, label, where, out);
  }
  for (const auto& [key, d] : p.adj) {
    std::string where = "slg2 adj " + key.str();
    check_dist(d, where, out);
    std::string label = site_label(key, out);
    if (label.empty()) continue;
    for (const auto& [o, v] : d.p)
      if (o != kStop) check_tree_outcome(g, o, TreeKind::Auxiliary, label, where, out);
  }
  if (!p.root.p.empty()) {
    check_dist(p.root, "slg2 root", out);
    for (const auto& [o, v] : p.root.p)
      check_tree_outcome(g, o, TreeKind::Initial, g.start_symbol(), "slg2 root", out);
  }
  return out;
}

std::vector<std::string> check_well_formed(const Slg3Params& p, const Grammar& g) {
  std::vector<std::string> out;
  check_dist(p.root, "slg3 root", out);
  for (const auto& [o, v] : p.root.p)
    check_tree_outcome(g, o, TreeKind::Initial, g.start_symbol(), "slg3 root", out);
  for (const auto& [mother, d] : p.expand) {
    std::string where = "slg3 expand " + mother;
    check_dist(d, where, out);
    if (!g.has_tree(mother)) {
      out.push_back(where + ": unknown mother tree");
      continue;
    }
    const Sites& sites = g.sites_of(mother);
    for (const auto& [mp, v] : d.p) {
      // The expansion must cover exactly the mother's sites.
      if (mp.sub.size() != sites.substitution.size() ||
          mp.adj.size() != sites.adjunction.size()) {
        out.push_back(where + ": expansion " + mp.str() + " does not cover the mother's sites");
        continue;
      }
      bool shape_ok = true;
      for (size_t i = 0; i < mp.sub.size(); ++i)
        if (mp.sub[i].first != sites.substitution[i].addr) shape_ok = false;
      for (size_t i = 0; i < mp.adj.size(); ++i)
        if (mp.adj[i].first != sites.adjunction[i].addr) shape_ok = false;
      if (!shape_ok) {
        out.push_back(where + ": expansion " + mp.str() + " addresses do not match the mother");
        continue;
      }
      for (size_t i = 0; i < mp.sub.size(); ++i)
        check_tree_outcome(g, mp.sub[i].second, TreeKind::Initial,
                           sites.substitution[i].label, where, out);
      for (size_t i = 0; i < mp.adj.size(); ++i)
        for (const auto& aux : mp.adj[i].second)
          check_tree_outcome(g, aux, TreeKind::Auxiliary, sites.adjunction[i].label, where,
                             out);
    }
  }
  return out;
}

std::vector<std::string> check_well_formed(const Slg4Params& p) {
  std::vector<std::string> out;
  std::map<std::string, double> per_root;
  for (const auto& [key, fp] : p.fragments) {
    const auto& [frag, prob] = fp;
    if (prob < 0) out.push_back("slg4 " + key + ": negative probability");
    per_root[frag.body.label] += prob;
  }
  for (const auto& [label, sum] : per_root) {
    if (std::abs(sum - 1.0) > kSumTolerance) {
      std::ostringstream os;
      os << "slg4 root label " << label << ": probabilities sum to " << sum;
      out.push_back(os.str());
    }
  }
  return out;
}

double site_event_log_prob(const Slg1Params& p, const SiteEvent& e) {
  const auto& table = e.op == OpKind::Sub ? p.sub : p.adj;
  auto it = table.find(e.site_label);
  if (it == table.end())
    throw MissingContextError("slg1 " + std::string(e.op == OpKind::Sub ? "sub " : "adj ") +
                              e.site_label);
  return log_or_neg_inf(it->second.prob(e.outcome));
}

double site_event_log_prob(const Slg2Params& p, const SiteEvent& e) {
  if (e.is_root) {
    if (p.root.p.empty()) throw MissingContextError("slg2 root");
    return log_or_neg_inf(p.root.prob(e.outcome));
  }
  const auto& table = e.op == OpKind::Sub ? p.sub : p.adj;
  Slg2Key key{e.host, e.addr};
  auto it = table.find(key);
  if (it == table.end())
    throw MissingContextError("slg2 " + std::string(e.op == OpKind::Sub ? "sub " : "adj ") +
                              key.str());
  return log_or_neg_inf(it->second.prob(e.outcome));
}

double score_derivation(const Slg1Params& p, const Grammar& g, const DerivationTree& d) {
  double lp = 0;
  for (const auto& e : extract_site_events(g, d)) lp += site_event_log_prob(p, e);
  return lp;
}

double score_derivation(const Slg2Params& p, const Grammar& g, const DerivationTree& d) {
  double lp = 0;
  for (const auto& e : extract_site_events(g, d)) lp += site_event_log_prob(p, e);
  return lp;
}

double score_derivation(const Slg3Params& p, const Grammar& g, const DerivationTree& d) {
  if (p.root.p.empty()) throw MissingContextError("slg3 root");
  double lp = log_or_neg_inf(p.root.prob(d.tree_name));
  for (const auto& ev : extract_expansion_events(g, d)) {
    auto it = p.expand.find(ev.mother);
    if (it == p.expand.end()) throw MissingContextError("slg3 expand " + ev.mother);
    auto out = it->second.p.find(ev.production);
    if (out == it->second.p.end())
      throw MissingContextError("slg3 expand " + ev.mother + " " + ev.production.str());
    lp += log_or_neg_inf(out->second);
  }
  return lp;
}

double expansion_log_prob(const LiftedSlg3& p, const Grammar&, const std::string& mother,
                          const MetaProduction& mp) {
  double lp = 0;
  for (const auto& [addr, name] : mp.sub) {
    SiteEvent e{false, mother, addr, OpKind::Sub, "", name};
    lp += site_event_log_prob(p.base, e);
  }
  for (const auto& [addr, seq] : mp.adj) {
    for (const auto& aux : seq) {
      SiteEvent e{false, mother, addr, OpKind::Adj, "", aux};
      lp += site_event_log_prob(p.base, e);
    }
    SiteEvent stop{false, mother, addr, OpKind::Adj, "", kStop};
    lp += site_event_log_prob(p.base, stop);
  }
  return lp;
}

double score_derivation(const LiftedSlg3& p, const Grammar& g, const DerivationTree& d) {
  if (p.base.root.p.empty()) throw MissingContextError("slg2 root");
  double lp = log_or_neg_inf(p.base.root.prob(d.tree_name));
  for (const auto& ev : extract_expansion_events(g, d))
    lp += expansion_log_prob(p, g, ev.mother, ev.production);
  return lp;
}

namespace {

// Does fragment node f match the derived tree at node t? Open sites match
// any node with the right label and stop recursion; interior fragment nodes
// must reproduce t's label and full child list.
bool fragment_matches(const TreeNode& f, const TreeNode& t,
                      std::vector<const TreeNode*>* site_images) {
  if (f.kind == NodeKind::SubstitutionSite) {
    if (t.label != f.label || t.kind == NodeKind::Terminal) return false;
    if (site_images) site_images->push_back(&t);
    return true;
  }
  if (f.kind == NodeKind::Terminal)
    return t.kind == NodeKind::Terminal && t.label == f.label;
  if (t.kind != NodeKind::Interior || t.label != f.label) return false;
  if (f.children.size() != t.children.size()) return false;
  for (size_t i = 0; i < f.children.size(); ++i)
    if (!fragment_matches(f.children[i], t.children[i], site_images)) return false;
  return true;
}

double dop_q(const Slg4Params& p, const TreeNode& t,
             std::map<const TreeNode*, double>& memo) {
  if (auto it = memo.find(&t); it != memo.end()) return it->second;
  double q = 0;
  for (const auto& [key, fp] : p.fragments) {
    const auto& [frag, prob] = fp;
    if (frag.body.label != t.label) continue;
    std::vector<const TreeNode*> images;
    if (!fragment_matches(frag.body, t, &images)) continue;
    double term = prob;
    for (const auto* img : images) term *= dop_q(p, *img, memo);
    q += term;
  }
  memo[&t] = q;
  return q;
}

}  // namespace

double score_derived_tree_dop(const Slg4Params& p, const TreeNode& t) {
  std::map<const TreeNode*, double> memo;
  return dop_q(p, t, memo);
}

Slg2Params lift(const Slg1Params& p, const Grammar& g) {
  auto violations = check_well_formed(p, g);
  if (!violations.empty())
    throw std::invalid_argument("lift of ill-formed level-1 params: " + violations.front());
  Slg2Params out;
  for (const auto& [name, tree] : g.trees()) {
    const Sites& sites = g.sites_of(name);
    for (const auto& site : sites.substitution) {
      auto it = p.sub.find(site.label);
      if (it == p.sub.end()) continue;  // unobserved label stays uncovered
      out.sub[{name, site.addr}] = it->second;
    }
    for (const auto& site : sites.adjunction) {
      auto it = p.adj.find(site.label);
      if (it == p.adj.end()) continue;
      out.adj[{name, site.addr}] = it->second;
    }
  }
  if (auto it = p.sub.find(g.start_symbol()); it != p.sub.end()) out.root = it->second;
  return out;
}

LiftedSlg3 lift(const Slg2Params& p) { return LiftedSlg3{p}; }

int level_of(const AnyParams& p) {
  switch (p.index()) {
    case 0:
      return 1;
    case 1:
      return 2;
    case 2:
    case 3:
      return 3;
    default:
      return 4;
  }
}

std::vector<std::string> check_well_formed(const AnyParams& p, const Grammar& g) {
  return std::visit(
      [&](const auto& params) -> std::vector<std::string> {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, Slg4Params>)
          return check_well_formed(params);
        else if constexpr (std::is_same_v<T, LiftedSlg3>)
          return check_well_formed(params.base, g);
        else
          return check_well_formed(params, g);
      },
      p);
}

double score_derivation(const AnyParams& p, const Grammar& g, const DerivationTree& d) {
  return std::visit(
      [&](const auto& params) -> double {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, Slg4Params>)
          throw std::invalid_argument("slg4 parameters score derived trees, not derivations");
        else
          return score_derivation(params, g, d);
      },
      p);
}

}  // namespace slg
