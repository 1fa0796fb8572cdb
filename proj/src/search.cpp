#include "slg/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace slg {

namespace {

constexpr int kInfCost = std::numeric_limits<int>::max() / 4;

// Minimum number of elementary-tree uses needed to complete a tree rooted
// in each grammar tree (itself plus all its substitution sites, recursively;
// adjunction is optional and costs nothing). Fixpoint iteration.
std::map<std::string, int> min_completion_cost(const Grammar& g) {
  std::map<std::string, int> cost;
  for (const auto& [name, t] : g.trees()) cost[name] = kInfCost;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, t] : g.trees()) {
      int c = 1;
      for (const auto& site : g.sites_of(name).substitution) {
        int best = kInfCost;
        for (const auto& cand : g.initials_with_root(site.label))
          best = std::min(best, cost[cand]);
        c = best >= kInfCost ? kInfCost : std::min(kInfCost, c + best);
        if (c >= kInfCost) break;
      }
      if (c < cost[name]) {
        cost[name] = c;
        changed = true;
      }
    }
  }
  return cost;
}

struct Enumerator {
  const Grammar& g;
  const SearchBounds& bounds;
  std::map<std::string, int> min_cost;

  // All completions of `name` using at most `budget` tree uses (including
  // the tree itself), paired with the exact number used.
  std::vector<std::pair<DerivationTree, int>> completions(const std::string& name,
                                                          int budget) {
    std::vector<std::pair<DerivationTree, int>> out;
    if (budget < 1 || min_cost[name] > budget) return out;
    const Sites& sites = g.sites_of(name);

    // Seed with the bare instance, then extend site by site; substitution
    // sites multiply by filler choices, adjunction sites by sequences.
    struct Partial {
      std::vector<DerivationEdge> edges;
      int used = 1;
      int min_rest = 0;  // minimal cost of the sites not yet processed
    };

    int total_min_rest = 0;
    std::vector<int> sub_min;
    for (const auto& site : sites.substitution) {
      int best = kInfCost;
      for (const auto& cand : g.initials_with_root(site.label))
        best = std::min(best, min_cost[cand]);
      sub_min.push_back(best);
      total_min_rest = std::min(kInfCost, total_min_rest + best);
    }
    if (total_min_rest >= kInfCost || 1 + total_min_rest > budget) return out;

    std::vector<Partial> partials{{{}, 1, total_min_rest}};

    for (size_t si = 0; si < sites.substitution.size(); ++si) {
      const auto& site = sites.substitution[si];
      std::vector<Partial> next;
      for (const auto& part : partials) {
        int rest_after = part.min_rest - sub_min[si];
        for (const auto& cand : g.initials_with_root(site.label)) {
          int child_budget = budget - part.used - rest_after;
          for (auto& [child, used] : completions(cand, child_budget)) {
            Partial np = part;
            DerivationEdge e;
            e.addr = site.addr;
            e.op = OpKind::Sub;
            e.child.push_back(std::move(child));
            np.edges.push_back(std::move(e));
            np.used += used;
            np.min_rest = rest_after;
            next.push_back(std::move(np));
          }
        }
      }
      partials = std::move(next);
      if (partials.empty()) return out;
    }

    for (const auto& site : sites.adjunction) {
      std::vector<Partial> next;
      for (auto& part : partials) {
        // Ordered sequences of auxiliary completions at this node, length
        // 0.. bounded by budget and max_adj_per_node.
        struct SeqState {
          std::vector<DerivationEdge> edges;
          int used;
          int len = 0;
        };
        std::vector<SeqState> seqs{{{}, part.used, 0}};
        size_t head = 0;
        while (head < seqs.size()) {
          SeqState cur = seqs[head++];
          if (bounds.max_adj_per_node && cur.len >= *bounds.max_adj_per_node) continue;
          for (const auto& cand : g.auxiliaries_with_root(site.label)) {
            int child_budget = budget - cur.used - part.min_rest;
            for (auto& [child, used] : completions(cand, child_budget)) {
              SeqState ns = cur;
              DerivationEdge e;
              e.addr = site.addr;
              e.op = OpKind::Adj;
              e.child.push_back(std::move(child));
              ns.edges.push_back(std::move(e));
              ns.used += used;
              ns.len += 1;
              seqs.push_back(std::move(ns));
            }
          }
        }
        for (auto& seq : seqs) {
          Partial np = part;
          np.used = seq.used;
          for (auto& e : seq.edges) np.edges.push_back(std::move(e));
          next.push_back(std::move(np));
        }
      }
      partials = std::move(next);
    }

    for (auto& part : partials) {
      DerivationTree d;
      d.tree_name = name;
      d.edges = std::move(part.edges);
      std::stable_sort(d.edges.begin(), d.edges.end(),
                       [](const DerivationEdge& a, const DerivationEdge& b) {
                         return a.addr < b.addr;
                       });
      out.emplace_back(std::move(d), part.used);
    }
    return out;
  }
};

}  // namespace

std::vector<DerivationTree> enumerate_derivations(const Grammar& g, const SearchBounds& b) {
  Enumerator en{g, b, min_completion_cost(g)};
  std::vector<DerivationTree> out;
  for (const auto& root : g.initials_with_root(g.start_symbol()))
    for (auto& [d, used] : en.completions(root, b.max_tree_uses))
      out.push_back(std::move(d));
  if (b.max_yield) {
    std::erase_if(out, [&](const DerivationTree& d) {
      return static_cast<int>(yield_of(derive(g, d)).size()) > *b.max_yield;
    });
  }
  std::sort(out.begin(), out.end(),
            [](const DerivationTree& a, const DerivationTree& b) { return compare(a, b) < 0; });
  return out;
}

double enumeration_mass(const AnyParams& p, const Grammar& g, const SearchBounds& b) {
  double mass = 0;
  for (const auto& d : enumerate_derivations(g, b)) {
    double lp = score_derivation(p, g, d);
    if (lp > -std::numeric_limits<double>::infinity()) mass += std::exp(lp);
  }
  return mass;
}

double sentence_probability(const AnyParams& p, const Grammar& g,
                            const std::vector<std::string>& sentence,
                            const SearchBounds& b) {
  double mass = 0;
  for (const auto& d : enumerate_derivations(g, b)) {
    if (yield_of(derive(g, d)) != sentence) continue;
    double lp = score_derivation(p, g, d);
    if (lp > -std::numeric_limits<double>::infinity()) mass += std::exp(lp);
  }
  return mass;
}

std::vector<RankedDerivation> nbest(const AnyParams& p, const Grammar& g,
                                    const std::vector<std::string>& sentence, int k,
                                    const SearchBounds& b) {
  std::vector<RankedDerivation> matches;
  for (auto& d : enumerate_derivations(g, b)) {
    if (yield_of(derive(g, d)) != sentence) continue;
    double lp = score_derivation(p, g, d);
    matches.push_back({std::move(d), lp});
  }
  // Stable: equal scores keep canonical enumeration order.
  std::stable_sort(matches.begin(), matches.end(),
                   [](const RankedDerivation& a, const RankedDerivation& b) {
                     return a.log_prob > b.log_prob;
                   });
  if (static_cast<int>(matches.size()) > k) matches.resize(static_cast<size_t>(k));
  return matches;
}

}  // namespace slg
