#ifndef SLG_SEARCH_HPP
#define SLG_SEARCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "slg/models.hpp"

namespace slg {

struct SearchBounds {
  int max_tree_uses = 6;                 // bounds total derivation-tree nodes
  std::optional<int> max_adj_per_node;   // adjunctions per node instance address
  std::optional<int> max_yield;          // derived-tree yield length
};

// Every valid complete derivation within bounds, each exactly once, in
// canonical order (root tree name, then edge expansion lexicographic).
// Exhaustive bounded enumeration: the oracle for normalization and ranking.
std::vector<DerivationTree> enumerate_derivations(const Grammar& g, const SearchBounds& b);

// Total model probability of the enumerated set.
double enumeration_mass(const AnyParams& p, const Grammar& g, const SearchBounds& b);

// Sum of derivation probabilities whose derived yield equals the sentence;
// 0 for sentences unreachable within bounds.
double sentence_probability(const AnyParams& p, const Grammar& g,
                            const std::vector<std::string>& sentence, const SearchBounds& b);

struct RankedDerivation {
  DerivationTree derivation;
  double log_prob;
};

// Top-k yield-matching derivations by score; ties broken by canonical
// enumeration order.
std::vector<RankedDerivation> nbest(const AnyParams& p, const Grammar& g,
                                    const std::vector<std::string>& sentence, int k,
                                    const SearchBounds& b);

}  // namespace slg

#endif  // SLG_SEARCH_HPP
