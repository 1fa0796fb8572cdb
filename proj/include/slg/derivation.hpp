#ifndef SLG_DERIVATION_HPP
#define SLG_DERIVATION_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "slg/grammar.hpp"

namespace slg {

enum class OpKind { Sub, Adj };

// Reserved outcome token for "no further adjunction here".
inline const std::string kStop = "STOP";

struct DerivationTree;

struct DerivationEdge {
  NodeAddress addr;
  OpKind op = OpKind::Sub;
  // Defined out of line; vector<incomplete> is fine, a direct member is not.
  std::vector<DerivationTree> child;  // exactly one element
};

// Record of which elementary trees combined where. Edges are sorted by
// address; several Adj edges may share an address and their order is the
// surface order (first edge outermost when composing).
struct DerivationTree {
  std::string tree_name;
  std::vector<DerivationEdge> edges;

  const DerivationTree& edge_child(size_t i) const { return edges[i].child.front(); }
  int node_count() const;
};

bool operator==(const DerivationTree& a, const DerivationTree& b);
bool operator==(const DerivationEdge& a, const DerivationEdge& b);
// Canonical order: tree name, then edge lists lexicographically by
// (addr, op, child).
std::strong_ordering compare(const DerivationTree& a, const DerivationTree& b);

DerivationTree make_derivation(std::string tree_name,
                               std::vector<std::tuple<NodeAddress, OpKind, DerivationTree>> edges);

// One full expansion of an elementary tree: the filler of every
// substitution site plus the (possibly empty) ordered auxiliary sequence at
// every adjunction site.
struct MetaProduction {
  std::vector<std::pair<NodeAddress, std::string>> sub;                      // addr-sorted
  std::vector<std::pair<NodeAddress, std::vector<std::string>>> adj;        // addr-sorted
  auto operator<=>(const MetaProduction&) const = default;
  std::string str() const;  // {1>alpha2; 2>[beta]; ...}
  static MetaProduction parse(const std::string& text);
};

// One probabilistic choice at a substitution or adjunction site, shared by
// the level-1 and level-2 parameterizations (level 1 is the projection that
// forgets the host tree and address).
struct SiteEvent {
  bool is_root = false;        // the synthetic start-symbol choice
  std::string host;            // empty for the root event
  NodeAddress addr;
  OpKind op = OpKind::Sub;
  std::string site_label;      // start symbol for the root event
  std::string outcome;         // tree name, or kStop for Adj
};

struct ExpansionEvent {
  std::string mother;
  MetaProduction production;
};

// Empty iff d is a valid, complete derivation over g. Unknown tree names
// throw std::out_of_range.
std::vector<Violation> validate_derivation(const Grammar& g, const DerivationTree& d);

// Standard TAG composition. Substitution replaces the site node; adjunction
// splices the auxiliary tree at the target with the excised subtree
// re-attached at the foot. Multiple adjunctions at one address compose
// outside-in in edge order. Pre: validate_derivation(g, d) is empty.
TreeNode derive(const Grammar& g, const DerivationTree& d);

std::vector<std::string> yield_of(const TreeNode& derived);

// The root choice event followed, in depth-first node order, by each
// instance's substitution events (address order) and adjunction outcomes
// (edge order, then one STOP per adjoinable node).
std::vector<SiteEvent> extract_site_events(const Grammar& g, const DerivationTree& d);

// One meta-production per derivation-tree node, depth-first.
std::vector<ExpansionEvent> extract_expansion_events(const Grammar& g, const DerivationTree& d);
std::vector<MetaProduction> extract_meta_productions(const Grammar& g, const DerivationTree& d);

// Corpus file: one derivation per line, nested groups
// (name (addr op child)...), addr dotted integers or "eps".
DerivationTree parse_derivation(const std::string& line, int lineno = 1);
std::vector<DerivationTree> parse_derivation_corpus(const std::string& text);
std::string render_derivation(const DerivationTree& d);
std::string render_derivation_corpus(const std::vector<DerivationTree>& corpus);

// Derived-tree corpus: one bracketed phrase-structure tree per line.
TreeNode parse_phrase_tree(const std::string& line, int lineno = 1);
std::vector<TreeNode> parse_phrase_tree_corpus(const std::string& text);

}  // namespace slg

#endif  // SLG_DERIVATION_HPP
