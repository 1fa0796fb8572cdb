#ifndef SLG_GRAMMAR_HPP
#define SLG_GRAMMAR_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slg/address.hpp"
#include "slg/errors.hpp"

namespace slg {

enum class NodeKind { Interior, SubstitutionSite, FootNode, Terminal };

// One node of an elementary (or derived) tree. Substitution sites, foot
// nodes and terminals never have children and are never adjoinable.
struct TreeNode {
  std::string label;
  NodeKind kind = NodeKind::Interior;
  bool adjoinable = false;
  std::vector<TreeNode> children;

  bool operator==(const TreeNode&) const = default;
};

enum class TreeKind { Initial, Auxiliary };

struct ElementaryTree {
  std::string name;
  TreeKind kind = TreeKind::Initial;
  TreeNode root;
  std::optional<std::string> anchor;
  std::optional<std::string> family;
  std::string template_id;  // shared by trees identical up to anchor string

  bool operator==(const ElementaryTree&) const = default;
};

struct SiteRef {
  NodeAddress addr;
  std::string label;
  bool operator==(const SiteRef&) const = default;
};

struct Sites {
  std::vector<SiteRef> substitution;  // in address order
  std::vector<SiteRef> adjunction;    // in address order
};

struct Violation {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
};

class Grammar {
 public:
  Grammar() = default;
  Grammar(std::vector<ElementaryTree> trees, std::string start_symbol);

  const std::string& start_symbol() const { return start_; }
  const std::map<std::string, ElementaryTree>& trees() const { return trees_; }
  bool has_tree(const std::string& name) const { return trees_.count(name) > 0; }
  const ElementaryTree& tree(const std::string& name) const;

  // Initial/auxiliary tree names with the given root label, name-sorted.
  const std::vector<std::string>& initials_with_root(const std::string& label) const;
  const std::vector<std::string>& auxiliaries_with_root(const std::string& label) const;

  const Sites& sites_of(const std::string& name) const;

  bool operator==(const Grammar& other) const {
    return start_ == other.start_ && trees_ == other.trees_;
  }

 private:
  std::string start_ = "S";
  std::map<std::string, ElementaryTree> trees_;
  std::map<std::string, Sites> sites_;
  std::map<std::string, std::vector<std::string>> initials_by_root_;
  std::map<std::string, std::vector<std::string>> auxiliaries_by_root_;
  static const std::vector<std::string> kNoTrees;
};

// Resolves an address within a tree. Throws std::out_of_range if no node
// has that address.
const TreeNode& node_at(const TreeNode& root, const NodeAddress& addr);
const TreeNode& node_at(const ElementaryTree& tree, const NodeAddress& addr);

// Substitution and adjunction sites of a tree, both in address order.
Sites compute_sites(const ElementaryTree& tree);

// Structural template identifier: hash of the tree with the anchor string
// erased, so trees differing only in their anchor share it.
std::string derive_template_id(const ElementaryTree& tree);

// Parses the grammar file format. Throws ParseError on syntax or structural
// errors (duplicate names, bad foot nodes, missing anchors).
Grammar parse_grammar(const std::string& text);

// Canonical emission; parse_grammar(render_grammar(g)) == g.
std::string render_grammar(const Grammar& g);
std::string render_node(const TreeNode& node);

// Non-structural checks: empty iff all invariants hold and every
// substitution-site label is fillable by some initial tree (warning level).
std::vector<Violation> validate_grammar(const Grammar& g);

}  // namespace slg

#endif  // SLG_GRAMMAR_HPP
