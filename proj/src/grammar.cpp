#include "slg/grammar.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>

#include "slg/sexpr.hpp"

namespace slg {

const std::vector<std::string> Grammar::kNoTrees;

Grammar::Grammar(std::vector<ElementaryTree> trees, std::string start_symbol)
    : start_(std::move(start_symbol)) {
  for (auto& t : trees) {
    std::string name = t.name;
    if (t.template_id.empty()) t.template_id = derive_template_id(t);
    trees_.emplace(name, std::move(t));
  }
  for (const auto& [name, t] : trees_) {
    sites_.emplace(name, compute_sites(t));
    auto& index = t.kind == TreeKind::Initial ? initials_by_root_ : auxiliaries_by_root_;
    index[t.root.label].push_back(name);
  }
  // std::map iteration gives sorted names already, but keep it explicit.
  for (auto* index : {&initials_by_root_, &auxiliaries_by_root_})
    for (auto& [label, names] : *index) std::sort(names.begin(), names.end());
}

const ElementaryTree& Grammar::tree(const std::string& name) const {
  auto it = trees_.find(name);
  if (it == trees_.end()) throw std::out_of_range("unknown tree name: " + name);
  return it->second;
}

const std::vector<std::string>& Grammar::initials_with_root(const std::string& label) const {
  auto it = initials_by_root_.find(label);
  return it == initials_by_root_.end() ? kNoTrees : it->second;
}

const std::vector<std::string>& Grammar::auxiliaries_with_root(const std::string& label) const {
  auto it = auxiliaries_by_root_.find(label);
  return it == auxiliaries_by_root_.end() ? kNoTrees : it->second;
}

const Sites& Grammar::sites_of(const std::string& name) const {
  auto it = sites_.find(name);
  if (it == sites_.end()) throw std::out_of_range("unknown tree name: " + name);
  return it->second;
}

const TreeNode& node_at(const TreeNode& root, const NodeAddress& addr) {
  const TreeNode* n = &root;
  for (size_t depth = 0; depth < addr.path.size(); ++depth) {
    int i = addr.path[depth];
    if (i < 1 || static_cast<size_t>(i) > n->children.size())
      throw std::out_of_range("address " + addr.str() + " out of range at depth " +
                              std::to_string(depth));
    n = &n->children[i - 1];
  }
  return *n;
}

const TreeNode& node_at(const ElementaryTree& tree, const NodeAddress& addr) {
  return node_at(tree.root, addr);
}

namespace {

void collect_sites(const TreeNode& n, const NodeAddress& addr, Sites& out) {
  if (n.kind == NodeKind::SubstitutionSite) out.substitution.push_back({addr, n.label});
  if (n.adjoinable) out.adjunction.push_back({addr, n.label});
  for (size_t i = 0; i < n.children.size(); ++i)
    collect_sites(n.children[i], addr.child(static_cast<int>(i + 1)), out);
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

TreeNode erase_anchor(const TreeNode& n, const std::optional<std::string>& anchor) {
  TreeNode out = n;
  if (anchor && n.kind == NodeKind::Terminal && n.label == *anchor) {
    out.label = "\x01";  // placeholder marking the anchor position
    return out;
  }
  out.children.clear();
  for (const auto& c : n.children) out.children.push_back(erase_anchor(c, anchor));
  return out;
}

}  // namespace

Sites compute_sites(const ElementaryTree& tree) {
  Sites s;
  collect_sites(tree.root, NodeAddress{}, s);
  return s;
}

std::string derive_template_id(const ElementaryTree& tree) {
  std::string canon = (tree.kind == TreeKind::Initial ? "i:" : "a:") +
                      render_node(erase_anchor(tree.root, tree.anchor));
  std::ostringstream os;
  os << "t" << std::hex << fnv1a(canon);
  return os.str();
}

namespace {

// Node syntax: (Label child...) interior; Label! substitution site;
// Label* foot; Label^na non-adjoinable interior; "string" terminal.
TreeNode parse_node(Lexer& lex) {
  Token t = lex.next();
  TreeNode n;
  if (t.kind == Token::Kind::LParen) {
    Token head = lex.expect(Token::Kind::Symbol, "node label");
    n.label = head.text;
    n.kind = NodeKind::Interior;
    n.adjoinable = true;
    if (n.label.size() > 3 && n.label.ends_with("^na")) {
      n.label = n.label.substr(0, n.label.size() - 3);
      n.adjoinable = false;
    } else if (n.label.ends_with('!') || n.label.ends_with('*')) {
      lex.fail("site markers are not allowed on interior nodes with children", head);
    }
    while (lex.peek().kind != Token::Kind::RParen) {
      if (lex.peek().kind == Token::Kind::End) lex.fail("unbalanced '('", t);
      n.children.push_back(parse_node(lex));
    }
    lex.next();  // ')'
    if (n.children.empty()) lex.fail("interior node '" + n.label + "' has no children", head);
    return n;
  }
  if (t.kind == Token::Kind::String) {
    n.label = t.text;
    n.kind = NodeKind::Terminal;
    n.adjoinable = false;
    return n;
  }
  if (t.kind == Token::Kind::Symbol) {
    std::string s = t.text;
    if (s.ends_with('!')) {
      n.label = s.substr(0, s.size() - 1);
      n.kind = NodeKind::SubstitutionSite;
    } else if (s.ends_with('*')) {
      n.label = s.substr(0, s.size() - 1);
      n.kind = NodeKind::FootNode;
    } else if (s.ends_with("^na")) {
      n.label = s.substr(0, s.size() - 3);
      n.kind = NodeKind::Interior;
    } else {
      n.label = s;
      n.kind = NodeKind::Interior;  // childless interior; flagged by validate
      n.adjoinable = true;
    }
    if (n.label.empty()) lex.fail("empty node label", t);
    return n;
  }
  lex.fail("expected a node", t);
}

int count_foot_nodes(const TreeNode& n, const TreeNode** foot) {
  int c = n.kind == NodeKind::FootNode ? 1 : 0;
  if (c && foot) *foot = &n;
  for (const auto& ch : n.children) c += count_foot_nodes(ch, foot);
  return c;
}

int count_terminals_with(const TreeNode& n, const std::string& s) {
  int c = (n.kind == NodeKind::Terminal && n.label == s) ? 1 : 0;
  for (const auto& ch : n.children) c += count_terminals_with(ch, s);
  return c;
}

}  // namespace

Grammar parse_grammar(const std::string& text) {
  Lexer lex(text);
  std::string start = "S";
  bool saw_start = false;
  std::vector<ElementaryTree> trees;
  std::vector<std::string> names_seen;

  while (!lex.at_end()) {
    Token t = lex.expect(Token::Kind::Symbol, "'start' or 'tree'");
    if (t.text == "start") {
      if (saw_start) lex.fail("duplicate start declaration", t);
      if (!trees.empty()) lex.fail("'start' must precede tree blocks", t);
      start = lex.expect(Token::Kind::Symbol, "start symbol").text;
      saw_start = true;
      continue;
    }
    if (t.text != "tree") lex.fail("expected 'tree', got '" + t.text + "'", t);

    ElementaryTree e;
    Token name = lex.expect(Token::Kind::Symbol, "tree name");
    e.name = name.text;
    if (e.name == "STOP") lex.fail("'STOP' is a reserved name", name);
    if (std::find(names_seen.begin(), names_seen.end(), e.name) != names_seen.end())
      lex.fail("duplicate tree name '" + e.name + "'", name);
    names_seen.push_back(e.name);

    Token kind = lex.expect(Token::Kind::Symbol, "'initial' or 'auxiliary'");
    if (kind.text == "initial")
      e.kind = TreeKind::Initial;
    else if (kind.text == "auxiliary")
      e.kind = TreeKind::Auxiliary;
    else
      lex.fail("expected 'initial' or 'auxiliary', got '" + kind.text + "'", kind);

    while (lex.peek().kind == Token::Kind::Symbol) {
      Token attr = lex.next();
      size_t eq = attr.text.find('=');
      if (eq == std::string::npos)
        lex.fail("expected attribute key=value or tree structure, got '" + attr.text + "'", attr);
      std::string key = attr.text.substr(0, eq);
      std::string val = attr.text.substr(eq + 1);
      if (val.empty()) lex.fail("empty value for attribute '" + key + "'", attr);
      if (key == "anchor")
        e.anchor = val;
      else if (key == "family")
        e.family = val;
      else if (key == "template")
        e.template_id = val;
      else
        lex.fail("unknown attribute '" + key + "'", attr);
    }

    Token open = lex.peek();
    e.root = parse_node(lex);
    if (e.root.kind != NodeKind::Interior)
      lex.fail("tree root must be an interior node", open);

    const TreeNode* foot = nullptr;
    int feet = count_foot_nodes(e.root, &foot);
    if (e.kind == TreeKind::Auxiliary) {
      if (feet != 1)
        lex.fail("auxiliary tree '" + e.name + "' has " + std::to_string(feet) +
                     " foot nodes, expected exactly 1",
                 open);
      if (foot->label != e.root.label)
        lex.fail("foot label '" + foot->label + "' differs from root label '" +
                     e.root.label + "' in tree '" + e.name + "'",
                 open);
    } else if (feet != 0) {
      lex.fail("initial tree '" + e.name + "' contains a foot node", open);
    }
    if (e.anchor) {
      int n = count_terminals_with(e.root, *e.anchor);
      if (n != 1)
        lex.fail("anchor \"" + *e.anchor + "\" carried by " + std::to_string(n) +
                     " terminal nodes in tree '" + e.name + "', expected exactly 1",
                 open);
    }
    trees.push_back(std::move(e));
  }

  return Grammar(std::move(trees), start);
}

std::string render_node(const TreeNode& n) {
  switch (n.kind) {
    case NodeKind::Terminal:
      return quote_string(n.label);
    case NodeKind::SubstitutionSite:
      return n.label + "!";
    case NodeKind::FootNode:
      return n.label + "*";
    case NodeKind::Interior: {
      std::string head = n.label + (n.adjoinable ? "" : "^na");
      if (n.children.empty()) return head;
      std::string s = "(" + head;
      for (const auto& c : n.children) s += " " + render_node(c);
      return s + ")";
    }
  }
  return "";
}

std::string render_grammar(const Grammar& g) {
  std::ostringstream os;
  os << "start " << g.start_symbol() << "\n";
  for (const auto& [name, t] : g.trees()) {
    os << "tree " << name << " " << (t.kind == TreeKind::Initial ? "initial" : "auxiliary");
    if (t.anchor) os << " anchor=" << *t.anchor;
    if (t.family) os << " family=" << *t.family;
    os << " template=" << t.template_id << "\n";
    os << render_node(t.root) << "\n";
  }
  return os.str();
}

namespace {

void check_node(const std::string& tree_name, const TreeNode& n, const NodeAddress& addr,
                std::vector<Violation>& out) {
  auto err = [&](const std::string& msg) {
    out.push_back({Violation::Severity::Error, "tree " + tree_name + " @" + addr.str() + ": " + msg});
  };
  switch (n.kind) {
    case NodeKind::Interior:
      if (n.children.empty())
        out.push_back({Violation::Severity::Warning,
                       "tree " + tree_name + " @" + addr.str() +
                           ": childless interior node '" + n.label +
                           "' can never become lexical"});
      break;
    case NodeKind::SubstitutionSite:
    case NodeKind::FootNode:
    case NodeKind::Terminal:
      if (!n.children.empty()) err("leaf-kind node has children");
      if (n.adjoinable) err("leaf-kind node marked adjoinable");
      break;
  }
  for (size_t i = 0; i < n.children.size(); ++i)
    check_node(tree_name, n.children[i], addr.child(static_cast<int>(i + 1)), out);
}

}  // namespace

std::vector<Violation> validate_grammar(const Grammar& g) {
  std::vector<Violation> out;

  if (g.initials_with_root(g.start_symbol()).empty())
    out.push_back({Violation::Severity::Error,
                   "no initial tree with start symbol '" + g.start_symbol() + "'"});

  // Same template id must mean same structure up to anchor.
  std::map<std::string, std::pair<std::string, std::string>> template_shapes;
  for (const auto& [name, t] : g.trees()) {
    check_node(name, t.root, NodeAddress{}, out);
    if (name == "STOP")
      out.push_back({Violation::Severity::Error, "tree named 'STOP' shadows the stop outcome"});
    if (t.kind == TreeKind::Auxiliary) {
      const TreeNode* foot = nullptr;
      int feet = count_foot_nodes(t.root, &foot);
      if (feet != 1)
        out.push_back({Violation::Severity::Error,
                       "auxiliary tree '" + name + "' has " + std::to_string(feet) + " foot nodes"});
      else if (foot->label != t.root.label)
        out.push_back({Violation::Severity::Error,
                       "auxiliary tree '" + name + "' foot label differs from root label"});
    } else if (count_foot_nodes(t.root, nullptr) != 0) {
      out.push_back({Violation::Severity::Error, "initial tree '" + name + "' contains a foot node"});
    }
    if (t.anchor && count_terminals_with(t.root, *t.anchor) != 1)
      out.push_back({Violation::Severity::Error,
                     "tree '" + name + "' anchor is not carried by exactly one terminal"});
    std::string shape = derive_template_id(t);
    auto [it, inserted] = template_shapes.emplace(t.template_id, std::make_pair(shape, name));
    if (!inserted && it->second.first != shape)
      out.push_back({Violation::Severity::Error,
                     "trees '" + it->second.second + "' and '" + name +
                         "' share template '" + t.template_id + "' but differ structurally"});
  }

  // Every substitution-site label should be fillable by some initial tree.
  for (const auto& [name, t] : g.trees()) {
    for (const auto& site : g.sites_of(name).substitution) {
      if (g.initials_with_root(site.label).empty())
        out.push_back({Violation::Severity::Warning,
                       "tree " + name + " @" + site.addr.str() + ": substitution site '" +
                           site.label + "' cannot be filled by any initial tree"});
    }
  }
  return out;
}

}  // namespace slg
