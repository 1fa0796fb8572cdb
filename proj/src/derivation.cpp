#include "slg/derivation.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "slg/sexpr.hpp"

namespace slg {

int DerivationTree::node_count() const {
  int n = 1;
  for (const auto& e : edges) n += e.child.front().node_count();
  return n;
}

bool operator==(const DerivationEdge& a, const DerivationEdge& b) {
  return a.addr == b.addr && a.op == b.op && a.child == b.child;
}

bool operator==(const DerivationTree& a, const DerivationTree& b) {
  return a.tree_name == b.tree_name && a.edges == b.edges;
}

std::strong_ordering compare(const DerivationTree& a, const DerivationTree& b) {
  if (auto c = a.tree_name <=> b.tree_name; c != 0) return c;
  size_t n = std::min(a.edges.size(), b.edges.size());
  for (size_t i = 0; i < n; ++i) {
    const auto& ea = a.edges[i];
    const auto& eb = b.edges[i];
    if (auto c = ea.addr <=> eb.addr; c != 0) return c;
    if (auto c = static_cast<int>(ea.op) <=> static_cast<int>(eb.op); c != 0) return c;
    if (auto c = compare(ea.child.front(), eb.child.front()); c != 0) return c;
  }
  return a.edges.size() <=> b.edges.size();
}

DerivationTree make_derivation(
    std::string tree_name,
    std::vector<std::tuple<NodeAddress, OpKind, DerivationTree>> edges) {
  DerivationTree d;
  d.tree_name = std::move(tree_name);
  for (auto& [addr, op, child] : edges) {
    DerivationEdge e;
    e.addr = std::move(addr);
    e.op = op;
    e.child.push_back(std::move(child));
    d.edges.push_back(std::move(e));
  }
  std::stable_sort(d.edges.begin(), d.edges.end(),
                   [](const DerivationEdge& a, const DerivationEdge& b) { return a.addr < b.addr; });
  return d;
}

std::string MetaProduction::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  auto sep = [&]() {
    if (!first) os << "; ";
    first = false;
  };
  // Merge the two lists in address order for readability.
  size_t i = 0, j = 0;
  while (i < sub.size() || j < adj.size()) {
    bool take_sub = j >= adj.size() || (i < sub.size() && sub[i].first < adj[j].first);
    if (take_sub) {
      sep();
      os << sub[i].first.str() << ">" << sub[i].second;
      ++i;
    } else {
      sep();
      os << adj[j].first.str() << ">[";
      for (size_t k = 0; k < adj[j].second.size(); ++k) {
        if (k) os << ",";
        os << adj[j].second[k];
      }
      os << "]";
      ++j;
    }
  }
  os << "}";
  return os.str();
}

MetaProduction MetaProduction::parse(const std::string& text) {
  auto bad = [&](const std::string& why) {
    throw std::invalid_argument("bad meta-production '" + text + "': " + why);
  };
  std::string s = text;
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') bad("missing braces");
  s = s.substr(1, s.size() - 2);
  MetaProduction mp;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t end = s.find(';', pos);
    std::string item = s.substr(pos, end == std::string::npos ? end : end - pos);
    pos = end == std::string::npos ? s.size() : end + 1;
    size_t b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    size_t e = item.find_last_not_of(" \t");
    item = item.substr(b, e - b + 1);
    size_t gt = item.find('>');
    if (gt == std::string::npos) bad("missing '>' in '" + item + "'");
    NodeAddress addr = NodeAddress::parse(item.substr(0, gt));
    std::string rhs = item.substr(gt + 1);
    if (!rhs.empty() && rhs.front() == '[') {
      if (rhs.back() != ']') bad("missing ']' in '" + item + "'");
      std::vector<std::string> names;
      std::string body = rhs.substr(1, rhs.size() - 2);
      size_t p = 0;
      while (p < body.size()) {
        size_t comma = body.find(',', p);
        std::string nm = body.substr(p, comma == std::string::npos ? comma : comma - p);
        if (!nm.empty()) names.push_back(nm);
        p = comma == std::string::npos ? body.size() : comma + 1;
      }
      mp.adj.emplace_back(addr, std::move(names));
    } else {
      if (rhs.empty()) bad("empty daughter in '" + item + "'");
      mp.sub.emplace_back(addr, rhs);
    }
  }
  std::sort(mp.sub.begin(), mp.sub.end());
  std::sort(mp.adj.begin(), mp.adj.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return mp;
}

std::vector<Violation> validate_derivation(const Grammar& g, const DerivationTree& d) {
  std::vector<Violation> out;
  auto err = [&](const std::string& msg) {
    out.push_back({Violation::Severity::Error, msg});
  };

  const ElementaryTree& host = g.tree(d.tree_name);  // throws on unknown name
  const Sites& sites = g.sites_of(d.tree_name);

  std::map<NodeAddress, int> sub_fills;
  for (size_t i = 0; i < d.edges.size(); ++i) {
    const auto& e = d.edges[i];
    if (i + 1 < d.edges.size() && d.edges[i + 1].addr < e.addr)
      err("edges of " + d.tree_name + " not sorted by address");
    const DerivationTree& child = e.child.front();
    const ElementaryTree& ct = g.tree(child.tree_name);
    const TreeNode* target = nullptr;
    try {
      target = &node_at(host, e.addr);
    } catch (const std::out_of_range&) {
      err(d.tree_name + " @" + e.addr.str() + ": no such node");
      continue;
    }
    if (e.op == OpKind::Sub) {
      ++sub_fills[e.addr];
      if (target->kind != NodeKind::SubstitutionSite)
        err(d.tree_name + " @" + e.addr.str() + ": substitution into a non-site node");
      else if (target->label != ct.root.label)
        err(d.tree_name + " @" + e.addr.str() + ": site label '" + target->label +
            "' does not match root label '" + ct.root.label + "' of " + child.tree_name);
      if (ct.kind != TreeKind::Initial)
        err(d.tree_name + " @" + e.addr.str() + ": substituted tree " + child.tree_name +
            " is not initial");
    } else {
      if (!target->adjoinable)
        err(d.tree_name + " @" + e.addr.str() + ": adjunction at a non-adjoinable node");
      else if (target->label != ct.root.label)
        err(d.tree_name + " @" + e.addr.str() + ": node label '" + target->label +
            "' does not match root label '" + ct.root.label + "' of " + child.tree_name);
      if (ct.kind != TreeKind::Auxiliary)
        err(d.tree_name + " @" + e.addr.str() + ": adjoined tree " + child.tree_name +
            " is not auxiliary");
    }
    auto child_violations = validate_derivation(g, child);
    out.insert(out.end(), child_violations.begin(), child_violations.end());
  }

  for (const auto& site : sites.substitution) {
    int n = sub_fills.count(site.addr) ? sub_fills[site.addr] : 0;
    if (n == 0)
      err(d.tree_name + " @" + site.addr.str() + ": unfilled substitution site '" +
          site.label + "'");
    else if (n > 1)
      err(d.tree_name + " @" + site.addr.str() + ": substitution site filled " +
          std::to_string(n) + " times");
  }
  return out;
}

namespace {

// Replaces the unique foot node of an auxiliary derived tree with `inner`.
bool splice_at_foot(TreeNode& aux, TreeNode&& inner) {
  if (aux.kind == NodeKind::FootNode) {
    aux = std::move(inner);
    return true;
  }
  for (auto& c : aux.children)
    if (splice_at_foot(c, std::move(inner))) return true;
  return false;
}

TreeNode compose(const Grammar& g, const DerivationTree& d);

TreeNode build_node(const Grammar& g, const TreeNode& elem, const NodeAddress& addr,
                    const std::map<NodeAddress, const DerivationTree*>& subs,
                    const std::map<NodeAddress, std::vector<const DerivationTree*>>& adjs) {
  TreeNode result;
  if (auto it = subs.find(addr); it != subs.end()) {
    result = compose(g, *it->second);
  } else {
    result = elem;
    result.children.clear();
    for (size_t i = 0; i < elem.children.size(); ++i)
      result.children.push_back(
          build_node(g, elem.children[i], addr.child(static_cast<int>(i + 1)), subs, adjs));
  }
  if (auto it = adjs.find(addr); it != adjs.end()) {
    // First edge outermost: wrap from the innermost (last) outwards.
    for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit) {
      TreeNode aux = compose(g, **rit);
      splice_at_foot(aux, std::move(result));
      result = std::move(aux);
    }
  }
  return result;
}

TreeNode compose(const Grammar& g, const DerivationTree& d) {
  const ElementaryTree& e = g.tree(d.tree_name);
  std::map<NodeAddress, const DerivationTree*> subs;
  std::map<NodeAddress, std::vector<const DerivationTree*>> adjs;
  for (const auto& edge : d.edges) {
    if (edge.op == OpKind::Sub)
      subs[edge.addr] = &edge.child.front();
    else
      adjs[edge.addr].push_back(&edge.child.front());
  }
  return build_node(g, e.root, NodeAddress{}, subs, adjs);
}

}  // namespace

TreeNode derive(const Grammar& g, const DerivationTree& d) { return compose(g, d); }

std::vector<std::string> yield_of(const TreeNode& derived) {
  // Explicit stack, right-to-left push for left-to-right frontier order.
  std::vector<std::string> out;
  std::vector<const TreeNode*> dfs{&derived};
  while (!dfs.empty()) {
    const TreeNode* n = dfs.back();
    dfs.pop_back();
    if (n->kind == NodeKind::Terminal) out.push_back(n->label);
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) dfs.push_back(&*it);
  }
  return out;
}

namespace {

void walk_events(const Grammar& g, const DerivationTree& d, std::vector<SiteEvent>& out) {
  const Sites& sites = g.sites_of(d.tree_name);
  std::map<NodeAddress, const DerivationTree*> subs;
  std::map<NodeAddress, std::vector<const DerivationTree*>> adjs;
  std::vector<const DerivationTree*> children_in_order;
  for (const auto& e : d.edges) {
    if (e.op == OpKind::Sub)
      subs[e.addr] = &e.child.front();
    else
      adjs[e.addr].push_back(&e.child.front());
    children_in_order.push_back(&e.child.front());
  }
  for (const auto& site : sites.substitution) {
    auto it = subs.find(site.addr);
    if (it == subs.end()) continue;  // invalid derivations are rejected upstream
    out.push_back({false, d.tree_name, site.addr, OpKind::Sub, site.label,
                   it->second->tree_name});
  }
  for (const auto& site : sites.adjunction) {
    if (auto it = adjs.find(site.addr); it != adjs.end())
      for (const auto* child : it->second)
        out.push_back({false, d.tree_name, site.addr, OpKind::Adj, site.label,
                       child->tree_name});
    out.push_back({false, d.tree_name, site.addr, OpKind::Adj, site.label, kStop});
  }
  for (const auto* child : children_in_order) walk_events(g, *child, out);
}

}  // namespace

std::vector<SiteEvent> extract_site_events(const Grammar& g, const DerivationTree& d) {
  std::vector<SiteEvent> out;
  out.push_back({true, "", NodeAddress{}, OpKind::Sub, g.start_symbol(), d.tree_name});
  walk_events(g, d, out);
  return out;
}

namespace {

void walk_expansions(const Grammar& g, const DerivationTree& d,
                     std::vector<ExpansionEvent>& out) {
  const Sites& sites = g.sites_of(d.tree_name);
  MetaProduction mp;
  std::map<NodeAddress, std::vector<std::string>> adj_seqs;
  std::map<NodeAddress, std::string> sub_fill;
  for (const auto& e : d.edges) {
    if (e.op == OpKind::Sub)
      sub_fill[e.addr] = e.child.front().tree_name;
    else
      adj_seqs[e.addr].push_back(e.child.front().tree_name);
  }
  for (const auto& site : sites.substitution)
    mp.sub.emplace_back(site.addr, sub_fill.count(site.addr) ? sub_fill[site.addr] : "");
  for (const auto& site : sites.adjunction) {
    auto it = adj_seqs.find(site.addr);
    mp.adj.emplace_back(site.addr,
                        it == adj_seqs.end() ? std::vector<std::string>{} : it->second);
  }
  out.push_back({d.tree_name, std::move(mp)});
  for (const auto& e : d.edges) walk_expansions(g, e.child.front(), out);
}

}  // namespace

std::vector<ExpansionEvent> extract_expansion_events(const Grammar& g,
                                                     const DerivationTree& d) {
  std::vector<ExpansionEvent> out;
  walk_expansions(g, d, out);
  return out;
}

std::vector<MetaProduction> extract_meta_productions(const Grammar& g,
                                                     const DerivationTree& d) {
  std::vector<MetaProduction> out;
  for (auto& e : extract_expansion_events(g, d)) out.push_back(std::move(e.production));
  return out;
}

namespace {

DerivationTree parse_derivation_group(Lexer& lex) {
  Token open = lex.expect(Token::Kind::LParen, "'('");
  Token name = lex.expect(Token::Kind::Symbol, "tree name");
  DerivationTree d;
  d.tree_name = name.text;
  std::vector<std::tuple<NodeAddress, OpKind, DerivationTree>> edges;
  while (lex.peek().kind == Token::Kind::LParen) {
    Token t = lex.next();  // '('
    Token addr_tok = lex.expect(Token::Kind::Symbol, "address");
    NodeAddress addr;
    try {
      addr = NodeAddress::parse(addr_tok.text);
    } catch (const std::invalid_argument& e) {
      lex.fail(e.what(), addr_tok);
    }
    Token op_tok = lex.expect(Token::Kind::Symbol, "'sub' or 'adj'");
    OpKind op;
    if (op_tok.text == "sub")
      op = OpKind::Sub;
    else if (op_tok.text == "adj")
      op = OpKind::Adj;
    else
      lex.fail("expected 'sub' or 'adj', got '" + op_tok.text + "'", op_tok);
    DerivationTree child;
    if (lex.peek().kind == Token::Kind::LParen) {
      child = parse_derivation_group(lex);
    } else {
      Token child_name = lex.expect(Token::Kind::Symbol, "child tree name");
      child.tree_name = child_name.text;  // bare name shorthand for (name)
    }
    lex.expect(Token::Kind::RParen, "')'");
    edges.emplace_back(std::move(addr), op, std::move(child));
  }
  lex.expect(Token::Kind::RParen, "')'");
  return make_derivation(std::move(d.tree_name), std::move(edges));
}

}  // namespace

DerivationTree parse_derivation(const std::string& line, int lineno) {
  Lexer lex(line, lineno);
  DerivationTree d = parse_derivation_group(lex);
  if (!lex.at_end()) lex.fail("trailing content after derivation", lex.peek());
  return d;
}

std::vector<DerivationTree> parse_derivation_corpus(const std::string& text) {
  std::vector<DerivationTree> out;
  for (const auto& [lineno, line] : content_lines(text))
    out.push_back(parse_derivation(line, lineno));
  return out;
}

std::string render_derivation(const DerivationTree& d) {
  std::string s = "(" + d.tree_name;
  for (const auto& e : d.edges) {
    s += " (" + e.addr.str() + (e.op == OpKind::Sub ? " sub " : " adj ") +
         render_derivation(e.child.front()) + ")";
  }
  return s + ")";
}

std::string render_derivation_corpus(const std::vector<DerivationTree>& corpus) {
  std::string s;
  for (const auto& d : corpus) s += render_derivation(d) + "\n";
  return s;
}

namespace {

TreeNode parse_phrase_node(Lexer& lex) {
  Token t = lex.next();
  TreeNode n;
  if (t.kind == Token::Kind::LParen) {
    Token head = lex.expect(Token::Kind::Symbol, "node label");
    n.label = head.text;
    n.kind = NodeKind::Interior;
    n.adjoinable = true;
    while (lex.peek().kind != Token::Kind::RParen) {
      if (lex.peek().kind == Token::Kind::End) lex.fail("unbalanced '('", t);
      n.children.push_back(parse_phrase_node(lex));
    }
    lex.next();
    if (n.children.empty()) lex.fail("interior node '" + n.label + "' has no children", head);
    return n;
  }
  if (t.kind == Token::Kind::String) {
    n.label = t.text;
    n.kind = NodeKind::Terminal;
    return n;
  }
  if (t.kind == Token::Kind::Symbol && t.text.ends_with('!')) {
    n.label = t.text.substr(0, t.text.size() - 1);
    n.kind = NodeKind::SubstitutionSite;  // open site in fragment notation
    return n;
  }
  lex.fail("expected a phrase-structure node", t);
}

}  // namespace

TreeNode parse_phrase_tree(const std::string& line, int lineno) {
  Lexer lex(line, lineno);
  TreeNode n = parse_phrase_node(lex);
  if (!lex.at_end()) lex.fail("trailing content after tree", lex.peek());
  return n;
}

std::vector<TreeNode> parse_phrase_tree_corpus(const std::string& text) {
  std::vector<TreeNode> out;
  for (const auto& [lineno, line] : content_lines(text))
    out.push_back(parse_phrase_tree(line, lineno));
  return out;
}

}  // namespace slg
