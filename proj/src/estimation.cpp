#include "slg/estimation.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "slg/errors.hpp"

namespace slg {

namespace {

template <class K, class O>
void merge_counts(std::map<K, std::map<O, int64_t>>& into,
                  const std::map<K, std::map<O, int64_t>>& from) {
  for (const auto& [k, outs] : from)
    for (const auto& [o, n] : outs) into[k][o] += n;
}

void merge_plain(std::map<std::string, int64_t>& into,
                 const std::map<std::string, int64_t>& from) {
  for (const auto& [k, n] : from) into[k] += n;
}

}  // namespace

void L1Counts::merge(const L1Counts& other) {
  merge_counts(sub, other.sub);
  merge_counts(adj, other.adj);
}

void L2Counts::merge(const L2Counts& other) {
  merge_counts(sub, other.sub);
  merge_counts(adj, other.adj);
  merge_plain(root, other.root);
}

void L3Counts::merge(const L3Counts& other) {
  for (const auto& [m, outs] : other.expand)
    for (const auto& [mp, n] : outs) expand[m][mp] += n;
  merge_plain(root, other.root);
}

L1Counts count_events_l1(const Grammar& g, const std::vector<DerivationTree>& corpus,
                         Exec exec) {
  return reduce_indexed<L1Counts>(
      corpus.size(), exec,
      [&](L1Counts& acc, size_t i) {
        for (const auto& e : extract_site_events(g, corpus[i])) {
          auto& table = e.op == OpKind::Sub ? acc.sub : acc.adj;
          ++table[e.site_label][e.outcome];
        }
      },
      [](L1Counts& total, const L1Counts& acc) { total.merge(acc); });
}

L2Counts count_events_l2(const Grammar& g, const std::vector<DerivationTree>& corpus,
                         Exec exec) {
  return reduce_indexed<L2Counts>(
      corpus.size(), exec,
      [&](L2Counts& acc, size_t i) {
        for (const auto& e : extract_site_events(g, corpus[i])) {
          if (e.is_root) {
            ++acc.root[e.outcome];
            continue;
          }
          auto& table = e.op == OpKind::Sub ? acc.sub : acc.adj;
          ++table[Slg2Key{e.host, e.addr}][e.outcome];
        }
      },
      [](L2Counts& total, const L2Counts& acc) { total.merge(acc); });
}

L3Counts count_events_l3(const Grammar& g, const std::vector<DerivationTree>& corpus,
                         Exec exec) {
  return reduce_indexed<L3Counts>(
      corpus.size(), exec,
      [&](L3Counts& acc, size_t i) {
        ++acc.root[corpus[i].tree_name];
        for (auto& ev : extract_expansion_events(g, corpus[i]))
          ++acc.expand[ev.mother][ev.production];
      },
      [](L3Counts& total, const L3Counts& acc) { total.merge(acc); });
}

namespace {

template <class K, class O>
std::map<K, Dist<O>> normalize_table(const std::map<K, std::map<O, int64_t>>& counts) {
  std::map<K, Dist<O>> out;
  for (const auto& [k, outs] : counts) {
    int64_t total = 0;
    for (const auto& [o, n] : outs) total += n;
    Dist<O> d;
    for (const auto& [o, n] : outs)
      d.p[o] = static_cast<double>(n) / static_cast<double>(total);
    out[k] = std::move(d);
  }
  return out;
}

template <class O>
Dist<O> normalize_plain(const std::map<O, int64_t>& counts) {
  Dist<O> d;
  int64_t total = 0;
  for (const auto& [o, n] : counts) total += n;
  for (const auto& [o, n] : counts)
    d.p[o] = static_cast<double>(n) / static_cast<double>(total);
  return d;
}

}  // namespace

Slg1Params normalize(const L1Counts& c) {
  return {normalize_table(c.sub), normalize_table(c.adj)};
}

Slg2Params normalize(const L2Counts& c) {
  return {normalize_table(c.sub), normalize_table(c.adj), normalize_plain(c.root)};
}

Slg3Params normalize(const L3Counts& c) {
  return {normalize_table(c.expand), normalize_plain(c.root)};
}

AnyParams estimate(const Grammar& g, const std::vector<DerivationTree>& corpus, int level,
                   Exec exec) {
  if (corpus.empty()) throw std::invalid_argument("nothing to estimate: empty corpus");
  for (size_t i = 0; i < corpus.size(); ++i) {
    auto violations = validate_derivation(g, corpus[i]);
    if (!violations.empty())
      throw std::invalid_argument("corpus entry " + std::to_string(i) +
                                  " is invalid: " + violations.front().message);
  }
  switch (level) {
    case 1:
      return normalize(count_events_l1(g, corpus, exec));
    case 2:
      return normalize(count_events_l2(g, corpus, exec));
    case 3:
      return normalize(count_events_l3(g, corpus, exec));
    default:
      throw std::invalid_argument("estimate: level must be 1, 2 or 3");
  }
}

namespace {

void collect_fragments_at(const TreeNode& node, int remaining,
                          std::vector<TreeNode>& out) {
  // Each child is either cut to an open site (nonterminals only) or kept
  // with all of its own children, recursively.
  std::vector<std::vector<TreeNode>> child_options;
  for (const auto& c : node.children) {
    std::vector<TreeNode> options;
    if (c.kind == NodeKind::Terminal) {
      options.push_back(c);
    } else {
      TreeNode site;
      site.label = c.label;
      site.kind = NodeKind::SubstitutionSite;
      options.push_back(site);
      if (remaining > 1) {
        std::vector<TreeNode> nested;
        collect_fragments_at(c, remaining - 1, nested);
        for (auto& n : nested) options.push_back(std::move(n));
      }
    }
    child_options.push_back(std::move(options));
  }
  // Cartesian product over child choices.
  std::vector<size_t> pick(child_options.size(), 0);
  while (true) {
    TreeNode frag;
    frag.label = node.label;
    frag.kind = NodeKind::Interior;
    frag.adjoinable = true;
    for (size_t i = 0; i < child_options.size(); ++i)
      frag.children.push_back(child_options[i][pick[i]]);
    out.push_back(std::move(frag));
    size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < child_options[i].size()) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }
}

void walk_nodes(const TreeNode& n, std::vector<const TreeNode*>& out) {
  if (n.kind == NodeKind::Interior) out.push_back(&n);
  for (const auto& c : n.children) walk_nodes(c, out);
}

}  // namespace

std::map<std::string, std::pair<Fragment, int64_t>> extract_fragments(
    const std::vector<TreeNode>& trees, const FragmentExtractionOptions& opt) {
  std::map<std::string, std::pair<Fragment, int64_t>> counts;
  int budget = opt.max_depth <= 0 ? std::numeric_limits<int>::max() : opt.max_depth;
  for (const auto& t : trees) {
    std::vector<const TreeNode*> nodes;
    walk_nodes(t, nodes);
    int64_t produced = 0;
    for (const auto* n : nodes) {
      std::vector<TreeNode> frags;
      collect_fragments_at(*n, budget, frags);
      produced += static_cast<int64_t>(frags.size());
      if (produced > opt.max_fragments_per_tree)
        throw BudgetExceededError("fragment extraction exceeded " +
                                  std::to_string(opt.max_fragments_per_tree) +
                                  " fragments for one tree");
      for (auto& f : frags) {
        Fragment frag{std::move(f)};
        std::string key = fragment_key(frag);
        auto it = counts.find(key);
        if (it == counts.end())
          counts.emplace(key, std::make_pair(std::move(frag), int64_t{1}));
        else
          ++it->second.second;
      }
    }
  }
  return counts;
}

Slg4Params estimate_dop(const std::vector<TreeNode>& trees,
                        const FragmentExtractionOptions& opt) {
  if (trees.empty()) throw std::invalid_argument("nothing to estimate: empty corpus");
  auto counts = extract_fragments(trees, opt);
  std::map<std::string, int64_t> per_root;
  for (const auto& [key, fc] : counts) per_root[fc.first.body.label] += fc.second;
  Slg4Params p;
  for (const auto& [key, fc] : counts)
    p.fragments.emplace(key, std::make_pair(fc.first, static_cast<double>(fc.second) /
                                                          static_cast<double>(per_root[fc.first.body.label])));
  return p;
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct Sampler {
  std::mt19937_64 eng;
  explicit Sampler(uint64_t seed) : eng(seed) {}
  // 53-bit uniform in [0,1); avoids unportable std distributions.
  double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
};

template <class O>
const O& draw(const Dist<O>& d, Sampler& rng, const std::string& what) {
  double u = rng.uniform();
  double cum = 0;
  const O* last = nullptr;
  for (const auto& [o, v] : d.p) {
    if (v <= 0) continue;
    last = &o;
    cum += v;
    if (u < cum) return o;
  }
  if (!last) throw std::invalid_argument("cannot sample from empty distribution: " + what);
  return *last;  // rounding residue goes to the final outcome
}

struct SampleState {
  const Grammar& g;
  Sampler rng;
  int max_nodes;
  int used = 0;

  void charge() {
    if (++used > max_nodes)
      throw BudgetExceededError("sample exceeded max_nodes=" + std::to_string(max_nodes));
  }
};

template <class Params>
const Dist<std::string>& site_dist(const Params& p, const std::string& host,
                                   const NodeAddress& addr, const std::string& label,
                                   OpKind op);

template <>
const Dist<std::string>& site_dist(const Slg1Params& p, const std::string&,
                                   const NodeAddress&, const std::string& label,
                                   OpKind op) {
  const auto& table = op == OpKind::Sub ? p.sub : p.adj;
  auto it = table.find(label);
  if (it == table.end())
    throw MissingContextError("slg1 " + std::string(op == OpKind::Sub ? "sub " : "adj ") + label);
  return it->second;
}

template <>
const Dist<std::string>& site_dist(const Slg2Params& p, const std::string& host,
                                   const NodeAddress& addr, const std::string&,
                                   OpKind op) {
  const auto& table = op == OpKind::Sub ? p.sub : p.adj;
  auto it = table.find(Slg2Key{host, addr});
  if (it == table.end())
    throw MissingContextError("slg2 " + std::string(op == OpKind::Sub ? "sub " : "adj ") +
                              host + "@" + addr.str());
  return it->second;
}

template <class Params>
DerivationTree expand_instance(const Params& p, SampleState& st, const std::string& name) {
  st.charge();
  DerivationTree d;
  d.tree_name = name;
  const Sites& sites = st.g.sites_of(name);
  // Draw order: substitution sites then adjunction sites, address order.
  for (const auto& site : sites.substitution) {
    const auto& dist = site_dist(p, name, site.addr, site.label, OpKind::Sub);
    std::string child = draw(dist, st.rng, "sub " + site.label);
    DerivationEdge e;
    e.addr = site.addr;
    e.op = OpKind::Sub;
    e.child.push_back(expand_instance(p, st, child));
    d.edges.push_back(std::move(e));
  }
  for (const auto& site : sites.adjunction) {
    const auto& dist = site_dist(p, name, site.addr, site.label, OpKind::Adj);
    while (true) {
      std::string outcome = draw(dist, st.rng, "adj " + site.label);
      if (outcome == kStop) break;
      DerivationEdge e;
      e.addr = site.addr;
      e.op = OpKind::Adj;
      e.child.push_back(expand_instance(p, st, outcome));
      d.edges.push_back(std::move(e));
    }
  }
  std::stable_sort(d.edges.begin(), d.edges.end(),
                   [](const DerivationEdge& a, const DerivationEdge& b) { return a.addr < b.addr; });
  return d;
}

DerivationTree expand_instance_l3(const Slg3Params& p, SampleState& st,
                                  const std::string& name) {
  st.charge();
  DerivationTree d;
  d.tree_name = name;
  auto it = p.expand.find(name);
  if (it == p.expand.end()) throw MissingContextError("slg3 expand " + name);
  const MetaProduction& mp = draw(it->second, st.rng, "expand " + name);
  for (const auto& [addr, child] : mp.sub) {
    DerivationEdge e;
    e.addr = addr;
    e.op = OpKind::Sub;
    e.child.push_back(expand_instance_l3(p, st, child));
    d.edges.push_back(std::move(e));
  }
  for (const auto& [addr, seq] : mp.adj) {
    for (const auto& aux : seq) {
      DerivationEdge e;
      e.addr = addr;
      e.op = OpKind::Adj;
      e.child.push_back(expand_instance_l3(p, st, aux));
      d.edges.push_back(std::move(e));
    }
  }
  std::stable_sort(d.edges.begin(), d.edges.end(),
                   [](const DerivationEdge& a, const DerivationEdge& b) { return a.addr < b.addr; });
  return d;
}

}  // namespace

uint64_t mix_seed(uint64_t seed, uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index + 0x632be59bd9b4e019ull));
}

DerivationTree sample_derivation(const AnyParams& p, const Grammar& g, uint64_t seed,
                                 int max_nodes) {
  SampleState st{g, Sampler(splitmix64(seed)), max_nodes};
  return std::visit(
      [&](const auto& params) -> DerivationTree {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, Slg1Params>) {
          auto it = params.sub.find(g.start_symbol());
          if (it == params.sub.end())
            throw MissingContextError("slg1 sub " + g.start_symbol());
          std::string root = draw(it->second, st.rng, "root");
          return expand_instance(params, st, root);
        } else if constexpr (std::is_same_v<T, Slg2Params>) {
          if (params.root.p.empty()) throw MissingContextError("slg2 root");
          std::string root = draw(params.root, st.rng, "root");
          return expand_instance(params, st, root);
        } else if constexpr (std::is_same_v<T, Slg3Params>) {
          if (params.root.p.empty()) throw MissingContextError("slg3 root");
          std::string root = draw(params.root, st.rng, "root");
          return expand_instance_l3(params, st, root);
        } else {
          throw std::invalid_argument("sampling requires level 1, 2 or 3 parameters");
        }
      },
      p);
}

std::vector<DerivationTree> sample_corpus(const AnyParams& p, const Grammar& g, int n,
                                          uint64_t seed, int max_nodes, Exec exec) {
  std::vector<DerivationTree> out(static_cast<size_t>(n));
  std::vector<std::string> errors(static_cast<size_t>(n));
  for_each_index(static_cast<size_t>(n), exec, [&](size_t i) {
    constexpr int kMaxAttempts = 100;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      try {
        out[i] = sample_derivation(p, g, mix_seed(seed, i * kMaxAttempts + attempt),
                                   max_nodes);
        return;
      } catch (const BudgetExceededError&) {
        continue;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        return;
      }
    }
    errors[i] = "sample slot " + std::to_string(i) + ": budget exceeded in " +
                std::to_string(kMaxAttempts) + " consecutive attempts";
  });
  for (const auto& e : errors)
    if (!e.empty()) throw BudgetExceededError(e);
  return out;
}

double corpus_log_likelihood(const AnyParams& p, const Grammar& g,
                             const std::vector<DerivationTree>& corpus, Exec exec) {
  std::vector<double> lp(corpus.size());
  std::vector<std::string> errors(corpus.size());
  for_each_index(corpus.size(), exec, [&](size_t i) {
    try {
      lp[i] = score_derivation(p, g, corpus[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw MissingContextError(e);
  double total = 0;
  for (double v : lp) total += v;  // fixed order: parallel == serial bitwise
  return total;
}

}  // namespace slg
