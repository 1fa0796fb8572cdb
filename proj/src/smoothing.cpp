#include "slg/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slg/params_io.hpp"
#include "slg/sexpr.hpp"

namespace slg {

void BackoffConfig::validate() const {
  for (double l : {lambda_anchor, lambda_family, lambda_level})
    if (!(l >= 0.0 && l <= 1.0))
      throw std::invalid_argument("backoff lambda out of [0,1]");
  if (order.empty()) throw std::invalid_argument("backoff order must name at least one technique");
  std::vector<bool> seen(3, false);
  for (Technique t : order) {
    if (seen[static_cast<size_t>(t)])
      throw std::invalid_argument("backoff order repeats a technique");
    seen[static_cast<size_t>(t)] = true;
  }
}

BackoffConfig::Technique BackoffConfig::parse_technique(const std::string& s) {
  if (s == "anchor") return Technique::Anchor;
  if (s == "family") return Technique::Family;
  if (s == "level") return Technique::Level;
  throw std::invalid_argument("unknown backoff technique '" + s + "'");
}

std::string BackoffConfig::technique_name(Technique t) {
  switch (t) {
    case Technique::Anchor:
      return "anchor";
    case Technique::Family:
      return "family";
    default:
      return "level";
  }
}

std::string BackoffConfig::order_str() const {
  std::string s;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i) s += ",";
    s += technique_name(order[i]);
  }
  return s;
}

BackoffConfig BackoffConfig::parse(const std::string& text) {
  BackoffConfig c;
  for (const auto& [lineno, raw] : content_lines(text)) {
    std::string line = raw;
    std::replace(line.begin(), line.end(), '=', ' ');
    std::istringstream is(line);
    std::string key, value;
    is >> key >> value;
    if (key.empty()) continue;
    if (value.empty()) throw ParseError("missing value for '" + key + "'", lineno, 1);
    if (key == "lambda_anchor")
      c.lambda_anchor = std::stod(value);
    else if (key == "lambda_family")
      c.lambda_family = std::stod(value);
    else if (key == "lambda_level")
      c.lambda_level = std::stod(value);
    else if (key == "order") {
      c.order.clear();
      size_t pos = 0;
      while (pos <= value.size()) {
        size_t comma = value.find(',', pos);
        std::string name = value.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!name.empty()) c.order.push_back(parse_technique(name));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else {
      throw ParseError("unknown config key '" + key + "'", lineno, 1);
    }
  }
  c.validate();
  return c;
}

std::string BackoffConfig::str() const {
  std::ostringstream os;
  os << "lambda_anchor = " << format_prob(lambda_anchor) << "\n"
     << "lambda_family = " << format_prob(lambda_family) << "\n"
     << "lambda_level = " << format_prob(lambda_level) << "\n"
     << "order = " << order_str() << "\n";
  return os.str();
}

namespace {

std::map<std::string, std::string> make_template_map(const Grammar& g) {
  std::map<std::string, std::string> m;
  for (const auto& [name, t] : g.trees()) m[name] = t.template_id;
  return m;
}

std::map<std::string, std::string> make_family_map(const Grammar& g) {
  std::map<std::string, std::string> m;
  // Trees without a declared family form singleton classes under their own
  // name.
  for (const auto& [name, t] : g.trees()) m[name] = t.family ? *t.family : name;
  return m;
}

std::string rename(const std::map<std::string, std::string>& classes, const std::string& name) {
  if (name == kStop) return name;
  auto it = classes.find(name);
  return it == classes.end() ? name : it->second;
}

L1Counts rename_counts(const L1Counts& c, const std::map<std::string, std::string>& classes) {
  L1Counts out;
  for (const auto& [label, outs] : c.sub)
    for (const auto& [o, n] : outs) out.sub[label][rename(classes, o)] += n;
  for (const auto& [label, outs] : c.adj)
    for (const auto& [o, n] : outs) out.adj[label][rename(classes, o)] += n;
  return out;
}

L2Counts rename_counts(const L2Counts& c, const std::map<std::string, std::string>& classes) {
  L2Counts out;
  for (const auto& [key, outs] : c.sub)
    for (const auto& [o, n] : outs)
      out.sub[Slg2Key{rename(classes, key.host), key.addr}][rename(classes, o)] += n;
  for (const auto& [key, outs] : c.adj)
    for (const auto& [o, n] : outs)
      out.adj[Slg2Key{rename(classes, key.host), key.addr}][rename(classes, o)] += n;
  for (const auto& [o, n] : c.root) out.root[rename(classes, o)] += n;
  return out;
}

MetaProduction rename_mp(const MetaProduction& mp,
                         const std::map<std::string, std::string>& classes) {
  MetaProduction out = mp;
  for (auto& [addr, name] : out.sub) name = rename(classes, name);
  for (auto& [addr, seq] : out.adj)
    for (auto& name : seq) name = rename(classes, name);
  return out;
}

L3Counts rename_counts(const L3Counts& c, const std::map<std::string, std::string>& classes) {
  L3Counts out;
  for (const auto& [mother, outs] : c.expand)
    for (const auto& [mp, n] : outs)
      out.expand[rename(classes, mother)][rename_mp(mp, classes)] += n;
  for (const auto& [o, n] : c.root) out.root[rename(classes, o)] += n;
  return out;
}

}  // namespace

SmoothedModel build_smoothed(const AnyParams& primary,
                             const std::vector<DerivationTree>& corpus, const Grammar& g,
                             const BackoffConfig& config) {
  config.validate();
  SmoothedModel m;
  m.config = config;
  m.level = level_of(primary);
  if (m.level > 3)
    throw std::invalid_argument("smoothing applies to level 1, 2 or 3 parameters");
  if (std::holds_alternative<LiftedSlg3>(primary))
    throw std::invalid_argument("smoothing needs extensional level-3 parameters");
  if (corpus.empty()) throw std::invalid_argument("cannot build smoothed model: empty corpus");
  for (size_t i = 0; i < corpus.size(); ++i) {
    auto violations = validate_derivation(g, corpus[i]);
    if (!violations.empty())
      throw std::invalid_argument("corpus entry " + std::to_string(i) +
                                  " is invalid: " + violations.front().message);
  }

  auto templ = make_template_map(g);
  auto fam = make_family_map(g);

  L1Counts c1 = count_events_l1(g, corpus);
  m.a1 = normalize(c1);
  m.t1 = normalize(rename_counts(c1, templ));
  m.f1 = normalize(rename_counts(c1, fam));
  if (m.level >= 2) {
    L2Counts c2 = count_events_l2(g, corpus);
    m.a2 = normalize(c2);
    m.t2 = normalize(rename_counts(c2, templ));
    m.f2 = normalize(rename_counts(c2, fam));
  }
  if (m.level == 3) {
    L3Counts c3 = count_events_l3(g, corpus);
    m.a3 = normalize(c3);
    m.t3 = normalize(rename_counts(c3, templ));
    m.f3 = normalize(rename_counts(c3, fam));
  }

  // The given primary replaces the corpus estimate in its slot.
  if (m.level == 1)
    m.a1 = std::get<Slg1Params>(primary);
  else if (m.level == 2)
    m.a2 = std::get<Slg2Params>(primary);
  else
    m.a3 = std::get<Slg3Params>(primary);

  // Terminal-coverage validation: the level-1 template model must know
  // every site label reachable in the grammar, plus the start symbol.
  std::vector<std::string> gaps;
  auto need_sub = [&](const std::string& label) {
    if (!m.t1.sub.count(label)) gaps.push_back("sub " + label);
  };
  auto need_adj = [&](const std::string& label) {
    if (!m.t1.adj.count(label)) gaps.push_back("adj " + label);
  };
  need_sub(g.start_symbol());
  for (const auto& [name, tree] : g.trees()) {
    for (const auto& site : g.sites_of(name).substitution) need_sub(site.label);
    for (const auto& site : g.sites_of(name).adjunction) need_adj(site.label);
  }
  std::sort(gaps.begin(), gaps.end());
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
  if (!gaps.empty()) {
    std::string msg = "coverage gap in terminal fallback:";
    for (const auto& s : gaps) msg += " [" + s + "]";
    throw std::invalid_argument(msg);
  }
  return m;
}

SmoothedScorer::SmoothedScorer(const SmoothedModel& m, const Grammar& g)
    : model_(m), g_(&g) {
  model_.config.validate();
  template_map_ = make_template_map(g);
  family_map_ = make_family_map(g);
  for (auto [view, map] : {std::make_pair(&template_view_, &template_map_),
                           std::make_pair(&family_view_, &family_map_)}) {
    view->of = map;
    for (const auto& [name, t] : g.trees()) {
      auto& members =
          t.kind == TreeKind::Initial ? view->members_init : view->members_aux;
      ++members[{t.root.label, map->at(name)}];
    }
  }
}

std::string SmoothedScorer::template_of(const std::string& tree) const {
  return rename(template_map_, tree);
}

std::string SmoothedScorer::family_of(const std::string& tree) const {
  return rename(family_map_, tree);
}

double SmoothedScorer::eval_chain(const std::vector<Stage>& stages, const std::string& what) {
  std::optional<double> acc;
  double lambda_next = 1.0;
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    if (!it->p) continue;
    if (!acc)
      acc = *it->p;
    else
      acc = lambda_next * *it->p + (1.0 - lambda_next) * *acc;
    lambda_next = it->lambda;
  }
  if (!acc) throw MissingContextError("smoothed chain has no available stage: " + what);
  return *acc;
}

int SmoothedScorer::members(const ClassView& view, const std::string& label, OpKind op,
                            const std::string& cls) const {
  const auto& table = op == OpKind::Sub ? view.members_init : view.members_aux;
  auto it = table.find({label, cls});
  return it == table.end() ? 0 : it->second;
}

std::optional<double> SmoothedScorer::pooled_site_value(const ClassView& view,
                                                        const Dist<std::string>* dist,
                                                        const std::string& site_label,
                                                        OpKind op,
                                                        const std::string& outcome) const {
  if (!dist) return std::nullopt;
  // Restrict the class distribution to classes realizable in this context's
  // outcome space, renormalize, and split class mass uniformly over members.
  double z = 0;
  for (const auto& [cls, v] : dist->p) {
    if (cls == kStop) {
      if (op == OpKind::Adj) z += v;
    } else if (members(view, site_label, op, cls) > 0) {
      z += v;
    }
  }
  if (z <= 0) return std::nullopt;
  if (outcome == kStop) return dist->prob(kStop) / z;
  std::string cls = rename(*view.of, outcome);
  int n = members(view, site_label, op, cls);
  if (n == 0) return 0.0;  // outcome outside this context's space
  return dist->prob(cls) / z / static_cast<double>(n);
}

std::optional<double> SmoothedScorer::pooled_root_value(const ClassView& view,
                                                        const Dist<std::string>& dist,
                                                        const std::string& outcome) const {
  if (dist.p.empty()) return std::nullopt;
  return pooled_site_value(view, &dist, g_->start_symbol(), OpKind::Sub, outcome);
}

double SmoothedScorer::l1_chain(const std::string& label, OpKind op,
                                const std::string& outcome) const {
  auto anchored = [&]() -> std::optional<double> {
    const auto& table = op == OpKind::Sub ? model_.a1.sub : model_.a1.adj;
    auto it = table.find(label);
    if (it == table.end()) return std::nullopt;
    return it->second.prob(outcome);
  };
  auto pooled = [&](const Slg1Params& p, const ClassView& view) -> std::optional<double> {
    const auto& table = op == OpKind::Sub ? p.sub : p.adj;
    auto it = table.find(label);
    return pooled_site_value(view, it == table.end() ? nullptr : &it->second, label, op,
                             outcome);
  };
  auto terminal = [&]() { return pooled(model_.t1, template_view_); };

  std::vector<Stage> stages;
  stages.push_back({anchored(), 1.0});
  bool ends_with_level = false;
  for (auto t : model_.config.order) {
    ends_with_level = t == BackoffConfig::Technique::Level;
    switch (t) {
      case BackoffConfig::Technique::Anchor:
        stages.push_back({pooled(model_.t1, template_view_), model_.config.lambda(t)});
        break;
      case BackoffConfig::Technique::Family:
        stages.push_back({pooled(model_.f1, family_view_), model_.config.lambda(t)});
        break;
      case BackoffConfig::Technique::Level:
        // No level below 1: the level slot is the terminal itself.
        stages.push_back({terminal(), model_.config.lambda(t)});
        break;
    }
  }
  if (!ends_with_level) stages.push_back({terminal(), model_.config.lambda_level});
  return eval_chain(stages, "l1 " + label);
}

double SmoothedScorer::l2_chain(const std::string& host, const NodeAddress& addr,
                                const std::string& label, OpKind op,
                                const std::string& outcome) const {
  auto anchored = [&]() -> std::optional<double> {
    const auto& table = op == OpKind::Sub ? model_.a2.sub : model_.a2.adj;
    auto it = table.find(Slg2Key{host, addr});
    if (it == table.end()) return std::nullopt;
    return it->second.prob(outcome);
  };
  auto pooled = [&](const Slg2Params& p, const ClassView& view) -> std::optional<double> {
    const auto& table = op == OpKind::Sub ? p.sub : p.adj;
    auto it = table.find(Slg2Key{rename(*view.of, host), addr});
    return pooled_site_value(view, it == table.end() ? nullptr : &it->second, label, op,
                             outcome);
  };

  std::vector<Stage> stages;
  stages.push_back({anchored(), 1.0});
  bool ends_with_level = false;
  for (auto t : model_.config.order) {
    ends_with_level = t == BackoffConfig::Technique::Level;
    switch (t) {
      case BackoffConfig::Technique::Anchor:
        stages.push_back({pooled(model_.t2, template_view_), model_.config.lambda(t)});
        break;
      case BackoffConfig::Technique::Family:
        stages.push_back({pooled(model_.f2, family_view_), model_.config.lambda(t)});
        break;
      case BackoffConfig::Technique::Level:
        stages.push_back({l1_chain(label, op, outcome), model_.config.lambda(t)});
        break;
    }
  }
  if (!ends_with_level)
    stages.push_back({l1_chain(label, op, outcome), model_.config.lambda_level});
  return eval_chain(stages, "l2 " + host + "@" + addr.str());
}

double SmoothedScorer::l1_prob(const std::string& label, OpKind op,
                               const std::string& outcome) const {
  return l1_chain(label, op, outcome);
}

double SmoothedScorer::site_prob(const std::string& host, const NodeAddress& addr, OpKind op,
                                 const std::string& outcome) const {
  const std::string label = node_at(g_->tree(host), addr).label;
  return l2_chain(host, addr, label, op, outcome);
}

double SmoothedScorer::root_prob(const std::string& tree) const {
  const std::string& start = g_->start_symbol();
  if (model_.level == 1) return l1_chain(start, OpKind::Sub, tree);

  auto anchored_root = [&]() -> std::optional<double> {
    const Dist<std::string>& d = model_.level == 2 ? model_.a2.root : model_.a3.root;
    if (d.p.empty()) return std::nullopt;
    return d.prob(tree);
  };
  auto pooled_root = [&](bool templ) -> std::optional<double> {
    const Dist<std::string>& d =
        model_.level == 2 ? (templ ? model_.t2.root : model_.f2.root)
                          : (templ ? model_.t3.root : model_.f3.root);
    return pooled_root_value(templ ? template_view_ : family_view_, d, tree);
  };
  // The level slot for the root chain: one level down, ending in the
  // terminal level-1 chain at the start symbol.
  auto lower_root = [&]() -> double {
    if (model_.level == 2) return l1_chain(start, OpKind::Sub, tree);
    SmoothedModel down = model_;
    down.level = 2;
    SmoothedScorer lower(down, *g_);
    return lower.root_prob(tree);
  };

  std::vector<Stage> stages;
  stages.push_back({anchored_root(), 1.0});
  bool ends_with_level = false;
  for (auto t : model_.config.order) {
    ends_with_level = t == BackoffConfig::Technique::Level;
    switch (t) {
      case BackoffConfig::Technique::Anchor:
        stages.push_back({pooled_root(true), model_.config.lambda(t)});
        break;
      case BackoffConfig::Technique::Family:
        stages.push_back({pooled_root(false), model_.config.lambda(t)});
        break;
      case BackoffConfig::Technique::Level:
        stages.push_back({lower_root(), model_.config.lambda(t)});
        break;
    }
  }
  if (!ends_with_level) stages.push_back({lower_root(), model_.config.lambda_level});
  return eval_chain(stages, "root");
}

std::optional<double> SmoothedScorer::pooled_expansion_value(const ClassView& view,
                                                             const Slg3Params& pooled,
                                                             const std::string& mother,
                                                             const MetaProduction& mp) const {
  auto it = pooled.expand.find(rename(*view.of, mother));
  if (it == pooled.expand.end()) return std::nullopt;
  const Sites& sites = g_->sites_of(mother);

  // A pooled production is realizable for this mother when its site
  // addresses match and every daughter class has a member with the right
  // root label and kind.
  auto compatible = [&](const MetaProduction& pm) -> bool {
    if (pm.sub.size() != sites.substitution.size() ||
        pm.adj.size() != sites.adjunction.size())
      return false;
    for (size_t i = 0; i < pm.sub.size(); ++i) {
      if (pm.sub[i].first != sites.substitution[i].addr) return false;
      if (members(view, sites.substitution[i].label, OpKind::Sub, pm.sub[i].second) == 0)
        return false;
    }
    for (size_t i = 0; i < pm.adj.size(); ++i) {
      if (pm.adj[i].first != sites.adjunction[i].addr) return false;
      for (const auto& cls : pm.adj[i].second)
        if (members(view, sites.adjunction[i].label, OpKind::Adj, cls) == 0) return false;
    }
    return true;
  };

  double z = 0;
  for (const auto& [pm, v] : it->second.p)
    if (compatible(pm)) z += v;
  if (z <= 0) return std::nullopt;

  MetaProduction image = rename_mp(mp, *view.of);
  double mass = it->second.prob(image);
  if (mass <= 0) return 0.0;
  double divisor = 1;
  for (size_t i = 0; i < image.sub.size(); ++i)
    divisor *= members(view, sites.substitution[i].label, OpKind::Sub, image.sub[i].second);
  for (size_t i = 0; i < image.adj.size(); ++i)
    for (const auto& cls : image.adj[i].second)
      divisor *= members(view, sites.adjunction[i].label, OpKind::Adj, cls);
  return mass / z / divisor;
}

double SmoothedScorer::factored_expansion_prob(const std::string& mother,
                                               const MetaProduction& mp) const {
  double p = 1;
  const Sites& sites = g_->sites_of(mother);
  if (mp.sub.size() != sites.substitution.size() ||
      mp.adj.size() != sites.adjunction.size())
    throw std::invalid_argument("meta-production does not cover the sites of " + mother);
  for (size_t i = 0; i < mp.sub.size(); ++i)
    p *= l2_chain(mother, mp.sub[i].first, sites.substitution[i].label, OpKind::Sub,
                  mp.sub[i].second);
  for (size_t i = 0; i < mp.adj.size(); ++i) {
    const std::string& label = sites.adjunction[i].label;
    for (const auto& aux : mp.adj[i].second)
      p *= l2_chain(mother, mp.adj[i].first, label, OpKind::Adj, aux);
    p *= l2_chain(mother, mp.adj[i].first, label, OpKind::Adj, kStop);
  }
  return p;
}

double SmoothedScorer::expansion_prob(const std::string& mother,
                                      const MetaProduction& mp) const {
  if (model_.level != 3)
    throw std::invalid_argument("expansion_prob requires a level-3 smoothed model");

  auto anchored = [&]() -> std::optional<double> {
    auto it = model_.a3.expand.find(mother);
    if (it == model_.a3.expand.end()) return std::nullopt;
    return it->second.prob(mp);
  };

  std::vector<Stage> stages;
  stages.push_back({anchored(), 1.0});
  bool ends_with_level = false;
  for (auto t : model_.config.order) {
    ends_with_level = t == BackoffConfig::Technique::Level;
    switch (t) {
      case BackoffConfig::Technique::Anchor:
        stages.push_back(
            {pooled_expansion_value(template_view_, model_.t3, mother, mp),
             model_.config.lambda(t)});
        break;
      case BackoffConfig::Technique::Family:
        stages.push_back({pooled_expansion_value(family_view_, model_.f3, mother, mp),
                          model_.config.lambda(t)});
        break;
      case BackoffConfig::Technique::Level:
        stages.push_back({factored_expansion_prob(mother, mp), model_.config.lambda(t)});
        break;
    }
  }
  if (!ends_with_level)
    stages.push_back({factored_expansion_prob(mother, mp), model_.config.lambda_level});
  return eval_chain(stages, "expand " + mother);
}

double SmoothedScorer::event_prob(const SiteEvent& e) const {
  if (e.is_root) return root_prob(e.outcome);
  if (model_.level == 1) return l1_chain(e.site_label, e.op, e.outcome);
  return l2_chain(e.host, e.addr, e.site_label, e.op, e.outcome);
}

double SmoothedScorer::score_derivation(const DerivationTree& d) const {
  double lp = 0;
  auto add = [&](double p) {
    lp += p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
  };
  if (model_.level == 3) {
    add(root_prob(d.tree_name));
    for (const auto& ev : extract_expansion_events(*g_, d))
      add(expansion_prob(ev.mother, ev.production));
    return lp;
  }
  for (const auto& e : extract_site_events(*g_, d)) add(event_prob(e));
  return lp;
}

std::string render_smoothed(const SmoothedModel& m) {
  std::ostringstream os;
  os << "smoothed level " << m.level << "\n" << m.config.str();
  auto section = [&](const std::string& name, int level, const AnyParams& p) {
    os << "begin " << name << " " << level << "\n"
       << render_params(p) << "end\n";
  };
  section("anchored", 1, m.a1);
  section("template", 1, m.t1);
  section("family", 1, m.f1);
  if (m.level >= 2) {
    section("anchored", 2, m.a2);
    section("template", 2, m.t2);
    section("family", 2, m.f2);
  }
  if (m.level == 3) {
    section("anchored", 3, m.a3);
    section("template", 3, m.t3);
    section("family", 3, m.f3);
  }
  return os.str();
}

bool is_smoothed_file(const std::string& text) {
  auto lines = content_lines(text);
  return !lines.empty() && lines[0].second.rfind("smoothed level", 0) == 0;
}

SmoothedModel parse_smoothed(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw std::runtime_error("empty smoothed-model file");
  SmoothedModel m;
  std::istringstream head(lines[0].second);
  std::string w1, w2;
  head >> w1 >> w2 >> m.level;
  if (w1 != "smoothed" || w2 != "level" || m.level < 1 || m.level > 3)
    throw ParseError("expected 'smoothed level <1|2|3>'", lines[0].first, 1);

  std::string config_text;
  size_t i = 1;
  for (; i < lines.size() && lines[i].second.rfind("begin ", 0) != 0; ++i)
    config_text += lines[i].second + "\n";
  m.config = BackoffConfig::parse(config_text);

  while (i < lines.size()) {
    std::istringstream sec(lines[i].second);
    std::string kw, name;
    int level = 0;
    sec >> kw >> name >> level;
    if (kw != "begin") throw ParseError("expected 'begin <section> <level>'", lines[i].first, 1);
    ++i;
    ParamsBuilder b;
    bool closed = false;
    for (; i < lines.size(); ++i) {
      if (lines[i].second == "end") {
        closed = true;
        ++i;
        break;
      }
      b.add_line(lines[i].second, lines[i].first);
    }
    if (!closed) throw std::runtime_error("unterminated section '" + name + "'");
    AnyParams p = b.empty() ? AnyParams{} : b.take();
    if (b.empty()) {
      // An empty section stays default-constructed at its level.
      if (level == 1) p = Slg1Params{};
      else if (level == 2) p = Slg2Params{};
      else p = Slg3Params{};
    }
    auto assign = [&](auto& slot) {
      using T = std::decay_t<decltype(slot)>;
      if (!std::holds_alternative<T>(p))
        throw std::runtime_error("section '" + name + "' has the wrong level");
      slot = std::get<T>(p);
    };
    if (level == 1 && name == "anchored") assign(m.a1);
    else if (level == 1 && name == "template") assign(m.t1);
    else if (level == 1 && name == "family") assign(m.f1);
    else if (level == 2 && name == "anchored") assign(m.a2);
    else if (level == 2 && name == "template") assign(m.t2);
    else if (level == 2 && name == "family") assign(m.f2);
    else if (level == 3 && name == "anchored") assign(m.a3);
    else if (level == 3 && name == "template") assign(m.t3);
    else if (level == 3 && name == "family") assign(m.f3);
    else throw std::runtime_error("unknown section '" + name + "' level " + std::to_string(level));
  }
  return m;
}

}  // namespace slg
