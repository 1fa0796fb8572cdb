// Command-line front end: batch workflows over grammars, corpora and
// parameter files. Exit codes: 0 success, 1 domain error, 2 usage error.

#include <unistd.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "slg/estimation.hpp"
#include "slg/params_io.hpp"
#include "slg/rational.hpp"
#include "slg/search.hpp"
#include "slg/sexpr.hpp"
#include "slg/smoothing.hpp"
#include "slg/stats.hpp"

using nlohmann::json;
using namespace slg;

namespace {

bool color_enabled() {
  return std::getenv("SLG_NO_COLOR") == nullptr && isatty(fileno(stdout));
}

std::string styled(const std::string& s, const char* code) {
  if (!color_enabled()) return s;
  return std::string("\033[") + code + "m" + s + "\033[0m";
}

struct CommonOpts {
  std::string format = "text";
  bool log_space = false;
};

Grammar load_grammar(const std::string& path) {
  return parse_grammar(read_text_file(path));
}

std::vector<DerivationTree> load_corpus(const std::string& path) {
  return parse_derivation_corpus(read_text_file(path));
}

// Parameter or smoothed-model file, detected by header.
struct LoadedModel {
  std::optional<AnyParams> params;
  std::optional<SmoothedModel> smoothed;
};

LoadedModel load_model(const std::string& path) {
  std::string text = read_text_file(path);
  LoadedModel m;
  if (is_smoothed_file(text))
    m.smoothed = parse_smoothed(text);
  else
    m.params = parse_params(text);
  return m;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

void emit_score(size_t index, double lp, const CommonOpts& opts) {
  if (opts.format == "json-lines") {
    json j{{"index", index}, {"log_prob", lp}, {"prob", std::exp(lp)}};
    std::cout << j.dump() << "\n";
    return;
  }
  std::cout << format_prob(opts.log_space ? lp : std::exp(lp)) << "\n";
}

ContingencyTable parse_table_arg(const std::string& spec) {
  ContingencyTable t;
  std::vector<std::vector<int64_t>> rows;
  size_t pos = 0;
  while (pos <= spec.size()) {
    size_t semi = spec.find(';', pos);
    std::string row = spec.substr(pos, semi == std::string::npos ? semi : semi - pos);
    std::vector<int64_t> cells;
    size_t p = 0;
    while (p <= row.size()) {
      size_t comma = row.find(',', p);
      std::string cell = row.substr(p, comma == std::string::npos ? comma : comma - p);
      if (!cell.empty()) cells.push_back(std::stoll(cell));
      if (comma == std::string::npos) break;
      p = comma + 1;
    }
    if (!cells.empty()) rows.push_back(std::move(cells));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  t.counts = std::move(rows);
  for (size_t r = 0; r < t.counts.size(); ++r) t.row_labels.push_back("r" + std::to_string(r + 1));
  if (!t.counts.empty())
    for (size_t c = 0; c < t.counts[0].size(); ++c)
      t.col_labels.push_back("c" + std::to_string(c + 1));
  return t;
}

ContingencyTable parse_table_csv(const std::string& text) {
  ContingencyTable t;
  for (const auto& [lineno, line] : content_lines(text)) {
    std::vector<std::string> cells;
    size_t p = 0;
    while (p <= line.size()) {
      size_t comma = line.find(',', p);
      cells.push_back(line.substr(p, comma == std::string::npos ? comma : comma - p));
      if (comma == std::string::npos) break;
      p = comma + 1;
    }
    if (cells.empty()) continue;
    bool numeric_first = !cells[0].empty() &&
                         cells[0].find_first_not_of("0123456789") == std::string::npos;
    if (t.counts.empty() && !numeric_first && t.col_labels.empty()) {
      // Header row; the corner cell may be empty.
      for (size_t i = 1; i < cells.size(); ++i) t.col_labels.push_back(cells[i]);
      continue;
    }
    std::vector<int64_t> row;
    size_t start = numeric_first ? 0 : 1;
    if (!numeric_first) t.row_labels.push_back(cells[0]);
    for (size_t i = start; i < cells.size(); ++i) row.push_back(std::stoll(cells[i]));
    t.counts.push_back(std::move(row));
  }
  if (t.row_labels.empty())
    for (size_t r = 0; r < t.counts.size(); ++r)
      t.row_labels.push_back("r" + std::to_string(r + 1));
  if (t.col_labels.empty() && !t.counts.empty())
    for (size_t c = 0; c < t.counts[0].size(); ++c)
      t.col_labels.push_back("c" + std::to_string(c + 1));
  return t;
}

int run(int argc, char** argv) {
  CLI::App app{"stochastic lexicalized tree-adjoining grammar toolkit"};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  CommonOpts opts;

  // ---- validate ----
  auto* validate_cmd = app.add_subcommand("validate", "check a grammar and optional corpus");
  std::string v_grammar, v_corpus;
  validate_cmd->add_option("-g,--grammar", v_grammar, "grammar file")->required();
  validate_cmd->add_option("-c,--corpus", v_corpus, "derivation corpus file");
  validate_cmd->callback([&]() {
    Grammar g = load_grammar(v_grammar);
    int errors = 0, warnings = 0;
    auto report = [&](const Violation& v, const std::string& where) {
      bool err = v.severity == Violation::Severity::Error;
      (err ? errors : warnings)++;
      std::cerr << (err ? "error" : "warning") << where << ": " << v.message << "\n";
    };
    for (const auto& v : validate_grammar(g)) report(v, "");
    if (!v_corpus.empty()) {
      auto corpus = load_corpus(v_corpus);
      for (size_t i = 0; i < corpus.size(); ++i)
        for (const auto& v : validate_derivation(g, corpus[i]))
          report(v, " [entry " + std::to_string(i) + "]");
    }
    std::cout << styled(std::to_string(errors) + " violations", errors ? "31" : "32")
              << (warnings ? " (" + std::to_string(warnings) + " warnings)" : "") << "\n";
    if (errors) throw std::runtime_error("validation failed");
  });

  // ---- estimate ----
  auto* estimate_cmd = app.add_subcommand("estimate", "relative-frequency estimation");
  std::string e_grammar, e_corpus, e_out;
  int e_level = 1;
  bool e_parallel = false;
  estimate_cmd->add_option("-g,--grammar", e_grammar)->required();
  estimate_cmd->add_option("-c,--corpus", e_corpus)->required();
  estimate_cmd->add_option("--level", e_level, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
  estimate_cmd->add_option("-o,--out", e_out, "parameter file to write")->required();
  estimate_cmd->add_flag("--parallel", e_parallel, "use the OpenMP counting kernel");
  estimate_cmd->callback([&]() {
    Grammar g = load_grammar(e_grammar);
    AnyParams p = estimate(g, load_corpus(e_corpus), e_level,
                           e_parallel ? Exec::Parallel : Exec::Serial);
    save_params_file(e_out, p);
    std::cerr << "wrote " << e_out << "\n";
  });

  // ---- score ----
  auto* score_cmd = app.add_subcommand("score", "score derivations under a model");
  std::string s_grammar, s_params, s_file;
  score_cmd->add_option("-g,--grammar", s_grammar)->required();
  score_cmd->add_option("-p,--params", s_params, "parameter or smoothed-model file")->required();
  score_cmd->add_option("-d,--derivations", s_file, "derivation file, one per line")->required();
  score_cmd->add_flag("--log", opts.log_space, "print log probabilities");
  score_cmd->add_option("--format", opts.format)->check(CLI::IsMember({"text", "json-lines"}));
  score_cmd->callback([&]() {
    Grammar g = load_grammar(s_grammar);
    LoadedModel m = load_model(s_params);
    auto ds = load_corpus(s_file);
    std::optional<SmoothedScorer> scorer;
    if (m.smoothed) scorer.emplace(*m.smoothed, g);
    for (size_t i = 0; i < ds.size(); ++i) {
      double lp = scorer ? scorer->score_derivation(ds[i])
                         : score_derivation(*m.params, g, ds[i]);
      emit_score(i, lp, opts);
    }
  });

  // ---- sample ----
  auto* sample_cmd = app.add_subcommand("sample", "draw derivations from a model");
  std::string sa_grammar, sa_params, sa_out;
  int sa_n = 1, sa_max_nodes = 200;
  uint64_t sa_seed = 0;
  bool sa_parallel = false;
  sample_cmd->add_option("-g,--grammar", sa_grammar)->required();
  sample_cmd->add_option("-p,--params", sa_params)->required();
  sample_cmd->add_option("-n,--count", sa_n)->required();
  sample_cmd->add_option("--seed", sa_seed, "random seed (required: runs are reproducible)")
      ->required();
  sample_cmd->add_option("--max-nodes", sa_max_nodes);
  sample_cmd->add_option("-o,--out", sa_out, "corpus file to write (default stdout)");
  sample_cmd->add_flag("--parallel", sa_parallel);
  sample_cmd->callback([&]() {
    Grammar g = load_grammar(sa_grammar);
    LoadedModel m = load_model(sa_params);
    if (!m.params) throw std::runtime_error("sampling needs plain parameters");
    auto corpus = sample_corpus(*m.params, g, sa_n, sa_seed, sa_max_nodes,
                                sa_parallel ? Exec::Parallel : Exec::Serial);
    std::string text = render_derivation_corpus(corpus);
    if (sa_out.empty())
      std::cout << text;
    else {
      write_text_file(sa_out, text);
      std::cerr << "wrote " << sa_out << "\n";
    }
  });

  // ---- enumerate ----
  auto* enum_cmd = app.add_subcommand("enumerate", "bounded exhaustive derivation enumeration");
  std::string en_grammar, en_params;
  SearchBounds en_bounds;
  int en_max_adj = -1, en_max_yield = -1;
  enum_cmd->add_option("-g,--grammar", en_grammar)->required();
  enum_cmd->add_option("--max-uses", en_bounds.max_tree_uses)->required();
  enum_cmd->add_option("--max-adj", en_max_adj, "adjunctions per node (-1 = unlimited)");
  enum_cmd->add_option("--max-yield", en_max_yield, "yield length bound (-1 = none)");
  enum_cmd->add_option("-p,--params", en_params, "also print each score and the total mass");
  enum_cmd->add_option("--format", opts.format)->check(CLI::IsMember({"text", "json-lines"}));
  enum_cmd->callback([&]() {
    Grammar g = load_grammar(en_grammar);
    if (en_max_adj >= 0) en_bounds.max_adj_per_node = en_max_adj;
    if (en_max_yield >= 0) en_bounds.max_yield = en_max_yield;
    std::optional<AnyParams> p;
    if (!en_params.empty()) {
      LoadedModel m = load_model(en_params);
      if (!m.params) throw std::runtime_error("enumerate needs plain parameters");
      p = std::move(m.params);
    }
    double mass = 0;
    for (const auto& d : enumerate_derivations(g, en_bounds)) {
      std::string line = render_derivation(d);
      if (p) {
        double lp = score_derivation(*p, g, d);
        mass += std::exp(lp);
        if (opts.format == "json-lines")
          std::cout << json{{"derivation", line}, {"log_prob", lp}}.dump() << "\n";
        else
          std::cout << line << "\t" << format_prob(std::exp(lp)) << "\n";
      } else if (opts.format == "json-lines") {
        std::cout << json{{"derivation", line}}.dump() << "\n";
      } else {
        std::cout << line << "\n";
      }
    }
    if (p) {
      if (opts.format == "json-lines")
        std::cout << json{{"total_mass", mass}}.dump() << "\n";
      else
        std::cout << "total mass " << format_prob(mass) << "\n";
    }
  });

  // ---- sentprob ----
  auto* sp_cmd = app.add_subcommand("sentprob", "total probability of a sentence");
  std::string sp_grammar, sp_params, sp_sentence;
  SearchBounds sp_bounds;
  sp_cmd->add_option("-g,--grammar", sp_grammar)->required();
  sp_cmd->add_option("-p,--params", sp_params)->required();
  sp_cmd->add_option("-s,--sentence", sp_sentence, "space-separated tokens")->required();
  sp_cmd->add_option("--max-uses", sp_bounds.max_tree_uses)->required();
  sp_cmd->callback([&]() {
    Grammar g = load_grammar(sp_grammar);
    LoadedModel m = load_model(sp_params);
    if (!m.params) throw std::runtime_error("sentprob needs plain parameters");
    std::cout << format_prob(
                     sentence_probability(*m.params, g, split_tokens(sp_sentence), sp_bounds))
              << "\n";
  });

  // ---- nbest ----
  auto* nb_cmd = app.add_subcommand("nbest", "top-k derivations of a sentence");
  std::string nb_grammar, nb_params, nb_sentence;
  SearchBounds nb_bounds;
  int nb_k = 1;
  nb_cmd->add_option("-g,--grammar", nb_grammar)->required();
  nb_cmd->add_option("-p,--params", nb_params)->required();
  nb_cmd->add_option("-s,--sentence", nb_sentence)->required();
  nb_cmd->add_option("-k", nb_k)->required();
  nb_cmd->add_option("--max-uses", nb_bounds.max_tree_uses)->required();
  nb_cmd->add_option("--format", opts.format)->check(CLI::IsMember({"text", "json-lines"}));
  nb_cmd->callback([&]() {
    Grammar g = load_grammar(nb_grammar);
    LoadedModel m = load_model(nb_params);
    if (!m.params) throw std::runtime_error("nbest needs plain parameters");
    auto ranked = nbest(*m.params, g, split_tokens(nb_sentence), nb_k, nb_bounds);
    for (size_t i = 0; i < ranked.size(); ++i) {
      if (opts.format == "json-lines")
        std::cout << json{{"rank", i + 1},
                          {"log_prob", ranked[i].log_prob},
                          {"derivation", render_derivation(ranked[i].derivation)}}
                         .dump()
                  << "\n";
      else
        std::cout << (i + 1) << "\t" << format_prob(std::exp(ranked[i].log_prob)) << "\t"
                  << render_derivation(ranked[i].derivation) << "\n";
    }
  });

  // ---- lift ----
  auto* lift_cmd = app.add_subcommand("lift", "lift parameters one level up");
  std::string l_grammar, l_params, l_out;
  lift_cmd->add_option("-g,--grammar", l_grammar)->required();
  lift_cmd->add_option("-p,--params", l_params)->required();
  lift_cmd->add_option("-o,--out", l_out)->required();
  lift_cmd->callback([&]() {
    Grammar g = load_grammar(l_grammar);
    LoadedModel m = load_model(l_params);
    if (!m.params) throw std::runtime_error("lift needs plain parameters");
    AnyParams out;
    if (auto* p1 = std::get_if<Slg1Params>(&*m.params))
      out = lift(*p1, g);
    else if (auto* p2 = std::get_if<Slg2Params>(&*m.params))
      out = lift(*p2);
    else
      throw std::runtime_error("lift applies to level-1 or level-2 parameters");
    save_params_file(l_out, out);
    std::cerr << "wrote " << l_out << "\n";
  });

  // ---- smooth ----
  auto* sm_cmd = app.add_subcommand("smooth", "build a smoothed backoff model");
  std::string sm_grammar, sm_corpus, sm_primary, sm_config, sm_out, sm_order;
  int sm_level = 1;
  double sm_la = -1, sm_lf = -1, sm_ll = -1;
  sm_cmd->add_option("-g,--grammar", sm_grammar)->required();
  sm_cmd->add_option("-c,--corpus", sm_corpus)->required();
  sm_cmd->add_option("--level", sm_level, "primary level (1, 2 or 3)")->required()->check(CLI::Range(1, 3));
  sm_cmd->add_option("-p,--primary", sm_primary,
                     "primary parameter file (default: estimate from the corpus)");
  sm_cmd->add_option("--config", sm_config, "backoff config file");
  sm_cmd->add_option("--lambda-anchor", sm_la)->check(CLI::Range(0.0, 1.0));
  sm_cmd->add_option("--lambda-family", sm_lf)->check(CLI::Range(0.0, 1.0));
  sm_cmd->add_option("--lambda-level", sm_ll)->check(CLI::Range(0.0, 1.0));
  sm_cmd->add_option("--order", sm_order, "comma list of anchor,family,level");
  sm_cmd->add_option("-o,--out", sm_out)->required();
  sm_cmd->callback([&]() {
    Grammar g = load_grammar(sm_grammar);
    auto corpus = load_corpus(sm_corpus);
    BackoffConfig config;
    if (!sm_config.empty()) config = BackoffConfig::parse(read_text_file(sm_config));
    if (sm_la >= 0) config.lambda_anchor = sm_la;
    if (sm_lf >= 0) config.lambda_family = sm_lf;
    if (sm_ll >= 0) config.lambda_level = sm_ll;
    if (!sm_order.empty()) {
      BackoffConfig tmp = BackoffConfig::parse("order = " + sm_order + "\n");
      config.order = tmp.order;
    }
    AnyParams primary = sm_primary.empty()
                            ? estimate(g, corpus, sm_level)
                            : *load_model(sm_primary).params;
    if (level_of(primary) != sm_level)
      throw std::runtime_error("primary parameter level does not match --level");
    SmoothedModel m = build_smoothed(primary, corpus, g, config);
    write_text_file(sm_out, render_smoothed(m));
    std::cerr << "wrote " << sm_out << "\n";
  });

  // ---- fragments ----
  auto* fr_cmd = app.add_subcommand("fragments", "extract DOP fragments from derived trees");
  std::string fr_corpus, fr_out;
  FragmentExtractionOptions fr_opt;
  fr_cmd->add_option("-c,--corpus", fr_corpus, "derived-tree corpus, one tree per line")
      ->required();
  fr_cmd->add_option("--max-depth", fr_opt.max_depth, "0 = unbounded");
  fr_cmd->add_option("--max-fragments", fr_opt.max_fragments_per_tree);
  fr_cmd->add_option("-o,--out", fr_out, "write counts (default stdout)");
  fr_cmd->callback([&]() {
    auto trees = parse_phrase_tree_corpus(read_text_file(fr_corpus));
    auto counts = extract_fragments(trees, fr_opt);
    std::ostringstream os;
    for (const auto& [key, fc] : counts) os << fc.second << "\t" << key << "\n";
    if (fr_out.empty())
      std::cout << os.str();
    else {
      write_text_file(fr_out, os.str());
      std::cerr << "wrote " << fr_out << "\n";
    }
  });

  // ---- dopscore ----
  auto* dop_cmd = app.add_subcommand("dopscore", "tree-substitution score of derived trees");
  std::string dop_corpus, dop_trees;
  FragmentExtractionOptions dop_opt;
  bool dop_rational = false;
  dop_cmd->add_option("-c,--corpus", dop_corpus, "training derived-tree corpus")->required();
  dop_cmd->add_option("-t,--trees", dop_trees, "trees to score, one per line")->required();
  dop_cmd->add_option("--max-depth", dop_opt.max_depth, "0 = unbounded");
  dop_cmd->add_flag("--rational", dop_rational, "exact rational arithmetic");
  dop_cmd->callback([&]() {
    auto training = parse_phrase_tree_corpus(read_text_file(dop_corpus));
    auto targets = parse_phrase_tree_corpus(read_text_file(dop_trees));
    if (dop_rational) {
      Slg4Rational p = estimate_dop_exact(training, dop_opt);
      for (const auto& t : targets)
        std::cout << score_derived_tree_dop_exact(p, t) << "\n";
    } else {
      Slg4Params p = estimate_dop(training, dop_opt);
      for (const auto& t : targets) std::cout << format_prob(score_derived_tree_dop(p, t)) << "\n";
    }
  });

  // ---- chisq ----
  auto* chi_cmd = app.add_subcommand("chisq", "Pearson chi-square independence test");
  std::string chi_table, chi_file;
  bool chi_yates = false;
  chi_cmd->add_option("--table", chi_table, "inline counts, e.g. \"10,20;30,40\"");
  chi_cmd->add_option("-f,--file", chi_file, "CSV table file");
  chi_cmd->add_flag("--yates", chi_yates, "continuity correction");
  chi_cmd->callback([&]() {
    if (chi_table.empty() == chi_file.empty())
      throw CLI::ValidationError("chisq", "give exactly one of --table or --file");
    ContingencyTable t =
        chi_table.empty() ? parse_table_csv(read_text_file(chi_file)) : parse_table_arg(chi_table);
    ChiSquareResult r = chi_square(t, chi_yates);
    std::cout << "statistic " << format_prob(r.statistic) << "\ndf " << r.df << "\np "
              << format_prob(r.p_value) << "\n";
  });

  // ---- deptable ----
  auto* dt_cmd = app.add_subcommand("deptable", "cross-tabulate two derivational choices");
  std::string dt_grammar, dt_corpus, dt_row, dt_col, dt_classify = "tree";
  bool dt_chisq = false, dt_csv = false;
  dt_cmd->add_option("-g,--grammar", dt_grammar)->required();
  dt_cmd->add_option("-c,--corpus", dt_corpus)->required();
  dt_cmd->add_option("--row", dt_row, "site selector, e.g. tree:alpha1@1")->required();
  dt_cmd->add_option("--col", dt_col, "site selector, e.g. tree:alpha1@2.2")->required();
  dt_cmd->add_option("--classify", dt_classify)
      ->check(CLI::IsMember({"tree", "family", "template"}));
  dt_cmd->add_flag("--chisq", dt_chisq, "also run the independence test");
  dt_cmd->add_flag("--csv", dt_csv, "emit CSV instead of aligned text");
  dt_cmd->callback([&]() {
    Grammar g = load_grammar(dt_grammar);
    auto corpus = load_corpus(dt_corpus);
    OutcomeClassifier cls = dt_classify == "tree"      ? OutcomeClassifier::Tree
                            : dt_classify == "family" ? OutcomeClassifier::Family
                                                      : OutcomeClassifier::Template;
    ContingencyTable t = dependency_table(g, corpus, SiteSelector::parse(dt_row),
                                          SiteSelector::parse(dt_col), cls);
    std::cout << (dt_csv ? t.csv() : t.str());
    if (dt_chisq) {
      ChiSquareResult r = chi_square(t);
      std::cout << "statistic " << format_prob(r.statistic) << "\ndf " << r.df << "\np "
                << format_prob(r.p_value) << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0, usage errors exit 2
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error&) {
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
