#ifndef SLG_MODELS_HPP
#define SLG_MODELS_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "slg/derivation.hpp"
#include "slg/grammar.hpp"

namespace slg {

// Conditional outcome distribution. Probabilities are stored linear-space;
// well-formedness (sum to 1 within 1e-9) is checked, never assumed.
template <class Outcome>
struct Dist {
  std::map<Outcome, double> p;

  double prob(const Outcome& o) const {
    auto it = p.find(o);
    return it == p.end() ? 0.0 : it->second;
  }
  double total() const {
    double s = 0;
    for (const auto& [o, v] : p) s += v;
    return s;
  }
};

inline constexpr double kSumTolerance = 1e-9;

// Level 1: context-free frequencies, one distribution per nonterminal.
struct Slg1Params {
  std::map<std::string, Dist<std::string>> sub;  // label -> initial trees
  std::map<std::string, Dist<std::string>> adj;  // label -> auxiliaries + STOP
};

struct Slg2Key {
  std::string host;
  NodeAddress addr;
  auto operator<=>(const Slg2Key&) const = default;
  std::string str() const { return host + "@" + addr.str(); }
};

// Level 2: node-dependent frequencies, one distribution per (host tree,
// address) site, plus the start-symbol root choice.
struct Slg2Params {
  std::map<Slg2Key, Dist<std::string>> sub;
  std::map<Slg2Key, Dist<std::string>> adj;
  Dist<std::string> root;
};

// Level 3: locally-dependent frequencies over whole-tree expansions.
// Distributions are extensional over observed meta-productions; mass for
// unseen expansions is the smoothing module's business.
struct Slg3Params {
  std::map<std::string, Dist<MetaProduction>> expand;
  Dist<std::string> root;
};

// The lift of a level-2 model into level 3: meta-productions are scored on
// demand as the product of their per-site factors (the support is
// infinite, so no extensional table exists).
struct LiftedSlg3 {
  Slg2Params base;
};

// Level 4 (DOP): a stochastic tree-substitution grammar over arbitrary
// derived-tree fragments, normalized per root label.
struct Fragment {
  TreeNode body;  // open substitution sites mark the cut points
  bool operator==(const Fragment&) const = default;
};

struct Slg4Params {
  // Keyed by canonical rendering; value carries the parsed fragment.
  std::map<std::string, std::pair<Fragment, double>> fragments;
};

int fragment_depth(const TreeNode& body);
std::string fragment_key(const Fragment& f);

// ---- well-formedness ----

std::vector<std::string> check_well_formed(const Slg1Params& p, const Grammar& g);
std::vector<std::string> check_well_formed(const Slg2Params& p, const Grammar& g);
std::vector<std::string> check_well_formed(const Slg3Params& p, const Grammar& g);
std::vector<std::string> check_well_formed(const Slg4Params& p);

// ---- scoring ----
// Log probability of a valid complete derivation: the sum of log factors
// over its event list. A context absent from the model raises
// MissingContextError; a zero-probability outcome yields -inf.

double score_derivation(const Slg1Params& p, const Grammar& g, const DerivationTree& d);
double score_derivation(const Slg2Params& p, const Grammar& g, const DerivationTree& d);
double score_derivation(const Slg3Params& p, const Grammar& g, const DerivationTree& d);
double score_derivation(const LiftedSlg3& p, const Grammar& g, const DerivationTree& d);

double site_event_log_prob(const Slg1Params& p, const SiteEvent& e);
double site_event_log_prob(const Slg2Params& p, const SiteEvent& e);
double expansion_log_prob(const LiftedSlg3& p, const Grammar& g, const std::string& mother,
                          const MetaProduction& mp);

// DOP score of a complete derived tree: total probability over all
// tree-substitution derivations, by the bottom-up recursion
// q(node) = sum over fragments matching at node of P(f) * prod q(sites).
double score_derived_tree_dop(const Slg4Params& p, const TreeNode& t);

// ---- lift ----

// Copies each per-label distribution onto every site carrying that label.
// The outcome set is restricted to label-compatible trees; restriction must
// not drop mass (asserted) so no renormalization happens.
Slg2Params lift(const Slg1Params& p, const Grammar& g);
LiftedSlg3 lift(const Slg2Params& p);

// ---- generic parameter carrier for I/O and the CLI ----

using AnyParams = std::variant<Slg1Params, Slg2Params, Slg3Params, LiftedSlg3, Slg4Params>;

int level_of(const AnyParams& p);
std::vector<std::string> check_well_formed(const AnyParams& p, const Grammar& g);
double score_derivation(const AnyParams& p, const Grammar& g, const DerivationTree& d);

}  // namespace slg

#endif  // SLG_MODELS_HPP
