#ifndef SLG_SMOOTHING_HPP
#define SLG_SMOOTHING_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slg/estimation.hpp"
#include "slg/models.hpp"

namespace slg {

// Three orthogonal backoff techniques: anchored tree -> unanchored template
// (anchor), tree -> lexical-rule family (family), and level i -> level i-1
// (level). They combine by linear interpolation along a configurable chain.
struct BackoffConfig {
  enum class Technique { Anchor, Family, Level };

  double lambda_anchor = 0.8;
  double lambda_family = 0.8;
  double lambda_level = 0.9;
  std::vector<Technique> order = {Technique::Anchor, Technique::Family,
                                  Technique::Level};

  double lambda(Technique t) const {
    switch (t) {
      case Technique::Anchor:
        return lambda_anchor;
      case Technique::Family:
        return lambda_family;
      default:
        return lambda_level;
    }
  }
  // Throws std::invalid_argument on out-of-range lambdas or a bad order.
  void validate() const;

  static Technique parse_technique(const std::string& s);
  static std::string technique_name(Technique t);
  std::string order_str() const;
  // Config file: "key = value" lines for the lambdas and the chain order.
  static BackoffConfig parse(const std::string& text);
  std::string str() const;
};

// All component models of a smoothed level-i scorer. Class-pooled
// components live over class ids (template or family) in both contexts and
// outcomes; the grammar maps names to classes at query time.
struct SmoothedModel {
  int level = 1;
  BackoffConfig config;
  Slg1Params a1, t1, f1;  // anchored / template-pooled / family-pooled, level 1
  Slg2Params a2, t2, f2;  // populated when level >= 2
  Slg3Params a3, t3, f3;  // populated when level == 3
};

// Estimates every component of the chain from the corpus (the primary
// slot takes `primary` as given) and validates that the terminal fallback,
// the level-1 template model, covers the grammar's site labels. Throws
// std::invalid_argument on a coverage gap.
SmoothedModel build_smoothed(const AnyParams& primary,
                             const std::vector<DerivationTree>& corpus, const Grammar& g,
                             const BackoffConfig& config);

// Query surface. Every probability is a full-chain interpolation; contexts
// covered by the terminal fallback never raise MissingContextError.
class SmoothedScorer {
 public:
  SmoothedScorer(const SmoothedModel& m, const Grammar& g);
  // The class views point into this object's own maps.
  SmoothedScorer(const SmoothedScorer&) = delete;
  SmoothedScorer& operator=(const SmoothedScorer&) = delete;

  // Level-1 chain: P(outcome | site label, op).
  double l1_prob(const std::string& label, OpKind op, const std::string& outcome) const;
  // Level-2 chain (model level >= 2): P(outcome | host tree, address, op).
  double site_prob(const std::string& host, const NodeAddress& addr, OpKind op,
                   const std::string& outcome) const;
  // P(root tree | start symbol) at the model's level.
  double root_prob(const std::string& tree) const;
  // Level-3 chain (model level == 3): P(meta-production | mother).
  double expansion_prob(const std::string& mother, const MetaProduction& mp) const;

  // Chain probability of one extracted event at the model's primary level.
  double event_prob(const SiteEvent& e) const;

  double score_derivation(const DerivationTree& d) const;

  const SmoothedModel& model() const { return model_; }
  const Grammar& grammar() const { return *g_; }

 private:
  struct Stage {
    std::optional<double> p;
    double lambda = 1.0;  // lambda of this stage's own technique
  };
  static double eval_chain(const std::vector<Stage>& stages, const std::string& what);

  std::string template_of(const std::string& tree) const;
  std::string family_of(const std::string& tree) const;

  // Pooled-stage machinery: restricted-and-renormalized class distribution
  // with class mass divided uniformly over realizable members.
  struct ClassView {
    const std::map<std::string, std::string>* of;                       // tree -> class
    std::map<std::pair<std::string, std::string>, int> members_init;    // (label, class) -> n
    std::map<std::pair<std::string, std::string>, int> members_aux;
  };
  int members(const ClassView& view, const std::string& label, OpKind op,
              const std::string& cls) const;
  std::optional<double> pooled_site_value(const ClassView& view,
                                          const Dist<std::string>* dist,
                                          const std::string& site_label, OpKind op,
                                          const std::string& outcome) const;
  std::optional<double> pooled_root_value(const ClassView& view,
                                          const Dist<std::string>& dist,
                                          const std::string& outcome) const;
  std::optional<double> pooled_expansion_value(const ClassView& view, const Slg3Params& pooled,
                                               const std::string& mother,
                                               const MetaProduction& mp) const;

  double l1_chain(const std::string& label, OpKind op, const std::string& outcome) const;
  double l2_chain(const std::string& host, const NodeAddress& addr,
                  const std::string& label, OpKind op, const std::string& outcome) const;
  double factored_expansion_prob(const std::string& mother, const MetaProduction& mp) const;

  SmoothedModel model_;
  const Grammar* g_;
  std::map<std::string, std::string> template_map_, family_map_;
  ClassView template_view_, family_view_;
};

// Smoothed-model file: a "smoothed level <i>" header, the config, then one
// "begin <component> <level>" ... "end" section per component in the
// parameter-line syntax (pooled sections use class ids as names).
std::string render_smoothed(const SmoothedModel& m);
SmoothedModel parse_smoothed(const std::string& text);

bool is_smoothed_file(const std::string& text);

}  // namespace slg

#endif  // SLG_SMOOTHING_HPP
