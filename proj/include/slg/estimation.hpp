#ifndef SLG_ESTIMATION_HPP
#define SLG_ESTIMATION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slg/models.hpp"
#include "slg/parallel.hpp"

namespace slg {

// Event counts at one level. Counting is a commutative-monoid reduction:
// corpora may be partitioned, counted in parallel and merged in any order.
struct L1Counts {
  std::map<std::string, std::map<std::string, int64_t>> sub, adj;
  void merge(const L1Counts& other);
};

struct L2Counts {
  std::map<Slg2Key, std::map<std::string, int64_t>> sub, adj;
  std::map<std::string, int64_t> root;
  void merge(const L2Counts& other);
};

struct L3Counts {
  std::map<std::string, std::map<MetaProduction, int64_t>> expand;
  std::map<std::string, int64_t> root;
  void merge(const L3Counts& other);
};

L1Counts count_events_l1(const Grammar& g, const std::vector<DerivationTree>& corpus,
                         Exec exec = Exec::Serial);
L2Counts count_events_l2(const Grammar& g, const std::vector<DerivationTree>& corpus,
                         Exec exec = Exec::Serial);
L3Counts count_events_l3(const Grammar& g, const std::vector<DerivationTree>& corpus,
                         Exec exec = Exec::Serial);

Slg1Params normalize(const L1Counts& c);
Slg2Params normalize(const L2Counts& c);
Slg3Params normalize(const L3Counts& c);

// Relative-frequency estimation; validates every corpus entry and reports
// the first invalid one with its index. Contexts never observed are absent
// from the result.
AnyParams estimate(const Grammar& g, const std::vector<DerivationTree>& corpus, int level,
                   Exec exec = Exec::Serial);

// ---- DOP fragment extraction (level 4) ----

struct FragmentExtractionOptions {
  int max_depth = 4;                       // edge-height bound; <=0 means unbounded
  int64_t max_fragments_per_tree = 1000000;  // fail-fast guard
};

std::map<std::string, std::pair<Fragment, int64_t>> extract_fragments(
    const std::vector<TreeNode>& trees, const FragmentExtractionOptions& opt);

Slg4Params estimate_dop(const std::vector<TreeNode>& trees,
                        const FragmentExtractionOptions& opt);

// ---- sampling ----

// Draws one complete derivation from the model's generative process; the
// result is a pure function of the seed. Throws BudgetExceededError if the
// derivation would exceed max_nodes elementary-tree uses.
DerivationTree sample_derivation(const AnyParams& p, const Grammar& g, uint64_t seed,
                                 int max_nodes);

// n independent draws with per-index seeds derived from `seed`, so the
// result is identical whether sampled serially or in parallel. Draws that
// exceed max_nodes are retried with follow-up seeds up to a bounded number
// of attempts per slot.
std::vector<DerivationTree> sample_corpus(const AnyParams& p, const Grammar& g, int n,
                                          uint64_t seed, int max_nodes,
                                          Exec exec = Exec::Serial);

// Sum of score_derivation over the corpus; the parallel path computes
// per-entry scores into a vector and sums in index order, so it is
// bit-identical to the serial path.
double corpus_log_likelihood(const AnyParams& p, const Grammar& g,
                             const std::vector<DerivationTree>& corpus,
                             Exec exec = Exec::Serial);

uint64_t mix_seed(uint64_t seed, uint64_t index);

}  // namespace slg

#endif  // SLG_ESTIMATION_HPP
