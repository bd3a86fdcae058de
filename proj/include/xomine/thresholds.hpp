#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xomine/miner.hpp"
#include "xomine/transactions.hpp"

namespace xomine {

struct RemovedTerm {
  std::string category;
  std::string term;
  std::string name;
  std::uint32_t gene_count = 0;
  double probability = 0;
  double n_ic = 0;
};

struct NicFilterResult {
  TransactionSet set;
  std::vector<RemovedTerm> removed;  // sorted by (category, term)
};

// Deletes every term with N_IC strictly below the threshold from all
// transactions of a generalized set. Transactions left empty in a category
// remain in the set (they still count toward |G| and shrink COCategory).
NicFilterResult nic_filter(const TransactionSet& ts, double threshold);

// N_IC cutoff equivalent to "term annotated to at most `percent`% of genes".
double percent_to_nic(double percent, std::size_t g_total);

enum class PoolKind {
  occurrence,       // occurrence multiset: term frequencies preserved
  distinct_uniform  // each distinct term equally likely
};

// Per-category sampling pools plus the RNG seed for synthetic-null
// generation. Pools are sorted term-index lists.
struct SyntheticConfig {
  std::uint64_t seed = 0;
  std::vector<std::vector<TermIndex>> pools;
};

SyntheticConfig make_synthetic_config(const TransactionSet& ts, std::uint64_t seed,
                                      PoolKind kind = PoolKind::occurrence);

// Builds a null transaction set with the same number of transactions and the
// same per-transaction per-category set sizes, each slot filled by sampling
// with replacement from that category's pool. Duplicate draws within a slot
// are re-drawn; after 50*(k+1) attempts for a size-k slot the smaller set is
// kept. One sequential RNG stream; byte-identical output for a given seed.
TransactionSet generate_synthetic(const TransactionSet& ts, const SyntheticConfig& cfg);

struct ThresholdReport {
  double target_fpr = 0;
  double threshold = 0;
  std::vector<double> null_scores;  // sorted ascending
  double achieved_fpr = 0;          // <= target_fpr
  std::size_t real_total = 0;
  std::size_t real_surviving = 0;  // real rules with n_comi >= threshold
};

// Nearest-rank threshold: the smallest null N_COMI score v such that the
// fraction of null scores >= v is at most target_fpr. When even the largest
// null score fails, the threshold is nudged just above it (achieved FPR 0).
ThresholdReport select_ncomi_threshold(const std::vector<MinedRule>& real_rules,
                                       const std::vector<MinedRule>& null_rules,
                                       double target_fpr);

// Keeps rules with n_comi >= threshold, preserving order.
std::vector<MinedRule> apply_ncomi_filter(std::vector<MinedRule> rules, double threshold);

}  // namespace xomine
