#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xomine/metrics.hpp"
#include "xomine/transactions.hpp"

namespace xomine {

struct MiningConfig {
  std::string category_x;  // antecedent-side category for the x -> y direction
  std::string category_y;
  double min_support = 0.001;  // relative to |COCategory|
  bool emit_both_directions = true;
  double nic_threshold = 0.0;  // echo of the upstream term filter; not applied here
  IricWeights weights;
};

struct MinedRule {
  std::string antecedent;
  std::string consequent;
  std::string antecedent_name;
  std::string consequent_name;
  double nic_antecedent = 0;
  double nic_consequent = 0;
  RuleCounts counts;  // counts.x is the antecedent side
  MetricValues metrics;
  std::uint32_t rank = 0;  // 1-based, assigned by rank_rules
};

// Enumerates every cross-category pair that co-occurs in >=1 co-category
// transaction and meets min_support, via per-term posting lists over the
// co-category subset. Candidate pairs are pruned with the Apriori property
// (both singletons must be frequent). Output is sorted by (antecedent,
// consequent) and is identical for any thread count.
std::vector<MinedRule> mine(const TransactionSet& ts, const MiningConfig& cfg,
                            unsigned threads = 1);

inline constexpr const char* kRankKeys[] = {"iric", "n_comi", "mi", "info_gain", "support", "confidence"};
bool is_rank_key(std::string_view key);

// Stable total order: key descending, ties by (antecedent, consequent)
// ascending; assigns rank 1..n. Rules with an undefined key (NaN) sort last.
std::vector<MinedRule> rank_rules(std::vector<MinedRule> rules, std::string_view key);

struct RankingOverlap {
  std::string key_a;
  std::string key_b;
  std::size_t k = 0;
  std::vector<std::pair<std::string, std::string>> top_a;  // (antecedent, consequent)
  std::vector<std::pair<std::string, std::string>> top_b;
  std::size_t intersection_size = 0;
  double jaccard = 0;  // 1.0 when both top-k sets are empty
};

// Top-k overlap between two ranking keys; k is clamped to |rules|.
RankingOverlap compare_rankings(const std::vector<MinedRule>& rules, std::string_view key_a,
                                std::string_view key_b, std::size_t k);

}  // namespace xomine
