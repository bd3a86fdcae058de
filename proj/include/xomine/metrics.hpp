#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xomine/transactions.hpp"

namespace xomine {

// Per-term statistics over a generalized transaction set. gene_count_closed
// is the number of genes whose generalized annotation set contains the term,
// which equals "annotated to the term or any descendant" by construction.
struct TermStats {
  std::string term;
  std::string name;
  std::uint32_t gene_count_closed = 0;
  double probability = 0;  // gene_count_closed / |G|
  double n_ic = 0;         // (-log2 probability) / log2 |G|, in [0,1]
};

// Transaction cardinalities of one cross-category rule x -> y, all counted
// over the co-category subset:
//   n_x     transactions containing x and >=1 term of y's category
//   n_y     transactions containing y and >=1 term of x's category
//   n_xy    transactions containing both x and y
//   n_cocat transactions containing >=1 term of each category
struct RuleCounts {
  std::string x;
  std::string y;
  std::uint32_t n_x = 0;
  std::uint32_t n_y = 0;
  std::uint32_t n_xy = 0;
  std::uint32_t n_cocat = 0;
};

struct IricWeights {
  double alpha = 0.5;
  double beta = 0.5;
  void validate() const;  // alpha, beta >= 0 and alpha + beta == 1 within 1e-12
};

// info_gain is NaN when undefined (n_xy == 0); such rules are excluded from
// information-gain rankings.
struct MetricValues {
  double n_comi = 0;
  double mi = 0;
  double iric = 0;
  double info_gain = 0;
  double support = 0;
  double confidence = 0;
};

struct ClassicMeasures {
  double support = 0;
  double confidence = 0;
};

// Fraction of genes whose generalized annotations contain the term.
// The set must be generalized, and the term must occur somewhere.
double term_probability(const TransactionSet& ts, std::size_t category, TermIndex t);
double term_probability(const TransactionSet& ts, std::string_view term_id);

// Normalized information content: (-log2 p) / log2 g_total, clamped to [0,1].
// Requires g_total >= 2 and 1/g_total <= p <= 1.
double n_ic(double probability, std::size_t g_total);

// Stats for every distinct term of one category, sorted by term id.
std::vector<TermStats> term_stats(const TransactionSet& ts, std::size_t category);

// Counts for one rule; x and y must come from different categories.
RuleCounts rule_counts(const TransactionSet& ts, std::string_view x, std::string_view y);

// Normalized cross-ontology mutual information over co-category
// probabilities. 0 when p_xy = 0 or the denominator vanishes (p_x or p_y in
// {0,1}); negative values (negative association) are preserved.
double n_comi(const RuleCounts& c);

// Plain rule mutual information p_xy * log2(p_xy / (p_x p_y)); 0 when p_xy = 0.
double mi(const RuleCounts& c);

// (alpha * nic_x + beta * nic_y) * max(ncomi, 0); result in [0,1].
double iric(double nic_x, double nic_y, double ncomi_value, const IricWeights& w);

// log2 of lift over co-category probabilities; empty when p_xy = 0.
std::optional<double> information_gain(const RuleCounts& c);

ClassicMeasures classic_measures(const RuleCounts& c);

// All rule metrics in one go, given the two terms' N_IC values.
MetricValues evaluate_rule(const RuleCounts& c, double nic_x, double nic_y, const IricWeights& w);

}  // namespace xomine
