#include "xomine/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "xomine/errors.hpp"
#include "xomine/metrics.hpp"

namespace xomine {

namespace {

// Unbiased bounded draw from the raw mt19937_64 stream; avoids
// std::uniform_int_distribution so sequences match across standard
// library implementations.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

}  // namespace

NicFilterResult nic_filter(const TransactionSet& ts, double threshold) {
  if (!ts.generalized()) throw std::invalid_argument("nic_filter: transaction set must be generalized");
  if (threshold < 0 || threshold > 1)
    throw std::invalid_argument("nic_filter: threshold must lie in [0,1]");

  std::vector<RemovedTerm> removed;
  std::vector<std::set<TermIndex>> drop(ts.category_count());
  for (std::size_t c = 0; c < ts.category_count(); ++c) {
    for (const TermStats& s : term_stats(ts, c)) {
      if (s.n_ic < threshold) {
        drop[c].insert(ts.graph(c).require_term(s.term));
        removed.push_back({ts.category(c), s.term, s.name, s.gene_count_closed, s.probability, s.n_ic});
      }
    }
  }

  std::vector<Transaction> out;
  out.reserve(ts.size());
  for (const auto& tx : ts.transactions()) {
    Transaction t;
    t.gene = tx.gene;
    t.terms.resize(ts.category_count());
    for (std::size_t c = 0; c < ts.category_count(); ++c) {
      for (TermIndex term : tx.terms[c])
        if (!drop[c].count(term)) t.terms[c].push_back(term);
    }
    out.push_back(std::move(t));
  }
  return {TransactionSet(ts.graphs(), std::move(out), true), std::move(removed)};
}

double percent_to_nic(double percent, std::size_t g_total) {
  if (percent <= 0 || percent > 100)
    throw std::invalid_argument("percent threshold must lie in (0,100]");
  return n_ic(percent / 100.0, g_total);
}

SyntheticConfig make_synthetic_config(const TransactionSet& ts, std::uint64_t seed, PoolKind kind) {
  SyntheticConfig cfg;
  cfg.seed = seed;
  cfg.pools.resize(ts.category_count());
  for (std::size_t c = 0; c < ts.category_count(); ++c) {
    auto& pool = cfg.pools[c];
    if (kind == PoolKind::occurrence) {
      for (const auto& tx : ts.transactions())
        pool.insert(pool.end(), tx.terms[c].begin(), tx.terms[c].end());
    } else {
      std::set<TermIndex> distinct;
      for (const auto& tx : ts.transactions()) distinct.insert(tx.terms[c].begin(), tx.terms[c].end());
      pool.assign(distinct.begin(), distinct.end());
    }
    std::sort(pool.begin(), pool.end());
  }
  return cfg;
}

TransactionSet generate_synthetic(const TransactionSet& ts, const SyntheticConfig& cfg) {
  if (!ts.generalized())
    throw std::invalid_argument("generate_synthetic: transaction set must be generalized");
  if (cfg.pools.size() != ts.category_count())
    throw std::invalid_argument("generate_synthetic: one pool per category required");
  for (std::size_t c = 0; c < ts.category_count(); ++c) {
    bool needed = std::any_of(ts.transactions().begin(), ts.transactions().end(),
                              [&](const Transaction& tx) { return !tx.terms[c].empty(); });
    if (needed && cfg.pools[c].empty())
      throw std::invalid_argument("generate_synthetic: empty pool for category '" + ts.category(c) + "'");
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<Transaction> out;
  out.reserve(ts.size());
  for (const auto& tx : ts.transactions()) {
    Transaction synth;
    synth.gene = tx.gene;
    synth.terms.resize(ts.category_count());
    for (std::size_t c = 0; c < ts.category_count(); ++c) {
      const std::size_t k = tx.terms[c].size();
      if (k == 0) continue;
      const auto& pool = cfg.pools[c];
      std::set<TermIndex> slot;
      std::size_t attempts = 0;
      const std::size_t cap = 50 * (k + 1);
      while (slot.size() < k && attempts < cap) {
        slot.insert(pool[bounded_draw(rng, pool.size())]);
        ++attempts;
      }
      synth.terms[c].assign(slot.begin(), slot.end());
    }
    out.push_back(std::move(synth));
  }
  return TransactionSet(ts.graphs(), std::move(out), true);
}

ThresholdReport select_ncomi_threshold(const std::vector<MinedRule>& real_rules,
                                       const std::vector<MinedRule>& null_rules,
                                       double target_fpr) {
  if (null_rules.empty()) throw DataError("cannot calibrate N_COMI threshold: empty null rule set");
  if (!(target_fpr > 0 && target_fpr <= 1))
    throw std::invalid_argument("target FPR must lie in (0,1]");

  ThresholdReport report;
  report.target_fpr = target_fpr;
  report.null_scores.reserve(null_rules.size());
  for (const auto& r : null_rules) report.null_scores.push_back(r.metrics.n_comi);
  std::sort(report.null_scores.begin(), report.null_scores.end());

  const auto& scores = report.null_scores;
  const double n = static_cast<double>(scores.size());
  report.threshold = std::nextafter(scores.back(), std::numeric_limits<double>::infinity());
  report.achieved_fpr = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i > 0 && scores[i] == scores[i - 1]) continue;
    double fraction_at_or_above = static_cast<double>(scores.size() - i) / n;
    if (fraction_at_or_above <= target_fpr) {
      report.threshold = scores[i];
      report.achieved_fpr = fraction_at_or_above;
      break;
    }
  }

  report.real_total = real_rules.size();
  for (const auto& r : real_rules)
    if (r.metrics.n_comi >= report.threshold) ++report.real_surviving;
  return report;
}

std::vector<MinedRule> apply_ncomi_filter(std::vector<MinedRule> rules, double threshold) {
  std::erase_if(rules, [&](const MinedRule& r) { return r.metrics.n_comi < threshold; });
  return rules;
}

}  // namespace xomine
