#include "xomine/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "xomine/errors.hpp"

namespace xomine {

namespace {

void check_counts(const RuleCounts& c) {
  if (c.n_cocat < 1) throw std::invalid_argument("rule counts: n_cocat must be >= 1");
  if (c.n_xy > std::min(c.n_x, c.n_y) || std::max(c.n_x, c.n_y) > c.n_cocat)
    throw std::invalid_argument("rule counts violate n_xy <= min(n_x, n_y) <= n_cocat");
}

void require_generalized(const TransactionSet& ts) {
  if (!ts.generalized()) throw std::invalid_argument("transaction set must be generalized");
}

}  // namespace

void IricWeights::validate() const {
  if (alpha < 0 || beta < 0 || std::abs(alpha + beta - 1.0) > 1e-12)
    throw std::invalid_argument("iric weights must be nonnegative and sum to 1");
}

double term_probability(const TransactionSet& ts, std::size_t category, TermIndex t) {
  require_generalized(ts);
  std::uint32_t count = 0;
  for (const auto& tx : ts.transactions())
    if (tx.contains(category, t)) ++count;
  if (count == 0)
    throw DataError("term '" + ts.graph(category).term_id(t) + "' occurs in no transaction");
  return static_cast<double>(count) / static_cast<double>(ts.size());
}

double term_probability(const TransactionSet& ts, std::string_view term_id) {
  auto [cat, t] = ts.resolve_term(term_id);
  return term_probability(ts, cat, t);
}

double n_ic(double probability, std::size_t g_total) {
  if (g_total < 2) throw std::invalid_argument("n_ic: need at least 2 genes");
  const double floor = 1.0 / static_cast<double>(g_total);
  if (probability < floor - 1e-12 || probability > 1.0 + 1e-12)
    throw std::invalid_argument("n_ic: probability outside [1/|G|, 1]");
  double v = -std::log2(probability) / std::log2(static_cast<double>(g_total));
  return std::clamp(v, 0.0, 1.0);
}

std::vector<TermStats> term_stats(const TransactionSet& ts, std::size_t category) {
  require_generalized(ts);
  std::map<TermIndex, std::uint32_t> counts;
  for (const auto& tx : ts.transactions())
    for (TermIndex t : tx.terms[category]) ++counts[t];

  const auto& g = ts.graph(category);
  std::vector<TermStats> stats;
  stats.reserve(counts.size());
  for (const auto& [t, n] : counts) {
    TermStats s;
    s.term = g.term_id(t);
    s.name = g.term_name(t);
    s.gene_count_closed = n;
    s.probability = static_cast<double>(n) / static_cast<double>(ts.size());
    s.n_ic = n_ic(s.probability, ts.size());
    stats.push_back(std::move(s));
  }
  std::sort(stats.begin(), stats.end(),
            [](const TermStats& a, const TermStats& b) { return a.term < b.term; });
  return stats;
}

RuleCounts rule_counts(const TransactionSet& ts, std::string_view x, std::string_view y) {
  require_generalized(ts);
  auto [cx, tx] = ts.resolve_term(x);
  auto [cy, ty] = ts.resolve_term(y);
  if (cx == cy)
    throw DataError("terms '" + std::string(x) + "' and '" + std::string(y) +
                    "' belong to the same category '" + ts.category(cx) + "'");

  RuleCounts c;
  c.x = std::string(x);
  c.y = std::string(y);
  for (const auto& t : ts.transactions()) {
    bool in_a = t.has_category(cx);
    bool in_b = t.has_category(cy);
    if (!in_a || !in_b) continue;
    ++c.n_cocat;
    bool has_x = t.contains(cx, tx);
    bool has_y = t.contains(cy, ty);
    if (has_x) ++c.n_x;
    if (has_y) ++c.n_y;
    if (has_x && has_y) ++c.n_xy;
  }
  return c;
}

double n_comi(const RuleCounts& c) {
  check_counts(c);
  if (c.n_xy == 0) return 0.0;
  const double n = c.n_cocat;
  const double px = c.n_x / n;
  const double py = c.n_y / n;
  const double pxy = c.n_xy / n;
  if (px >= 1.0 || py >= 1.0) return 0.0;  // a term in every co-category transaction: denominator 0
  const double lx = std::log2(px);
  const double ly = std::log2(py);
  const double numerator = pxy * (std::log2(pxy) - (lx + ly));
  const double denominator = std::min(-px * lx, -py * ly);
  return numerator / denominator;
}

double mi(const RuleCounts& c) {
  check_counts(c);
  if (c.n_xy == 0) return 0.0;
  const double n = c.n_cocat;
  const double px = c.n_x / n;
  const double py = c.n_y / n;
  const double pxy = c.n_xy / n;
  return pxy * (std::log2(pxy) - (std::log2(px) + std::log2(py)));
}

double iric(double nic_x, double nic_y, double ncomi_value, const IricWeights& w) {
  w.validate();
  if (nic_x < 0 || nic_x > 1 || nic_y < 0 || nic_y > 1)
    throw std::invalid_argument("iric: N_IC values must lie in [0,1]");
  return (w.alpha * nic_x + w.beta * nic_y) * std::max(ncomi_value, 0.0);
}

std::optional<double> information_gain(const RuleCounts& c) {
  check_counts(c);
  if (c.n_xy == 0) return std::nullopt;
  const double n = c.n_cocat;
  return std::log2(c.n_xy / n) - (std::log2(c.n_x / n) + std::log2(c.n_y / n));
}

ClassicMeasures classic_measures(const RuleCounts& c) {
  check_counts(c);
  ClassicMeasures m;
  m.support = static_cast<double>(c.n_xy) / static_cast<double>(c.n_cocat);
  m.confidence = c.n_x == 0 ? 0.0 : static_cast<double>(c.n_xy) / static_cast<double>(c.n_x);
  return m;
}

MetricValues evaluate_rule(const RuleCounts& c, double nic_x, double nic_y, const IricWeights& w) {
  MetricValues v;
  v.n_comi = n_comi(c);
  v.mi = mi(c);
  v.iric = iric(nic_x, nic_y, v.n_comi, w);
  auto ig = information_gain(c);
  v.info_gain = ig ? *ig : std::numeric_limits<double>::quiet_NaN();
  auto cm = classic_measures(c);
  v.support = cm.support;
  v.confidence = cm.confidence;
  return v;
}

}  // namespace xomine
