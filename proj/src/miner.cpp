#include "xomine/miner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "xomine/errors.hpp"

namespace xomine {

namespace {

struct Posting {
  TermIndex term;
  std::vector<std::uint32_t> rows;  // positions within the co-category subset, ascending
};

// Postings for every term of one category over the co-category rows, ordered
// by term index.
std::vector<Posting> build_postings(const TransactionSet& ts, std::size_t cat,
                                    const std::vector<std::uint32_t>& rows) {
  std::map<TermIndex, std::vector<std::uint32_t>> lists;
  for (std::uint32_t r = 0; r < rows.size(); ++r)
    for (TermIndex t : ts.transactions()[rows[r]].terms[cat]) lists[t].push_back(r);
  std::vector<Posting> out;
  out.reserve(lists.size());
  for (auto& [t, l] : lists) out.push_back({t, std::move(l)});
  return out;
}

std::uint32_t intersection_size(const std::vector<std::uint32_t>& a,
                                const std::vector<std::uint32_t>& b) {
  std::uint32_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

bool meets_support(std::uint32_t count, std::uint32_t n_cocat, double min_support) {
  return count >= 1 && static_cast<double>(count) / n_cocat >= min_support;
}

double rule_key(const MinedRule& r, std::string_view key) {
  if (key == "iric") return r.metrics.iric;
  if (key == "n_comi") return r.metrics.n_comi;
  if (key == "mi") return r.metrics.mi;
  if (key == "info_gain") return r.metrics.info_gain;
  if (key == "support") return r.metrics.support;
  if (key == "confidence") return r.metrics.confidence;
  throw std::invalid_argument("unknown rank key '" + std::string(key) + "'");
}

}  // namespace

bool is_rank_key(std::string_view key) {
  for (const char* k : kRankKeys)
    if (key == k) return true;
  return false;
}

std::vector<MinedRule> mine(const TransactionSet& ts, const MiningConfig& cfg, unsigned threads) {
  if (!ts.generalized()) throw std::invalid_argument("mine: transaction set must be generalized");
  if (cfg.min_support < 0 || cfg.min_support > 1)
    throw std::invalid_argument("mine: min_support must lie in [0,1]");
  cfg.weights.validate();
  const std::size_t ca = ts.require_category(cfg.category_x);
  const std::size_t cb = ts.require_category(cfg.category_y);
  if (ca == cb) throw DataError("mining requires two distinct categories");

  const auto rows = cocategory_rows(ts, ca, cb);
  if (rows.empty()) throw DataError("no co-annotated transactions for categories '" +
                                    cfg.category_x + "' and '" + cfg.category_y + "'");
  const auto n_cocat = static_cast<std::uint32_t>(rows.size());

  auto postings_a = build_postings(ts, ca, rows);
  auto postings_b = build_postings(ts, cb, rows);
  auto frequent = [&](std::vector<Posting>& ps) {
    std::erase_if(ps, [&](const Posting& p) {
      return !meets_support(static_cast<std::uint32_t>(p.rows.size()), n_cocat, cfg.min_support);
    });
  };
  frequent(postings_a);
  frequent(postings_b);

  // Pair counts via posting-list intersection, partitioned over the
  // antecedent-side terms; per-slot results keep the output order
  // independent of the thread count.
  struct PairHit {
    std::size_t a;  // indices into postings_a / postings_b
    std::size_t b;
    std::uint32_t n_xy;
  };
  std::vector<std::vector<PairHit>> hits_per_a(postings_a.size());
  auto count_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < postings_b.size(); ++j) {
        std::uint32_t n_xy = intersection_size(postings_a[i].rows, postings_b[j].rows);
        if (meets_support(n_xy, n_cocat, cfg.min_support)) hits_per_a[i].push_back({i, j, n_xy});
      }
    }
  };
  if (threads <= 1 || postings_a.size() < 2) {
    count_range(0, postings_a.size());
  } else {
    unsigned n_workers = std::min<unsigned>(threads, static_cast<unsigned>(postings_a.size()));
    std::vector<std::thread> pool;
    std::size_t chunk = (postings_a.size() + n_workers - 1) / n_workers;
    for (unsigned w = 0; w < n_workers; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(postings_a.size(), begin + chunk);
      if (begin < end) pool.emplace_back(count_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // N_IC per participating term, probabilities over the full set |G|.
  const auto& graph_a = ts.graph(ca);
  const auto& graph_b = ts.graph(cb);
  auto term_nic = [&](std::size_t cat, TermIndex t) {
    return n_ic(term_probability(ts, cat, t), ts.size());
  };
  std::map<TermIndex, double> nic_a, nic_b;
  for (const auto& per_a : hits_per_a) {
    for (const auto& h : per_a) {
      TermIndex a = postings_a[h.a].term;
      TermIndex b = postings_b[h.b].term;
      if (!nic_a.count(a)) nic_a[a] = term_nic(ca, a);
      if (!nic_b.count(b)) nic_b[b] = term_nic(cb, b);
    }
  }

  std::vector<MinedRule> out;
  auto emit = [&](TermIndex ante, TermIndex cons, const OntologyGraph& ga, const OntologyGraph& gb,
                  double nic_ante, double nic_cons, std::uint32_t n_ante, std::uint32_t n_cons,
                  std::uint32_t n_xy) {
    MinedRule r;
    r.antecedent = ga.term_id(ante);
    r.consequent = gb.term_id(cons);
    r.antecedent_name = ga.term_name(ante);
    r.consequent_name = gb.term_name(cons);
    r.nic_antecedent = nic_ante;
    r.nic_consequent = nic_cons;
    r.counts = {r.antecedent, r.consequent, n_ante, n_cons, n_xy, n_cocat};
    r.metrics = evaluate_rule(r.counts, nic_ante, nic_cons, cfg.weights);
    out.push_back(std::move(r));
  };

  for (const auto& per_a : hits_per_a) {
    for (const auto& h : per_a) {
      const Posting& pa = postings_a[h.a];
      const Posting& pb = postings_b[h.b];
      const auto n_x = static_cast<std::uint32_t>(pa.rows.size());
      const auto n_y = static_cast<std::uint32_t>(pb.rows.size());
      const std::string& id_a = graph_a.term_id(pa.term);
      const std::string& id_b = graph_b.term_id(pb.term);
      bool forward = cfg.emit_both_directions || id_a <= id_b;
      if (forward)
        emit(pa.term, pb.term, graph_a, graph_b, nic_a[pa.term], nic_b[pb.term], n_x, n_y, h.n_xy);
      if (cfg.emit_both_directions || !forward)
        emit(pb.term, pa.term, graph_b, graph_a, nic_b[pb.term], nic_a[pa.term], n_y, n_x, h.n_xy);
    }
  }

  std::sort(out.begin(), out.end(), [](const MinedRule& a, const MinedRule& b) {
    return std::tie(a.antecedent, a.consequent) < std::tie(b.antecedent, b.consequent);
  });
  return out;
}

std::vector<MinedRule> rank_rules(std::vector<MinedRule> rules, std::string_view key) {
  if (!is_rank_key(key)) throw std::invalid_argument("unknown rank key '" + std::string(key) + "'");
  std::sort(rules.begin(), rules.end(), [&](const MinedRule& a, const MinedRule& b) {
    double ka = rule_key(a, key);
    double kb = rule_key(b, key);
    bool na = std::isnan(ka);
    bool nb = std::isnan(kb);
    if (na != nb) return nb;  // defined keys before undefined ones
    if (!na && ka != kb) return ka > kb;
    return std::tie(a.antecedent, a.consequent) < std::tie(b.antecedent, b.consequent);
  });
  for (std::size_t i = 0; i < rules.size(); ++i) rules[i].rank = static_cast<std::uint32_t>(i + 1);
  return rules;
}

RankingOverlap compare_rankings(const std::vector<MinedRule>& rules, std::string_view key_a,
                                std::string_view key_b, std::size_t k) {
  RankingOverlap o;
  o.key_a = std::string(key_a);
  o.key_b = std::string(key_b);
  o.k = std::min(k, rules.size());

  auto top = [&](std::string_view key) {
    auto ranked = rank_rules(rules, key);
    std::vector<std::pair<std::string, std::string>> ids;
    ids.reserve(o.k);
    for (std::size_t i = 0; i < o.k; ++i) ids.emplace_back(ranked[i].antecedent, ranked[i].consequent);
    return ids;
  };
  o.top_a = top(key_a);
  o.top_b = top(key_b);

  auto sorted_a = o.top_a;
  auto sorted_b = o.top_b;
  std::sort(sorted_a.begin(), sorted_a.end());
  std::sort(sorted_b.begin(), sorted_b.end());
  std::vector<std::pair<std::string, std::string>> common;
  std::set_intersection(sorted_a.begin(), sorted_a.end(), sorted_b.begin(), sorted_b.end(),
                        std::back_inserter(common));
  o.intersection_size = common.size();
  std::size_t union_size = sorted_a.size() + sorted_b.size() - common.size();
  o.jaccard = union_size == 0 ? 1.0 : static_cast<double>(common.size()) / union_size;
  return o;
}

}  // namespace xomine
