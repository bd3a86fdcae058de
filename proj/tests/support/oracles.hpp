#pragma once

// Independent reference implementations used as test oracles. These work on
// raw edge lists and transaction scans only; they never touch the memoized
// closures or posting lists of the code under test.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xomine/transactions.hpp"

namespace oracle {

using Edge = std::pair<std::string, std::string>;  // (child, parent)

// Breadth-first transitive closure over a plain edge list.
inline std::set<std::string> bfs_ancestors(const std::vector<Edge>& edges, const std::string& start) {
  std::map<std::string, std::vector<std::string>> up;
  for (const auto& [c, p] : edges) up[c].push_back(p);
  std::set<std::string> seen;
  std::vector<std::string> queue{start};
  while (!queue.empty()) {
    std::string v = queue.back();
    queue.pop_back();
    for (const auto& p : up[v]) {
      if (p == start || seen.count(p)) continue;
      seen.insert(p);
      queue.push_back(p);
    }
  }
  return seen;
}

inline std::set<std::string> bfs_descendants(const std::vector<Edge>& edges, const std::string& start) {
  std::vector<Edge> reversed;
  reversed.reserve(edges.size());
  for (const auto& [c, p] : edges) reversed.emplace_back(p, c);
  return bfs_ancestors(reversed, start);
}

struct PairCounts {
  std::string x;  // term id from category a
  std::string y;  // term id from category b
  std::uint32_t n_x = 0;
  std::uint32_t n_y = 0;
  std::uint32_t n_xy = 0;
  std::uint32_t n_cocat = 0;

  auto tie() const { return std::tie(x, y, n_x, n_y, n_xy, n_cocat); }
  bool operator==(const PairCounts& o) const { return tie() == o.tie(); }
  bool operator<(const PairCounts& o) const { return tie() < o.tie(); }
};

// Exhaustive double-loop enumeration of cross-category pairs meeting
// min_support, with all counts recomputed by linear transaction scans.
inline std::vector<PairCounts> brute_force_pairs(const xomine::TransactionSet& ts,
                                                 std::size_t cat_a, std::size_t cat_b,
                                                 double min_support) {
  std::set<xomine::TermIndex> terms_a, terms_b;
  std::vector<const xomine::Transaction*> cocat;
  for (const auto& tx : ts.transactions()) {
    if (!tx.has_category(cat_a) || !tx.has_category(cat_b)) continue;
    cocat.push_back(&tx);
    terms_a.insert(tx.terms[cat_a].begin(), tx.terms[cat_a].end());
    terms_b.insert(tx.terms[cat_b].begin(), tx.terms[cat_b].end());
  }
  std::vector<PairCounts> out;
  for (auto a : terms_a) {
    for (auto b : terms_b) {
      PairCounts c;
      c.x = ts.graph(cat_a).term_id(a);
      c.y = ts.graph(cat_b).term_id(b);
      c.n_cocat = static_cast<std::uint32_t>(cocat.size());
      for (const auto* tx : cocat) {
        bool has_a = std::find(tx->terms[cat_a].begin(), tx->terms[cat_a].end(), a) !=
                     tx->terms[cat_a].end();
        bool has_b = std::find(tx->terms[cat_b].begin(), tx->terms[cat_b].end(), b) !=
                     tx->terms[cat_b].end();
        if (has_a) ++c.n_x;
        if (has_b) ++c.n_y;
        if (has_a && has_b) ++c.n_xy;
      }
      if (c.n_xy >= 1 && static_cast<double>(c.n_xy) / c.n_cocat >= min_support) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Deterministic bounded draw; mirrors nothing in the library on purpose
// (plain modulo, bias irrelevant for test data).
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace oracle
