#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xomine/obo.hpp"
#include "xomine/ontology.hpp"

namespace xomine {

// One gene's annotations, one sorted term-index set per category slot.
// Slots align with TransactionSet::category(i).
struct Transaction {
  std::string gene;
  std::vector<std::vector<TermIndex>> terms;

  bool has_category(std::size_t cat) const { return !terms[cat].empty(); }
  bool contains(std::size_t cat, TermIndex t) const;
};

// Immutable per-gene transaction table over a fixed list of ontology
// categories. Exactly one transaction per gene; transactions are sorted by
// gene id. |G| == size().
class TransactionSet {
 public:
  TransactionSet(std::vector<std::shared_ptr<const OntologyGraph>> graphs,
                 std::vector<Transaction> transactions, bool generalized);

  std::size_t size() const { return transactions_.size(); }  // |G|
  std::size_t category_count() const { return graphs_.size(); }
  const std::string& category(std::size_t i) const { return graphs_[i]->category(); }
  std::optional<std::size_t> find_category(std::string_view label) const;
  std::size_t require_category(std::string_view label) const;  // DataError
  const OntologyGraph& graph(std::size_t cat) const { return *graphs_[cat]; }
  std::shared_ptr<const OntologyGraph> graph_ptr(std::size_t cat) const { return graphs_[cat]; }
  const std::vector<std::shared_ptr<const OntologyGraph>>& graphs() const { return graphs_; }
  const std::vector<Transaction>& transactions() const { return transactions_; }
  bool generalized() const { return generalized_; }

  // Category owning the term id; DataError when the id is unknown everywhere
  // or ambiguous across categories.
  std::pair<std::size_t, TermIndex> resolve_term(std::string_view term_id) const;

 private:
  std::vector<std::shared_ptr<const OntologyGraph>> graphs_;
  std::vector<Transaction> transactions_;
  bool generalized_ = false;
};

// Reads tab-separated "gene_id<TAB>term_id" rows ('#' lines are comments;
// CRLF tolerated), merging rows that share a gene into one transaction.
// Every term must belong to exactly one of the given graphs.
TransactionSet load_annotations(std::istream& in,
                                std::vector<std::shared_ptr<const OntologyGraph>> graphs);

// Replaces every category set with its union with all ancestors of its
// members, reachable via the named transitive kinds. Input must not already
// be generalized.
TransactionSet generalize(const TransactionSet& ts,
                          std::span<const std::string> kinds = kDefaultTransitiveKinds);

// Genes whose transaction has non-empty sets for both categories, sorted.
std::vector<std::string> cocategory_ids(const TransactionSet& ts, std::string_view cat_a,
                                        std::string_view cat_b);

// Same membership as cocategory_ids, as transaction row indices.
std::vector<std::uint32_t> cocategory_rows(const TransactionSet& ts, std::size_t cat_a,
                                           std::size_t cat_b);

}  // namespace xomine
