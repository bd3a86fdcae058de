#include "xomine/transactions.hpp"

#include <algorithm>
#include <map>

#include "xomine/errors.hpp"

namespace xomine {

bool Transaction::contains(std::size_t cat, TermIndex t) const {
  const auto& v = terms[cat];
  return std::binary_search(v.begin(), v.end(), t);
}

TransactionSet::TransactionSet(std::vector<std::shared_ptr<const OntologyGraph>> graphs,
                               std::vector<Transaction> transactions, bool generalized)
    : graphs_(std::move(graphs)), transactions_(std::move(transactions)), generalized_(generalized) {
  for (const auto& tx : transactions_)
    if (tx.terms.size() != graphs_.size())
      throw DataError("transaction '" + tx.gene + "' has wrong category slot count");
}

std::optional<std::size_t> TransactionSet::find_category(std::string_view label) const {
  for (std::size_t i = 0; i < graphs_.size(); ++i)
    if (graphs_[i]->category() == label) return i;
  return std::nullopt;
}

std::size_t TransactionSet::require_category(std::string_view label) const {
  auto i = find_category(label);
  if (!i) throw DataError("unknown category label '" + std::string(label) + "'");
  return *i;
}

std::pair<std::size_t, TermIndex> TransactionSet::resolve_term(std::string_view term_id) const {
  std::optional<std::pair<std::size_t, TermIndex>> found;
  for (std::size_t c = 0; c < graphs_.size(); ++c) {
    if (auto t = graphs_[c]->find_term(term_id)) {
      if (found)
        throw DataError("term '" + std::string(term_id) + "' is ambiguous across categories '" +
                        graphs_[found->first]->category() + "' and '" + graphs_[c]->category() + "'");
      found = {c, *t};
    }
  }
  if (!found) throw DataError("term '" + std::string(term_id) + "' not found in any ontology");
  return *found;
}

TransactionSet load_annotations(std::istream& in,
                                std::vector<std::shared_ptr<const OntologyGraph>> graphs) {
  if (graphs.empty()) throw DataError("no ontology graphs given");

  std::map<std::string, std::vector<std::vector<TermIndex>>> by_gene;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      throw DataError("annotation line " + std::to_string(line_no) +
                      " is not 'gene<TAB>term': " + line);
    std::string gene = line.substr(0, tab);
    std::string term = line.substr(tab + 1);

    std::optional<std::pair<std::size_t, TermIndex>> found;
    for (std::size_t c = 0; c < graphs.size(); ++c) {
      if (auto t = graphs[c]->find_term(term)) {
        if (found)
          throw DataError("line " + std::to_string(line_no) + ": term '" + term +
                          "' is ambiguous across categories");
        found = {c, *t};
      }
    }
    if (!found)
      throw DataError("line " + std::to_string(line_no) + ": term '" + term +
                      "' not found in any ontology");

    auto& slots = by_gene.try_emplace(std::move(gene), graphs.size()).first->second;
    slots[found->first].push_back(found->second);
  }

  std::vector<Transaction> txs;
  txs.reserve(by_gene.size());
  for (auto& [gene, slots] : by_gene) {
    Transaction tx;
    tx.gene = gene;
    for (auto& v : slots) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    tx.terms = std::move(slots);
    txs.push_back(std::move(tx));
  }
  return TransactionSet(std::move(graphs), std::move(txs), false);
}

TransactionSet generalize(const TransactionSet& ts, std::span<const std::string> kinds) {
  if (ts.generalized()) throw std::invalid_argument("transaction set is already generalized");

  std::vector<RelationMask> masks(ts.category_count());
  for (std::size_t c = 0; c < ts.category_count(); ++c)
    masks[c] = ts.graph(c).mask_of(kinds);

  std::vector<Transaction> out;
  out.reserve(ts.size());
  for (const auto& tx : ts.transactions()) {
    Transaction g;
    g.gene = tx.gene;
    g.terms.resize(ts.category_count());
    for (std::size_t c = 0; c < ts.category_count(); ++c) {
      std::vector<TermIndex> closed = tx.terms[c];
      for (TermIndex t : tx.terms[c]) {
        const auto& anc = ts.graph(c).ancestors(t, masks[c]);
        closed.insert(closed.end(), anc.begin(), anc.end());
      }
      std::sort(closed.begin(), closed.end());
      closed.erase(std::unique(closed.begin(), closed.end()), closed.end());
      g.terms[c] = std::move(closed);
    }
    out.push_back(std::move(g));
  }
  return TransactionSet(ts.graphs(), std::move(out), true);
}

std::vector<std::uint32_t> cocategory_rows(const TransactionSet& ts, std::size_t cat_a,
                                           std::size_t cat_b) {
  std::vector<std::uint32_t> rows;
  const auto& txs = ts.transactions();
  for (std::uint32_t i = 0; i < txs.size(); ++i)
    if (txs[i].has_category(cat_a) && txs[i].has_category(cat_b)) rows.push_back(i);
  return rows;
}

std::vector<std::string> cocategory_ids(const TransactionSet& ts, std::string_view cat_a,
                                        std::string_view cat_b) {
  std::size_t a = ts.require_category(cat_a);
  std::size_t b = ts.require_category(cat_b);
  std::vector<std::string> genes;
  for (std::uint32_t row : cocategory_rows(ts, a, b)) genes.push_back(ts.transactions()[row].gene);
  return genes;  // transactions are sorted by gene id already
}

}  // namespace xomine
