#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xomine {

using TermIndex = std::uint32_t;

// Bit i selects relation kind i of a graph. Kinds are per-graph; a graph
// supports at most 64 distinct relation kinds.
using RelationMask = std::uint64_t;

struct RelationKind {
  std::string name;
  bool is_transitive = false;
};

struct ValidationReport {
  std::size_t term_count = 0;
  std::size_t edge_count = 0;
  std::size_t dangling_edge_count = 0;  // always 0 for graphs built via the builder
  // Ids of terms lying on a cycle of the transitive-kind subgraph, sorted.
  std::vector<std::string> cyclic_terms;

  bool valid() const { return dangling_edge_count == 0 && cyclic_terms.empty(); }
};

// Immutable DAG of ontology terms with typed child->parent edges.
// Safe to share across threads; ancestor/descendant closures are memoized
// per (relation mask, term) behind an internal lock.
class OntologyGraph {
 public:
  const std::string& category() const { return category_; }
  std::size_t term_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::optional<TermIndex> find_term(std::string_view id) const;
  TermIndex require_term(std::string_view id) const;  // DataError if unknown
  const std::string& term_id(TermIndex t) const { return ids_[t]; }
  const std::string& term_name(TermIndex t) const { return names_[t]; }

  const std::vector<RelationKind>& relation_kinds() const { return kinds_; }
  std::optional<std::uint32_t> find_relation(std::string_view name) const;
  // Mask of every kind flagged transitive.
  RelationMask transitive_mask() const;
  // Mask of the named kinds that exist in this graph; names absent from the
  // graph are skipped (they contribute no edges anyway).
  RelationMask mask_of(std::span<const std::string> kind_names) const;

  // Terms reachable from t via >=1 edge of the masked kinds, t itself
  // excluded, sorted by index. Every masked kind must be transitive.
  const std::vector<TermIndex>& ancestors(TermIndex t, RelationMask kinds) const;
  const std::vector<TermIndex>& descendants(TermIndex t, RelationMask kinds) const;

  std::vector<std::string> ancestor_ids(std::string_view id,
                                        std::span<const std::string> kind_names) const;
  std::vector<std::string> descendant_ids(std::string_view id,
                                          std::span<const std::string> kind_names) const;

  struct Link {
    std::uint32_t kind;
    TermIndex target;
    auto operator<=>(const Link&) const = default;
  };
  std::span<const Link> parents_of(TermIndex t) const { return parents_[t]; }
  std::span<const Link> children_of(TermIndex t) const { return children_[t]; }

  ValidationReport validate() const;

 private:
  friend class OntologyGraphBuilder;
  OntologyGraph() = default;

  const std::vector<TermIndex>& closure(TermIndex t, RelationMask kinds, bool up) const;
  void check_mask_transitive(RelationMask kinds) const;

  std::string category_;
  std::vector<std::string> ids_;
  std::vector<std::string> names_;
  std::map<std::string, TermIndex, std::less<>> index_;
  std::vector<RelationKind> kinds_;
  std::vector<std::vector<Link>> parents_;   // child -> (kind, parent)
  std::vector<std::vector<Link>> children_;  // parent -> (kind, child)
  std::size_t edge_count_ = 0;

  struct Memo {
    std::mutex mutex;
    // mask -> per-term closure, filled lazily; unique_ptr keeps results
    // address-stable so references stay valid while the map grows
    std::map<RelationMask, std::vector<std::unique_ptr<std::vector<TermIndex>>>> up;
    std::map<RelationMask, std::vector<std::unique_ptr<std::vector<TermIndex>>>> down;
  };
  std::unique_ptr<Memo> memo_;
};

// Accumulates terms and edges, then freezes them into an OntologyGraph.
// "is_a" is pre-registered and always transitive.
class OntologyGraphBuilder {
 public:
  explicit OntologyGraphBuilder(std::string category);

  // Registers a relation kind (idempotent by name). Re-registering "is_a"
  // as non-transitive is rejected.
  std::uint32_t relation(std::string_view name, bool transitive);
  bool has_term(std::string_view id) const;
  void term(std::string_view id, std::string_view name = {});  // DataError on duplicate/empty id
  // Both endpoints must already exist; the kind must be registered.
  void edge(std::string_view child, std::string_view kind, std::string_view parent);

  OntologyGraph build();

 private:
  OntologyGraph g_;
};

}  // namespace xomine
