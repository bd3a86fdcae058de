#include "xomine/ontology.hpp"

#include <algorithm>

#include "xomine/errors.hpp"

namespace xomine {

std::optional<TermIndex> OntologyGraph::find_term(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TermIndex OntologyGraph::require_term(std::string_view id) const {
  auto t = find_term(id);
  if (!t) throw DataError("unknown term '" + std::string(id) + "' in ontology '" + category_ + "'");
  return *t;
}

std::optional<std::uint32_t> OntologyGraph::find_relation(std::string_view name) const {
  for (std::uint32_t i = 0; i < kinds_.size(); ++i)
    if (kinds_[i].name == name) return i;
  return std::nullopt;
}

RelationMask OntologyGraph::transitive_mask() const {
  RelationMask m = 0;
  for (std::uint32_t i = 0; i < kinds_.size(); ++i)
    if (kinds_[i].is_transitive) m |= RelationMask(1) << i;
  return m;
}

RelationMask OntologyGraph::mask_of(std::span<const std::string> kind_names) const {
  RelationMask m = 0;
  for (const auto& name : kind_names)
    if (auto k = find_relation(name)) m |= RelationMask(1) << *k;
  return m;
}

void OntologyGraph::check_mask_transitive(RelationMask kinds) const {
  for (std::uint32_t i = 0; i < kinds_.size(); ++i)
    if ((kinds >> i & 1) && !kinds_[i].is_transitive)
      throw DataError("relation kind '" + kinds_[i].name + "' is not transitive; refusing to traverse");
}

const std::vector<TermIndex>& OntologyGraph::closure(TermIndex t, RelationMask kinds, bool up) const {
  if (t >= term_count()) throw std::out_of_range("term index out of range");
  check_mask_transitive(kinds);

  std::lock_guard<std::mutex> lock(memo_->mutex);
  auto& per_mask = up ? memo_->up[kinds] : memo_->down[kinds];
  if (per_mask.empty()) per_mask.resize(term_count());
  if (per_mask[t]) return *per_mask[t];

  const auto& links = up ? parents_ : children_;
  std::vector<char> seen(term_count(), 0);
  std::vector<TermIndex> stack{t};
  std::vector<TermIndex> out;
  seen[t] = 1;
  while (!stack.empty()) {
    TermIndex v = stack.back();
    stack.pop_back();
    for (const Link& e : links[v]) {
      if (!(kinds >> e.kind & 1)) continue;
      if (seen[e.target]) continue;
      seen[e.target] = 1;
      out.push_back(e.target);
      stack.push_back(e.target);
    }
  }
  std::sort(out.begin(), out.end());
  per_mask[t] = std::make_unique<std::vector<TermIndex>>(std::move(out));
  return *per_mask[t];
}

const std::vector<TermIndex>& OntologyGraph::ancestors(TermIndex t, RelationMask kinds) const {
  return closure(t, kinds, true);
}

const std::vector<TermIndex>& OntologyGraph::descendants(TermIndex t, RelationMask kinds) const {
  return closure(t, kinds, false);
}

std::vector<std::string> OntologyGraph::ancestor_ids(std::string_view id,
                                                     std::span<const std::string> kind_names) const {
  std::vector<std::string> out;
  for (TermIndex t : ancestors(require_term(id), mask_of(kind_names))) out.push_back(ids_[t]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> OntologyGraph::descendant_ids(std::string_view id,
                                                       std::span<const std::string> kind_names) const {
  std::vector<std::string> out;
  for (TermIndex t : descendants(require_term(id), mask_of(kind_names))) out.push_back(ids_[t]);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Tarjan SCC over the transitive-kind subgraph; iterative to survive deep
// chains. Terms in a component of size >= 2, or with a transitive self-loop,
// are cycle members.
struct SccFinder {
  const OntologyGraph& g;
  RelationMask mask;
  std::vector<std::uint32_t> low, disc;
  std::vector<char> on_stack;
  std::vector<TermIndex> stack;
  std::uint32_t timer = 1;
  std::vector<TermIndex> cyclic;

  explicit SccFinder(const OntologyGraph& graph, RelationMask m)
      : g(graph), mask(m), low(graph.term_count(), 0), disc(graph.term_count(), 0),
        on_stack(graph.term_count(), 0) {}

  void run(TermIndex root) {
    struct Frame {
      TermIndex v;
      std::size_t next_edge;
    };
    std::vector<Frame> frames{{root, 0}};
    while (!frames.empty()) {
      Frame& fr = frames.back();
      const TermIndex v = fr.v;
      if (fr.next_edge == 0) {
        disc[v] = low[v] = timer++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      auto links = g.parents_of(v);
      while (fr.next_edge < links.size()) {
        const auto& e = links[fr.next_edge++];
        if (!(mask >> e.kind & 1)) continue;
        if (disc[e.target] == 0) {
          frames.push_back({e.target, 0});  // invalidates fr; loop restarts
          descended = true;
          break;
        }
        if (on_stack[e.target]) low[v] = std::min(low[v], disc[e.target]);
      }
      if (descended) continue;
      if (low[v] == disc[v]) {
        std::vector<TermIndex> comp;
        for (;;) {
          TermIndex w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
          if (w == v) break;
        }
        bool self_loop = false;
        if (comp.size() == 1) {
          for (const auto& e : g.parents_of(comp[0]))
            if ((mask >> e.kind & 1) && e.target == comp[0]) self_loop = true;
        }
        if (comp.size() >= 2 || self_loop)
          cyclic.insert(cyclic.end(), comp.begin(), comp.end());
      }
      frames.pop_back();
      if (!frames.empty()) {
        TermIndex parent = frames.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
};

}  // namespace

ValidationReport OntologyGraph::validate() const {
  ValidationReport r;
  r.term_count = term_count();
  r.edge_count = edge_count_;
  r.dangling_edge_count = 0;  // builder rejects dangling endpoints

  SccFinder scc(*this, transitive_mask());
  for (TermIndex t = 0; t < term_count(); ++t)
    if (scc.disc[t] == 0) scc.run(t);
  for (TermIndex t : scc.cyclic) r.cyclic_terms.push_back(ids_[t]);
  std::sort(r.cyclic_terms.begin(), r.cyclic_terms.end());
  return r;
}

OntologyGraphBuilder::OntologyGraphBuilder(std::string category) {
  g_.category_ = std::move(category);
  g_.kinds_.push_back({"is_a", true});
}

std::uint32_t OntologyGraphBuilder::relation(std::string_view name, bool transitive) {
  if (auto k = g_.find_relation(name)) {
    if (name == "is_a" && !transitive)
      throw DataError("relation kind 'is_a' must stay transitive");
    g_.kinds_[*k].is_transitive = g_.kinds_[*k].is_transitive || transitive;
    return *k;
  }
  if (g_.kinds_.size() >= 64) throw DataError("too many relation kinds (max 64)");
  g_.kinds_.push_back({std::string(name), transitive});
  return static_cast<std::uint32_t>(g_.kinds_.size() - 1);
}

bool OntologyGraphBuilder::has_term(std::string_view id) const {
  return g_.index_.count(id) > 0;
}

void OntologyGraphBuilder::term(std::string_view id, std::string_view name) {
  if (id.empty()) throw DataError("empty term id");
  if (has_term(id)) throw DataError("duplicate term id '" + std::string(id) + "'");
  TermIndex t = static_cast<TermIndex>(g_.ids_.size());
  g_.index_.emplace(std::string(id), t);
  g_.ids_.emplace_back(id);
  g_.names_.emplace_back(name);
  g_.parents_.emplace_back();
  g_.children_.emplace_back();
}

void OntologyGraphBuilder::edge(std::string_view child, std::string_view kind, std::string_view parent) {
  auto c = g_.find_term(child);
  auto p = g_.find_term(parent);
  if (!c || !p)
    throw DataError("edge endpoint missing: " + std::string(!c ? child : parent));
  auto k = g_.find_relation(kind);
  if (!k) throw DataError("unregistered relation kind '" + std::string(kind) + "'");
  g_.parents_[*c].push_back({*k, *p});
  g_.children_[*p].push_back({*k, *c});
  ++g_.edge_count_;
}

OntologyGraph OntologyGraphBuilder::build() {
  for (auto& v : g_.parents_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  std::size_t edges = 0;
  for (auto& v : g_.children_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  for (const auto& v : g_.parents_) edges += v.size();
  g_.edge_count_ = edges;  // after de-duplication
  g_.memo_ = std::make_unique<OntologyGraph::Memo>();
  return std::move(g_);
}

}  // namespace xomine
