#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reqlattice/algebra.hpp"
#include "reqlattice/model.hpp"

namespace reqlattice {

// The "weaker version" relation over requirements together with its
// transitive closure. Immutable once built; acyclic by construction.
class RefinementGraph {
 public:
  RefinementGraph() = default;

  // Throws CatalogInvalid on duplicate nodes, unknown endpoints, self edges,
  // duplicate edges, or cycles.
  RefinementGraph(std::vector<Id> nodes, const std::vector<RefinementEdge>& edges) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
      throw Error(ErrorCode::CatalogInvalid, "duplicate requirement id in refinement graph");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], i);

    direct_.assign(nodes_.size(), {});
    for (const auto& e : edges) {
      auto s = index_.find(e.stronger);
      auto w = index_.find(e.weaker);
      if (s == index_.end() || w == index_.end()) {
        throw Error(ErrorCode::CatalogInvalid, "refinement edge references unknown requirement");
      }
      if (s->second == w->second) throw Error(ErrorCode::CatalogInvalid, "self refinement on '" + e.stronger + "'");
      direct_[s->second].push_back(w->second);
    }
    for (auto& row : direct_) {
      std::sort(row.begin(), row.end());
      if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
        throw Error(ErrorCode::CatalogInvalid, "duplicate refinement edge");
      }
    }
    build_closure();
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Id>& nodes() const { return nodes_; }
  bool contains(std::string_view id) const { return index_.count(Id(id)) != 0; }

  // stronger ⇝* weaker through one or more declared edges.
  bool reaches(std::string_view stronger, std::string_view weaker) const {
    return reaches_index(index_of(stronger), index_of(weaker));
  }

  std::vector<Id> direct_weaker(std::string_view id) const {
    std::vector<Id> out;
    for (std::size_t w : direct_[index_of(id)]) out.push_back(nodes_[w]);
    return out;
  }

  std::vector<Id> all_weaker(std::string_view id) const {
    const std::size_t v = index_of(id);
    std::vector<Id> out;
    for (std::size_t w = 0; w < nodes_.size(); ++w) {
      if (reaches_index(v, w)) out.push_back(nodes_[w]);
    }
    return out;
  }

  std::size_t direct_edge_count() const {
    std::size_t n = 0;
    for (const auto& row : direct_) n += row.size();
    return n;
  }

  std::size_t closure_edge_count() const {
    std::size_t n = 0;
    for (const auto& row : closure_) {
      for (std::uint64_t word : row) n += static_cast<std::size_t>(__builtin_popcountll(word));
    }
    return n;
  }

  void require(std::string_view id) const { index_of(id); }

 private:
  std::size_t index_of(std::string_view id) const {
    auto it = index_.find(Id(id));
    if (it == index_.end()) throw unknown_id("requirement", id);
    return it->second;
  }

  bool reaches_index(std::size_t from, std::size_t to) const {
    return (closure_[from][to / 64] >> (to % 64)) & 1U;
  }

  // Kahn order, then rows filled sinks-first: row(v) = ∪ {w} ∪ row(w).
  void build_closure() {
    const std::size_t n = nodes_.size();
    const std::size_t words = (n + 63) / 64;
    std::vector<std::size_t> in_degree(n, 0);
    for (const auto& row : direct_) {
      for (std::size_t w : row) ++in_degree[w];
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (in_degree[v] == 0) order.push_back(v);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
      for (std::size_t w : direct_[order[head]]) {
        if (--in_degree[w] == 0) order.push_back(w);
      }
    }
    if (order.size() != n) throw Error(ErrorCode::CatalogInvalid, "refinement relation contains a cycle");

    closure_.assign(n, std::vector<std::uint64_t>(words, 0));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto& row = closure_[*it];
      for (std::size_t w : direct_[*it]) {
        row[w / 64] |= std::uint64_t{1} << (w % 64);
        for (std::size_t k = 0; k < words; ++k) row[k] |= closure_[w][k];
      }
    }
  }

  std::vector<Id> nodes_;
  std::map<Id, std::size_t> index_;
  std::vector<std::vector<std::size_t>> direct_;
  std::vector<std::vector<std::uint64_t>> closure_;
};

inline RefinementGraph build_graph(const Catalog& catalog) {
  const auto report = validate(catalog);
  if (!report.ok()) {
    throw Error(ErrorCode::CatalogInvalid,
                std::to_string(report.errors.size()) + " validation error(s), first: " + report.errors.front().message);
  }
  std::vector<Id> nodes;
  nodes.reserve(catalog.requirements.size());
  for (const auto& q : catalog.requirements) nodes.push_back(q.id);
  return RefinementGraph(std::move(nodes), catalog.refinements);
}

// True iff `a` is a weaker version of `b` (b ⇝* a).
inline bool is_weaker(const RefinementGraph& graph, std::string_view a, std::string_view b) {
  return graph.reaches(b, a);
}

// Incremental strongest-set construction. Requirements are taken from
// `sequence` one at a time; repeated ids are "copies" and are skipped.
//  - already present, or weaker than a member: result unchanged;
//  - stronger than members y1..yK: add it, drop y1..yK;
//  - unrelated to every member: add it.
inline RequirementSet optimize_sequence(const RefinementGraph& graph, std::span<const Id> sequence) {
  for (const auto& id : sequence) graph.require(id);
  RequirementSet strongest;
  for (const auto& req : sequence) {
    if (strongest.contains(req)) continue;
    bool dominated = std::any_of(strongest.begin(), strongest.end(),
                                 [&](const Id& y) { return is_weaker(graph, req, y); });
    if (dominated) continue;
    std::vector<Id> superseded;
    for (const auto& y : strongest) {
      if (is_weaker(graph, y, req)) superseded.push_back(y);
    }
    for (const auto& y : superseded) strongest.erase(y);
    strongest.insert(req);
  }
  return strongest;
}

// Maximal elements of `input` under ⇝*, processed in ascending id order.
inline RequirementSet optimize(const RefinementGraph& graph, const RequirementSet& input) {
  const auto sequence = input.to_vector();
  return optimize_sequence(graph, sequence);
}

// Quadratic reference: keep r iff no other member of the input refines it.
inline RequirementSet oracle_maximal(const RefinementGraph& graph, const RequirementSet& input) {
  RequirementSet out;
  for (const auto& r : input) {
    graph.require(r);
    bool has_stronger = false;
    for (const auto& q : input) {
      if (q != r && graph.reaches(q, r)) {
        has_stronger = true;
        break;
      }
    }
    if (!has_stronger) out.insert(r);
  }
  return out;
}

// Smallest-id member of `strongest` that refines `id`, if any.
inline std::optional<Id> dominating_witness(const RefinementGraph& graph, const RequirementSet& strongest,
                                            std::string_view id) {
  for (const auto& q : strongest) {
    if (graph.reaches(q, id)) return q;
  }
  return std::nullopt;
}

// RL^{C_j}*
inline RequirementSet strongest_rl(const Catalog& catalog, const RefinementGraph& graph,
                                   std::string_view jurisdiction) {
  return optimize(graph, jurisdiction_rl(catalog, jurisdiction));
}

// R_{P_i}*
inline RequirementSet strongest_product(const Catalog& catalog, const RefinementGraph& graph,
                                        std::string_view product) {
  return optimize(graph, product_union(catalog, product));
}

// R*
inline RequirementSet strongest_global(const Catalog& catalog, const RefinementGraph& graph) {
  return optimize(graph, applicable_union(catalog));
}

}  // namespace reqlattice
