#pragma once

// Test-only helpers: a small catalog builder, seeded generators, and
// brute-force oracles that never call into the library's closure or
// optimisation code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "reqlattice/model.hpp"

namespace reqlattice::testing {

inline IdScope any() { return IdScope::everything(); }
inline IdScope only(std::initializer_list<Id> ids) { return IdScope::of(IdSet(ids)); }

class CatalogBuilder {
 public:
  CatalogBuilder& jurisdiction(Id id) {
    catalog_.jurisdictions.push_back({id, "Jurisdiction " + id});
    return *this;
  }
  CatalogBuilder& product(Id id) {
    catalog_.products.push_back({id, "Product " + id});
    return *this;
  }
  CatalogBuilder& regulation(Id id, IdScope jurisdictions) {
    catalog_.regulations.push_back({id, "Regulation " + id, std::move(jurisdictions)});
    return *this;
  }
  CatalogBuilder& rl(Id id, IdSet derived_from, IdScope products, IdScope jurisdictions) {
    Requirement q;
    q.id = std::move(id);
    q.kind = RequirementKind::RL;
    q.derived_from = std::move(derived_from);
    q.applies_to_products = std::move(products);
    q.applies_to_jurisdictions = std::move(jurisdictions);
    catalog_.requirements.push_back(std::move(q));
    return *this;
  }
  CatalogBuilder& rfn(Id id, std::set<std::string> tags, IdScope products, IdScope jurisdictions) {
    Requirement q;
    q.id = std::move(id);
    q.kind = RequirementKind::RFN;
    q.human_factors = std::move(tags);
    q.applies_to_products = std::move(products);
    q.applies_to_jurisdictions = std::move(jurisdictions);
    catalog_.requirements.push_back(std::move(q));
    return *this;
  }
  CatalogBuilder& refine(Id stronger, Id weaker) {
    catalog_.refinements.push_back({std::move(stronger), std::move(weaker)});
    return *this;
  }
  Catalog build() const { return catalog_; }

 private:
  Catalog catalog_;
};

// ---------------------------------------------------------------------------
// Random DAGs

struct Dag {
  std::vector<Id> nodes;
  std::vector<RefinementEdge> edges;
};

// Edges follow a random hidden topological order, so id order says nothing
// about the relation.
inline Dag random_dag(std::mt19937_64& rng, std::size_t n, double density) {
  Dag dag;
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i;
  std::shuffle(labels.begin(), labels.end(), rng);
  for (std::size_t i = 0; i < n; ++i) dag.nodes.push_back("q" + std::to_string(labels[i]));
  std::bernoulli_distribution edge(density);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edge(rng)) dag.edges.push_back({dag.nodes[i], dag.nodes[j]});
    }
  }
  std::shuffle(dag.edges.begin(), dag.edges.end(), rng);
  return dag;
}

// All nodes reachable from each node by per-node depth-first search.
inline std::map<Id, std::set<Id>> dfs_reachability(const std::vector<Id>& nodes,
                                                   const std::vector<RefinementEdge>& edges) {
  std::map<Id, std::vector<Id>> adjacency;
  for (const auto& e : edges) adjacency[e.stronger].push_back(e.weaker);
  std::map<Id, std::set<Id>> out;
  for (const auto& start : nodes) {
    std::set<Id>& seen = out[start];
    std::vector<Id> stack{start};
    while (!stack.empty()) {
      Id v = stack.back();
      stack.pop_back();
      for (const auto& w : adjacency[v]) {
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
  }
  return out;
}

inline std::set<Id> brute_maximal(const std::map<Id, std::set<Id>>& reach, const std::set<Id>& input) {
  std::set<Id> out;
  for (const auto& r : input) {
    bool dominated = false;
    for (const auto& q : input) {
      if (q != r && reach.at(q).count(r)) dominated = true;
    }
    if (!dominated) out.insert(r);
  }
  return out;
}

// True iff a DFS from some node revisits a node still on its stack.
inline bool dfs_has_back_edge(const std::vector<Id>& nodes, const std::vector<RefinementEdge>& edges) {
  std::map<Id, std::vector<Id>> adjacency;
  for (const auto& e : edges) {
    if (e.stronger != e.weaker) adjacency[e.stronger].push_back(e.weaker);
  }
  std::map<Id, int> colour;  // 0 white, 1 grey, 2 black
  std::function<bool(const Id&)> visit = [&](const Id& v) {
    colour[v] = 1;
    for (const auto& w : adjacency[v]) {
      if (colour[w] == 1) return true;
      if (colour[w] == 0 && visit(w)) return true;
    }
    colour[v] = 2;
    return false;
  };
  for (const auto& v : nodes) {
    if (colour[v] == 0 && visit(v)) return true;
  }
  return false;
}

template <class T>
std::vector<T> subset_by_mask(const std::vector<T>& items, std::uint64_t mask) {
  std::vector<T> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (mask & (std::uint64_t{1} << i)) out.push_back(items[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random catalogs (always error-free under validate())

struct CatalogShape {
  std::size_t max_products = 5;
  std::size_t max_jurisdictions = 5;
  std::size_t max_regulations = 6;
  std::size_t max_requirements = 40;
  double refinement_density = 0.08;
};

inline IdScope random_scope(std::mt19937_64& rng, const std::vector<Id>& universe) {
  std::uniform_int_distribution<int> pick(0, 4);
  if (pick(rng) == 0) return IdScope::everything();
  IdSet ids;
  std::bernoulli_distribution take(0.5);
  for (const auto& id : universe) {
    if (take(rng)) ids.insert(id);
  }
  return IdScope::of(std::move(ids));
}

inline Catalog random_catalog(std::mt19937_64& rng, const CatalogShape& shape = {}) {
  auto count = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  Catalog c;
  std::vector<Id> jurisdictions, products, regulations;
  for (std::size_t i = 0, n = count(1, shape.max_jurisdictions); i < n; ++i) {
    jurisdictions.push_back("C" + std::to_string(i + 1));
    c.jurisdictions.push_back({jurisdictions.back(), "Country " + std::to_string(i + 1)});
  }
  for (std::size_t i = 0, n = count(1, shape.max_products); i < n; ++i) {
    products.push_back("P" + std::to_string(i + 1));
    c.products.push_back({products.back(), "Product " + std::to_string(i + 1)});
  }
  for (std::size_t i = 0, n = count(0, shape.max_regulations); i < n; ++i) {
    auto scope = random_scope(rng, jurisdictions);
    if (!scope.all && scope.ids.empty()) scope.ids.insert(jurisdictions[count(0, jurisdictions.size() - 1)]);
    regulations.push_back("reg" + std::to_string(i + 1));
    c.regulations.push_back({regulations.back(), "Regulation " + std::to_string(i + 1), std::move(scope)});
  }

  std::vector<Id> requirement_ids;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0, n = count(0, shape.max_requirements); i < n; ++i) {
    Requirement q;
    q.id = "r" + std::to_string(100 + i);
    q.title = "Requirement " + std::to_string(i);
    if (!regulations.empty() && coin(rng)) {
      q.kind = RequirementKind::RL;
      auto cited = random_scope(rng, regulations);
      q.derived_from = cited.all || cited.ids.empty() ? IdSet{regulations[count(0, regulations.size() - 1)]}
                                                      : cited.ids;
    } else {
      q.kind = RequirementKind::RFN;
      if (coin(rng)) q.human_factors.insert(coin(rng) ? "language" : "accessibility");
    }
    q.applies_to_products = random_scope(rng, products);
    q.applies_to_jurisdictions = random_scope(rng, jurisdictions);
    requirement_ids.push_back(q.id);
    c.requirements.push_back(std::move(q));
  }

  // Edges only from earlier-shuffled to later-shuffled ids keep it acyclic.
  std::vector<Id> order = requirement_ids;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution edge(shape.refinement_density);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (edge(rng)) c.refinements.push_back({order[i], order[j]});
    }
  }
  std::shuffle(c.requirements.begin(), c.requirements.end(), rng);
  return c;
}

}  // namespace reqlattice::testing
