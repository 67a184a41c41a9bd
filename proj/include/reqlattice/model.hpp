#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "reqlattice/error.hpp"

namespace reqlattice {

using Id = std::string;
using IdSet = std::set<Id>;

// A set of entity ids, or the ALL marker. ALL is expanded against the
// catalog at query time, so adding a jurisdiction or product later widens it.
struct IdScope {
  bool all = false;
  IdSet ids;

  static IdScope everything() { return IdScope{true, {}}; }
  static IdScope of(IdSet ids) { return IdScope{false, std::move(ids)}; }

  bool contains(std::string_view id) const { return all || ids.count(Id(id)) != 0; }

  friend bool operator==(const IdScope&, const IdScope&) = default;
};

enum class RequirementKind { RL, RFN };

inline std::string_view to_string(RequirementKind kind) {
  return kind == RequirementKind::RL ? "RL" : "RFN";
}

inline std::optional<RequirementKind> parse_kind(std::string_view text) {
  if (text == "RL" || text == "rl") return RequirementKind::RL;
  if (text == "RFN" || text == "rfn") return RequirementKind::RFN;
  return std::nullopt;
}

struct Jurisdiction {
  Id id;
  std::string name;
  friend bool operator==(const Jurisdiction&, const Jurisdiction&) = default;
};

struct Regulation {
  Id id;
  std::string title;
  IdScope jurisdictions;
  friend bool operator==(const Regulation&, const Regulation&) = default;
};

struct Product {
  Id id;
  std::string name;
  friend bool operator==(const Product&, const Product&) = default;
};

struct Requirement {
  Id id;
  RequirementKind kind = RequirementKind::RL;
  std::string title;
  IdSet derived_from;              // regulations; RL only
  std::set<std::string> human_factors;  // opaque tags; RFN only
  IdScope applies_to_products;
  IdScope applies_to_jurisdictions;
  friend bool operator==(const Requirement&, const Requirement&) = default;
};

// stronger ⇝ weaker: `weaker` is a weaker version of `stronger`.
struct RefinementEdge {
  Id stronger;
  Id weaker;
  friend auto operator<=>(const RefinementEdge&, const RefinementEdge&) = default;
};

inline constexpr int kCatalogVersion = 1;

struct Catalog {
  int version = kCatalogVersion;
  std::vector<Jurisdiction> jurisdictions;
  std::vector<Regulation> regulations;
  std::vector<Product> products;
  std::vector<Requirement> requirements;
  std::vector<RefinementEdge> refinements;

  friend bool operator==(const Catalog&, const Catalog&) = default;

  const Jurisdiction* find_jurisdiction(std::string_view id) const { return find(jurisdictions, id); }
  const Regulation* find_regulation(std::string_view id) const { return find(regulations, id); }
  const Product* find_product(std::string_view id) const { return find(products, id); }
  const Requirement* find_requirement(std::string_view id) const { return find(requirements, id); }

  const Jurisdiction& jurisdiction(std::string_view id) const { return get(jurisdictions, id, "jurisdiction"); }
  const Regulation& regulation(std::string_view id) const { return get(regulations, id, "regulation"); }
  const Product& product(std::string_view id) const { return get(products, id, "product"); }
  const Requirement& requirement(std::string_view id) const { return get(requirements, id, "requirement"); }

 private:
  template <class T>
  static const T* find(const std::vector<T>& items, std::string_view id) {
    auto it = std::find_if(items.begin(), items.end(), [&](const T& item) { return item.id == id; });
    return it == items.end() ? nullptr : &*it;
  }

  template <class T>
  static const T& get(const std::vector<T>& items, std::string_view id, std::string_view what) {
    if (const T* item = find(items, id)) return *item;
    throw unknown_id(what, id);
  }
};

// Sorts every collection by id so that equal catalogs compare equal
// regardless of the order their entities were declared in.
inline Catalog canonicalize(Catalog catalog) {
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::stable_sort(catalog.jurisdictions.begin(), catalog.jurisdictions.end(), by_id);
  std::stable_sort(catalog.regulations.begin(), catalog.regulations.end(), by_id);
  std::stable_sort(catalog.products.begin(), catalog.products.end(), by_id);
  std::stable_sort(catalog.requirements.begin(), catalog.requirements.end(), by_id);
  std::sort(catalog.refinements.begin(), catalog.refinements.end());
  return catalog;
}

inline IdSet jurisdiction_ids(const Catalog& catalog) {
  IdSet ids;
  for (const auto& j : catalog.jurisdictions) ids.insert(j.id);
  return ids;
}

inline IdSet product_ids(const Catalog& catalog) {
  IdSet ids;
  for (const auto& p : catalog.products) ids.insert(p.id);
  return ids;
}

inline IdSet regulation_ids(const Catalog& catalog) {
  IdSet ids;
  for (const auto& r : catalog.regulations) ids.insert(r.id);
  return ids;
}

inline IdSet expand_jurisdictions(const Catalog& catalog, const IdScope& scope) {
  return scope.all ? jurisdiction_ids(catalog) : scope.ids;
}

inline IdSet expand_products(const Catalog& catalog, const IdScope& scope) {
  return scope.all ? product_ids(catalog) : scope.ids;
}

// RegulC_j: the regulations in force in one jurisdiction.
inline IdSet regulations_of(const Catalog& catalog, std::string_view jurisdiction) {
  catalog.jurisdiction(jurisdiction);
  IdSet result;
  for (const auto& r : catalog.regulations) {
    if (r.jurisdictions.contains(jurisdiction)) result.insert(r.id);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Validation

enum class Severity { Error, Warning };

struct Issue {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::vector<Id> ids;

  friend bool operator==(const Issue&, const Issue&) = default;
};

namespace issue_code {
inline constexpr std::string_view kCycle = "CYCLE";
inline constexpr std::string_view kDuplicateEdge = "DUPLICATE_EDGE";
inline constexpr std::string_view kDuplicateId = "DUPLICATE_ID";
inline constexpr std::string_view kEmptyId = "EMPTY_ID";
inline constexpr std::string_view kEmptyJurisdictions = "EMPTY_JURISDICTIONS";
inline constexpr std::string_view kKindFields = "KIND_FIELDS";
inline constexpr std::string_view kSelfEdge = "SELF_EDGE";
inline constexpr std::string_view kUnknownRef = "UNKNOWN_REF";
inline constexpr std::string_view kVersion = "VERSION";
inline constexpr std::string_view kRlCoverage = "RL_COVERAGE";
inline constexpr std::string_view kImplicationViolated = "IMPLICATION_VIOLATED";
}  // namespace issue_code

struct ValidationReport {
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool ok() const { return errors.empty(); }

  void add(Issue issue) {
    (issue.severity == Severity::Error ? errors : warnings).push_back(std::move(issue));
  }

  // Orders each list by code, then offending ids.
  void sort() {
    auto key = [](const Issue& a, const Issue& b) { return std::tie(a.code, a.ids) < std::tie(b.code, b.ids); };
    std::stable_sort(errors.begin(), errors.end(), key);
    std::stable_sort(warnings.begin(), warnings.end(), key);
  }

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

namespace detail {

inline std::string squote(std::string_view id) { return "'" + std::string(id) + "'"; }

inline std::string join(const std::vector<Id>& ids, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += sep;
    out += ids[i];
  }
  return out;
}

template <class T>
void check_ids(const std::vector<T>& items, std::string_view what, ValidationReport& report) {
  std::map<Id, std::size_t> counts;
  for (const auto& item : items) {
    if (item.id.empty()) {
      report.add({Severity::Error, std::string(issue_code::kEmptyId), std::string(what) + " with empty id", {""}});
    } else {
      ++counts[item.id];
    }
  }
  for (const auto& [id, count] : counts) {
    if (count > 1) {
      report.add({Severity::Error, std::string(issue_code::kDuplicateId),
                  std::string(what) + " id " + squote(id) + " declared " + std::to_string(count) + " times",
                  {id}});
    }
  }
}

inline void check_refs(const IdSet& refs, const IdSet& known, std::string_view owner_what, const Id& owner,
                       std::string_view field, std::string_view target_what, ValidationReport& report) {
  for (const auto& ref : refs) {
    if (!known.count(ref)) {
      report.add({Severity::Error, std::string(issue_code::kUnknownRef),
                  std::string(owner_what) + " " + squote(owner) + " field " + std::string(field) + " references unknown " +
                      std::string(target_what) + " " + squote(ref),
                  {owner, ref}});
    }
  }
}

// Strongly connected components with more than one member, each sorted,
// found by an iterative Tarjan walk.
inline std::vector<std::vector<Id>> nontrivial_components(const std::vector<Id>& nodes,
                                                          const std::vector<std::vector<std::size_t>>& adjacency) {
  const std::size_t n = nodes.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> frames;  // node, next child position
  std::vector<std::vector<Id>> components;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos == 0 && index[v] == kUnvisited) {
        index[v] = lowlink[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (pos < adjacency[v].size()) {
        std::size_t w = adjacency[v][pos++];
        if (index[w] == kUnvisited) {
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }
      std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        std::size_t parent = frames.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
      }
      if (lowlink[done] == index[done]) {
        std::vector<Id> component;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(nodes[w]);
        } while (w != done);
        if (component.size() > 1) {
          std::sort(component.begin(), component.end());
          components.push_back(std::move(component));
        }
      }
    }
  }
  return components;
}

}  // namespace detail

// Structural and referential checks. Never throws: every violation becomes
// an Issue. Downstream analyses require report.ok().
inline ValidationReport validate(const Catalog& catalog) {
  using detail::squote;
  ValidationReport report;

  if (catalog.version != kCatalogVersion) {
    report.add({Severity::Error, std::string(issue_code::kVersion),
                "unsupported catalog version " + std::to_string(catalog.version), {}});
  }

  detail::check_ids(catalog.jurisdictions, "jurisdiction", report);
  detail::check_ids(catalog.regulations, "regulation", report);
  detail::check_ids(catalog.products, "product", report);
  detail::check_ids(catalog.requirements, "requirement", report);

  const IdSet jurisdictions = jurisdiction_ids(catalog);
  const IdSet regulations = regulation_ids(catalog);
  const IdSet products = product_ids(catalog);

  for (const auto& r : catalog.regulations) {
    if (!r.jurisdictions.all && r.jurisdictions.ids.empty()) {
      report.add({Severity::Error, std::string(issue_code::kEmptyJurisdictions),
                  "regulation " + squote(r.id) + " applies to no jurisdiction", {r.id}});
    }
    if (!r.jurisdictions.all) {
      detail::check_refs(r.jurisdictions.ids, jurisdictions, "regulation", r.id, "jurisdictions", "jurisdiction",
                         report);
    }
  }

  IdSet requirement_ids;
  for (const auto& q : catalog.requirements) {
    requirement_ids.insert(q.id);
    detail::check_refs(q.derived_from, regulations, "requirement", q.id, "derived_from", "regulation", report);
    if (!q.applies_to_products.all) {
      detail::check_refs(q.applies_to_products.ids, products, "requirement", q.id, "applies_to_products", "product",
                         report);
    }
    if (!q.applies_to_jurisdictions.all) {
      detail::check_refs(q.applies_to_jurisdictions.ids, jurisdictions, "requirement", q.id,
                         "applies_to_jurisdictions", "jurisdiction", report);
    }

    if (q.kind == RequirementKind::RL) {
      if (q.derived_from.empty()) {
        report.add({Severity::Error, std::string(issue_code::kKindFields),
                    "RL requirement " + squote(q.id) + " has empty derived_from", {q.id}});
      }
      if (!q.human_factors.empty()) {
        report.add({Severity::Error, std::string(issue_code::kKindFields),
                    "RL requirement " + squote(q.id) + " carries human_factors tags", {q.id}});
      }
      // Coverage: each applicable jurisdiction should have a cited regulation in force.
      std::vector<Id> uncovered;
      for (const auto& j : expand_jurisdictions(catalog, q.applies_to_jurisdictions)) {
        bool covered = std::any_of(q.derived_from.begin(), q.derived_from.end(), [&](const Id& reg) {
          const Regulation* r = catalog.find_regulation(reg);
          return r && r->jurisdictions.contains(j);
        });
        if (!covered) uncovered.push_back(j);
      }
      if (!uncovered.empty()) {
        std::vector<Id> ids{q.id};
        ids.insert(ids.end(), uncovered.begin(), uncovered.end());
        report.add({Severity::Warning, std::string(issue_code::kRlCoverage),
                    "RL requirement " + squote(q.id) + " applies in " + detail::join(uncovered) +
                        " without a cited regulation in force there",
                    std::move(ids)});
      }
    } else if (!q.derived_from.empty()) {
      report.add({Severity::Error, std::string(issue_code::kKindFields),
                  "RFN requirement " + squote(q.id) + " has nonempty derived_from", {q.id}});
    }
  }

  std::set<RefinementEdge> seen_edges;
  std::map<Id, std::size_t> node_index;
  std::vector<Id> nodes(requirement_ids.begin(), requirement_ids.end());
  for (std::size_t i = 0; i < nodes.size(); ++i) node_index[nodes[i]] = i;
  std::vector<std::vector<std::size_t>> adjacency(nodes.size());

  for (const auto& e : catalog.refinements) {
    bool known = true;
    for (const Id* end : {&e.stronger, &e.weaker}) {
      if (!requirement_ids.count(*end)) {
        known = false;
        report.add({Severity::Error, std::string(issue_code::kUnknownRef),
                    "refinement " + squote(e.stronger) + " -> " + squote(e.weaker) + " references unknown requirement " +
                        squote(*end),
                    {e.stronger, e.weaker}});
      }
    }
    if (e.stronger == e.weaker) {
      report.add({Severity::Error, std::string(issue_code::kSelfEdge),
                  "requirement " + squote(e.stronger) + " refines itself", {e.stronger}});
      continue;
    }
    if (!seen_edges.insert(e).second) {
      report.add({Severity::Error, std::string(issue_code::kDuplicateEdge),
                  "refinement " + squote(e.stronger) + " -> " + squote(e.weaker) + " declared more than once",
                  {e.stronger, e.weaker}});
      continue;
    }
    if (known) adjacency[node_index[e.stronger]].push_back(node_index[e.weaker]);
  }

  for (auto& component : detail::nontrivial_components(nodes, adjacency)) {
    report.add({Severity::Error, std::string(issue_code::kCycle),
                "refinement cycle through " + detail::join(component), std::move(component)});
  }

  report.sort();
  return report;
}

}  // namespace reqlattice
