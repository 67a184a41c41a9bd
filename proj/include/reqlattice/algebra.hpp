#pragma once

#include <algorithm>
#include <initializer_list>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reqlattice/model.hpp"

namespace reqlattice {

// Duplicate-free set of requirement ids, iterated in ascending id order.
class RequirementSet {
 public:
  using const_iterator = IdSet::const_iterator;

  RequirementSet() = default;
  RequirementSet(std::initializer_list<Id> ids) : ids_(ids) {}
  explicit RequirementSet(IdSet ids) : ids_(std::move(ids)) {}
  template <std::input_iterator It>
  RequirementSet(It first, It last) : ids_(first, last) {}

  bool insert(const Id& id) { return ids_.insert(id).second; }
  bool erase(const Id& id) { return ids_.erase(id) != 0; }
  bool contains(std::string_view id) const { return ids_.count(Id(id)) != 0; }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const_iterator begin() const { return ids_.begin(); }
  const_iterator end() const { return ids_.end(); }

  const IdSet& ids() const { return ids_; }
  std::vector<Id> to_vector() const { return {ids_.begin(), ids_.end()}; }

  bool is_subset_of(const RequirementSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
  }

  friend bool operator==(const RequirementSet&, const RequirementSet&) = default;

  friend RequirementSet set_union(const RequirementSet& a, const RequirementSet& b) {
    RequirementSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out.ids_, out.ids_.end()));
    return out;
  }
  friend RequirementSet set_intersection(const RequirementSet& a, const RequirementSet& b) {
    RequirementSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out.ids_, out.ids_.end()));
    return out;
  }
  friend RequirementSet set_difference(const RequirementSet& a, const RequirementSet& b) {
    RequirementSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out.ids_, out.ids_.end()));
    return out;
  }

 private:
  IdSet ids_;
};

// General part is identical across jurisdictions; specific[j] holds what
// only some jurisdictions demand.
struct Partition {
  RequirementSet general;
  std::map<Id, RequirementSet> specific;

  friend bool operator==(const Partition&, const Partition&) = default;
};

inline bool applies(const Requirement& q, std::string_view product, std::string_view jurisdiction) {
  return q.applies_to_products.contains(product) && q.applies_to_jurisdictions.contains(jurisdiction);
}

// R^{C_j}_{P_i}, optionally restricted to one kind. With RL this is the
// projection of the jurisdiction's legal requirements onto the product.
inline RequirementSet requirements_for(const Catalog& catalog, std::string_view product,
                                       std::string_view jurisdiction,
                                       std::optional<RequirementKind> kind_filter = std::nullopt) {
  catalog.product(product);
  catalog.jurisdiction(jurisdiction);
  RequirementSet out;
  for (const auto& q : catalog.requirements) {
    if (kind_filter && q.kind != *kind_filter) continue;
    if (applies(q, product, jurisdiction)) out.insert(q.id);
  }
  return out;
}

// R^{P_i}: everything the product must satisfy in some jurisdiction.
inline RequirementSet product_union(const Catalog& catalog, std::string_view product) {
  catalog.product(product);
  RequirementSet out;
  for (const auto& j : catalog.jurisdictions) out = set_union(out, requirements_for(catalog, product, j.id));
  return out;
}

// Every requirement demanded of at least one (product, jurisdiction) pair.
inline RequirementSet applicable_union(const Catalog& catalog) {
  RequirementSet out;
  for (const auto& q : catalog.requirements) {
    if (!expand_products(catalog, q.applies_to_products).empty() &&
        !expand_jurisdictions(catalog, q.applies_to_jurisdictions).empty()) {
      out.insert(q.id);
    }
  }
  return out;
}

// RL^{C_j}: legal requirements of one jurisdiction over all products.
inline RequirementSet jurisdiction_rl(const Catalog& catalog, std::string_view jurisdiction) {
  catalog.jurisdiction(jurisdiction);
  RequirementSet out;
  for (const auto& p : catalog.products) {
    out = set_union(out, requirements_for(catalog, p.id, jurisdiction, RequirementKind::RL));
  }
  return out;
}

struct SharedRegulations {
  IdSet core;                       // in force everywhere
  std::map<Id, IdSet> complements;  // per jurisdiction: RegulC_j minus core
  std::map<Id, IdSet> per_jurisdiction;

  friend bool operator==(const SharedRegulations&, const SharedRegulations&) = default;
};

inline SharedRegulations shared_regulations(const Catalog& catalog) {
  if (catalog.jurisdictions.empty()) {
    throw Error(ErrorCode::EmptyCatalog, "shared regulations need at least one jurisdiction");
  }
  SharedRegulations out;
  bool first = true;
  for (const auto& j : catalog.jurisdictions) {
    IdSet regs = regulations_of(catalog, j.id);
    if (first) {
      out.core = regs;
      first = false;
    } else {
      IdSet kept;
      std::set_intersection(out.core.begin(), out.core.end(), regs.begin(), regs.end(),
                            std::inserter(kept, kept.end()));
      out.core = std::move(kept);
    }
    out.per_jurisdiction[j.id] = std::move(regs);
  }
  for (const auto& [j, regs] : out.per_jurisdiction) {
    IdSet rest;
    std::set_difference(regs.begin(), regs.end(), out.core.begin(), out.core.end(), std::inserter(rest, rest.end()));
    out.complements[j] = std::move(rest);
  }
  return out;
}

// RL^{C_j}^{min}: legal requirements every product must meet in a jurisdiction.
inline RequirementSet rl_min(const Catalog& catalog, std::string_view jurisdiction) {
  catalog.jurisdiction(jurisdiction);
  if (catalog.products.empty()) throw Error(ErrorCode::EmptyCatalog, "RL min needs at least one product");
  std::optional<RequirementSet> out;
  for (const auto& p : catalog.products) {
    auto projection = requirements_for(catalog, p.id, jurisdiction, RequirementKind::RL);
    out = out ? set_intersection(*out, projection) : std::move(projection);
  }
  return *out;
}

// The general part is built as the intersection over jurisdictions, so it
// is the same for every jurisdiction by construction.
inline Partition partition_general_specific(const Catalog& catalog, std::string_view product, RequirementKind kind) {
  catalog.product(product);
  if (catalog.jurisdictions.empty()) {
    throw Error(ErrorCode::EmptyCatalog, "partition needs at least one jurisdiction");
  }
  std::map<Id, RequirementSet> projections;
  std::optional<RequirementSet> general;
  for (const auto& j : catalog.jurisdictions) {
    auto projection = requirements_for(catalog, product, j.id, kind);
    general = general ? set_intersection(*general, projection) : projection;
    projections[j.id] = std::move(projection);
  }
  Partition out;
  out.general = std::move(*general);
  for (auto& [j, projection] : projections) out.specific[j] = set_difference(projection, out.general);
  return out;
}

}  // namespace reqlattice
