#pragma once

#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "reqlattice/algebra.hpp"
#include "reqlattice/model.hpp"

namespace reqlattice {

enum class OverlapKind { Disjoint, Partial, Identical };

inline std::string_view to_string(OverlapKind kind) {
  switch (kind) {
    case OverlapKind::Disjoint: return "DISJOINT";
    case OverlapKind::Partial: return "PARTIAL";
    case OverlapKind::Identical: return "IDENTICAL";
  }
  return "?";
}

inline std::string_view recommendation_for(OverlapKind kind) {
  switch (kind) {
    case OverlapKind::Disjoint: return "TRACE_SEPARATELY";
    case OverlapKind::Partial: return "COMPONENT_SPLIT";
    case OverlapKind::Identical: return "SINGLE_COMPONENT";
  }
  return "?";
}

inline std::string_view recommendation_text(OverlapKind kind) {
  switch (kind) {
    case OverlapKind::Disjoint:
      return "No regulation is shared. Trace each jurisdiction's specific requirements separately.";
    case OverlapKind::Partial:
      return "Some regulations are shared. Keep general requirements in components separate from "
             "jurisdiction-specific ones.";
    case OverlapKind::Identical:
      return "All jurisdictions share the same regulations. Develop a single component for all of them.";
  }
  return "";
}

struct OverlapCase {
  OverlapKind kind = OverlapKind::Identical;
  std::size_t core_size = 0;
  std::map<Id, std::size_t> per_jurisdiction_sizes;  // |RegulC_j|
  std::map<Id, std::size_t> complement_sizes;        // |RegulC_j minus core|
  std::string recommendation;
};

inline OverlapCase classify_overlap(const SharedRegulations& shared) {
  OverlapCase out;
  out.core_size = shared.core.size();
  bool identical = true;
  for (const auto& [j, regs] : shared.per_jurisdiction) {
    out.per_jurisdiction_sizes[j] = regs.size();
    out.complement_sizes[j] = shared.complements.at(j).size();
    identical = identical && regs == shared.core;
  }
  // An empty core with two or more jurisdictions is DISJOINT even when every
  // jurisdiction has no regulations at all.
  if (shared.core.empty() && shared.per_jurisdiction.size() >= 2) {
    out.kind = OverlapKind::Disjoint;
  } else if (identical) {
    out.kind = OverlapKind::Identical;
  } else {
    out.kind = OverlapKind::Partial;
  }
  out.recommendation = recommendation_for(out.kind);
  return out;
}

inline OverlapCase classify_overlap(const Catalog& catalog) { return classify_overlap(shared_regulations(catalog)); }

enum class ImpactScope { Global, CountrySpecific };

inline std::string_view to_string(ImpactScope scope) {
  return scope == ImpactScope::Global ? "GLOBAL" : "COUNTRY_SPECIFIC";
}

struct ImpactReport {
  Id regulation;
  bool in_core = false;
  RequirementSet affected_requirements;
  IdSet affected_products;
  ImpactScope scope = ImpactScope::Global;
  std::vector<Id> jurisdictions;  // filled only when scope is COUNTRY_SPECIFIC
};

// What a change to one regulation touches. A change to a shared (core)
// regulation is global; anything else stays with the jurisdictions whose
// private regulation set holds it.
inline ImpactReport change_impact(const Catalog& catalog, std::string_view regulation) {
  catalog.regulation(regulation);
  const auto shared = shared_regulations(catalog);

  ImpactReport out;
  out.regulation = Id(regulation);
  out.in_core = shared.core.count(out.regulation) != 0;
  for (const auto& q : catalog.requirements) {
    if (q.kind != RequirementKind::RL || !q.derived_from.count(out.regulation)) continue;
    out.affected_requirements.insert(q.id);
    for (const auto& p : expand_products(catalog, q.applies_to_products)) out.affected_products.insert(p);
  }
  if (out.in_core) {
    out.scope = ImpactScope::Global;
  } else {
    out.scope = ImpactScope::CountrySpecific;
    for (const auto& [j, regs] : shared.complements) {
      if (regs.count(out.regulation)) out.jurisdictions.push_back(j);
    }
  }
  return out;
}

// Requirements with identical applicability; candidates for one shared component.
struct ReuseCluster {
  IdSet products;
  IdSet jurisdictions;
  RequirementSet requirements;
};

struct ReuseReport {
  std::map<Id, RequirementSet> rl_min;
  RequirementSet shared_across_all;
  std::vector<ReuseCluster> clusters;
};

inline ReuseReport reuse_candidates(const Catalog& catalog) {
  if (catalog.products.empty() || catalog.jurisdictions.empty()) {
    throw Error(ErrorCode::EmptyCatalog, "reuse analysis needs at least one product and one jurisdiction");
  }
  ReuseReport out;
  RequirementSet any_min;
  bool first = true;
  for (const auto& j : catalog.jurisdictions) {
    auto min = rl_min(catalog, j.id);
    out.shared_across_all = first ? min : set_intersection(out.shared_across_all, min);
    first = false;
    any_min = set_union(any_min, min);
    out.rl_min[j.id] = std::move(min);
  }

  std::map<std::pair<IdSet, IdSet>, RequirementSet> groups;
  for (const auto& id : any_min) {
    const auto& q = catalog.requirement(id);
    groups[{expand_products(catalog, q.applies_to_products), expand_jurisdictions(catalog, q.applies_to_jurisdictions)}]
        .insert(id);
  }
  for (auto& [signature, members] : groups) {
    out.clusters.push_back({signature.first, signature.second, std::move(members)});
  }
  return out;
}

// When no regulation is shared, no product should have a general RL part.
// A requirement citing a different regulation in each jurisdiction breaks
// that; report it instead of rejecting the catalog.
inline std::vector<Issue> consistency_diagnostics(const Catalog& catalog) {
  std::vector<Issue> out;
  if (catalog.jurisdictions.empty()) return out;
  if (classify_overlap(catalog).kind != OverlapKind::Disjoint) return out;
  for (const auto& p : catalog.products) {
    auto partition = partition_general_specific(catalog, p.id, RequirementKind::RL);
    if (partition.general.empty()) continue;
    std::vector<Id> ids{p.id};
    for (const auto& id : partition.general) ids.push_back(id);
    out.push_back({Severity::Warning, std::string(issue_code::kImplicationViolated),
                   "no regulation is shared, yet product '" + p.id + "' has general RL requirements: " +
                       detail::join(partition.general.to_vector()),
                   std::move(ids)});
  }
  return out;
}

// validate() plus the analysis diagnostics, which only run on error-free catalogs.
inline ValidationReport validate_with_diagnostics(const Catalog& catalog) {
  auto report = validate(catalog);
  if (report.ok()) {
    for (auto& issue : consistency_diagnostics(catalog)) report.add(std::move(issue));
    report.sort();
  }
  return report;
}

}  // namespace reqlattice
