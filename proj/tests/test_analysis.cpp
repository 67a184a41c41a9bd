#include <gtest/gtest.h>

#include <random>

#include "reqlattice/analysis.hpp"
#include "support.hpp"

using namespace reqlattice;
using namespace reqlattice::testing;

namespace {

Catalog disjoint_two() {
  return CatalogBuilder()
      .jurisdiction("C1")
      .jurisdiction("C2")
      .product("P1")
      .product("P2")
      .regulation("s1", only({"C1"}))
      .regulation("s2", only({"C2"}))
      .rl("r1", {"s1"}, any(), only({"C1"}))
      .rl("r2", {"s2"}, only({"P1"}), only({"C2"}))
      .build();
}

// g shared, s1/s2 private. r_core is general, r_c1 and r_c2 country-specific,
// r_both cites a core and a private regulation.
Catalog partial_two() {
  return CatalogBuilder()
      .jurisdiction("C1")
      .jurisdiction("C2")
      .product("P1")
      .product("P2")
      .regulation("g", any())
      .regulation("s1", only({"C1"}))
      .regulation("s2", only({"C2"}))
      .regulation("unused", only({"C2"}))
      .rl("r_core", {"g"}, any(), any())
      .rl("r_c1", {"s1"}, only({"P1"}), only({"C1"}))
      .rl("r_c1b", {"s1"}, any(), only({"C1"}))
      .rl("r_c2", {"s2"}, only({"P2"}), only({"C2"}))
      .rl("r_both", {"g", "s1"}, only({"P2"}), only({"C1"}))
      .rfn("h", {"language"}, any(), only({"C1"}))
      .build();
}

}  // namespace

TEST(ClassifyOverlap, Disjoint) {
  auto overlap = classify_overlap(disjoint_two());
  EXPECT_EQ(overlap.kind, OverlapKind::Disjoint);
  EXPECT_EQ(overlap.recommendation, "TRACE_SEPARATELY");
  EXPECT_EQ(overlap.core_size, 0u);
  EXPECT_EQ(overlap.complement_sizes.at("C1"), 1u);
}

TEST(ClassifyOverlap, Identical) {
  auto c = CatalogBuilder().jurisdiction("C1").jurisdiction("C2").regulation("g", any()).regulation("h", any()).build();
  auto overlap = classify_overlap(c);
  EXPECT_EQ(overlap.kind, OverlapKind::Identical);
  EXPECT_EQ(overlap.recommendation, "SINGLE_COMPONENT");
  EXPECT_EQ(overlap.core_size, 2u);
}

TEST(ClassifyOverlap, Partial) {
  auto overlap = classify_overlap(partial_two());
  EXPECT_EQ(overlap.kind, OverlapKind::Partial);
  EXPECT_EQ(overlap.recommendation, "COMPONENT_SPLIT");
  EXPECT_EQ(overlap.core_size, 1u);
  EXPECT_EQ(overlap.per_jurisdiction_sizes.at("C2"), 3u);
  EXPECT_EQ(overlap.complement_sizes.at("C2"), 2u);
}

TEST(ClassifyOverlap, SingleJurisdictionIsIdentical) {
  auto c = CatalogBuilder().jurisdiction("C1").regulation("s1", only({"C1"})).build();
  EXPECT_EQ(classify_overlap(c).kind, OverlapKind::Identical);
  auto bare = CatalogBuilder().jurisdiction("C1").build();
  EXPECT_EQ(classify_overlap(bare).kind, OverlapKind::Identical);
}

TEST(ClassifyOverlap, NoRegulationsAnywhereCountsAsDisjoint) {
  auto c = CatalogBuilder().jurisdiction("C1").jurisdiction("C2").build();
  EXPECT_EQ(classify_overlap(c).kind, OverlapKind::Disjoint);
}

TEST(ClassifyOverlap, ZeroJurisdictions) {
  EXPECT_THROW(classify_overlap(Catalog{}), Error);
}

TEST(ClassifyOverlap, DependsOnlyOnSharedRegulations) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_catalog(rng);
    auto shared = shared_regulations(c);
    auto overlap = classify_overlap(c);
    bool identical = true;
    for (const auto& [j, regs] : shared.per_jurisdiction) identical = identical && regs == shared.core;
    OverlapKind expected = shared.core.empty() && c.jurisdictions.size() >= 2 ? OverlapKind::Disjoint
                           : identical                                        ? OverlapKind::Identical
                                                                              : OverlapKind::Partial;
    EXPECT_EQ(overlap.kind, expected);
    // Requirements and products do not influence the case.
    auto stripped = c;
    stripped.requirements.clear();
    stripped.refinements.clear();
    stripped.products.clear();
    EXPECT_EQ(classify_overlap(stripped).kind, overlap.kind);
  }
}

TEST(ChangeImpact, RegulationWithoutRequirements) {
  auto report = change_impact(partial_two(), "unused");
  EXPECT_TRUE(report.affected_requirements.empty());
  EXPECT_TRUE(report.affected_products.empty());
  EXPECT_FALSE(report.in_core);
  EXPECT_EQ(report.scope, ImpactScope::CountrySpecific);
  EXPECT_EQ(report.jurisdictions, (std::vector<Id>{"C2"}));
}

TEST(ChangeImpact, CoreRegulationIsGlobal) {
  auto report = change_impact(partial_two(), "g");
  EXPECT_TRUE(report.in_core);
  EXPECT_EQ(report.scope, ImpactScope::Global);
  EXPECT_TRUE(report.jurisdictions.empty());
  EXPECT_EQ(report.affected_requirements, (RequirementSet{"r_both", "r_core"}));
  EXPECT_EQ(report.affected_products, (IdSet{"P1", "P2"}));
}

TEST(ChangeImpact, PrivateRegulationStaysInItsCountry) {
  auto c = partial_two();
  auto report = change_impact(c, "s1");
  EXPECT_FALSE(report.in_core);
  EXPECT_EQ(report.scope, ImpactScope::CountrySpecific);
  EXPECT_EQ(report.jurisdictions, (std::vector<Id>{"C1"}));
  // r_both cites g as well and is counted for both regulations.
  EXPECT_EQ(report.affected_requirements, (RequirementSet{"r_both", "r_c1", "r_c1b"}));
  EXPECT_EQ(report.affected_products, (IdSet{"P1", "P2"}));
  for (const auto& id : report.affected_requirements) {
    const auto& q = c.requirement(id);
    for (const auto& p : expand_products(c, q.applies_to_products)) {
      EXPECT_TRUE(partition_general_specific(c, p, RequirementKind::RL).specific.at("C1").contains(id)) << id << p;
    }
  }
  EXPECT_THROW(change_impact(c, "nope"), Error);
}

TEST(ChangeImpact, ScopeIsGlobalIffInCore) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_catalog(rng);
    auto shared = shared_regulations(c);
    for (const auto& r : c.regulations) {
      auto report = change_impact(c, r.id);
      EXPECT_EQ(report.in_core, shared.core.count(r.id) == 1);
      EXPECT_EQ(report.scope == ImpactScope::Global, report.in_core);
      RequirementSet expected;
      for (const auto& q : c.requirements) {
        if (q.kind == RequirementKind::RL && q.derived_from.count(r.id)) expected.insert(q.id);
      }
      EXPECT_EQ(report.affected_requirements, expected);
      if (!report.in_core) {
        for (const auto& j : report.jurisdictions) EXPECT_TRUE(shared.complements.at(j).count(r.id));
        // A requirement applying in j only must sit in specific[j] for all of its products.
        for (const auto& id : report.affected_requirements) {
          const auto& q = c.requirement(id);
          auto js = expand_jurisdictions(c, q.applies_to_jurisdictions);
          if (js.size() != 1 || c.jurisdictions.size() < 2) continue;
          for (const auto& p : expand_products(c, q.applies_to_products)) {
            EXPECT_TRUE(partition_general_specific(c, p, RequirementKind::RL).specific.at(*js.begin()).contains(id));
          }
        }
      }
    }
  }
}

TEST(ReuseCandidates, SingleProduct) {
  auto c = partial_two();
  c.products.pop_back();
  auto reuse = reuse_candidates(c);
  for (const auto& j : c.jurisdictions) {
    EXPECT_EQ(reuse.rl_min.at(j.id), requirements_for(c, "P1", j.id, RequirementKind::RL));
  }
}

TEST(ReuseCandidates, AllScopedRequirementIsSharedAcrossAll) {
  auto c = CatalogBuilder()
               .jurisdiction("C1")
               .jurisdiction("C2")
               .product("P1")
               .product("P2")
               .regulation("g", any())
               .rl("everywhere", {"g"}, any(), any())
               .rl("narrow", {"g"}, only({"P1"}), only({"C1"}))
               .build();
  auto reuse = reuse_candidates(c);
  EXPECT_EQ(reuse.shared_across_all, (RequirementSet{"everywhere"}));
  ASSERT_EQ(reuse.clusters.size(), 1u);
  EXPECT_EQ(reuse.clusters[0].requirements, (RequirementSet{"everywhere"}));
  EXPECT_EQ(reuse.clusters[0].products, (IdSet{"P1", "P2"}));
}

TEST(ReuseCandidates, SharedAcrossAllIsDoubleIntersection) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_catalog(rng);
    auto reuse = reuse_candidates(c);
    RequirementSet expected;
    for (const auto& q : c.requirements) {
      bool everywhere = q.kind == RequirementKind::RL;
      for (const auto& p : c.products) {
        for (const auto& j : c.jurisdictions) everywhere = everywhere && applies(q, p.id, j.id);
      }
      if (everywhere) expected.insert(q.id);
    }
    EXPECT_EQ(reuse.shared_across_all, expected);
    for (const auto& [j, min] : reuse.rl_min) EXPECT_TRUE(reuse.shared_across_all.is_subset_of(min));
    RequirementSet clustered;
    for (const auto& cluster : reuse.clusters) {
      EXPECT_TRUE(set_intersection(clustered, cluster.requirements).empty());
      clustered = set_union(clustered, cluster.requirements);
    }
  }
}

TEST(ReuseCandidates, NeedsProductsAndJurisdictions) {
  EXPECT_THROW(reuse_candidates(CatalogBuilder().jurisdiction("C1").build()), Error);
  EXPECT_THROW(reuse_candidates(CatalogBuilder().product("P1").build()), Error);
}

TEST(ConsistencyDiagnostics, DisjointWithSingleJurisdictionRequirementsIsQuiet) {
  EXPECT_TRUE(consistency_diagnostics(disjoint_two()).empty());
}

TEST(ConsistencyDiagnostics, CounterexampleTriggersImplicationViolated) {
  // No regulation is shared, but r cites s1 (C1) and s2 (C2) and applies in
  // both, so it lands in the general RL part of P1.
  auto c = CatalogBuilder()
               .jurisdiction("C1")
               .jurisdiction("C2")
               .product("P1")
               .regulation("s1", only({"C1"}))
               .regulation("s2", only({"C2"}))
               .rl("r", {"s1", "s2"}, any(), any())
               .build();
  ASSERT_EQ(classify_overlap(c).kind, OverlapKind::Disjoint);
  ASSERT_EQ(partition_general_specific(c, "P1", RequirementKind::RL).general, (RequirementSet{"r"}));
  auto issues = consistency_diagnostics(c);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].code, "IMPLICATION_VIOLATED");
  EXPECT_EQ(issues[0].severity, Severity::Warning);
  EXPECT_EQ(issues[0].ids, (std::vector<Id>{"P1", "r"}));

  auto report = validate_with_diagnostics(c);
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_EQ(report.warnings[0].code, "IMPLICATION_VIOLATED");
}

TEST(ConsistencyDiagnostics, IdenticalNeverWarns) {
  auto c = CatalogBuilder()
               .jurisdiction("C1")
               .jurisdiction("C2")
               .product("P1")
               .regulation("g", any())
               .rl("r", {"g"}, any(), any())
               .build();
  EXPECT_TRUE(consistency_diagnostics(c).empty());
}
