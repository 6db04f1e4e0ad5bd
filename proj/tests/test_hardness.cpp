#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "zome/hardness.hpp"
#include "zome/solve.hpp"

using namespace zome;

namespace {

bool reduced_feasible(const ReducedInstance& inst, double time_limit = 120.0) {
  SolveConfig cfg;
  cfg.time_limit_s = time_limit;
  const SolveResult r = solve(reduced_model(inst), cfg);
  REQUIRE((r.status == SolveStatus::Optimal || r.status == SolveStatus::InfeasibleProven));
  return r.status == SolveStatus::Optimal;
}

}  // namespace

TEST_CASE("partition oracle basics and DP cross-check") {
  CHECK(oracle_partition({{1, 2, 3}}));
  CHECK_FALSE(oracle_partition({{1, 1, 1}}));
  CHECK(oracle_partition({{2, 2}}));
  CHECK_FALSE(oracle_partition({{1, 1, 4}}));
  CHECK_THROWS_AS(oracle_partition({{}}), Error);
  CHECK_THROWS_AS(oracle_partition({std::vector<std::int64_t>(23, 1)}), Error);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const PartitionInstance p = testing::hardness_gen::random_partition(rng, 12);
    CHECK(oracle_partition(p) == testing::partition_dp(p.a));
  }
}

TEST_CASE("3-partition oracle basics") {
  CHECK(oracle_3partition({{3, 3, 3}, 9}));
  CHECK(oracle_3partition({{3, 3, 3, 3, 3, 3}, 9}));
  CHECK(oracle_3partition({{3, 3, 4, 3, 3, 4}, 10}));
  // (4,4,4,4,4,6) with A=13: triples can only sum to 12 or 14
  CHECK_FALSE(oracle_3partition({{4, 4, 4, 4, 4, 6}, 13}));
  // values outside (A/4, A/2) make the instance invalid
  CHECK_THROWS_AS(oracle_3partition({{3, 3, 3, 2, 4, 3}, 9}), Error);
  CHECK_THROWS_AS(oracle_3partition({std::vector<std::int64_t>(15, 10), 30}), Error);  // m=5 cap
}

TEST_CASE("partition -> DPC reduction structure") {
  const ReducedInstance inst = reduce_partition_to_dpc({{1, 1, 2, 2}});
  REQUIRE(inst.kind == ReducedKind::Dpc);
  REQUIRE(inst.das.struts.size() == 2);  // distinct values 1 and 2
  CHECK(inst.das.struts[0].budget == 2);
  CHECK(inst.das.struts[1].budget == 2);
  CHECK(inst.target == ZomePoint{3, 0, 3, 0});
  // lifted columns degenerate to beta = 0
  for (const StrutType& s : inst.das.struts)
    for (const LiftedColumn& c : s.columns) {
      CHECK(c[1] == 0);
      CHECK(c[3] == 0);
    }
  CHECK(reduced_feasible(inst));

  const ReducedInstance two = reduce_partition_to_dpc({{2, 2}});
  CHECK(two.target == ZomePoint{2, 0, 2, 0});
  CHECK(reduced_feasible(two));

  CHECK_THROWS_AS(reduce_partition_to_dpc({{1, 1, 1}}), Error);  // odd sum
}

TEST_CASE("3-partition -> DPA-S reduction structure") {
  const ThreePartitionInstance p{{3, 3, 4, 3, 3, 4}, 10};
  const ReducedInstance inst = reduce_3partition_to_dpas(p);
  REQUIRE(inst.kind == ReducedKind::Dpas);
  REQUIRE(inst.samples.size() == 3);  // p_0, p_1, p_2
  CHECK(inst.samples[0] == Vec2{0.0, 0.0});
  CHECK(inst.samples[1] == Vec2{0.0, 10.0});
  CHECK(inst.samples[2] == Vec2{10.0, 10.0});
  // below 1/2 so integral node offsets cannot drift inside the boxes
  CHECK(inst.delta > 0.0);
  CHECK(inst.delta < 0.5);
  CHECK(inst.delta < 10.0 / 4.0);
  CHECK(reduced_feasible(inst));
}

TEST_CASE("staircase points follow the floor/ceil pattern") {
  const ThreePartitionInstance p{{4, 4, 5, 4, 4, 5, 4, 4, 5}, 13};
  REQUIRE(p.valid());
  const ReducedInstance inst = reduce_3partition_to_dpas(p);
  REQUIRE(inst.samples.size() == 4);
  CHECK(inst.samples[0] == Vec2{0.0, 0.0});
  CHECK(inst.samples[1] == Vec2{0.0, 13.0});
  CHECK(inst.samples[2] == Vec2{13.0, 13.0});
  CHECK(inst.samples[3] == Vec2{13.0, 0.0});
  // all consecutive segments axis-aligned with length A
  for (std::size_t i = 0; i + 1 < inst.samples.size(); ++i) {
    const Vec2 d = inst.samples[i + 1] - inst.samples[i];
    CHECK((d.x == 0.0 || d.y == 0.0));
    CHECK(std::fabs(d.x) + std::fabs(d.y) == doctest::Approx(13.0));
  }
}

TEST_CASE("3-partition -> DCA-S: aux cases close the loop") {
  auto check_cycle = [](const ReducedInstance& inst, std::int64_t A, int m) {
    // every consecutive pair (wrapping) is axis-aligned; total length splits
    // into m main segments of length A plus exactly the budgeted aux lengths
    const std::size_t n = inst.samples.size();
    double cycle_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 d = inst.samples[(i + 1) % n] - inst.samples[i];
      CHECK((std::fabs(d.x) < 1e-9 || std::fabs(d.y) < 1e-9));
      cycle_total += std::fabs(d.x) + std::fabs(d.y);
    }
    double aux_capacity = 0.0;
    for (const StrutType& s : inst.das.struts)
      if (s.name.rfind("aux", 0) == 0) {
        const Vec2 col = s.plane_column(0);
        aux_capacity += static_cast<double>(*s.budget) * (std::fabs(col.x) + std::fabs(col.y));
      }
    CHECK(aux_capacity == doctest::Approx(cycle_total - static_cast<double>(m) * A));
  };

  // m = 1 (odd): aux lengths (0+4)A x1 and 2A x4
  {
    const ThreePartitionInstance p{{3, 3, 3}, 9};
    const ReducedInstance inst = reduce_3partition_to_dcas(p);
    REQUIRE(inst.samples.size() == 6);  // p_0..p_1 plus 4 aux
    bool saw_long = false;
    for (const StrutType& s : inst.das.struts)
      if (s.name == "aux_long") {
        saw_long = true;
        CHECK(s.plane_column(0).x == doctest::Approx(4.0 * 9.0));
        CHECK(s.budget == 1);
        CHECK(s.columns.size() == 1);  // horizontal only
      }
    CHECK(saw_long);
    check_cycle(inst, 9, 1);
    CHECK(reduced_feasible(inst));
  }
  // m = 3 (odd): aux long (1+4)A
  {
    const ThreePartitionInstance p{{4, 4, 5, 4, 4, 5, 4, 4, 5}, 13};
    const ReducedInstance inst = reduce_3partition_to_dcas(p);
    REQUIRE(inst.samples.size() == 8);
    for (const StrutType& s : inst.das.struts)
      if (s.name == "aux_long") CHECK(s.plane_column(0).x == doctest::Approx(5.0 * 13.0));
    check_cycle(inst, 13, 3);
  }
  // m = 2 (even, m/2 odd): aux 3A vertical + 2A x2 + long (1+2)A
  {
    const ThreePartitionInstance p{{3, 3, 4, 3, 3, 4}, 10};
    const ReducedInstance inst = reduce_3partition_to_dcas(p);
    REQUIRE(inst.samples.size() == 6);
    bool saw_3a = false;
    for (const StrutType& s : inst.das.struts)
      if (s.name == "aux_3A") {
        saw_3a = true;
        CHECK(s.columns.size() == 1);
        CHECK(s.plane_column(0).y == doctest::Approx(30.0));
      }
    CHECK(saw_3a);
    check_cycle(inst, 10, 2);
    CHECK(reduced_feasible(inst));
  }
  // m = 4 (even, m/2 even): no 3A type, 2A budget 3
  {
    std::mt19937_64 rng(911);
    const ThreePartitionInstance p = testing::hardness_gen::random_3partition(rng, 4, 16);
    const ReducedInstance inst = reduce_3partition_to_dcas(p);
    REQUIRE(inst.samples.size() == 8);  // m+1 staircase + 3 aux
    for (const StrutType& s : inst.das.struts) CHECK(s.name != "aux_3A");
    check_cycle(inst, p.A, 4);
  }
}

TEST_CASE("reduction soundness on fixed yes/no instances") {
  // DPA-S and DCA-S on a known no-instance: m=2, A=13, (4,4,4,4,4,6)
  const ThreePartitionInstance no{{4, 4, 4, 4, 4, 6}, 13};
  REQUIRE(no.valid());
  REQUIRE_FALSE(oracle_3partition(no));
  CHECK_FALSE(reduced_feasible(reduce_3partition_to_dpas(no)));
  CHECK_FALSE(reduced_feasible(reduce_3partition_to_dcas(no)));

  const ThreePartitionInstance yes{{3, 3, 4, 3, 3, 4}, 10};
  REQUIRE(oracle_3partition(yes));
  CHECK(reduced_feasible(reduce_3partition_to_dpas(yes)));
  CHECK(reduced_feasible(reduce_3partition_to_dcas(yes)));
}

TEST_CASE("reduction soundness on random instances (small batch)") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    const PartitionInstance p = testing::hardness_gen::random_partition(rng, 10, 12);
    std::int64_t total = 0;
    for (std::int64_t v : p.a) total += v;
    const bool expect = oracle_partition(p);
    if (total % 2 != 0) {
      CHECK_FALSE(expect);
      CHECK_THROWS_AS(reduce_partition_to_dpc(p), Error);
    } else {
      CHECK(reduced_feasible(reduce_partition_to_dpc(p)) == expect);
    }
  }
  for (int trial = 0; trial < 6; ++trial) {
    const ThreePartitionInstance p =
        testing::hardness_gen::random_3partition(rng, 1 + trial % 2, 20);
    const bool expect = oracle_3partition(p);
    CHECK(reduced_feasible(reduce_3partition_to_dpas(p)) == expect);
    CHECK(reduced_feasible(reduce_3partition_to_dcas(p)) == expect);
  }
}

TEST_CASE("reduced instances stay polynomially bounded") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 3);
    const ThreePartitionInstance p = testing::hardness_gen::random_3partition(rng, m, 30);
    const ReducedInstance inst = reduce_3partition_to_dcas(p);
    CHECK(inst.delta < static_cast<double>(p.A) / 4.0);
    const double poly = static_cast<double>(p.A) * (m + 4);
    for (const Vec2& s : inst.samples) {
      CHECK(std::fabs(s.x) <= poly);
      CHECK(std::fabs(s.y) <= poly);
    }
    for (const StrutType& s : inst.das.struts) {
      CHECK(std::fabs(s.plane_column(0).x) <= poly);
      CHECK(std::fabs(s.plane_column(0).y) <= poly);
    }
    // total main-path budget is 3m
    std::int64_t main_budget = 0;
    for (const StrutType& s : inst.das.struts)
      if (s.name.rfind("aux", 0) != 0) main_budget += *s.budget;
    CHECK(main_budget == 3 * m);
  }
}
