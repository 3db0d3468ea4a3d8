#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "ohba/instance.hpp"
#include "ohba/json_io.hpp"

using namespace ohba;

namespace {

// Definition-level re-check, independent of check_colouring's bookkeeping.
bool naive_acceptable(const Instance& inst, const Colouring& col) {
  for (int u = 0; u < inst.n(); ++u) {
    for (int v = 0; v < inst.n(); ++v) {
      if (u == v || !col.colours[u] || !col.colours[v]) continue;
      if (inst.structure.part_of(u) != inst.structure.part_of(v) &&
          *col.colours[u] == *col.colours[v]) {
        return false;
      }
    }
  }
  for (int v = 0; v < inst.n(); ++v) {
    if (!col.colours[v]) continue;
    bool found = false;
    for (Colour c : inst.list(v)) found |= (c == *col.colours[v]);
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parse_instance handles the documented shapes") {
  Instance k11 = parse_instance(R"({"parts":[1,1],"lists":[[1],[1]]})");
  CHECK(k11.k() == 2);
  CHECK(k11.n() == 2);
  CHECK(k11.list(0) == ColourSet{1});
  CHECK(k11.universe() == ColourSet{1});

  Instance ert = parse_instance(
      R"({"parts":[3,3],"lists":[[1,2],[1,3],[2,3],[1,2],[1,3],[2,3]]})");
  CHECK(ert.n() == 6);
  CHECK(ert.universe() == ColourSet{1, 2, 3});
  CHECK(ert.structure.part_of(2) == 0);
  CHECK(ert.structure.part_of(3) == 1);

  CHECK_THROWS_AS(parse_instance(R"({"parts":[2],"lists":[[1],[1],[1]]})"),
                  StructuralError);
  CHECK_THROWS_AS(parse_instance(R"({"parts":[0,2],"lists":[[1],[1]]})"),
                  StructuralError);
  CHECK_THROWS_AS(parse_instance("{oops"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"parts":[1],"lists":[[1,1]]})"),
                  StructuralError);
  CHECK_THROWS_AS(parse_instance(R"({"parts":[1],"lists":[[-3]]})"),
                  StructuralError);
}

TEST_CASE("parse then serialize round-trips") {
  ohba_test::Rng rng(20240811);
  for (int trial = 0; trial < 200; ++trial) {
    Instance inst = ohba_test::random_instance(rng, 8, 6);
    Instance back = parse_instance(serialize_instance(inst));
    CHECK(back.structure.part_sizes() == inst.structure.part_sizes());
    for (int v = 0; v < inst.n(); ++v) CHECK(back.list(v) == inst.list(v));
    CHECK(back.universe() == inst.universe());
  }
}

TEST_CASE("check_colouring verdicts match the definitions") {
  Instance k11 = make_instance({1, 1}, {{1}, {1}});
  Colouring same = Colouring::total({1, 1});
  ColouringVerdict v1 = check_colouring(k11, same);
  CHECK_FALSE(v1.proper);
  CHECK_FALSE(v1.acceptable);
  CHECK(v1.total);
  CHECK_FALSE(v1.violations.empty());

  Instance stable = make_instance({2}, {{1}, {2}});
  ColouringVerdict v2 = check_colouring(stable, Colouring::total({1, 1}));
  CHECK(v2.proper);
  CHECK_FALSE(v2.acceptable);
  REQUIRE(v2.violations.size() == 1);
  CHECK(v2.violations[0].vertex == 1);

  Instance mixed = make_instance({1, 2}, {{1, 2}, {1, 3}, {2, 3}});
  ColouringVerdict v3 = check_colouring(mixed, Colouring::total({1, 3, 3}));
  CHECK(v3.proper);
  CHECK(v3.acceptable);
  CHECK(v3.total);
  CHECK(v3.violations.empty());

  Colouring partial(3);
  partial.colours[0] = 1;
  ColouringVerdict v4 = check_colouring(mixed, partial);
  CHECK_FALSE(v4.total);
  CHECK(v4.proper);
  CHECK(v4.acceptable);
}

TEST_CASE("check_colouring agrees with a naive definition check") {
  ohba_test::Rng rng(77001);
  for (int trial = 0; trial < 500; ++trial) {
    Instance inst = ohba_test::random_instance(rng, 7, 5);
    Colouring col(inst.n());
    for (int v = 0; v < inst.n(); ++v) {
      int roll = ohba_test::pick(rng, 0, 3);
      if (roll == 0) continue;  // leave uncoloured
      if (roll == 1) {
        col.colours[v] = ohba_test::pick(rng, 0, 5);  // possibly off-list
      } else {
        const ColourSet& l = inst.list(v);
        col.colours[v] = l[ohba_test::pick(rng, 0, l.size() - 1)];
      }
    }
    ColouringVerdict verdict = check_colouring(inst, col);
    CHECK(verdict.acceptable == naive_acceptable(inst, col));
    CHECK((verdict.proper && verdict.acceptable && verdict.total) ==
          verdict.violations.empty());
    if (verdict.acceptable) CHECK(verdict.proper);
  }
}

TEST_CASE("derived_quantities per the definitions") {
  Instance a = make_instance({3, 3, 1}, {{1, 2, 3},
                                         {1, 2, 3},
                                         {1, 2, 3},
                                         {1, 2, 3},
                                         {1, 2, 3},
                                         {1, 2, 3},
                                         {1, 2, 3}});
  DerivedQuantities qa = derived_quantities(a);
  CHECK(qa.gamma == 4);
  CHECK(qa.b == 2);
  CHECK(qa.singletons == std::vector<int>{6});

  Instance b = make_instance({1, 1}, {{1, 2}, {3, 4}});
  DerivedQuantities qb = derived_quantities(b);
  CHECK(qb.gamma == -2);
  CHECK(qb.b == 0);

  Instance c = make_instance({2, 3}, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {2, 4}});
  CHECK(derived_quantities(c).gamma == 1);
}

TEST_CASE("gamma plus universe size always equals n") {
  ohba_test::Rng rng(5150);
  for (int trial = 0; trial < 300; ++trial) {
    Instance inst = ohba_test::random_instance(rng, 9, 7);
    DerivedQuantities q = derived_quantities(inst);
    CHECK(q.gamma + static_cast<int>(inst.universe().size()) == inst.n());
  }
}
