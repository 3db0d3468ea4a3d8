#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <set>

#include "generators.hpp"
#include "ohba/verifier.hpp"

using namespace ohba;

namespace {

std::vector<CanonicalAssignment> collect(const PartStructure& ps,
                                         const EnumerationConfig& cfg) {
  std::vector<CanonicalAssignment> out;
  enumerate_canonical(ps, cfg, [&](const CanonicalAssignment& a) {
    out.push_back(a);
    return true;
  });
  return out;
}

// All raw assignments: every vertex gets one k-subset of {0..pool-1}.
void for_each_raw(const PartStructure& ps, int k, int pool,
                  const std::function<void(const Instance&)>& fn) {
  std::vector<ColourSet> subsets;
  std::vector<int> pick;
  std::function<void(int, int)> choose = [&](int from, int need) {
    if (need == 0) {
      subsets.emplace_back(pick.begin(), pick.end());
      return;
    }
    for (int c = from; c <= pool - need; ++c) {
      pick.push_back(c);
      choose(c + 1, need - 1);
      pick.pop_back();
    }
  };
  choose(0, k);

  std::vector<ColourSet> lists(ps.n());
  std::function<void(int)> assign = [&](int v) {
    if (v == ps.n()) {
      fn(Instance(ps, ListAssignment::from_lists(lists)));
      return;
    }
    for (const ColourSet& s : subsets) {
      lists[v] = s;
      assign(v + 1);
    }
  };
  assign(0);
}

}  // namespace

TEST_CASE("canonical enumeration counts on the two-vertex structures") {
  EnumerationConfig cfg;
  cfg.list_size = 1;
  cfg.colour_budget = 2;
  CHECK(collect(PartStructure({1, 1}), cfg).size() == 2);
  CHECK(collect(PartStructure({2}), cfg).size() == 2);

  EnumerationConfig starved;
  starved.list_size = 3;
  starved.colour_budget = 2;
  CHECK_THROWS_AS(collect(PartStructure({1, 1}), starved), BudgetExceeded);
}

TEST_CASE("canonical enumeration is complete and irredundant") {
  struct Case {
    std::vector<int> parts;
    int k;
    int budget;
  };
  for (const Case& c : {Case{{1, 1}, 1, 3}, Case{{2}, 1, 3}, Case{{1, 2}, 1, 3},
                        Case{{1, 1}, 2, 4}, Case{{2, 2}, 2, 4},
                        Case{{1, 2}, 2, 4}, Case{{1, 1, 1}, 2, 4}}) {
    PartStructure ps(c.parts);
    EnumerationConfig cfg;
    cfg.list_size = c.k;
    cfg.colour_budget = c.budget;
    std::vector<CanonicalAssignment> stream = collect(ps, cfg);

    std::set<std::vector<std::uint32_t>> emitted;
    for (const CanonicalAssignment& a : stream) {
      CHECK(emitted.insert(a.masks).second);  // no duplicates
      // Emitted assignments are their own canonical form.
      CHECK(canonical_masks(assignment_from_masks(ps, a.masks)) == a.masks);
    }

    // Every raw assignment's canonical form appears exactly once.
    std::set<std::vector<std::uint32_t>> raw_canon;
    std::uint64_t raw_count = 0;
    for_each_raw(ps, c.k, c.budget, [&](const Instance& inst) {
      ++raw_count;
      raw_canon.insert(canonical_masks(inst));
    });
    CHECK(raw_canon == emitted);
    CHECK(raw_count > stream.size());
  }
}

TEST_CASE("canonical enumeration is deterministic and key-sorted") {
  PartStructure ps({1, 2, 2});
  EnumerationConfig cfg;
  cfg.list_size = 2;
  cfg.colour_budget = 4;
  std::vector<CanonicalAssignment> first = collect(ps, cfg);
  std::vector<CanonicalAssignment> second = collect(ps, cfg);
  REQUIRE(first.size() == second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].key == second[i].key);
  }
  for (size_t i = 1; i < first.size(); ++i) {
    CHECK(first[i - 1].masks < first[i].masks);
  }
}

TEST_CASE("verify_ohba settles k = 1 and k = 2 with no failures") {
  VerificationReport r1 = verify_ohba(1);
  CHECK(r1.complete);
  CHECK(r1.failures.empty());
  CHECK(r1.structures.size() == 3);  // (1), (2), (3)

  VerificationReport r2 = verify_ohba(2);
  CHECK(r2.complete);
  CHECK(r2.failures.empty());
  std::set<std::vector<int>> shapes;
  for (const StructureReport& s : r2.structures) {
    if (s.k == 2) shapes.insert(s.parts);
    CHECK(s.enumerated == s.pruned_common_colour + s.decided);
    CHECK(s.decided == s.colourable + s.uncolourable);
  }
  CHECK(shapes == std::set<std::vector<int>>{
                      {1, 1}, {1, 2}, {1, 3}, {2, 2}, {1, 4}, {2, 3}});
}

TEST_CASE("pruning rules do not change the verified outcome") {
  VerificationReport with = verify_ohba(2);
  VerifyConfig off;
  off.cap_prune = false;
  off.universe_prune = false;
  VerificationReport without = verify_ohba(2, off);
  CHECK(with.failures.empty());
  CHECK(without.failures.empty());
  for (const StructureReport& s : without.structures) {
    CHECK(s.pruned_common_colour == 0);
    CHECK(s.decided == s.enumerated);
  }
  // The unpruned run enumerates at least as much everywhere.
  REQUIRE(with.structures.size() == without.structures.size());
  for (size_t i = 0; i < with.structures.size(); ++i) {
    CHECK(with.structures[i].parts == without.structures[i].parts);
    CHECK(without.structures[i].enumerated >= with.structures[i].enumerated);
  }
}

TEST_CASE("sampled pruned assignments are colourable via the reduction") {
  VerifyConfig config;
  config.spot_check_pruned = 40;
  config.seed = 99;
  VerificationReport report = verify_ohba(2, config);
  CHECK(report.spot_checks_run == 40);
  CHECK(report.spot_check_failures == 0);
}

TEST_CASE("the cache makes reruns identical and cheaper") {
  std::string path = "verify_cache_test.jsonl";
  std::remove(path.c_str());
  VerifyConfig config;
  config.cache_path = path;
  VerificationReport cold = verify_ohba(2, config);
  VerificationReport warm = verify_ohba(2, config);
  std::uint64_t cold_hits = 0, warm_hits = 0, warm_decided = 0;
  for (const StructureReport& s : cold.structures) cold_hits += s.cache_hits;
  for (const StructureReport& s : warm.structures) {
    warm_hits += s.cache_hits;
    warm_decided += s.decided;
  }
  CHECK(cold_hits == 0);
  CHECK(warm_hits == warm_decided);
  Json a = report_to_json(cold);
  Json b = report_to_json(warm);
  a.erase("timing");
  b.erase("timing");
  CHECK(a.dump() == b.dump());
  std::remove(path.c_str());
}

TEST_CASE("restricting to n = 2k+1 keeps only the top structures at k") {
  VerifyConfig config;
  config.restrict_to_full_n = true;
  VerificationReport report = verify_ohba(2, config);
  for (const StructureReport& s : report.structures) {
    if (s.k == 2) CHECK(s.n == 5);
  }
  CHECK(report.failures.empty());
}

TEST_CASE("a tiny time budget produces a partial report") {
  VerifyConfig config;
  config.time_budget_seconds = 1e-9;
  VerificationReport report = verify_ohba(3, config);
  CHECK_FALSE(report.complete);
}

TEST_CASE("a partial run resumes to completion through the cache") {
  std::string path = "verify_resume_test.jsonl";
  std::remove(path.c_str());
  VerifyConfig partial;
  partial.cache_path = path;
  partial.time_budget_seconds = 1e-9;
  VerificationReport first = verify_ohba(2, partial);
  CHECK_FALSE(first.complete);

  VerifyConfig resume;
  resume.cache_path = path;
  VerificationReport second = verify_ohba(2, resume);
  CHECK(second.complete);
  CHECK(second.failures.empty());
  // The resumed run matches a fresh full run.
  Json resumed = report_to_json(second);
  Json fresh = report_to_json(verify_ohba(2));
  resumed.erase("timing");
  fresh.erase("timing");
  CHECK(resumed.dump() == fresh.dump());
  std::remove(path.c_str());
}

TEST_CASE("workers split the deciding without changing the report") {
  VerifyConfig threaded;
  threaded.workers = 4;
  VerificationReport a = verify_ohba(2, threaded);
  VerificationReport b = verify_ohba(2);
  Json ja = report_to_json(a);
  Json jb = report_to_json(b);
  ja.erase("timing");
  jb.erase("timing");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("search_non_choosable finds the tight six-vertex families") {
  SearchResult r33 = search_non_choosable(PartStructure({3, 3}), 2);
  CHECK_FALSE(r33.witnesses.empty());
  for (const Instance& w : r33.witnesses) {
    CHECK(decide(w).verdict == Verdict::UNCOLOURABLE);
    CHECK(brute_force_decide(w).verdict == Verdict::UNCOLOURABLE);
  }
  // The classical pattern appears up to symmetry.
  Instance ert = make_instance(
      {3, 3}, {{1, 2}, {1, 3}, {2, 3}, {1, 2}, {1, 3}, {2, 3}});
  std::vector<std::uint32_t> ert_canon = canonical_masks(ert);
  bool contains_ert = false;
  for (const Instance& w : r33.witnesses) {
    if (w.structure == ert.structure && canonical_masks(w) == ert_canon) {
      contains_ert = true;
    }
  }
  CHECK(contains_ert);

  CHECK_FALSE(search_non_choosable(PartStructure({2, 4}), 2).witnesses.empty());
  CHECK(search_non_choosable(PartStructure({1, 5}), 2).witnesses.empty());
}

TEST_CASE("badness lifts through private-colour vertices") {
  // (1,3,3) at list size 2 is defeatable directly (it needs three colours)
  // and also inherits badness from its (3,3) child; the child witness is
  // lifted with a fresh private list.
  SearchResult r = search_non_choosable(PartStructure({1, 3, 3}), 2);
  REQUIRE_FALSE(r.witnesses.empty());
  bool lifted = false;
  for (const Instance& w : r.witnesses) {
    FrequencyReport rep = classify_colours(w);
    for (int avail : rep.availability) lifted |= avail == 1;
  }
  CHECK(lifted);
}

TEST_CASE("list chromatic numbers of the small complete bipartite graphs") {
  CHECK(list_chromatic_number(PartStructure({2, 2}), 4) == 2);
  CHECK_THROWS_AS(list_chromatic_number(PartStructure({3, 3}), 2),
                  BudgetExceeded);
}
