#pragma once

#include "ohba/json_io.hpp"
#include "ohba/matching.hpp"
#include "ohba/solver.hpp"
#include "ohba/transforms.hpp"

// List saturation and the counting ledger.
//
// `saturate` grows an uncolourable assignment, one colour at a time, until
// every single-colour enlargement becomes colourable. `audit_ledger`
// evaluates every counting fact the theory derives for a hypothetical
// counterexample and reports which ones an instance satisfies; it never
// asserts. Every uncolourable instance must fail at least one of the shape
// hypotheses (n <= 2k+1 and lists >= k) or the theorem itself is in
// trouble; `counterexample_hypotheses_satisfied` is the test hook for that
// standing impossibility.

namespace ohba {

inline bool min_list_size_at_least(const Instance& inst, int k) {
  for (int v = 0; v < inst.n(); ++v) {
    if (static_cast<int>(inst.list(v).size()) < k) return false;
  }
  return true;
}

inline bool counterexample_hypotheses_satisfied(const Instance& inst,
                                                Verdict verdict) {
  return verdict == Verdict::UNCOLOURABLE && inst.n() <= 2 * inst.k() + 1 &&
         min_list_size_at_least(inst, inst.k());
}

// Repeatedly add a colour of C to some list whenever the enlarged instance
// stays uncolourable; the scan restarts after each addition so the output
// is the canonical (scan-order) maximal bad assignment. C stays fixed.
inline Instance saturate(const Instance& inst) {
  if (decide(inst).verdict == Verdict::COLOURABLE) {
    throw ContractViolation("saturate needs an uncolourable instance");
  }
  const ColourSet universe = inst.universe();
  std::vector<ColourSet> lists = inst.assignment.lists;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int v = 0; v < inst.n() && !grew; ++v) {
      for (Colour c : universe) {
        if (set_contains(lists[v], c)) continue;
        std::vector<ColourSet> enlarged = lists;
        set_insert(enlarged[v], c);
        Instance candidate =
            make_instance(inst.structure.part_sizes(), enlarged);
        if (decide(candidate).verdict == Verdict::UNCOLOURABLE) {
          lists = std::move(enlarged);
          grew = true;
          break;
        }
      }
    }
  }
  return make_instance(inst.structure.part_sizes(), lists);
}

inline bool is_maximal_bad(const Instance& inst) {
  if (decide(inst).verdict == Verdict::COLOURABLE) return false;
  for (int v = 0; v < inst.n(); ++v) {
    for (Colour c : inst.universe()) {
      if (set_contains(inst.list(v), c)) continue;
      std::vector<ColourSet> enlarged = inst.assignment.lists;
      set_insert(enlarged[v], c);
      if (decide(make_instance(inst.structure.part_sizes(), enlarged))
              .verdict == Verdict::UNCOLOURABLE) {
        return false;
      }
    }
  }
  return true;
}

struct StrongSetResult {
  std::vector<int> X;       // singletons whose classes sit in S
  Colouring colouring;      // the surjective colouring behind S
  int size_lower_bound = 0;  // k+1-b-gamma
  bool size_bound_holds = false;
  int union_size = 0;        // |union of L(v) over X|
  int union_upper_bound = 0;  // 2k - |N_B(c_star)|
  bool union_bound_holds = false;
};

// The singleton-extraction construction: enlarge one singleton's list by
// c_star, colour the enlarged instance, repair to surjectivity, and collect
// the singletons whose classes land in a maximum-deficiency set. Bounds are
// reported, not asserted: an instance satisfying every counting hypothesis
// at once cannot exist.
inline StrongSetResult strong_set(const Instance& inst, Colour c_star) {
  if (!set_contains(inst.universe(), c_star)) {
    throw ContractViolation("c_star is not in the colour universe");
  }
  if (decide(inst).verdict == Verdict::COLOURABLE) {
    throw ContractViolation("strong_set needs an uncolourable instance");
  }
  if (!is_maximal_bad(inst)) {
    throw ContractViolation("strong_set needs a maximal bad assignment");
  }
  DerivedQuantities q = derived_quantities(inst);
  int x = -1;
  for (int s : q.singletons) {
    if (!set_contains(inst.list(s), c_star)) {
      x = s;
      break;
    }
  }
  if (x < 0) {
    throw ContractViolation("c_star appears in every singleton's list");
  }

  std::vector<ColourSet> enlarged = inst.assignment.lists;
  set_insert(enlarged[x], c_star);
  Instance star = make_instance(inst.structure.part_sizes(), enlarged);
  DecideResult r = decide(star);
  if (r.verdict != Verdict::COLOURABLE) {
    throw InvariantViolation("maximality promised a colourable enlargement");
  }
  if (*r.witness->colours[x] != c_star) {
    throw InvariantViolation(
        "enlarged-instance colouring dodged the added colour");
  }

  SaturatingInjection h = saturating_injection(inst);
  if (!h.found) {
    throw HypothesisError("no injection saturating the colour universe");
  }
  Colouring g = surjectivize(inst, *r.witness, h);

  BfResult bf = build_Bf(inst, g);
  Matching m = max_matching(bf.graph);
  if (m.saturates_left(bf.graph)) {
    throw InvariantViolation(
        "class matching saturates for an uncolourable instance");
  }
  DeficiencySet s = max_deficiency_set(bf.graph);

  StrongSetResult out;
  out.colouring = g;
  std::vector<char> is_singleton(inst.n(), 0);
  for (int v : q.singletons) is_singleton[v] = 1;
  for (int l : s.set) {
    if (bf.graph.left[l].size() == 1 && is_singleton[bf.graph.left[l][0]]) {
      out.X.push_back(bf.graph.left[l][0]);
    }
  }
  std::sort(out.X.begin(), out.X.end());

  out.size_lower_bound = inst.k() + 1 - q.b - q.gamma;
  out.size_bound_holds =
      static_cast<int>(out.X.size()) >= out.size_lower_bound;
  ColourSet lists_union;
  for (int v : out.X) lists_union = set_union(lists_union, inst.list(v));
  out.union_size = static_cast<int>(lists_union.size());
  int availability = 0;
  for (int v = 0; v < inst.n(); ++v) {
    availability += set_contains(inst.list(v), c_star) ? 1 : 0;
  }
  out.union_upper_bound = 2 * inst.k() - availability;
  out.union_bound_holds = out.union_size <= out.union_upper_bound;
  return out;
}

struct LedgerCheck {
  std::string name;
  bool defined = false;
  bool holds = false;
  std::vector<std::pair<std::string, long long>> values;
  std::string note;  // why undefined, when undefined
};

struct AuditLedger {
  int k = 0;
  int n = 0;
  int gamma = 0;
  int b = 0;
  int singleton_count = 0;
  Verdict verdict = Verdict::COLOURABLE;
  std::optional<bool> maximal;  // computed only for uncolourable instances
  ColourSet frequent;
  ColourSet globally_frequent;
  std::optional<Colour> c_star;  // non-frequent, largest availability
  std::optional<int> beta;       // k - |N_B(c_star)|
  std::optional<std::vector<int>> X;
  std::string x_note;
  std::optional<ColourSet> Z;
  std::optional<ColourSet> Y;
  std::optional<Colour> c_prime;
  std::vector<LedgerCheck> checks;
  // Shape hypotheses the instance fails; every uncolourable instance must
  // fail at least one.
  std::vector<std::string> hypotheses_failed;
  std::string status;
};

namespace detail {

inline LedgerCheck simple_check(
    std::string name, bool holds,
    std::vector<std::pair<std::string, long long>> values) {
  LedgerCheck c;
  c.name = std::move(name);
  c.defined = true;
  c.holds = holds;
  c.values = std::move(values);
  return c;
}

}  // namespace detail

inline AuditLedger audit_ledger(const Instance& inst) {
  AuditLedger ledger;
  ledger.k = inst.k();
  ledger.n = inst.n();
  DerivedQuantities q = derived_quantities(inst);
  ledger.gamma = q.gamma;
  ledger.b = q.b;
  ledger.singleton_count = static_cast<int>(q.singletons.size());
  FrequencyReport freq = classify_colours(inst);
  ledger.frequent = freq.frequent;
  ledger.globally_frequent = freq.globally_frequent;
  const ColourSet& universe = inst.universe();
  const int k = ledger.k;
  const int n = ledger.n;

  DecideResult decided = decide(inst);
  ledger.verdict = decided.verdict;
  if (ledger.verdict == Verdict::UNCOLOURABLE) {
    ledger.maximal = is_maximal_bad(inst);
  }

  int min_list = n == 0 ? 0 : static_cast<int>(inst.list(0).size());
  for (int v = 0; v < n; ++v) {
    min_list = std::min(min_list, static_cast<int>(inst.list(v).size()));
  }
  ledger.checks.push_back(detail::simple_check(
      "lists_at_least_k", min_list >= k,
      {{"min_list", min_list}, {"k", k}}));
  ledger.checks.push_back(detail::simple_check(
      "n_at_most_2k_plus_1", n <= 2 * k + 1, {{"n", n}, {"k", k}}));

  bool cap_ok = true;
  for (int p = 0; p < k; ++p) {
    if (inst.structure.part_size(p) < 2) continue;
    ColourSet common = inst.list(inst.structure.part_begin(p));
    for (int v = inst.structure.part_begin(p) + 1;
         v < inst.structure.part_end(p); ++v) {
      common = set_intersection(common, inst.list(v));
    }
    if (!common.empty()) cap_ok = false;
  }
  ledger.checks.push_back(detail::simple_check(
      "multi_part_lists_share_no_colour", cap_ok, {{"b", ledger.b}}));

  ledger.checks.push_back(detail::simple_check(
      "universe_smaller_than_n",
      static_cast<int>(universe.size()) < n,
      {{"universe", static_cast<long long>(universe.size())}, {"n", n}}));

  bool disjoint_ok = true;
  long long disjoint_pairs = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!set_intersection(inst.list(u), inst.list(v)).empty()) continue;
      ++disjoint_pairs;
      if (set_union(inst.list(u), inst.list(v)) != universe ||
          static_cast<int>(universe.size()) != 2 * k) {
        disjoint_ok = false;
      }
    }
  }
  ledger.checks.push_back(detail::simple_check(
      "disjoint_pair_forces_universe", disjoint_ok,
      {{"disjoint_pairs", disjoint_pairs},
       {"universe", static_cast<long long>(universe.size())}}));

  ledger.checks.push_back(detail::simple_check(
      "n_equals_2k_plus_1", n == 2 * k + 1, {{"n", n}, {"k", k}}));

  long long f_size = static_cast<long long>(ledger.frequent.size());
  ledger.checks.push_back(detail::simple_check(
      "fewer_frequent_than_multi_parts", f_size < ledger.b,
      {{"frequent", f_size}, {"b", ledger.b}}));

  ledger.checks.push_back(detail::simple_check(
      "singletons_at_least_gamma", ledger.singleton_count >= ledger.gamma,
      {{"singletons", ledger.singleton_count}, {"gamma", ledger.gamma}}));

  ledger.checks.push_back(detail::simple_check(
      "gamma_plus_b_at_most_k", ledger.gamma + ledger.b <= k,
      {{"gamma", ledger.gamma}, {"b", ledger.b}, {"k", k}}));

  bool no_size_two = true;
  for (int p = 0; p < k; ++p) {
    if (inst.structure.part_size(p) == 2) no_size_two = false;
  }
  ledger.checks.push_back(
      detail::simple_check("no_size_two_part", no_size_two, {}));

  ledger.checks.push_back(detail::simple_check(
      "b_at_most_half_k_plus_1", 2 * ledger.b <= k + 1,
      {{"b", ledger.b}, {"k", k}}));

  long long fp_size = static_cast<long long>(ledger.globally_frequent.size());
  ledger.checks.push_back(detail::simple_check(
      "globally_frequent_lower_bound",
      fp_size * (k + 1 - ledger.b) >= static_cast<long long>(k) * ledger.gamma,
      {{"globally_frequent", fp_size},
       {"k", k},
       {"b", ledger.b},
       {"gamma", ledger.gamma}}));

  ledger.checks.push_back(detail::simple_check(
      "two_gamma_below_k_plus_1_minus_b",
      2 * ledger.gamma < k + 1 - ledger.b,
      {{"gamma", ledger.gamma}, {"b", ledger.b}, {"k", k}}));

  bool common_ok = true;
  for (Colour c : ledger.frequent) {
    for (int s : q.singletons) {
      if (!set_contains(inst.list(s), c)) common_ok = false;
    }
  }
  ledger.checks.push_back(detail::simple_check(
      "frequent_in_every_singleton_list", common_ok,
      {{"frequent", f_size},
       {"singletons", ledger.singleton_count}}));

  // c*: non-frequent colour with the largest availability, least id ties.
  {
    int best_avail = -1;
    Colour best = -1;
    for (size_t i = 0; i < universe.size(); ++i) {
      if (set_contains(ledger.frequent, universe[i])) continue;
      if (freq.availability[i] > best_avail) {
        best_avail = freq.availability[i];
        best = universe[i];
      }
    }
    if (best >= 0) {
      ledger.c_star = best;
      ledger.beta = k - best_avail;
    }
  }

  LedgerCheck beta_check;
  beta_check.name = "beta_nonnegative";
  if (ledger.beta) {
    beta_check.defined = true;
    beta_check.holds = *ledger.beta >= 0;
    beta_check.values = {{"beta", *ledger.beta}};
  } else {
    beta_check.note = "every colour is frequent; c_star undefined";
  }
  ledger.checks.push_back(beta_check);

  // The strong-set chain needs an uncolourable maximal instance and a
  // singleton missing c_star.
  if (!ledger.c_star) {
    ledger.x_note = "c_star undefined";
  } else if (ledger.verdict == Verdict::COLOURABLE) {
    ledger.x_note = "instance colourable; counterexample frame vacuous";
  } else if (!*ledger.maximal) {
    ledger.x_note = "instance is not a maximal bad assignment";
  } else {
    bool missing_somewhere = false;
    for (int s : q.singletons) {
      if (!set_contains(inst.list(s), *ledger.c_star)) missing_somewhere = true;
    }
    if (!missing_somewhere) {
      ledger.x_note = "c_star appears in every singleton's list";
    } else {
      try {
        StrongSetResult sres = strong_set(inst, *ledger.c_star);
        ledger.X = sres.X;
        LedgerCheck a = detail::simple_check(
            "strong_set_size", sres.size_bound_holds,
            {{"X", static_cast<long long>(sres.X.size())},
             {"lower_bound", sres.size_lower_bound}});
        ledger.checks.push_back(a);
        LedgerCheck bcheck = detail::simple_check(
            "strong_set_union", sres.union_bound_holds,
            {{"union", sres.union_size},
             {"upper_bound", sres.union_upper_bound}});
        ledger.checks.push_back(bcheck);
      } catch (const HypothesisError& e) {
        ledger.x_note = e.what();
      }
    }
  }
  if (!ledger.X) {
    for (const char* name : {"strong_set_size", "strong_set_union"}) {
      LedgerCheck c;
      c.name = name;
      c.note = ledger.x_note;
      ledger.checks.push_back(c);
    }
  }

  // Z, Y and c': the colour-frequency split over X. Candidates for Z are
  // the colours seen on X's lists plus every frequent colour, so |Z| ends
  // up as min(b-1, |candidates|).
  if (ledger.X && ledger.b >= 1 &&
      static_cast<long long>(ledger.frequent.size()) <= ledger.b - 1) {
    auto count_in_x = [&](Colour c) {
      int count = 0;
      for (int v : *ledger.X) count += set_contains(inst.list(v), c) ? 1 : 0;
      return count;
    };
    ColourSet nx;
    for (int v : *ledger.X) nx = set_union(nx, inst.list(v));
    std::vector<std::pair<std::pair<int, int>, Colour>> ranked;
    for (Colour c : set_union(nx, ledger.frequent)) {
      // Frequent colours outrank everything, then by count in X descending,
      // then least identifier.
      ranked.push_back(
          {{set_contains(ledger.frequent, c) ? 0 : 1, -count_in_x(c)}, c});
    }
    std::sort(ranked.begin(), ranked.end());
    ColourSet z;
    for (int i = 0;
         i < ledger.b - 1 && i < static_cast<int>(ranked.size()); ++i) {
      z.push_back(ranked[i].second);
    }
    ledger.Z = make_colour_set(z);
    ledger.Y = set_difference(nx, *ledger.Z);
    int best_count = -1;
    for (Colour c : *ledger.Y) {
      int count = count_in_x(c);
      if (count > best_count) {
        best_count = count;
        ledger.c_prime = c;
      }
    }

    LedgerCheck implication;
    implication.name = "cprime_meets_gamma_singletons";
    if (ledger.c_prime && ledger.beta) {
      implication.defined = true;
      bool premise =
          *ledger.beta <= 2 * (k + 1 - ledger.b - 2 * ledger.gamma);
      implication.holds = !premise || best_count >= ledger.gamma;
      implication.values = {{"beta", *ledger.beta},
                            {"cprime_hits", best_count},
                            {"gamma", ledger.gamma}};
    } else {
      implication.note = "c_prime undefined";
    }
    ledger.checks.push_back(implication);
  } else {
    LedgerCheck c;
    c.name = "cprime_meets_gamma_singletons";
    c.note = ledger.X ? "Z undefined (frequent colours exceed b-1 or b = 0)"
                      : ledger.x_note;
    ledger.checks.push_back(c);
  }

  LedgerCheck final_bound;
  final_bound.name = "beta_below_half_capacity";
  if (ledger.beta) {
    final_bound.defined = true;
    final_bound.holds =
        2 * *ledger.beta < k + 1 - ledger.b - 2 * ledger.gamma;
    final_bound.values = {{"beta", *ledger.beta},
                          {"k", k},
                          {"b", ledger.b},
                          {"gamma", ledger.gamma}};
  } else {
    final_bound.note = "c_star undefined";
  }
  ledger.checks.push_back(final_bound);

  if (min_list < k) ledger.hypotheses_failed.push_back("lists_at_least_k");
  if (n > 2 * k + 1) {
    ledger.hypotheses_failed.push_back("n_at_most_2k_plus_1");
  }
  if (ledger.verdict == Verdict::COLOURABLE) {
    ledger.status = "instance colourable; counterexample hypotheses vacuous";
  } else if (!ledger.hypotheses_failed.empty()) {
    ledger.status = "uncolourable; fails the expected shape hypotheses";
  } else {
    ledger.status =
        "uncolourable within the forbidden shape: theorem violation";
  }
  return ledger;
}

inline Json ledger_to_json(const AuditLedger& ledger) {
  Json j;
  j["k"] = ledger.k;
  j["n"] = ledger.n;
  j["gamma"] = ledger.gamma;
  j["b"] = ledger.b;
  j["singletons"] = ledger.singleton_count;
  j["verdict"] = ledger.verdict == Verdict::COLOURABLE ? "COLOURABLE"
                                                       : "UNCOLOURABLE";
  if (ledger.maximal) j["maximal"] = *ledger.maximal;
  j["frequent"] = ledger.frequent;
  j["globally_frequent"] = ledger.globally_frequent;
  if (ledger.c_star) j["c_star"] = *ledger.c_star;
  if (ledger.beta) j["beta"] = *ledger.beta;
  if (ledger.X) j["X"] = *ledger.X;
  if (!ledger.x_note.empty()) j["x_note"] = ledger.x_note;
  if (ledger.Z) j["Z"] = *ledger.Z;
  if (ledger.Y) j["Y"] = *ledger.Y;
  if (ledger.c_prime) j["c_prime"] = *ledger.c_prime;
  Json checks = Json::array();
  for (const LedgerCheck& c : ledger.checks) {
    Json jc;
    jc["name"] = c.name;
    jc["defined"] = c.defined;
    if (c.defined) {
      jc["holds"] = c.holds;
      Json values = Json::object();
      for (const auto& [key, value] : c.values) values[key] = value;
      jc["values"] = values;
    }
    if (!c.note.empty()) jc["note"] = c.note;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["hypotheses_failed"] = ledger.hypotheses_failed;
  j["status"] = ledger.status;
  return j;
}

}  // namespace ohba
