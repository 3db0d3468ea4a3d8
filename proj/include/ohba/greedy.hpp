#pragma once

#include <unordered_map>

#include "ohba/instance.hpp"
#include "ohba/transforms.hpp"

// Three-phase construction of a near-acceptable colouring when at least k
// frequent colours exist.
//
// Phase 1 computes an exact maximum acceptable partial colouring avoiding
// the k chosen frequent colours (largest vertex count, then most parts
// touched). Exactness is not optional: the phase-3 counting only binds for
// a true maximizer, so this is a full search over colour-to-part class
// commitments with memoization, guarded by a state budget.
//
// Phase 2 colours whole part remainders, largest remainder first, each with
// an unused frequent colour available to every remaining vertex. Phase 3
// either injects the leftovers into the unused frequent colours, or colours
// one same-part pair with a shared unused colour and injects the rest.

namespace ohba {

enum class Phase3Mode { NONE, INJECTION, PAIR_SPLIT };
enum class GreedyOutcome { COMPLETED, FAILED };

struct GreedyTrace {
  GreedyOutcome outcome = GreedyOutcome::FAILED;
  std::string failure_reason;
  ColourSet frequent_pool;  // every frequent colour of the instance
  ColourSet F;              // the k chosen frequent colours
  std::vector<int> V1;
  Colouring f1;
  std::vector<int> part_order;  // parts by remainder size, descending
  int i = 0;                    // parts successfully handled in phase 2
  std::vector<int> V2;
  std::vector<int> V3;
  ColourSet U;  // frequent colours untouched by phase 2
  Phase3Mode phase3_mode = Phase3Mode::NONE;
  std::optional<Colouring> final_colouring;
  bool two_hit_holds = true;  // every size-2 part meets V1
};

struct GreedyOptions {
  // Run on inputs outside the n = 2k+1 / lists >= k shape; failures then
  // come back as traces instead of exceptions.
  bool best_effort = false;
  std::uint64_t phase1_state_budget = 1u << 22;
};

struct Phase1Result {
  std::vector<int> V1;
  Colouring f1;
};

// Exact maximum acceptable partial colouring using only colours outside F;
// maximizes |V1|, then the number of parts touched.
inline Phase1Result phase1_max_partial(const Instance& inst,
                                       const ColourSet& F,
                                       std::uint64_t state_budget = 1u << 22) {
  if (inst.n() > 32) {
    throw BudgetExceeded("exact phase-1 search supports at most 32 vertices");
  }
  ColourSet rest = set_difference(inst.universe(), F);
  const int k = inst.k();
  const int num_rest = static_cast<int>(rest.size());

  // avail[c][p]: vertices of part p whose list holds rest[c].
  std::vector<std::vector<std::uint32_t>> avail(
      num_rest, std::vector<std::uint32_t>(k, 0));
  for (int v = 0; v < inst.n(); ++v) {
    for (int c = 0; c < num_rest; ++c) {
      if (set_contains(inst.list(v), rest[c])) {
        avail[c][inst.structure.part_of(v)] |= 1u << v;
      }
    }
  }
  std::vector<std::uint32_t> part_mask(k, 0);
  for (int v = 0; v < inst.n(); ++v) {
    part_mask[inst.structure.part_of(v)] |= 1u << v;
  }
  auto parts_hit = [&](std::uint32_t mask) {
    int hit = 0;
    for (int p = 0; p < k; ++p) hit += (mask & part_mask[p]) != 0;
    return hit;
  };

  using Value = std::pair<int, int>;  // (coverage, parts touched)
  std::unordered_map<std::uint64_t, Value> memo;
  std::uint64_t states = 0;

  std::function<Value(int, std::uint32_t)> best = [&](int idx,
                                                      std::uint32_t mask) {
    if (idx == num_rest) {
      return Value{__builtin_popcount(mask), parts_hit(mask)};
    }
    std::uint64_t key = (static_cast<std::uint64_t>(idx) << 32) | mask;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (++states > state_budget) {
      throw BudgetExceeded("phase-1 search exceeded its state budget");
    }
    Value out = best(idx + 1, mask);  // colour left unused
    for (int p = 0; p < k; ++p) {
      std::uint32_t can = avail[idx][p] & ~mask;
      for (std::uint32_t sub = can; sub; sub = (sub - 1) & can) {
        out = std::max(out, best(idx + 1, mask | sub));
      }
    }
    memo[key] = out;
    return out;
  };

  Value optimum = best(0, 0);

  // Reconstruct one optimal commitment: parts ascending, class candidates
  // descending by mask, leaving the colour unused as the last resort.
  Phase1Result result;
  result.f1 = Colouring(inst.n());
  std::uint32_t mask = 0;
  for (int idx = 0; idx < num_rest; ++idx) {
    Value want = best(idx, mask);
    bool placed = false;
    for (int p = 0; p < k && !placed; ++p) {
      std::uint32_t can = avail[idx][p] & ~mask;
      for (std::uint32_t sub = can; sub; sub = (sub - 1) & can) {
        if (best(idx + 1, mask | sub) == want) {
          for (int v = 0; v < inst.n(); ++v) {
            if (sub >> v & 1) result.f1.colours[v] = rest[idx];
          }
          mask |= sub;
          placed = true;
          break;
        }
      }
    }
    // If no class helps, the colour stays unused.
  }
  for (int v = 0; v < inst.n(); ++v) {
    if (result.f1.colours[v]) result.V1.push_back(v);
  }
  if (static_cast<int>(result.V1.size()) != optimum.first) {
    throw InvariantViolation("phase-1 reconstruction lost coverage");
  }
  ColouringVerdict verdict = check_colouring(inst, result.f1);
  if (!verdict.acceptable) {
    throw InvariantViolation("phase-1 colouring is not acceptable");
  }
  return result;
}

inline GreedyTrace three_phase(const Instance& inst,
                               const GreedyOptions& opts = {}) {
  const int k = inst.k();
  FrequencyReport report = classify_colours(inst);
  if (static_cast<int>(report.frequent.size()) < k) {
    throw ContractViolation("three_phase needs at least k frequent colours");
  }
  bool proof_shaped = inst.n() == 2 * k + 1;
  for (int v = 0; v < inst.n() && proof_shaped; ++v) {
    if (static_cast<int>(inst.list(v).size()) < k) proof_shaped = false;
  }
  if (!proof_shaped && !opts.best_effort) {
    throw ContractViolation(
        "three_phase outside the n = 2k+1 / lists >= k shape needs "
        "best-effort mode");
  }

  GreedyTrace trace;
  trace.frequent_pool = report.frequent;

  // F: the k frequent colours with the largest availability, ties by least
  // identifier.
  {
    std::vector<std::pair<int, Colour>> ranked;
    const ColourSet& universe = inst.universe();
    for (Colour c : report.frequent) {
      auto it = std::lower_bound(universe.begin(), universe.end(), c);
      ranked.emplace_back(-report.availability[it - universe.begin()], c);
    }
    std::sort(ranked.begin(), ranked.end());
    for (int i = 0; i < k; ++i) trace.F.push_back(ranked[i].second);
    trace.F = make_colour_set(trace.F);
  }

  Phase1Result phase1 =
      phase1_max_partial(inst, trace.F, opts.phase1_state_budget);
  trace.V1 = phase1.V1;
  trace.f1 = phase1.f1;

  std::vector<char> in_v1(inst.n(), 0);
  for (int v : trace.V1) in_v1[v] = 1;
  for (int p = 0; p < k; ++p) {
    if (inst.structure.part_size(p) != 2) continue;
    int u = inst.structure.part_begin(p);
    if (in_v1[u] || in_v1[u + 1]) continue;
    trace.two_hit_holds = false;
    // When the pair's lists are disjoint and the universe has exactly 2k
    // colours, an untouched size-2 part forces the maximizer to use every
    // colour outside F, hence at least k coloured vertices. Anything less
    // is a bug in the exact search.
    if (proof_shaped &&
        set_intersection(inst.list(u), inst.list(u + 1)).empty() &&
        static_cast<int>(inst.universe().size()) == 2 * k &&
        static_cast<int>(trace.V1.size()) < k) {
      throw InvariantViolation(
          "size-2 part untouched although the phase-1 maximum must reach k");
    }
  }

  // Remainders, largest first (ties by part index).
  std::vector<std::vector<int>> remainder(k);
  for (int v = 0; v < inst.n(); ++v) {
    if (!in_v1[v]) remainder[inst.structure.part_of(v)].push_back(v);
  }
  trace.part_order.resize(k);
  for (int p = 0; p < k; ++p) trace.part_order[p] = p;
  std::stable_sort(trace.part_order.begin(), trace.part_order.end(),
                   [&](int a, int b) {
                     return remainder[a].size() > remainder[b].size();
                   });
  for (size_t j = 1; j < trace.part_order.size(); ++j) {
    if (remainder[trace.part_order[j - 1]].size() <
        remainder[trace.part_order[j]].size()) {
      throw InvariantViolation("phase-2 part order is not sorted");
    }
  }

  Colouring work = trace.f1;
  ColourSet used_frequent;
  trace.i = 0;
  for (int p : trace.part_order) {
    ColourSet unused = set_difference(trace.F, used_frequent);
    Colour chosen = -1;
    for (Colour c : unused) {
      bool everywhere = true;
      for (int v : remainder[p]) {
        if (!set_contains(inst.list(v), c)) {
          everywhere = false;
          break;
        }
      }
      if (everywhere) {
        chosen = c;
        break;
      }
    }
    if (chosen < 0) break;
    set_insert(used_frequent, chosen);
    for (int v : remainder[p]) {
      work.colours[v] = chosen;
      trace.V2.push_back(v);
    }
    ++trace.i;
  }
  std::sort(trace.V2.begin(), trace.V2.end());
  for (int v = 0; v < inst.n(); ++v) {
    if (!work.colours[v]) trace.V3.push_back(v);
  }
  trace.U = set_difference(trace.F, used_frequent);
  if (static_cast<int>(trace.U.size()) != k - trace.i) {
    throw InvariantViolation("phase-2 colour accounting is off");
  }

  auto finish = [&](Colouring final_col, Phase3Mode mode) {
    ColouringVerdict verdict = check_colouring(inst, final_col);
    if (!verdict.proper || !verdict.total) {
      throw InvariantViolation("three-phase output is not proper and total");
    }
    if (!is_near_acceptable(inst, final_col, report).near_acceptable) {
      throw InvariantViolation("three-phase output is not near-acceptable");
    }
    trace.phase3_mode = mode;
    trace.final_colouring = std::move(final_col);
    trace.outcome = GreedyOutcome::COMPLETED;
    return trace;
  };

  if (trace.V3.empty()) {
    return finish(work, Phase3Mode::NONE);
  }

  if (trace.V3.size() <= trace.U.size()) {
    Colouring final_col = work;
    for (size_t idx = 0; idx < trace.V3.size(); ++idx) {
      final_col.colours[trace.V3[idx]] = trace.U[idx];
    }
    return finish(std::move(final_col), Phase3Mode::INJECTION);
  }

  if (trace.V3.size() == trace.U.size() + 1) {
    // One colour must cover a same-part pair; the unused frequent colours
    // are tried first, then any other unused colour of C.
    ColourSet used_all;
    for (const auto& oc : work.colours) {
      if (oc) set_insert(used_all, *oc);
    }
    ColourSet unused_rest =
        set_difference(set_difference(inst.universe(), used_all), trace.U);
    std::vector<Colour> candidates(trace.U.begin(), trace.U.end());
    candidates.insert(candidates.end(), unused_rest.begin(),
                      unused_rest.end());

    for (Colour c : candidates) {
      for (int p = 0; p < k; ++p) {
        std::vector<int> takers;
        for (int v : remainder[p]) {
          if (!work.colours[v] && set_contains(inst.list(v), c)) {
            takers.push_back(v);
          }
        }
        if (takers.size() < 2) continue;
        Colouring final_col = work;
        final_col.colours[takers[0]] = c;
        final_col.colours[takers[1]] = c;
        ColourSet targets = trace.U;
        targets = set_difference(targets, ColourSet{c});
        std::vector<int> rest_v3;
        for (int v : trace.V3) {
          if (v != takers[0] && v != takers[1]) rest_v3.push_back(v);
        }
        for (size_t idx = 0; idx < rest_v3.size(); ++idx) {
          final_col.colours[rest_v3[idx]] = targets[idx];
        }
        return finish(std::move(final_col), Phase3Mode::PAIR_SPLIT);
      }
    }
    trace.failure_reason =
        "no unused colour covers two uncoloured vertices of one part";
    return trace;
  }

  trace.failure_reason =
      "phase 3 left " + std::to_string(trace.V3.size()) +
      " vertices for " + std::to_string(trace.U.size()) + " unused colours";
  return trace;
}

}  // namespace ohba
