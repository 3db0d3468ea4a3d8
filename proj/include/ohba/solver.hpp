#pragma once

#include <cstdint>
#include <functional>

#include "ohba/instance.hpp"

// Exact L-colourability decision.
//
// `decide` backtracks over colour assignments part by part. The load-bearing
// structural fact: in a complete multipartite graph every colour class lies
// inside a single part, so a colour is committed to the first part that uses
// it and becomes unavailable everywhere else. Parts are visited in
// decreasing size (ties by index), colours tried in increasing identifier.
//
// `brute_force_decide` is the independent oracle: it enumerates
// list-respecting assignments directly against the adjacency definition and
// shares no search logic with `decide`.

namespace ohba {

enum class Verdict { COLOURABLE, UNCOLOURABLE };

struct DecideResult {
  Verdict verdict = Verdict::UNCOLOURABLE;
  // Present iff COLOURABLE; passes check_colouring with acceptable = total.
  std::optional<Colouring> witness;
  std::uint64_t nodes_explored = 0;
};

struct DecideOptions {
  // Hall-condition pruning over the parts still to be coloured. Purely an
  // optimization; verdicts do not depend on it.
  bool hall_pruning = true;
};

namespace detail {

struct DecideState {
  const Instance* inst = nullptr;
  std::vector<int> part_order;    // parts, largest first
  std::vector<int> vertex_order;  // vertices grouped by part_order
  // boundary[pos] = index into part_order when vertex_order[pos] starts a
  // new part, else -1.
  std::vector<int> boundary;
  std::vector<std::vector<int>> dense_lists;  // per vertex, dense colour ids
  std::vector<int> owner;   // dense colour id -> owning part or -1
  std::vector<int> chosen;  // per position, dense colour picked
  std::uint64_t nodes = 0;
  bool hall_pruning = true;
};

// Necessary condition for extendability: every part still to be coloured
// needs at least one unused colour drawn from its members' lists, all
// distinct across parts (colour classes never cross parts). Vertices of
// singleton parts are exactly the classes forced to be singletons.
inline bool remaining_parts_matchable(const DecideState& st,
                                      size_t next_ordered_part) {
  const Instance& inst = *st.inst;
  std::vector<std::vector<int>> rows;
  for (size_t oi = next_ordered_part; oi < st.part_order.size(); ++oi) {
    int p = st.part_order[oi];
    std::vector<int> row;
    for (int v = inst.structure.part_begin(p); v < inst.structure.part_end(p);
         ++v) {
      for (int c : st.dense_lists[v]) {
        if (st.owner[c] < 0) row.push_back(c);
      }
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    if (row.empty()) return false;
    rows.push_back(std::move(row));
  }
  int num_colours = static_cast<int>(st.owner.size());
  std::vector<int> match_right(num_colours, -1);
  std::vector<char> seen(num_colours);
  std::function<bool(int)> try_augment = [&](int u) {
    for (int r : rows[u]) {
      if (seen[r]) continue;
      seen[r] = 1;
      if (match_right[r] < 0 || try_augment(match_right[r])) {
        match_right[r] = u;
        return true;
      }
    }
    return false;
  };
  for (int u = 0; u < static_cast<int>(rows.size()); ++u) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!try_augment(u)) return false;
  }
  return true;
}

inline bool decide_rec(DecideState& st, int pos) {
  const Instance& inst = *st.inst;
  if (pos == inst.n()) return true;
  ++st.nodes;
  int boundary = st.boundary[pos];
  if (boundary >= 0 && st.hall_pruning &&
      !remaining_parts_matchable(st, static_cast<size_t>(boundary))) {
    return false;
  }
  int v = st.vertex_order[pos];
  int part = inst.structure.part_of(v);
  for (int c : st.dense_lists[v]) {
    if (st.owner[c] >= 0 && st.owner[c] != part) continue;
    int prev = st.owner[c];
    st.owner[c] = part;
    st.chosen[pos] = c;
    if (decide_rec(st, pos + 1)) return true;
    st.owner[c] = prev;
  }
  return false;
}

}  // namespace detail

inline DecideResult decide(const Instance& inst,
                           const DecideOptions& opts = {}) {
  detail::DecideState st;
  st.inst = &inst;
  st.hall_pruning = opts.hall_pruning;

  st.part_order.resize(inst.k());
  for (int p = 0; p < inst.k(); ++p) st.part_order[p] = p;
  std::stable_sort(st.part_order.begin(), st.part_order.end(),
                   [&](int a, int b) {
                     return inst.structure.part_size(a) >
                            inst.structure.part_size(b);
                   });
  st.boundary.assign(inst.n(), -1);
  for (size_t oi = 0; oi < st.part_order.size(); ++oi) {
    int p = st.part_order[oi];
    st.boundary[st.vertex_order.size()] = static_cast<int>(oi);
    for (int v = inst.structure.part_begin(p); v < inst.structure.part_end(p);
         ++v) {
      st.vertex_order.push_back(v);
    }
  }

  const ColourSet& universe = inst.universe();
  st.dense_lists.resize(inst.n());
  for (int v = 0; v < inst.n(); ++v) {
    for (Colour c : inst.list(v)) {
      auto it = std::lower_bound(universe.begin(), universe.end(), c);
      st.dense_lists[v].push_back(static_cast<int>(it - universe.begin()));
    }
  }
  st.owner.assign(universe.size(), -1);
  st.chosen.assign(inst.n(), -1);

  DecideResult result;
  if (detail::decide_rec(st, 0)) {
    result.verdict = Verdict::COLOURABLE;
    Colouring witness(inst.n());
    for (int pos = 0; pos < inst.n(); ++pos) {
      witness.colours[st.vertex_order[pos]] = universe[st.chosen[pos]];
    }
    ColouringVerdict v = check_colouring(inst, witness);
    if (!v.acceptable || !v.total) {
      throw InvariantViolation("decide produced an invalid witness");
    }
    result.witness = std::move(witness);
  }
  result.nodes_explored = st.nodes;
  return result;
}

struct BruteForceOptions {
  // Upper bound on the product of list sizes the enumeration will accept.
  std::uint64_t budget = 10'000'000;
};

inline DecideResult brute_force_decide(const Instance& inst,
                                       const BruteForceOptions& opts = {}) {
  std::uint64_t product = 1;
  for (int v = 0; v < inst.n(); ++v) {
    if (inst.list(v).empty()) {
      DecideResult r;
      r.verdict = Verdict::UNCOLOURABLE;
      return r;
    }
    product *= inst.list(v).size();
    if (product > opts.budget) {
      throw BudgetExceeded("assignment space " + std::to_string(product) +
                           "+ exceeds brute-force budget " +
                           std::to_string(opts.budget));
    }
  }

  DecideResult result;
  std::vector<Colour> current(inst.n());
  std::function<bool(int)> enumerate = [&](int v) -> bool {
    ++result.nodes_explored;
    if (v == inst.n()) return true;
    for (Colour c : inst.list(v)) {
      bool clash = false;
      for (int u = 0; u < v; ++u) {
        if (current[u] == c && inst.structure.adjacent(u, v)) {
          clash = true;
          break;
        }
      }
      if (clash) continue;
      current[v] = c;
      if (enumerate(v + 1)) return true;
    }
    return false;
  };
  if (enumerate(0)) {
    result.verdict = Verdict::COLOURABLE;
    Colouring witness = Colouring::total(current);
    ColouringVerdict v = check_colouring(inst, witness);
    if (!v.acceptable || !v.total) {
      throw InvariantViolation("brute force produced an invalid witness");
    }
    result.witness = std::move(witness);
  }
  return result;
}

}  // namespace ohba
