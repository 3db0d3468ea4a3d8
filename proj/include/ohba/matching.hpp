#pragma once

#include "ohba/instance.hpp"

// Bipartite availability graphs and the matching kernel.
//
// B pairs vertices with the colours of their lists; B_f pairs the colour
// classes of a proper colouring f with the colours common to every class
// member. Maximum matchings are found by repeated augmenting-path search
// with left nodes processed in index order, which keeps every downstream
// certificate deterministic. Maximum-deficiency sets come from the
// standard alternating-path closure over unmatched left nodes.

namespace ohba {

struct AvailabilityGraph {
  // Each left entity is a vertex set: a single vertex for B, a colour
  // class for B_f.
  std::vector<std::vector<int>> left;
  // Right side: colour identifiers, ascending.
  ColourSet right;
  // adj[i] = sorted indices into `right` available to left node i.
  std::vector<std::vector<int>> adj;

  int left_size() const { return static_cast<int>(left.size()); }
  int right_size() const { return static_cast<int>(right.size()); }
};

struct Matching {
  // (left index, right index) edges; at most one per node on either side.
  std::vector<std::pair<int, int>> pairs;

  int size() const { return static_cast<int>(pairs.size()); }
  bool saturates_left(const AvailabilityGraph& g) const {
    return size() == g.left_size();
  }
};

struct DeficiencySet {
  std::vector<int> set;            // left indices, ascending
  std::vector<int> neighbourhood;  // right indices N(set), ascending
  int deficiency = 0;              // |set| - |N(set)|
};

inline int right_index_of(const AvailabilityGraph& g, Colour c) {
  auto it = std::lower_bound(g.right.begin(), g.right.end(), c);
  if (it == g.right.end() || *it != c) return -1;
  return static_cast<int>(it - g.right.begin());
}

inline AvailabilityGraph build_B(const Instance& inst) {
  AvailabilityGraph g;
  g.right = inst.universe();
  for (int v = 0; v < inst.n(); ++v) {
    g.left.push_back({v});
    std::vector<int> row;
    for (Colour c : inst.list(v)) row.push_back(right_index_of(g, c));
    g.adj.push_back(std::move(row));
  }
  return g;
}

struct BfResult {
  AvailabilityGraph graph;
  // Colour of f that produced each left class, parallel to graph.left.
  ColourSet class_colours;
};

// Left side: the non-empty colour classes of f, in ascending colour order.
// Requires f total and proper on inst.
inline BfResult build_Bf(const Instance& inst, const Colouring& f) {
  ColouringVerdict v = check_colouring(inst, f);
  if (!v.total || !v.proper) {
    throw ContractViolation("B_f needs a total proper colouring");
  }
  BfResult out;
  out.graph.right = inst.universe();
  for (const auto& [colour, members] : f.classes()) {
    ColourSet common = inst.list(members.front());
    for (size_t i = 1; i < members.size(); ++i) {
      common = set_intersection(common, inst.list(members[i]));
    }
    out.graph.left.push_back(members);
    std::vector<int> row;
    for (Colour c : common) row.push_back(right_index_of(out.graph, c));
    out.graph.adj.push_back(std::move(row));
    out.class_colours.push_back(colour);
  }
  return out;
}

namespace detail {

inline bool augment(const AvailabilityGraph& g, int u,
                    std::vector<int>& match_right, std::vector<char>& seen) {
  for (int r : g.adj[u]) {
    if (seen[r]) continue;
    seen[r] = 1;
    if (match_right[r] < 0 || augment(g, match_right[r], match_right, seen)) {
      match_right[r] = u;
      return true;
    }
  }
  return false;
}

// match_right[r] = left node matched to right r, or -1.
inline std::vector<int> kuhn(const AvailabilityGraph& g) {
  std::vector<int> match_right(g.right_size(), -1);
  std::vector<char> seen(g.right_size());
  for (int u = 0; u < g.left_size(); ++u) {
    std::fill(seen.begin(), seen.end(), 0);
    augment(g, u, match_right, seen);
  }
  return match_right;
}

inline std::vector<int> left_matches(const AvailabilityGraph& g,
                                     const std::vector<int>& match_right) {
  std::vector<int> match_left(g.left_size(), -1);
  for (int r = 0; r < g.right_size(); ++r) {
    if (match_right[r] >= 0) match_left[match_right[r]] = r;
  }
  return match_left;
}

}  // namespace detail

inline Matching max_matching(const AvailabilityGraph& g) {
  std::vector<int> match_right = detail::kuhn(g);
  Matching m;
  for (int r = 0; r < g.right_size(); ++r) {
    if (match_right[r] >= 0) m.pairs.emplace_back(match_right[r], r);
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

// Returns S maximizing |S| - |N(S)| over left subsets: the alternating-path
// closure of the unmatched left nodes under a maximum matching. For that S,
// the matching restricted to left - S avoids N(S) entirely, so a matching
// of g - N(S) saturating left - S always exists.
inline DeficiencySet max_deficiency_set(const AvailabilityGraph& g) {
  std::vector<int> match_right = detail::kuhn(g);
  std::vector<int> match_left = detail::left_matches(g, match_right);

  std::vector<char> in_s(g.left_size(), 0);
  std::vector<char> right_seen(g.right_size(), 0);
  std::vector<int> stack;
  for (int u = 0; u < g.left_size(); ++u) {
    if (match_left[u] < 0) {
      in_s[u] = 1;
      stack.push_back(u);
    }
  }
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int r : g.adj[u]) {
      if (right_seen[r]) continue;
      right_seen[r] = 1;
      int w = match_right[r];
      if (w >= 0 && !in_s[w]) {
        in_s[w] = 1;
        stack.push_back(w);
      }
    }
  }

  DeficiencySet d;
  for (int u = 0; u < g.left_size(); ++u)
    if (in_s[u]) d.set.push_back(u);
  for (int r = 0; r < g.right_size(); ++r)
    if (right_seen[r]) d.neighbourhood.push_back(r);
  d.deficiency =
      static_cast<int>(d.set.size()) - static_cast<int>(d.neighbourhood.size());
  return d;
}

struct SaturatingInjection {
  bool found = false;
  // h[c] = vertex with c in its list; injective. Ascending by colour.
  std::vector<std::pair<Colour, int>> h;
  // When no injection exists: T subset of C with |N_B(T)| < |T|, found by
  // alternating-path closure from the least unmatched colour.
  ColourSet violator;
  int violator_neighbourhood_size = 0;

  int vertex_of(Colour c) const {
    for (const auto& [col, v] : h)
      if (col == c) return v;
    throw ContractViolation("colour not in injection");
  }
};

// Either an injective h : C -> V(G) with c in L(h(c)) for every colour, or
// a Hall violator witnessing that no matching saturates C.
inline SaturatingInjection saturating_injection(const Instance& inst) {
  // Transposed availability graph: colours on the left, vertices right.
  AvailabilityGraph t;
  const ColourSet& universe = inst.universe();
  for (Colour c : universe) t.left.push_back({static_cast<int>(c)});
  t.right.resize(inst.n());
  for (int v = 0; v < inst.n(); ++v) t.right[v] = v;
  t.adj.assign(universe.size(), {});
  for (int v = 0; v < inst.n(); ++v) {
    for (Colour c : inst.list(v)) {
      auto it = std::lower_bound(universe.begin(), universe.end(), c);
      t.adj[it - universe.begin()].push_back(v);
    }
  }

  std::vector<int> match_right = detail::kuhn(t);
  std::vector<int> match_left = detail::left_matches(t, match_right);

  SaturatingInjection result;
  int first_unmatched = -1;
  for (int i = 0; i < t.left_size(); ++i) {
    if (match_left[i] < 0) {
      first_unmatched = i;
      break;
    }
  }
  if (first_unmatched < 0) {
    result.found = true;
    for (int i = 0; i < t.left_size(); ++i) {
      result.h.emplace_back(universe[i], match_left[i]);
    }
    return result;
  }

  // Alternating-path closure from one unmatched colour: deficiency exactly
  // one, mirroring the minimal violator of the Hall argument.
  std::vector<char> in_t(t.left_size(), 0);
  std::vector<char> seen(t.right_size(), 0);
  std::vector<int> stack{first_unmatched};
  in_t[first_unmatched] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int r : t.adj[u]) {
      if (seen[r]) continue;
      seen[r] = 1;
      int w = match_right[r];
      if (w >= 0 && !in_t[w]) {
        in_t[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (int i = 0; i < t.left_size(); ++i)
    if (in_t[i]) result.violator.push_back(universe[i]);
  for (int r = 0; r < t.right_size(); ++r)
    if (seen[r]) ++result.violator_neighbourhood_size;
  return result;
}

}  // namespace ohba
