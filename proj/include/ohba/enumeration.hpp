#pragma once

#include <cstdint>
#include <functional>
#include <sstream>

#include "ohba/instance.hpp"

// Canonical enumeration of list assignments with every list of size
// exactly k and a bounded colour universe.
//
// Representation: a list assignment is the multiset of its colour
// availability sets, one vertex-bitmask per colour. Storing the masks as a
// non-decreasing sequence quotients out colour relabelling entirely; the
// remaining symmetry is the instance automorphism group (equal-size parts
// may swap, vertices may permute within a part). An assignment is canonical
// when no automorphism maps its sorted mask sequence to a lexicographically
// smaller one. Colour identifiers 0..|C|-1 are assigned by mask rank.
//
// Enumeration walks non-decreasing mask sequences depth-first with coverage
// pruning, so the stream arrives sorted by canonical key and the whole walk
// is deterministic.

namespace ohba {

// All vertex permutations induced by permuting equal-size parts and
// permuting vertices inside each part. The identity comes first.
inline std::vector<std::vector<int>> structure_automorphisms(
    const PartStructure& ps, std::uint64_t limit = 2'000'000) {
  const int k = ps.k();
  std::uint64_t order = 1;
  std::map<int, std::vector<int>> by_size;
  for (int p = 0; p < k; ++p) by_size[ps.part_size(p)].push_back(p);
  auto factorial = [](int m) {
    std::uint64_t f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
  };
  for (const auto& [size, parts] : by_size) {
    order *= factorial(static_cast<int>(parts.size()));
    for (size_t i = 0; i < parts.size(); ++i) order *= factorial(size);
    if (order > limit) {
      throw BudgetExceeded("automorphism group order exceeds " +
                           std::to_string(limit));
    }
  }

  // Part-level images: for every size class, each part may map to any part
  // of the same size.
  std::vector<std::vector<int>> part_images;
  {
    std::vector<int> identity(k);
    for (int p = 0; p < k; ++p) identity[p] = p;
    part_images.push_back(identity);
    for (const auto& [size, parts] : by_size) {
      std::vector<std::vector<int>> grown;
      std::vector<int> perm = parts;
      std::sort(perm.begin(), perm.end());
      do {
        for (const auto& base : part_images) {
          std::vector<int> next = base;
          for (size_t i = 0; i < parts.size(); ++i) next[parts[i]] = perm[i];
          grown.push_back(std::move(next));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      part_images = std::move(grown);
    }
  }

  // Within-part permutations, one block at a time.
  std::vector<std::vector<int>> autos;
  for (const auto& part_map : part_images) {
    std::vector<std::vector<std::vector<int>>> block_perms(k);
    for (int p = 0; p < k; ++p) {
      std::vector<int> slots(ps.part_size(p));
      for (int i = 0; i < ps.part_size(p); ++i) slots[i] = i;
      do {
        block_perms[p].push_back(slots);
      } while (std::next_permutation(slots.begin(), slots.end()));
    }
    std::vector<int> choice(k, 0);
    for (;;) {
      std::vector<int> perm(ps.n());
      for (int p = 0; p < k; ++p) {
        int target = part_map[p];
        const std::vector<int>& sigma = block_perms[p][choice[p]];
        for (int i = 0; i < ps.part_size(p); ++i) {
          perm[ps.part_begin(p) + i] = ps.part_begin(target) + sigma[i];
        }
      }
      autos.push_back(std::move(perm));
      int pos = k - 1;
      while (pos >= 0) {
        if (++choice[pos] < static_cast<int>(block_perms[pos].size())) break;
        choice[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  // Keep the identity in front for the fast path of the canonicity check.
  for (size_t i = 0; i < autos.size(); ++i) {
    bool ident = true;
    for (int v = 0; v < ps.n(); ++v) ident &= autos[i][v] == v;
    if (ident) {
      std::swap(autos[0], autos[i]);
      break;
    }
  }
  return autos;
}

struct CanonicalAssignment {
  std::vector<std::uint32_t> masks;  // availability set per colour, sorted
  std::string key;
};

inline Instance assignment_from_masks(const PartStructure& ps,
                                      const std::vector<std::uint32_t>& masks) {
  std::vector<ColourSet> lists(ps.n());
  for (size_t c = 0; c < masks.size(); ++c) {
    for (int v = 0; v < ps.n(); ++v) {
      if (masks[c] >> v & 1) lists[v].push_back(static_cast<Colour>(c));
    }
  }
  return Instance(ps, ListAssignment::from_lists(std::move(lists)));
}

inline std::string canonical_key(const PartStructure& ps, int list_size,
                                 const std::vector<std::uint32_t>& masks) {
  std::ostringstream out;
  for (size_t i = 0; i < ps.part_sizes().size(); ++i) {
    if (i) out << ',';
    out << ps.part_sizes()[i];
  }
  out << '|' << list_size << '|';
  for (size_t i = 0; i < masks.size(); ++i) {
    if (i) out << '.';
    out << masks[i];
  }
  return out.str();
}

struct EnumerationConfig {
  int list_size = 1;       // every list has exactly this many colours
  int colour_budget = 1;   // maximum |C|
  int min_colour_spread = 1;  // minimum vertices per colour (|N_B(c)|)
  std::uint64_t max_nodes = 200'000'000;  // DFS refusal guard
};

// Canonical form of an arbitrary instance: its availability-mask multiset
// minimized over the automorphism group. Two instances over the same
// structure are equivalent exactly when these agree.
inline std::vector<std::uint32_t> canonical_masks(const Instance& inst) {
  if (inst.n() > 20) {
    throw BudgetExceeded("canonical form supports at most 20 vertices");
  }
  const ColourSet& universe = inst.universe();
  std::vector<std::uint32_t> masks(universe.size(), 0);
  for (int v = 0; v < inst.n(); ++v) {
    for (Colour c : inst.list(v)) {
      auto it = std::lower_bound(universe.begin(), universe.end(), c);
      masks[it - universe.begin()] |= 1u << v;
    }
  }
  std::sort(masks.begin(), masks.end());
  std::vector<std::uint32_t> best = masks;
  std::vector<std::uint32_t> mapped(masks.size());
  for (const std::vector<int>& perm : structure_automorphisms(inst.structure)) {
    for (size_t i = 0; i < masks.size(); ++i) {
      std::uint32_t image = 0;
      for (int v = 0; v < inst.n(); ++v) {
        if (masks[i] >> v & 1) image |= 1u << perm[v];
      }
      mapped[i] = image;
    }
    std::sort(mapped.begin(), mapped.end());
    if (std::lexicographical_compare(mapped.begin(), mapped.end(),
                                     best.begin(), best.end())) {
      best = mapped;
    }
  }
  return best;
}

namespace detail {

struct Enumerator {
  const PartStructure* ps;
  EnumerationConfig cfg;
  int n = 0;
  std::vector<std::vector<int>> autos;
  std::vector<std::vector<std::uint32_t>> remap;  // per auto, mask image
  std::vector<std::uint32_t> masks;
  std::vector<int> coverage;
  std::uint64_t nodes = 0;
  std::uint64_t emitted = 0;
  const std::function<bool(const CanonicalAssignment&)>* sink;
  bool stopped = false;

  bool canonical() const {
    std::vector<std::uint32_t> mapped(masks.size());
    for (size_t a = 1; a < remap.size(); ++a) {
      const std::vector<std::uint32_t>& table = remap[a];
      for (size_t i = 0; i < masks.size(); ++i) mapped[i] = table[masks[i]];
      std::sort(mapped.begin(), mapped.end());
      if (std::lexicographical_compare(mapped.begin(), mapped.end(),
                                       masks.begin(), masks.end())) {
        return false;
      }
    }
    return true;
  }

  void dfs(std::uint32_t prev) {
    if (stopped) return;
    if (++nodes > cfg.max_nodes) {
      throw BudgetExceeded(
          "canonical enumeration exceeded its node budget after " +
          std::to_string(emitted) + " assignments");
    }
    std::uint32_t unsat = 0;
    int max_deficit = 0;
    long long total_deficit = 0;
    for (int v = 0; v < n; ++v) {
      int deficit = cfg.list_size - coverage[v];
      if (deficit > 0) {
        unsat |= 1u << v;
        max_deficit = std::max(max_deficit, deficit);
        total_deficit += deficit;
      }
    }
    if (unsat == 0) {
      if (canonical()) {
        ++emitted;
        CanonicalAssignment out;
        out.masks = masks;
        out.key = canonical_key(*ps, cfg.list_size, masks);
        if (!(*sink)(out)) stopped = true;
      }
      return;
    }
    int remaining = cfg.colour_budget - static_cast<int>(masks.size());
    if (remaining <= 0) return;
    if (max_deficit > remaining) return;
    if (total_deficit >
        static_cast<long long>(remaining) * __builtin_popcount(unsat)) {
      return;
    }
    // Ascending submask walk over the unsaturated vertices.
    for (std::uint32_t sub = (0u - unsat) & unsat; sub;
         sub = (sub - unsat) & unsat) {
      if (sub < prev) continue;
      if (__builtin_popcount(sub) < cfg.min_colour_spread) continue;
      masks.push_back(sub);
      for (int v = 0; v < n; ++v) {
        if (sub >> v & 1) ++coverage[v];
      }
      dfs(sub);
      for (int v = 0; v < n; ++v) {
        if (sub >> v & 1) --coverage[v];
      }
      masks.pop_back();
      if (stopped) return;
    }
  }
};

}  // namespace detail

// Streams every canonical assignment in key order. The sink returns false
// to stop early. Returns the number of assignments emitted.
inline std::uint64_t enumerate_canonical(
    const PartStructure& ps, const EnumerationConfig& cfg,
    const std::function<bool(const CanonicalAssignment&)>& sink) {
  if (cfg.list_size < 1) throw ContractViolation("list size must be >= 1");
  if (cfg.colour_budget < cfg.list_size) {
    throw BudgetExceeded(
        "colour budget below the list size: lists of size " +
        std::to_string(cfg.list_size) + " need at least that many colours");
  }
  if (ps.n() > 20) {
    throw BudgetExceeded("canonical enumeration supports at most 20 vertices");
  }
  detail::Enumerator e;
  e.ps = &ps;
  e.cfg = cfg;
  e.n = ps.n();
  e.autos = structure_automorphisms(ps);
  if ((1ull << e.n) * e.autos.size() > 64'000'000ull) {
    throw BudgetExceeded("mask remap tables would need " +
                         std::to_string((1ull << e.n) * e.autos.size() * 4) +
                         " bytes");
  }
  e.remap.assign(e.autos.size(), {});
  for (size_t a = 0; a < e.autos.size(); ++a) {
    e.remap[a].resize(1u << e.n);
    for (std::uint32_t m = 0; m < (1u << e.n); ++m) {
      std::uint32_t image = 0;
      for (int v = 0; v < e.n; ++v) {
        if (m >> v & 1) image |= 1u << e.autos[a][v];
      }
      e.remap[a][m] = image;
    }
  }
  e.coverage.assign(e.n, 0);
  e.sink = &sink;
  e.dfs(1);
  return e.emitted;
}

}  // namespace ohba
