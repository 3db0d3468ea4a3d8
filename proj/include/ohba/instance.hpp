#pragma once

#include <map>
#include <optional>
#include <sstream>

#include "ohba/core.hpp"

// Core data model: complete multipartite part structures, per-vertex
// colour lists, (partial) colourings and their validity checks.
//
// Vertices carry global indices 0..n-1, assigned to parts in order:
// part 0 owns 0..part_sizes[0]-1, part 1 the next block, and so on.
// Adjacency is never stored; two vertices are adjacent exactly when they
// lie in different parts.
//
// Everything here is an immutable value after construction and every
// operation is a pure function, so concurrent use needs no locking.

namespace ohba {

class PartStructure {
 public:
  explicit PartStructure(std::vector<int> part_sizes)
      : sizes_(std::move(part_sizes)) {
    if (sizes_.empty()) throw StructuralError("structure has no parts");
    part_of_.clear();
    for (int p = 0; p < static_cast<int>(sizes_.size()); ++p) {
      if (sizes_[p] <= 0) {
        throw StructuralError("part " + std::to_string(p) +
                              " has non-positive size");
      }
      offsets_.push_back(static_cast<int>(part_of_.size()));
      for (int i = 0; i < sizes_[p]; ++i) part_of_.push_back(p);
    }
  }

  int k() const { return static_cast<int>(sizes_.size()); }
  int n() const { return static_cast<int>(part_of_.size()); }
  const std::vector<int>& part_sizes() const { return sizes_; }
  int part_size(int p) const { return sizes_[p]; }
  int part_of(int v) const { return part_of_[v]; }
  // First global index of part p.
  int part_begin(int p) const { return offsets_[p]; }
  int part_end(int p) const { return offsets_[p] + sizes_[p]; }

  bool adjacent(int u, int v) const {
    return u != v && part_of_[u] != part_of_[v];
  }

  std::vector<int> vertices_of_part(int p) const {
    std::vector<int> out;
    for (int v = part_begin(p); v < part_end(p); ++v) out.push_back(v);
    return out;
  }

  bool operator==(const PartStructure& o) const { return sizes_ == o.sizes_; }

 private:
  std::vector<int> sizes_;
  std::vector<int> part_of_;
  std::vector<int> offsets_;
};

struct ListAssignment {
  std::vector<ColourSet> lists;
  // Exact union of the per-vertex lists; recomputed, never trusted.
  ColourSet universe;

  static ListAssignment from_lists(std::vector<ColourSet> lists) {
    ListAssignment a;
    a.lists = std::move(lists);
    for (auto& l : a.lists) l = make_colour_set(std::move(l));
    a.universe = ColourSet{};
    for (const auto& l : a.lists) a.universe = set_union(a.universe, l);
    return a;
  }
};

struct Instance {
  PartStructure structure;
  ListAssignment assignment;

  Instance(PartStructure s, ListAssignment a)
      : structure(std::move(s)), assignment(std::move(a)) {
    if (static_cast<int>(assignment.lists.size()) != structure.n()) {
      throw StructuralError(
          "list count " + std::to_string(assignment.lists.size()) +
          " does not match vertex count " + std::to_string(structure.n()));
    }
  }

  int n() const { return structure.n(); }
  int k() const { return structure.k(); }
  const ColourSet& list(int v) const { return assignment.lists[v]; }
  const ColourSet& universe() const { return assignment.universe; }
};

inline Instance make_instance(std::vector<int> part_sizes,
                              std::vector<ColourSet> lists) {
  return Instance(PartStructure(std::move(part_sizes)),
                  ListAssignment::from_lists(std::move(lists)));
}

// A partial or total vertex -> colour map. `classes()` derives the colour
// classes (inverse image); a vertex is uncoloured iff its entry is empty.
struct Colouring {
  std::vector<std::optional<Colour>> colours;

  Colouring() = default;
  explicit Colouring(int n) : colours(n) {}
  static Colouring total(std::vector<Colour> cs) {
    Colouring col;
    col.colours.reserve(cs.size());
    for (Colour c : cs) col.colours.emplace_back(c);
    return col;
  }

  int size() const { return static_cast<int>(colours.size()); }
  bool is_total() const {
    for (const auto& c : colours)
      if (!c) return false;
    return true;
  }

  std::map<Colour, std::vector<int>> classes() const {
    std::map<Colour, std::vector<int>> out;
    for (int v = 0; v < size(); ++v)
      if (colours[v]) out[*colours[v]].push_back(v);
    return out;
  }

  bool operator==(const Colouring& o) const { return colours == o.colours; }
};

struct Violation {
  int vertex;
  std::string reason;
};

struct ColouringVerdict {
  bool proper = true;
  bool acceptable = true;
  bool total = true;
  std::vector<Violation> violations;
};

// proper:      no two vertices in different parts share a colour;
// acceptable:  proper and every coloured vertex carries a list colour;
// total:       no vertex is uncoloured.
// The verdict booleans agree with the violation records.
inline ColouringVerdict check_colouring(const Instance& inst,
                                        const Colouring& col) {
  if (col.size() != inst.n()) {
    throw ContractViolation("colouring indexes " + std::to_string(col.size()) +
                            " vertices, instance has " +
                            std::to_string(inst.n()));
  }
  ColouringVerdict verdict;
  for (int v = 0; v < inst.n(); ++v) {
    if (!col.colours[v]) {
      verdict.total = false;
      verdict.violations.push_back({v, "vertex uncoloured"});
    }
  }
  for (int u = 0; u < inst.n(); ++u) {
    if (!col.colours[u]) continue;
    for (int v = u + 1; v < inst.n(); ++v) {
      if (!col.colours[v]) continue;
      if (inst.structure.adjacent(u, v) && *col.colours[u] == *col.colours[v]) {
        verdict.proper = false;
        std::ostringstream msg;
        msg << "colour " << *col.colours[u] << " shared with adjacent vertex "
            << v;
        verdict.violations.push_back({u, msg.str()});
      }
    }
  }
  for (int v = 0; v < inst.n(); ++v) {
    if (!col.colours[v]) continue;
    if (!set_contains(inst.list(v), *col.colours[v])) {
      verdict.acceptable = false;
      std::ostringstream msg;
      msg << "colour " << *col.colours[v] << " not in list";
      verdict.violations.push_back({v, msg.str()});
    }
  }
  if (!verdict.proper) verdict.acceptable = false;
  return verdict;
}

struct DerivedQuantities {
  // n - |C|; may be <= 0 on instances that are not counterexample-shaped.
  int gamma = 0;
  // Number of parts with at least two vertices.
  int b = 0;
  // All vertices lying in size-1 parts.
  std::vector<int> singletons;
};

inline DerivedQuantities derived_quantities(const Instance& inst) {
  DerivedQuantities q;
  q.gamma = inst.n() - static_cast<int>(inst.universe().size());
  for (int p = 0; p < inst.k(); ++p) {
    if (inst.structure.part_size(p) >= 2) {
      ++q.b;
    } else {
      q.singletons.push_back(inst.structure.part_begin(p));
    }
  }
  return q;
}

}  // namespace ohba
