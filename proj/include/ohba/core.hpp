#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Shared vocabulary for the whole library: colour identifiers, sorted
// colour sets, and the error taxonomy used across modules.

namespace ohba {

using Colour = int;

// Colour sets are kept as sorted, duplicate-free vectors. All set algebra
// below assumes (and preserves) that representation.
using ColourSet = std::vector<Colour>;

// -- errors ------------------------------------------------------------

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (bad JSON, wrong shapes inside it).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Structurally invalid instance data (list count mismatch, empty part...).
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what) : Error(what) {}
};

// A caller violated a documented precondition.
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what) : Error(what) {}
};

// An internal state that the underlying mathematics rules out was reached.
// Any sighting is a bug in this library (or a disproof of the theorem).
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(what) {}
};

// An operation refused to run because a configured budget (search nodes,
// enumeration size, candidate k, time) would be exceeded. Never a wrong
// answer: the caller can retry with a bigger budget.
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

// An operation needed a hypothesis that the given instance does not
// provide (e.g. no injection saturating the colour universe exists).
class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& what) : Error(what) {}
};

// -- sorted-vector set algebra ------------------------------------------

inline ColourSet make_colour_set(std::vector<Colour> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

inline bool set_contains(const ColourSet& s, Colour c) {
  return std::binary_search(s.begin(), s.end(), c);
}

inline ColourSet set_union(const ColourSet& a, const ColourSet& b) {
  ColourSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

inline ColourSet set_intersection(const ColourSet& a, const ColourSet& b) {
  ColourSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline ColourSet set_difference(const ColourSet& a, const ColourSet& b) {
  ColourSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline bool set_insert(ColourSet& s, Colour c) {
  auto it = std::lower_bound(s.begin(), s.end(), c);
  if (it != s.end() && *it == c) return false;
  s.insert(it, c);
  return true;
}

}  // namespace ohba
