#pragma once

#include "ohba/instance.hpp"
#include "ohba/matching.hpp"
#include "ohba/solver.hpp"

// Constructive machinery around near-acceptable colourings.
//
// A colour is globally frequent when at least k+1 vertices list it, and
// frequent among singletons when at least gamma singleton vertices list it
// (gamma = n - |C|; with gamma <= 0 that notion is disabled rather than
// made vacuous). A proper total colouring is near-acceptable when every
// off-list vertex carries a frequent colour used on no other vertex.
// `convert_near_acceptable` upgrades such a colouring to an acceptable one.
//
// Tie-breaking throughout: least colour identifier, least vertex index.

namespace ohba {

struct FrequencyReport {
  int gamma = 0;
  int b = 0;
  ColourSet globally_frequent;           // listed by >= k+1 vertices
  ColourSet frequent_among_singletons;   // listed by >= gamma singletons
  ColourSet frequent;                    // union of the two
  // Parallel to the instance universe: availability counts.
  std::vector<int> availability;            // |N_B(c)|
  std::vector<int> singleton_availability;  // singletons listing c

  bool is_frequent(Colour c) const { return set_contains(frequent, c); }
};

inline FrequencyReport classify_colours(const Instance& inst) {
  FrequencyReport report;
  DerivedQuantities q = derived_quantities(inst);
  report.gamma = q.gamma;
  report.b = q.b;
  const ColourSet& universe = inst.universe();
  report.availability.assign(universe.size(), 0);
  report.singleton_availability.assign(universe.size(), 0);
  std::vector<char> is_singleton(inst.n(), 0);
  for (int v : q.singletons) is_singleton[v] = 1;
  for (int v = 0; v < inst.n(); ++v) {
    for (Colour c : inst.list(v)) {
      auto it = std::lower_bound(universe.begin(), universe.end(), c);
      int idx = static_cast<int>(it - universe.begin());
      ++report.availability[idx];
      if (is_singleton[v]) ++report.singleton_availability[idx];
    }
  }
  for (size_t i = 0; i < universe.size(); ++i) {
    if (report.availability[i] >= inst.k() + 1) {
      report.globally_frequent.push_back(universe[i]);
    }
    if (report.gamma >= 1 && report.singleton_availability[i] >= report.gamma) {
      report.frequent_among_singletons.push_back(universe[i]);
    }
  }
  report.frequent =
      set_union(report.globally_frequent, report.frequent_among_singletons);
  return report;
}

// One induction step: colour the vertex set A by g, peel it off, and keep
// the residual instance with the used colours removed from every list.
// The residual is absent when A covers every vertex.
struct ReductionStep {
  std::vector<int> removed;  // A, ascending global indices
  Colouring g;               // partial colouring defined exactly on A
  int ell = 0;               // multi-vertex classes used, context-dependent
  std::optional<Instance> residual;  // G - A with lists L(v) - g(A)
  std::vector<int> residual_to_original;
};

namespace detail {

inline ReductionStep make_reduction_step(const Instance& inst,
                                         const std::vector<int>& removed,
                                         const Colouring& g, int ell) {
  std::vector<char> gone(inst.n(), 0);
  for (int v : removed) gone[v] = 1;
  ColourSet used;
  for (int v : removed) {
    if (!g.colours[v]) {
      throw ContractViolation("reduction colouring must cover A");
    }
    set_insert(used, *g.colours[v]);
  }
  ReductionStep step;
  step.removed = removed;
  step.g = g;
  step.ell = ell;
  std::vector<int> sizes;
  std::vector<ColourSet> lists;
  for (int p = 0; p < inst.k(); ++p) {
    int size = 0;
    for (int v = inst.structure.part_begin(p); v < inst.structure.part_end(p);
         ++v) {
      if (gone[v]) continue;
      ++size;
      lists.push_back(set_difference(inst.list(v), used));
      step.residual_to_original.push_back(v);
    }
    if (size > 0) sizes.push_back(size);
  }
  if (!sizes.empty()) {
    step.residual = make_instance(std::move(sizes), std::move(lists));
  }
  return step;
}

}  // namespace detail

// The part-common-colour reduction: if some part with >= 2 vertices has a
// colour on every member's list, colour the whole part with the least such
// colour (first such part wins) and peel it off.
inline std::optional<ReductionStep> reduce_common_colour(
    const Instance& inst) {
  for (int p = 0; p < inst.k(); ++p) {
    if (inst.structure.part_size(p) < 2) continue;
    ColourSet common = inst.list(inst.structure.part_begin(p));
    for (int v = inst.structure.part_begin(p) + 1;
         v < inst.structure.part_end(p); ++v) {
      common = set_intersection(common, inst.list(v));
    }
    if (common.empty()) continue;
    Colour c = common.front();
    Colouring g(inst.n());
    std::vector<int> removed;
    for (int v = inst.structure.part_begin(p); v < inst.structure.part_end(p);
         ++v) {
      g.colours[v] = c;
      removed.push_back(v);
    }
    return detail::make_reduction_step(inst, removed, g, 1);
  }
  return std::nullopt;
}

struct ExtensionResult {
  bool success = false;
  Colouring colouring;  // acceptable total colouring of the original
  std::string failure_reason;
};

// Decide the residual; on success splice its witness with g into a full
// acceptable colouring of the original instance (verified before return).
inline ExtensionResult extend_reduction(const Instance& inst,
                                        const ReductionStep& step) {
  ExtensionResult out;
  Colouring full = step.g;
  if (step.residual) {
    DecideResult r = decide(*step.residual);
    if (r.verdict == Verdict::UNCOLOURABLE) {
      out.failure_reason = "residual instance is uncolourable";
      return out;
    }
    for (size_t i = 0; i < step.residual_to_original.size(); ++i) {
      full.colours[step.residual_to_original[i]] = r.witness->colours[i];
    }
  }
  ColouringVerdict v = check_colouring(inst, full);
  if (!v.acceptable || !v.total) {
    out.failure_reason = "spliced colouring failed verification";
    return out;
  }
  out.success = true;
  out.colouring = std::move(full);
  return out;
}

// Iterative repair towards surjectivity: while some colour c' is unused,
// recolour h(c') to c' (least unused colour first). The result g is total,
// proper and surjective, and every vertex satisfies g(v) in L(v) or
// g^-1(g(v)) subset of f^-1(f(v)). Both conditions are verified on return.
inline Colouring surjectivize(const Instance& inst, const Colouring& f,
                              const SaturatingInjection& h) {
  ColouringVerdict fv = check_colouring(inst, f);
  if (!fv.total || !fv.proper) {
    throw ContractViolation("surjectivize needs a total proper colouring");
  }
  if (!h.found) throw ContractViolation("surjectivize needs an injection");
  for (const auto& [c, v] : h.h) {
    if (!set_contains(inst.list(v), c)) {
      throw ContractViolation("injection image misses its list");
    }
  }

  Colouring g = f;
  const ColourSet& universe = inst.universe();
  for (;;) {
    std::vector<char> used(universe.size(), 0);
    for (const auto& oc : g.colours) {
      if (oc) {
        auto it = std::lower_bound(universe.begin(), universe.end(), *oc);
        used[it - universe.begin()] = 1;
      }
    }
    Colour unused = -1;
    for (size_t i = 0; i < universe.size(); ++i) {
      if (!used[i]) {
        unused = universe[i];
        break;
      }
    }
    if (unused < 0) break;
    g.colours[h.vertex_of(unused)] = unused;
  }

  auto f_classes = f.classes();
  auto g_classes = g.classes();
  for (int v = 0; v < inst.n(); ++v) {
    if (set_contains(inst.list(v), *g.colours[v])) continue;
    const auto& gc = g_classes[*g.colours[v]];
    const auto& fc = f_classes[*f.colours[v]];
    if (*g.colours[v] != *f.colours[v] ||
        !std::includes(fc.begin(), fc.end(), gc.begin(), gc.end())) {
      throw InvariantViolation("surjectivize broke the class condition");
    }
  }
  if (g_classes.size() != universe.size()) {
    throw InvariantViolation("surjectivize failed to reach surjectivity");
  }
  ColouringVerdict gv = check_colouring(inst, g);
  if (!gv.proper || !gv.total) {
    throw InvariantViolation("surjectivize broke properness");
  }
  return g;
}

struct NearAcceptability {
  bool near_acceptable = true;
  std::vector<Violation> violations;
};

// True iff every vertex is on-list, or carries a frequent colour that no
// other vertex carries. Requires f total and proper.
inline NearAcceptability is_near_acceptable(const Instance& inst,
                                            const Colouring& f,
                                            const FrequencyReport& report) {
  ColouringVerdict fv = check_colouring(inst, f);
  if (!fv.total || !fv.proper) {
    throw ContractViolation(
        "near-acceptability is defined for total proper colourings");
  }
  NearAcceptability out;
  auto classes = f.classes();
  for (int v = 0; v < inst.n(); ++v) {
    Colour c = *f.colours[v];
    if (set_contains(inst.list(v), c)) continue;
    if (!report.is_frequent(c)) {
      out.near_acceptable = false;
      out.violations.push_back(
          {v, "off-list colour " + std::to_string(c) + " is not frequent"});
      continue;
    }
    if (classes[c].size() != 1) {
      out.near_acceptable = false;
      out.violations.push_back(
          {v, "off-list colour " + std::to_string(c) +
                  " is shared with another vertex"});
    }
  }
  return out;
}

enum class ConversionPath {
  // A matching saturating the colour classes already existed.
  SATURATED,
  // Saturation appeared after the surjectivity repair.
  SATURATED_AFTER_REPAIR,
  // The full deficiency-set route: peel the matched classes, recurse.
  CLASS_SPLIT,
};

struct ConversionResult {
  Colouring colouring;
  ConversionPath path = ConversionPath::SATURATED;
  int ell = 0;  // multi-vertex classes at the class-split step
};

namespace detail {

inline std::optional<Colouring> recolour_by_matching(const Instance& inst,
                                                     const BfResult& bf) {
  Matching m = max_matching(bf.graph);
  if (!m.saturates_left(bf.graph)) return std::nullopt;
  Colouring out(inst.n());
  for (const auto& [l, r] : m.pairs) {
    for (int v : bf.graph.left[l]) out.colours[v] = bf.graph.right[r];
  }
  ColouringVerdict v = check_colouring(inst, out);
  if (!v.acceptable || !v.total) {
    throw InvariantViolation("class matching produced an invalid colouring");
  }
  return out;
}

}  // namespace detail

// Upgrade a near-acceptable colouring to an acceptable one.
//
// 1. If a matching of B_f saturates the classes, recolour each class by its
//    matched colour and return.
// 2. Otherwise repair f to a surjective colouring (this needs an injection
//    saturating C; without one the hypotheses of the construction fail) and
//    retry the matching.
// 3. Otherwise take a maximum-deficiency set S of classes, locate the least
//    colour c* whose class lies in S with c* outside N(S). Near-
//    acceptability forces that class to be a single off-list vertex with c*
//    frequent. A globally frequent c* is impossible whenever n <= 2k+1 and
//    all lists have >= k colours, so that branch only raises. For c*
//    frequent among singletons, colour the classes outside S by a matching
//    avoiding N(S), keep f on multi-vertex classes inside S (at most ell
//    colours of N(S) get used; checked), and extend over the remaining
//    vertices by deciding the reduced instance.
inline ConversionResult convert_near_acceptable(const Instance& inst,
                                                const Colouring& f) {
  FrequencyReport report = classify_colours(inst);
  NearAcceptability na = is_near_acceptable(inst, f, report);
  if (!na.near_acceptable) {
    throw ContractViolation(
        "convert_near_acceptable needs a near-acceptable colouring");
  }

  ConversionResult result;
  {
    BfResult bf = build_Bf(inst, f);
    if (auto direct = detail::recolour_by_matching(inst, bf)) {
      result.colouring = std::move(*direct);
      result.path = ConversionPath::SATURATED;
      return result;
    }
  }

  SaturatingInjection h = saturating_injection(inst);
  if (!h.found) {
    throw HypothesisError(
        "no injection saturating the colour universe exists; the conversion "
        "hypotheses do not hold for this instance");
  }
  Colouring g = surjectivize(inst, f, h);
  if (!is_near_acceptable(inst, g, report).near_acceptable) {
    throw InvariantViolation("surjectivity repair broke near-acceptability");
  }

  BfResult bf = build_Bf(inst, g);
  if (auto direct = detail::recolour_by_matching(inst, bf)) {
    result.colouring = std::move(*direct);
    result.path = ConversionPath::SATURATED_AFTER_REPAIR;
    return result;
  }

  DeficiencySet s = max_deficiency_set(bf.graph);
  std::vector<char> in_s(bf.graph.left_size(), 0);
  for (int l : s.set) in_s[l] = 1;
  std::vector<char> in_ns(bf.graph.right_size(), 0);
  for (int r : s.neighbourhood) in_ns[r] = 1;

  // Least colour whose class sits in S while the colour is outside N(S).
  int cstar_class = -1;
  for (int l : s.set) {
    Colour own = bf.class_colours[l];
    int r = right_index_of(bf.graph, own);
    if (!in_ns[r]) {
      cstar_class = l;
      break;
    }
  }
  if (cstar_class < 0) {
    throw InvariantViolation("deficient class set without a displaced colour");
  }
  Colour cstar = bf.class_colours[cstar_class];
  if (bf.graph.left[cstar_class].size() != 1) {
    throw InvariantViolation("displaced colour class is not a singleton");
  }
  if (set_contains(report.globally_frequent, cstar)) {
    throw InvariantViolation(
        "globally frequent displaced colour: unreachable whenever n <= 2k+1 "
        "and every list has at least k colours");
  }
  if (!set_contains(report.frequent_among_singletons, cstar)) {
    throw InvariantViolation("displaced colour is not frequent");
  }

  // Claim-level bookkeeping: ell = multi-vertex classes of the (surjective)
  // colouring; A = classes that are multi-vertex or outside S.
  int ell = 0;
  for (int l = 0; l < bf.graph.left_size(); ++l) {
    if (bf.graph.left[l].size() > 1) ++ell;
  }
  DerivedQuantities q = derived_quantities(inst);
  int singleton_classes_outside_s = 0;
  for (int l = 0; l < bf.graph.left_size(); ++l) {
    if (in_s[l]) continue;
    int v = bf.graph.left[l].front();
    if (bf.graph.left[l].size() == 1 &&
        inst.structure.part_size(inst.structure.part_of(v)) == 1) {
      ++singleton_classes_outside_s;
    }
  }
  if (singleton_classes_outside_s < q.gamma) {
    throw HypothesisError(
        "fewer than gamma singleton classes escape the deficiency set");
  }

  // Matching of B_f - N(S) saturating the classes outside S. Guaranteed by
  // the maximum-deficiency choice of S.
  AvailabilityGraph outside;
  outside.right = bf.graph.right;
  std::vector<int> outside_class;
  for (int l = 0; l < bf.graph.left_size(); ++l) {
    if (in_s[l]) continue;
    outside.left.push_back(bf.graph.left[l]);
    std::vector<int> row;
    for (int r : bf.graph.adj[l]) {
      if (!in_ns[r]) row.push_back(r);
    }
    outside.adj.push_back(std::move(row));
    outside_class.push_back(l);
  }
  Matching m = max_matching(outside);
  if (!m.saturates_left(outside)) {
    throw InvariantViolation(
        "maximum-deficiency set without a saturating matching outside it");
  }

  Colouring partial(inst.n());
  std::vector<int> removed;
  for (const auto& [l, r] : m.pairs) {
    for (int v : outside.left[l]) {
      partial.colours[v] = outside.right[r];
      removed.push_back(v);
    }
  }
  for (int l : s.set) {
    if (bf.graph.left[l].size() <= 1) continue;
    for (int v : bf.graph.left[l]) {
      partial.colours[v] = bf.class_colours[l];
      removed.push_back(v);
    }
  }
  std::sort(removed.begin(), removed.end());

  // Audit: the peeled colouring may touch at most ell colours of N(S).
  ColourSet used_in_ns;
  for (int v : removed) {
    int r = right_index_of(bf.graph, *partial.colours[v]);
    if (in_ns[r]) set_insert(used_in_ns, *partial.colours[v]);
  }
  if (static_cast<int>(used_in_ns.size()) > ell) {
    throw InvariantViolation(
        "partial colouring uses more than ell colours of N(S)");
  }

  ReductionStep step = detail::make_reduction_step(inst, removed, partial, ell);
  ExtensionResult ext = extend_reduction(inst, step);
  if (!ext.success) {
    throw HypothesisError("class-split extension failed: " +
                          ext.failure_reason);
  }
  result.colouring = std::move(ext.colouring);
  result.path = ConversionPath::CLASS_SPLIT;
  result.ell = ell;
  return result;
}

}  // namespace ohba
