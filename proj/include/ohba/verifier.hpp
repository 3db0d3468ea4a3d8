#pragma once

#include <atomic>
#include <chrono>
#include <fstream>
#include <random>
#include <thread>
#include <unordered_map>

#include "ohba/enumeration.hpp"
#include "ohba/json_io.hpp"
#include "ohba/solver.hpp"
#include "ohba/transforms.hpp"

// Exhaustive verification that complete k-partite instances on at most
// 2k+1 vertices with exact-size-k lists are always colourable, plus the
// non-choosability search on larger structures and the tiny-scale list
// chromatic number.
//
// Induction layout: levels (k', n') are processed with k' outer and n'
// inner, both ascending, so every pruning rule only ever defers to levels
// already settled. The two rules:
//   - part-common-colour: an assignment where some multi-vertex part shares
//     a colour reduces to a verified (k'-1)-level instance;
//   - colour budget: a first-failure assignment must have |C| < n <= 2k+1,
//     so enumerating |C| <= 2k suffices.
// Both default on and can be disabled for the soundness cross-check.

namespace ohba {

struct VerifyConfig {
  int colour_budget = 1 << 20;  // user cap on |C|
  bool cap_prune = true;        // part-common-colour rule
  bool universe_prune = true;   // |C| <= 2k rule
  bool restrict_to_full_n = false;  // top level: only n = 2k+1 structures
  int workers = 1;
  double time_budget_seconds = 0;  // 0 = unlimited
  std::string cache_path;          // empty = no cache
  std::uint64_t max_enumeration_nodes = 500'000'000;
  int spot_check_pruned = 0;  // sample size for the reduction-path check
  std::uint64_t seed = 1;
};

struct StructureReport {
  std::vector<int> parts;
  int k = 0;
  int n = 0;
  int budget = 0;
  std::uint64_t enumerated = 0;
  std::uint64_t pruned_common_colour = 0;
  std::uint64_t decided = 0;
  std::uint64_t colourable = 0;
  std::uint64_t uncolourable = 0;
  std::uint64_t cache_hits = 0;
};

struct FailureRecord {
  std::vector<int> parts;
  std::string key;
  Json instance;
  // A first failure in the induction order must use fewer colours than it
  // has vertices; recorded for the opportunistic cross-check.
  bool universe_smaller_than_n = false;
};

struct VerificationReport {
  int k = 0;
  std::vector<StructureReport> structures;
  std::vector<FailureRecord> failures;
  bool complete = true;  // false marks a PARTIAL run (time budget hit)
  std::uint64_t spot_checks_run = 0;
  std::uint64_t spot_check_failures = 0;
  double wall_seconds = 0;
};

// All partitions of n into exactly k positive parts, sizes ascending,
// listed lexicographically.
inline std::vector<std::vector<int>> partitions_into_parts(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  std::function<void(int, int, int)> rec = [&](int rest, int parts, int min) {
    if (parts == 0) {
      if (rest == 0) out.push_back(current);
      return;
    }
    for (int s = min; s * parts <= rest; ++s) {
      current.push_back(s);
      rec(rest - s, parts - 1, s);
      current.pop_back();
    }
  };
  rec(n, k, 1);
  return out;
}

namespace detail {

class VerdictCache {
 public:
  explicit VerdictCache(const std::string& path) : path_(path) {
    if (path_.empty()) return;
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Json j = Json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("key") || !j.contains("verdict")) {
        continue;
      }
      map_[j["key"].get<std::string>()] =
          j["verdict"].get<std::string>() == "COLOURABLE"
              ? Verdict::COLOURABLE
              : Verdict::UNCOLOURABLE;
    }
  }

  std::optional<Verdict> lookup(const std::string& key) const {
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void record(const std::string& key, Verdict v) {
    if (path_.empty()) return;
    if (map_.count(key)) return;
    map_[key] = v;
    if (!out_.is_open()) out_.open(path_, std::ios::app);
    Json j;
    j["key"] = key;
    j["verdict"] = v == Verdict::COLOURABLE ? "COLOURABLE" : "UNCOLOURABLE";
    out_ << j.dump() << '\n';
    out_.flush();
  }

 private:
  std::string path_;
  std::unordered_map<std::string, Verdict> map_;
  std::ofstream out_;
};

struct WorkItem {
  CanonicalAssignment assignment;
  bool pruned = false;
  bool cached = false;
  Verdict verdict = Verdict::COLOURABLE;
};

// Chunked fork-join over decide calls; everything else stays sequential so
// reports fold deterministically.
inline void decide_items(std::vector<WorkItem>& items,
                         const PartStructure& ps, int workers) {
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      WorkItem& item = items[i];
      if (item.pruned || item.cached) continue;
      Instance inst = assignment_from_masks(ps, item.assignment.masks);
      item.verdict = decide(inst).verdict;
    }
  };
  if (workers <= 1 || items.size() < 2) {
    work(0, items.size());
    return;
  }
  size_t threads = std::min<size_t>(workers, items.size());
  std::vector<std::thread> pool;
  size_t chunk = (items.size() + threads - 1) / threads;
  for (size_t t = 0; t < threads; ++t) {
    size_t begin = t * chunk;
    size_t end = std::min(items.size(), begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
}

inline bool has_covered_multi_part(const PartStructure& ps,
                                   const std::vector<std::uint32_t>& masks) {
  for (int p = 0; p < ps.k(); ++p) {
    if (ps.part_size(p) < 2) continue;
    std::uint32_t part_mask = 0;
    for (int v = ps.part_begin(p); v < ps.part_end(p); ++v) {
      part_mask |= 1u << v;
    }
    for (std::uint32_t m : masks) {
      if ((m & part_mask) == part_mask) return true;
    }
  }
  return false;
}

}  // namespace detail

inline VerificationReport verify_ohba(int k, const VerifyConfig& config = {}) {
  if (k < 1) throw ContractViolation("k must be positive");
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };
  detail::VerdictCache cache(config.cache_path);
  VerificationReport report;
  report.k = k;

  // Reservoir of cap-pruned assignments for the reduction-path spot check.
  std::mt19937_64 spot_rng(config.seed);
  std::vector<std::pair<PartStructure, std::vector<std::uint32_t>>> reservoir;
  std::uint64_t pruned_seen = 0;

  for (int level_k = 1; level_k <= k && report.complete; ++level_k) {
    for (int n = level_k; n <= 2 * level_k + 1 && report.complete; ++n) {
      if (config.restrict_to_full_n && level_k == k && n < 2 * k + 1) {
        continue;
      }
      for (const std::vector<int>& sizes : partitions_into_parts(n, level_k)) {
        if (!report.complete) break;
        PartStructure ps(sizes);
        StructureReport sr;
        sr.parts = sizes;
        sr.k = level_k;
        sr.n = n;
        sr.budget = config.universe_prune
                        ? std::min(config.colour_budget, 2 * level_k)
                        : std::min(config.colour_budget, n * level_k);

        EnumerationConfig ec;
        ec.list_size = level_k;
        ec.colour_budget = sr.budget;
        ec.max_nodes = config.max_enumeration_nodes;

        std::vector<detail::WorkItem> batch;
        auto flush = [&] {
          detail::decide_items(batch, ps, config.workers);
          for (detail::WorkItem& item : batch) {
            if (item.pruned) continue;
            ++sr.decided;
            if (!item.cached) {
              cache.record(item.assignment.key, item.verdict);
            }
            if (item.verdict == Verdict::COLOURABLE) {
              ++sr.colourable;
            } else {
              ++sr.uncolourable;
              FailureRecord f;
              f.parts = sizes;
              f.key = item.assignment.key;
              f.instance = instance_to_json(
                  assignment_from_masks(ps, item.assignment.masks));
              f.universe_smaller_than_n =
                  item.assignment.masks.size() < static_cast<size_t>(n);
              report.failures.push_back(std::move(f));
            }
          }
          batch.clear();
        };

        enumerate_canonical(
            ps, ec, [&](const CanonicalAssignment& a) {
              ++sr.enumerated;
              detail::WorkItem item;
              item.assignment = a;
              if (config.cap_prune &&
                  detail::has_covered_multi_part(ps, a.masks)) {
                item.pruned = true;
                ++sr.pruned_common_colour;
                if (config.spot_check_pruned > 0) {
                  ++pruned_seen;
                  if (reservoir.size() <
                      static_cast<size_t>(config.spot_check_pruned)) {
                    reservoir.emplace_back(ps, a.masks);
                  } else {
                    std::uint64_t slot = spot_rng() % pruned_seen;
                    if (slot < reservoir.size()) {
                      reservoir[slot] = {ps, a.masks};
                    }
                  }
                }
              } else if (auto hit = cache.lookup(a.key)) {
                item.cached = true;
                item.verdict = *hit;
                ++sr.cache_hits;
              }
              batch.push_back(std::move(item));
              if (batch.size() >= 1024) flush();
              if (config.time_budget_seconds > 0 &&
                  elapsed() > config.time_budget_seconds) {
                report.complete = false;
                return false;
              }
              return true;
            });
        flush();
        report.structures.push_back(std::move(sr));
      }
    }
  }

  // Reduction-path spot check: every sampled pruned assignment must be
  // colourable via the part-common-colour step itself.
  for (const auto& [ps, masks] : reservoir) {
    ++report.spot_checks_run;
    Instance inst = assignment_from_masks(ps, masks);
    auto step = reduce_common_colour(inst);
    if (!step || !extend_reduction(inst, *step).success) {
      ++report.spot_check_failures;
    }
  }

  report.wall_seconds = elapsed();
  return report;
}

inline Json report_to_json(const VerificationReport& report) {
  Json j;
  j["k"] = report.k;
  j["complete"] = report.complete;
  Json structures = Json::array();
  std::uint64_t cache_hits = 0;
  for (const StructureReport& s : report.structures) {
    Json js;
    js["parts"] = s.parts;
    js["k"] = s.k;
    js["n"] = s.n;
    js["budget"] = s.budget;
    js["enumerated"] = s.enumerated;
    js["pruned_common_colour"] = s.pruned_common_colour;
    js["decided"] = s.decided;
    js["colourable"] = s.colourable;
    js["uncolourable"] = s.uncolourable;
    structures.push_back(js);
    cache_hits += s.cache_hits;
  }
  j["structures"] = structures;
  Json failures = Json::array();
  for (const FailureRecord& f : report.failures) {
    Json jf;
    jf["parts"] = f.parts;
    jf["key"] = f.key;
    jf["instance"] = f.instance;
    jf["universe_smaller_than_n"] = f.universe_smaller_than_n;
    failures.push_back(jf);
  }
  j["failures"] = failures;
  if (report.spot_checks_run > 0) {
    j["spot_checks_run"] = report.spot_checks_run;
    j["spot_check_failures"] = report.spot_check_failures;
  }
  // Run-dependent diagnostics live together so that reruns compare equal
  // once this subtree is dropped.
  j["timing"] =
      Json{{"wall_seconds", report.wall_seconds}, {"cache_hits", cache_hits}};
  return j;
}

struct SearchConfig {
  bool stop_on_first = false;
  std::uint64_t max_enumeration_nodes = 500'000'000;
};

struct SearchResult {
  std::vector<Instance> witnesses;
  std::uint64_t enumerated = 0;
};

namespace detail {

inline std::vector<int> normalized_sizes(std::vector<int> sizes) {
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

inline std::string sizes_key(const std::vector<int>& sizes, int k) {
  std::ostringstream out;
  for (int s : sizes) out << s << ',';
  out << '|' << k;
  return out.str();
}

// Canonical uncolourable assignments where every colour serves at least two
// vertices. Each witness is re-verified by the brute-force oracle.
inline SearchResult search_spread_witnesses(const PartStructure& ps, int k,
                                            const SearchConfig& config) {
  SearchResult result;
  EnumerationConfig ec;
  ec.list_size = k;
  ec.colour_budget = ps.n() * k / 2;
  ec.min_colour_spread = 2;
  ec.max_nodes = config.max_enumeration_nodes;
  if (ec.colour_budget < k) return result;  // no wide-enough assignment fits
  enumerate_canonical(ps, ec, [&](const CanonicalAssignment& a) {
    ++result.enumerated;
    Instance inst = assignment_from_masks(ps, a.masks);
    if (decide(inst).verdict == Verdict::UNCOLOURABLE) {
      if (brute_force_decide(inst).verdict != Verdict::UNCOLOURABLE) {
        throw InvariantViolation("witness failed brute-force re-verification");
      }
      result.witnesses.push_back(std::move(inst));
      if (config.stop_on_first) return false;
    }
    return true;
  });
  return result;
}

// Re-insert a vertex into a part that had `original_size` before deletion,
// giving it k fresh private colours. Private colours keep the enlarged
// instance exactly as hard as the child.
inline Instance lift_witness(const Instance& child, int original_size, int k) {
  std::vector<int> sizes = child.structure.part_sizes();
  std::vector<ColourSet> lists = child.assignment.lists;
  Colour fresh = child.universe().empty() ? 0 : child.universe().back() + 1;
  ColourSet private_list;
  for (int c = 0; c < k; ++c) private_list.push_back(fresh + c);
  if (original_size == 1) {
    sizes.push_back(1);
    lists.push_back(private_list);
  } else {
    int target = -1;
    for (size_t p = 0; p < sizes.size(); ++p) {
      if (sizes[p] == original_size - 1) target = static_cast<int>(p);
    }
    if (target < 0) {
      throw InvariantViolation("lift target part missing from child witness");
    }
    lists.insert(lists.begin() + child.structure.part_end(target),
                 private_list);
    sizes[target] += 1;
  }
  Instance lifted = make_instance(std::move(sizes), std::move(lists));
  if (decide(lifted).verdict != Verdict::UNCOLOURABLE ||
      brute_force_decide(lifted).verdict != Verdict::UNCOLOURABLE) {
    throw InvariantViolation("lifted witness is not uncolourable");
  }
  return lifted;
}

// One uncolourable assignment of the structure, if any exists: either a
// spread witness, or a lifted witness from a vertex-deleted child. An
// uncolourable assignment with a single-vertex colour stays uncolourable
// after deleting that vertex, so this recursion is existence-complete.
inline std::optional<Instance> find_bad_witness(
    const std::vector<int>& sizes, int k, const SearchConfig& config,
    std::map<std::string, bool>& memo) {
  if (sizes.empty()) return std::nullopt;
  std::string key = sizes_key(sizes, k);
  auto it = memo.find(key);
  if (it != memo.end() && !it->second) return std::nullopt;

  PartStructure ps{sizes};
  SearchConfig inner = config;
  inner.stop_on_first = true;
  SearchResult direct = search_spread_witnesses(ps, k, inner);
  if (!direct.witnesses.empty()) {
    memo[key] = true;
    return std::move(direct.witnesses.front());
  }
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0 && sizes[i] == sizes[i - 1]) continue;
    std::vector<int> child = sizes;
    if (--child[i] == 0) {
      child.erase(child.begin() + i);
    }
    child = normalized_sizes(child);
    if (auto sub = find_bad_witness(child, k, config, memo)) {
      memo[key] = true;
      return lift_witness(*sub, sizes[i], k);
    }
  }
  memo[key] = false;
  return std::nullopt;
}

}  // namespace detail

// Every uncolourable canonical assignment with all colours serving two or
// more vertices, plus one lifted witness per vertex-deleted child structure
// that is itself defeatable. Together these decide existence exactly: a bad
// assignment with a private colour restricts to a bad child assignment.
inline SearchResult search_non_choosable(const PartStructure& ps, int k,
                                         const SearchConfig& config = {}) {
  std::vector<int> sizes = detail::normalized_sizes(ps.part_sizes());
  PartStructure nps{sizes};
  SearchResult result = detail::search_spread_witnesses(nps, k, config);
  if (config.stop_on_first && !result.witnesses.empty()) return result;

  std::map<std::string, bool> memo;
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0 && sizes[i] == sizes[i - 1]) continue;
    std::vector<int> child = sizes;
    if (--child[i] == 0) {
      child.erase(child.begin() + i);
    }
    child = detail::normalized_sizes(child);
    if (auto sub = detail::find_bad_witness(child, k, config, memo)) {
      result.witnesses.push_back(detail::lift_witness(*sub, sizes[i], k));
      if (config.stop_on_first) return result;
    }
  }
  return result;
}

// Least t >= number of parts such that no assignment of exact-size-t lists
// defeats the structure.
inline int list_chromatic_number(const PartStructure& ps, int max_k,
                                 const SearchConfig& config = {}) {
  for (int t = ps.k(); t <= max_k; ++t) {
    SearchConfig existence = config;
    existence.stop_on_first = true;
    SearchResult r = search_non_choosable(ps, t, existence);
    if (r.witnesses.empty()) return t;
  }
  throw BudgetExceeded("list chromatic number exceeds max_k = " +
                       std::to_string(max_k));
}

}  // namespace ohba
