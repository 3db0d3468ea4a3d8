// Command-line front end: exact decisions, canonical verification runs,
// tightness searches and the counting ledger, all over the JSON instance
// and colouring formats.
//
// Exit codes: 0 success/verified; 1 mathematical negative (uncolourable,
// witness found, hypothesis failed); 2 usage or input error; 3 budget or
// time limit exceeded; 70 internal invariant failure (a bug, never a
// mathematical answer).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ohba/ohba.hpp"

namespace {

constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 70;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ohba::ParseError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Output {
  std::string path;  // empty = stdout
  std::string format = "json";

  void emit(const ohba::Json& data, const std::string& text_summary) const {
    std::string payload =
        format == "json" ? data.dump(2) + "\n" : text_summary;
    if (path.empty()) {
      std::cout << payload;
    } else {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw ohba::ParseError("cannot write file: " + path);
      out << payload;
    }
  }
};

std::vector<int> parse_parts_option(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      parts.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ohba::ParseError("bad part size: " + item);
    }
  }
  if (parts.empty()) throw ohba::ParseError("no part sizes given");
  return parts;
}

std::string verdict_name(ohba::Verdict v) {
  return v == ohba::Verdict::COLOURABLE ? "COLOURABLE" : "UNCOLOURABLE";
}

ohba::Json greedy_trace_json(const ohba::GreedyTrace& t) {
  ohba::Json j;
  j["outcome"] =
      t.outcome == ohba::GreedyOutcome::COMPLETED ? "COMPLETED" : "FAILED";
  if (!t.failure_reason.empty()) j["failure_reason"] = t.failure_reason;
  j["frequent_pool"] = t.frequent_pool;
  j["F"] = t.F;
  j["V1"] = t.V1;
  j["f1"] = ohba::colouring_to_json(t.f1);
  j["part_order"] = t.part_order;
  j["i"] = t.i;
  j["V2"] = t.V2;
  j["V3"] = t.V3;
  j["U"] = t.U;
  switch (t.phase3_mode) {
    case ohba::Phase3Mode::NONE: j["phase3_mode"] = "NONE"; break;
    case ohba::Phase3Mode::INJECTION: j["phase3_mode"] = "INJECTION"; break;
    case ohba::Phase3Mode::PAIR_SPLIT: j["phase3_mode"] = "PAIR_SPLIT"; break;
  }
  j["two_hit_holds"] = t.two_hit_holds;
  if (t.final_colouring) {
    j["final"] = ohba::colouring_to_json(*t.final_colouring);
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact list-colouring toolkit for complete multipartite graphs"};
  app.require_subcommand(1);
  // Let --out / --format appear after the subcommand too.
  app.fallthrough();

  Output output;
  app.add_option("--out", output.path, "Write the data output to a file");
  app.add_option("--format", output.format, "Output format: json or text")
      ->check(CLI::IsMember({"json", "text"}));

  // decide
  std::string decide_path;
  auto* cmd_decide =
      app.add_subcommand("decide", "Decide L-colourability of an instance");
  cmd_decide->add_option("instance", decide_path, "Instance JSON file")
      ->required();

  // chi-list
  std::string chi_parts;
  int chi_max_k = 4;
  auto* cmd_chi = app.add_subcommand(
      "chi-list", "List chromatic number of a part structure");
  cmd_chi->add_option("parts", chi_parts, "Comma-separated part sizes")
      ->required();
  cmd_chi->add_option("--max-k", chi_max_k, "Largest list size to try");

  // verify-ohba
  int verify_k = 2;
  ohba::VerifyConfig vconfig;
  bool no_cap = false, no_universe = false, restrict_full = false;
  auto* cmd_verify = app.add_subcommand(
      "verify-ohba",
      "Exhaustively verify colourability of all canonical exact-size-k "
      "assignments on structures with n <= 2k+1");
  cmd_verify->add_option("--k", verify_k, "Number of parts at the top level")
      ->required();
  cmd_verify->add_option("--budget", vconfig.colour_budget,
                         "Cap on the colour universe size");
  cmd_verify->add_flag("--no-cap-prune", no_cap,
                       "Disable the part-common-colour pruning rule");
  cmd_verify->add_flag("--no-universe-prune", no_universe,
                       "Disable the |C| <= 2k pruning rule");
  cmd_verify->add_flag("--restrict-max-n", restrict_full,
                       "Check only n = 2k+1 structures at the top level");
  cmd_verify->add_option("--workers", vconfig.workers, "Decide worker count");
  cmd_verify->add_option("--time-budget", vconfig.time_budget_seconds,
                         "Wall-clock budget in seconds (0 = unlimited)");
  cmd_verify->add_option("--cache", vconfig.cache_path,
                         "Verdict cache path (JSON lines, appended)");
  cmd_verify->add_option("--spot-check-pruned", vconfig.spot_check_pruned,
                         "Sample this many pruned assignments and verify "
                         "the reduction path");
  cmd_verify->add_option("--seed", vconfig.seed, "Sampling seed");

  // search-tight
  std::string tight_parts;
  int tight_k = 2;
  auto* cmd_tight = app.add_subcommand(
      "search-tight", "Find uncolourable exact-size-k assignments");
  cmd_tight->add_option("--parts", tight_parts, "Comma-separated part sizes")
      ->required();
  cmd_tight->add_option("--k", tight_k, "List size")->required();

  // convert
  std::string convert_instance, convert_colouring;
  auto* cmd_convert = app.add_subcommand(
      "convert", "Turn a near-acceptable colouring into an acceptable one");
  cmd_convert->add_option("instance", convert_instance, "Instance JSON file")
      ->required();
  cmd_convert
      ->add_option("colouring", convert_colouring, "Colouring JSON file")
      ->required();

  // greedy
  std::string greedy_path;
  bool greedy_strict = false;
  auto* cmd_greedy = app.add_subcommand(
      "greedy", "Run the three-phase near-acceptable construction");
  cmd_greedy->add_option("instance", greedy_path, "Instance JSON file")
      ->required();
  cmd_greedy->add_flag("--strict", greedy_strict,
                       "Require the n = 2k+1 / lists >= k shape");

  // saturate
  std::string saturate_path;
  auto* cmd_saturate = app.add_subcommand(
      "saturate", "Grow an uncolourable assignment until maximal");
  cmd_saturate->add_option("instance", saturate_path, "Instance JSON file")
      ->required();

  // audit
  std::string audit_path;
  auto* cmd_audit =
      app.add_subcommand("audit", "Evaluate the counting ledger");
  cmd_audit->add_option("instance", audit_path, "Instance JSON file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_decide) {
      ohba::Instance inst = ohba::parse_instance(read_file(decide_path));
      ohba::DecideResult r = ohba::decide(inst);
      ohba::Json j;
      j["verdict"] = verdict_name(r.verdict);
      if (r.witness) j["witness"] = ohba::colouring_to_json(*r.witness);
      j["nodes_explored"] = r.nodes_explored;
      output.emit(j, verdict_name(r.verdict) + "\n");
      return r.verdict == ohba::Verdict::COLOURABLE ? 0 : kExitNegative;
    }

    if (*cmd_chi) {
      ohba::PartStructure ps(parse_parts_option(chi_parts));
      int chi = ohba::list_chromatic_number(ps, chi_max_k);
      ohba::Json j;
      j["parts"] = ps.part_sizes();
      j["max_k"] = chi_max_k;
      j["chi_list"] = chi;
      output.emit(j, "chi_list = " + std::to_string(chi) + "\n");
      return 0;
    }

    if (*cmd_verify) {
      vconfig.cap_prune = !no_cap;
      vconfig.universe_prune = !no_universe;
      vconfig.restrict_to_full_n = restrict_full;
      if (vconfig.cache_path.empty()) {
        if (const char* env = std::getenv("OHBA_CACHE")) {
          vconfig.cache_path = env;
        }
      }
      ohba::VerificationReport report = ohba::verify_ohba(verify_k, vconfig);
      ohba::Json j = ohba::report_to_json(report);
      std::ostringstream text;
      text << (report.complete ? "COMPLETE" : "PARTIAL") << ", failures: "
           << report.failures.size() << "\n";
      output.emit(j, text.str());
      if (!report.failures.empty()) return kExitNegative;
      if (!report.complete) return kExitBudget;
      return 0;
    }

    if (*cmd_tight) {
      ohba::PartStructure ps(parse_parts_option(tight_parts));
      ohba::SearchResult r = ohba::search_non_choosable(ps, tight_k);
      ohba::Json j;
      j["parts"] = ps.part_sizes();
      j["k"] = tight_k;
      j["enumerated"] = r.enumerated;
      ohba::Json witnesses = ohba::Json::array();
      for (const ohba::Instance& w : r.witnesses) {
        witnesses.push_back(ohba::instance_to_json(w));
      }
      j["witnesses"] = witnesses;
      j["count"] = r.witnesses.size();
      output.emit(j, std::to_string(r.witnesses.size()) + " witnesses\n");
      return r.witnesses.empty() ? 0 : kExitNegative;
    }

    if (*cmd_convert) {
      ohba::Instance inst = ohba::parse_instance(read_file(convert_instance));
      ohba::Colouring f = ohba::parse_colouring(read_file(convert_colouring));
      if (f.size() != inst.n()) {
        throw ohba::StructuralError("colouring length does not match n");
      }
      try {
        ohba::ConversionResult r = ohba::convert_near_acceptable(inst, f);
        ohba::Json j;
        switch (r.path) {
          case ohba::ConversionPath::SATURATED: j["path"] = "SATURATED"; break;
          case ohba::ConversionPath::SATURATED_AFTER_REPAIR:
            j["path"] = "SATURATED_AFTER_REPAIR";
            break;
          case ohba::ConversionPath::CLASS_SPLIT:
            j["path"] = "CLASS_SPLIT";
            j["ell"] = r.ell;
            break;
        }
        j["colouring"] = ohba::colouring_to_json(r.colouring);
        output.emit(j, "converted\n");
        return 0;
      } catch (const ohba::ContractViolation& e) {
        std::cerr << "conversion hypothesis failed: " << e.what() << "\n";
        return kExitNegative;
      } catch (const ohba::HypothesisError& e) {
        std::cerr << "conversion hypothesis failed: " << e.what() << "\n";
        return kExitNegative;
      }
    }

    if (*cmd_greedy) {
      ohba::Instance inst = ohba::parse_instance(read_file(greedy_path));
      ohba::GreedyOptions opts;
      opts.best_effort = !greedy_strict;
      try {
        ohba::GreedyTrace t = ohba::three_phase(inst, opts);
        output.emit(greedy_trace_json(t),
                    t.outcome == ohba::GreedyOutcome::COMPLETED
                        ? "completed\n"
                        : "failed: " + t.failure_reason + "\n");
        return t.outcome == ohba::GreedyOutcome::COMPLETED ? 0
                                                           : kExitNegative;
      } catch (const ohba::ContractViolation& e) {
        std::cerr << "greedy hypothesis failed: " << e.what() << "\n";
        return kExitNegative;
      }
    }

    if (*cmd_saturate) {
      ohba::Instance inst = ohba::parse_instance(read_file(saturate_path));
      try {
        ohba::Instance sat = ohba::saturate(inst);
        output.emit(ohba::instance_to_json(sat),
                    ohba::serialize_instance(sat) + "\n");
        return 0;
      } catch (const ohba::ContractViolation& e) {
        std::cerr << "saturate hypothesis failed: " << e.what() << "\n";
        return kExitNegative;
      }
    }

    if (*cmd_audit) {
      ohba::Instance inst = ohba::parse_instance(read_file(audit_path));
      ohba::AuditLedger ledger = ohba::audit_ledger(inst);
      output.emit(ohba::ledger_to_json(ledger), ledger.status + "\n");
      return 0;
    }
  } catch (const ohba::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ohba::StructuralError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ohba::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ohba::InvariantViolation& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ohba::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
