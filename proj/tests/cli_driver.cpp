// Exercises the installed binary end to end: exit codes, JSON shapes, and
// byte-level determinism. Usage: cli_driver <binary> <data-dir> <work-dir>.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

int failures = 0;

void report(bool ok, const std::string& label) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << label << "\n";
  if (!ok) ++failures;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& command) {
  RunResult result;
  std::string wrapped = command + " 2>/dev/null";
  FILE* pipe = popen(wrapped.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buffer;
  size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.out.append(buffer.data(), got);
  }
  int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

Json parse(const std::string& text) {
  return Json::parse(text, nullptr, false);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::cerr << "usage: cli_driver <binary> <data-dir> <work-dir>\n";
    return 2;
  }
  std::string bin = argv[1];
  std::string data = argv[2];
  std::string work = argv[3];
  std::filesystem::create_directories(work);

  {
    RunResult r = run(bin + " decide " + data + "/k11_bad.json");
    Json j = parse(r.out);
    report(r.exit_code == 1 && j.is_object() &&
               j["verdict"] == "UNCOLOURABLE" && !j.contains("witness"),
           "decide: uncolourable pair exits 1");
  }
  {
    RunResult r = run(bin + " decide " + data + "/small_colourable.json");
    Json j = parse(r.out);
    bool witness_ok = false;
    if (j.is_object() && j.contains("witness")) {
      // Witness round-trips through the colouring schema.
      witness_ok = j["witness"].is_array() && j["witness"].size() == 3;
      for (const auto& entry : j["witness"]) {
        witness_ok &= entry.is_number_integer();
      }
    }
    report(r.exit_code == 0 && j["verdict"] == "COLOURABLE" && witness_ok,
           "decide: colourable instance exits 0 with witness");
  }
  {
    RunResult a = run(bin + " decide " + data + "/k33_bad.json");
    RunResult b = run(bin + " decide " + data + "/k33_bad.json");
    report(a.out == b.out && a.exit_code == b.exit_code,
           "decide: byte-identical across runs");
  }
  {
    RunResult r = run(bin + " decide " + data + "/no_such_file.json");
    report(r.exit_code == 2, "decide: missing file exits 2");
  }
  {
    std::string broken = work + "/broken.json";
    std::ofstream(broken) << "{oops";
    RunResult r = run(bin + " decide " + broken);
    report(r.exit_code == 2, "decide: malformed JSON exits 2");
  }
  {
    RunResult r = run(bin + " chi-list 2,2 --max-k 4");
    Json j = parse(r.out);
    report(r.exit_code == 0 && j["chi_list"] == 2, "chi-list: K_{2,2} is 2");
  }
  {
    RunResult r = run(bin + " chi-list 3,3 --max-k 2");
    report(r.exit_code == 3, "chi-list: exhausted max-k exits 3");
  }
  {
    RunResult r = run(bin + " verify-ohba --k 2");
    Json j = parse(r.out);
    report(r.exit_code == 0 && j["complete"] == true &&
               j["failures"].is_array() && j["failures"].empty(),
           "verify-ohba: k=2 verifies with no failures");
  }
  {
    RunResult a = run(bin + " verify-ohba --k 2");
    RunResult b = run(bin + " verify-ohba --k 2 --workers 3");
    Json ja = parse(a.out);
    Json jb = parse(b.out);
    ja.erase("timing");
    jb.erase("timing");
    report(ja.dump() == jb.dump(),
           "verify-ohba: report independent of worker count");
  }
  {
    std::string cache = work + "/cache.jsonl";
    std::remove(cache.c_str());
    RunResult a =
        run(bin + " verify-ohba --k 2 --cache " + cache);
    RunResult b =
        run(bin + " verify-ohba --k 2 --cache " + cache);
    Json ja = parse(a.out);
    Json jb = parse(b.out);
    bool warm_hit = jb["timing"]["cache_hits"].get<long long>() > 0;
    ja.erase("timing");
    jb.erase("timing");
    report(ja.dump() == jb.dump() && warm_hit,
           "verify-ohba: warm cache rerun identical modulo timing");
  }
  {
    RunResult r = run(bin + " verify-ohba --k 2 --restrict-max-n");
    Json j = parse(r.out);
    bool only_full = true;
    for (const auto& s : j["structures"]) {
      if (s["k"].get<int>() == 2) only_full &= s["n"].get<int>() == 5;
    }
    report(r.exit_code == 0 && only_full,
           "verify-ohba: --restrict-max-n keeps only n=2k+1 at the top");
  }
  {
    std::string cache = work + "/env_cache.jsonl";
    std::remove(cache.c_str());
    RunResult r =
        run("OHBA_CACHE=" + cache + " " + bin + " verify-ohba --k 2");
    bool created = std::filesystem::exists(cache);
    report(r.exit_code == 0 && created,
           "verify-ohba: OHBA_CACHE selects the default cache path");
  }
  {
    RunResult r = run(bin + " search-tight --parts 3,3 --k 2");
    Json j = parse(r.out);
    report(r.exit_code == 1 && j["count"].get<int>() > 0,
           "search-tight: (3,3) finds witnesses and exits 1");
  }
  {
    RunResult r = run(bin + " search-tight --parts 1,5 --k 2");
    Json j = parse(r.out);
    report(r.exit_code == 0 && j["count"].get<int>() == 0,
           "search-tight: (1,5) finds none and exits 0");
  }
  {
    RunResult r = run(bin + " convert " + data +
                      "/near_acceptable_instance.json " + data +
                      "/near_acceptable_colouring.json");
    Json j = parse(r.out);
    report(r.exit_code == 0 && j.contains("colouring") &&
               j["path"] == "CLASS_SPLIT",
           "convert: near-acceptable colouring converts");
  }
  {
    // An improper colouring is a failed hypothesis, not an input error.
    std::string improper = work + "/improper.json";
    std::ofstream(improper) << "[1,1]";
    RunResult r = run(bin + " convert " + data + "/k11_bad.json " + improper);
    report(r.exit_code == 1, "convert: improper colouring exits 1");
  }
  {
    RunResult r = run(bin + " greedy " + data + "/k331_identical.json");
    Json j = parse(r.out);
    report(r.exit_code == 0 && j["outcome"] == "COMPLETED" &&
               j.contains("final"),
           "greedy: identical-lists trace completes");
  }
  {
    RunResult r = run(bin + " greedy " + data + "/k33_bad.json");
    Json j = parse(r.out);
    report(r.exit_code == 1 && j["outcome"] == "FAILED",
           "greedy: six-vertex assignment yields a failure trace");
  }
  {
    RunResult r = run(bin + " saturate " + data + "/bad_triangle.json");
    Json j = parse(r.out);
    bool full = j.is_object() && j["lists"].is_array();
    if (full) {
      for (const auto& list : j["lists"]) full &= list.size() == 2;
    }
    report(r.exit_code == 0 && full,
           "saturate: triangle instance saturates to full lists");
  }
  {
    RunResult r = run(bin + " saturate " + data + "/small_colourable.json");
    report(r.exit_code == 1, "saturate: colourable input exits 1");
  }
  {
    RunResult r = run(bin + " audit " + data + "/k33_bad.json");
    Json j = parse(r.out);
    bool has_checks = j.is_object() && j["checks"].is_array() &&
                      j["checks"].size() >= 15;
    bool flags = j["hypotheses_failed"] == Json::array({"n_at_most_2k_plus_1"});
    report(r.exit_code == 0 && has_checks && flags,
           "audit: ledger reports the failed shape hypothesis");
  }
  {
    RunResult r = run(bin + " audit " + data + "/k331_identical.json " +
                      "--format text");
    report(r.exit_code == 0 && r.out.find("colourable") != std::string::npos,
           "audit: text format mentions colourability");
  }
  {
    // Saturate output re-parses as an instance file (round-trip).
    RunResult r = run(bin + " saturate " + data + "/bad_triangle.json");
    std::string sat_path = work + "/saturated.json";
    std::ofstream(sat_path) << r.out;
    RunResult rr = run(bin + " audit " + sat_path);
    report(rr.exit_code == 0, "saturate output round-trips into audit");
  }

  std::cout << (failures == 0 ? "ALL CLI CHECKS PASSED\n"
                              : "CLI CHECKS FAILED\n");
  return failures == 0 ? 0 : 1;
}
