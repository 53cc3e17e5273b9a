// Runs every acceptance criterion and prints one pass/fail line per criterion.
// Usage: acceptance [path/to/carleson-lab]   (the CLI is needed for criterion 11)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "carleson_lab/serialize.hpp"

using namespace carleson_lab;

namespace {

struct Criterion {
  const char* title;
  double budget_s;
};

const std::map<int, Criterion> kCriteria{
    {1, {"geometry identity and involution", 5}},
    {2, {"quadrature volumes and monomial norms", 10}},
    {3, {"kernel integral bracket", 60}},
    {4, {"lattice covering, separation, overlap", 60}},
    {5, {"ball and Berezin routes, lambda >= 1", 180}},
    {6, {"lattice and Berezin routes, lambda < 1", 180}},
    {7, {"product inequality constant", 180}},
    {8, {"Toeplitz boundedness, reproducing, homogeneity", 240}},
    {9, {"vanishing and compactness", 120}},
    {10, {"J_g, I_g, M_g identities and verdicts", 240}},
    {11, {"determinism: verify all, 1 vs 4 threads", 900}},
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  set_thread_count(1);
  const verify::Settings settings;

  std::vector<verify::SuiteResult> results;
  std::map<int, double> elapsed;
  double total = 0.0;
  for (const auto& name : verify::suite_names()) {
    const auto t0 = std::chrono::steady_clock::now();
    results.push_back(verify::run_suite(name, settings));
    const double dt = seconds_since(t0);
    total += dt;
    std::printf("suite %-10s %s  %.1fs\n", name.c_str(), results.back().pass() ? "pass" : "FAIL", dt);
    for (const auto& c : results.back().checks) {
      std::printf("    [%d] %s %s: %s\n", c.criterion, c.pass ? "ok  " : "FAIL", c.name.c_str(), c.detail.c_str());
      elapsed[c.criterion] = dt;  // a suite's time is charged to each criterion it hosts
    }
    std::fflush(stdout);
  }

  std::map<int, bool> pass;
  std::map<int, int> count;
  for (const auto& r : results)
    for (const auto& c : r.checks) {
      pass.try_emplace(c.criterion, true);
      pass[c.criterion] = pass[c.criterion] && c.pass;
      ++count[c.criterion];
    }

  // Criterion 11: the CLI at 4 threads must reproduce this process's summary byte for byte.
  bool det = false;
  std::string det_detail = "no CLI path given";
  double det_time = 0.0;
  if (!cli.empty()) {
    const auto dir = std::filesystem::temp_directory_path() / "carleson_lab_acceptance";
    std::filesystem::create_directories(dir);
    const auto summary = (dir / "summary.json").string();
    const auto log = (dir / "verify.log").string();
    std::filesystem::remove(summary);
    const std::string cmd = "CARLESON_LAB_THREADS=4 \"" + cli + "\" verify all --output \"" + summary + "\" > \"" + log + "\" 2>&1";
    const auto t0 = std::chrono::steady_clock::now();
    const int status = std::system(cmd.c_str());
    det_time = seconds_since(t0);
    const std::string expected = io::dump(io::verify_summary("all", results, settings));
    const std::string got = std::filesystem::exists(summary) ? io::read_file(summary) : "";
    det = status == 0 && got == expected;
    det_detail = "cli exit " + std::to_string(status) + ", summary " + std::to_string(got.size()) + " bytes, " +
                 (got == expected ? "identical to the 1-thread in-process run" : "DIFFERS from the 1-thread run");
    std::printf("cli verify all (4 threads): %.1fs, %s\n", det_time, det_detail.c_str());
  }
  pass[11] = det;
  count[11] = 1;
  elapsed[11] = total + det_time;

  std::printf("\n");
  bool all = true;
  for (const auto& [k, crit] : kCriteria) {
    const bool ok = pass.count(k) && pass[k] && count[k] > 0;
    all = all && ok;
    std::printf("criterion %2d %s  %-48s %3d checks  %7.1fs (budget %.0fs)\n", k, ok ? "PASS" : "FAIL", crit.title,
                count[k], elapsed[k], crit.budget_s);
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
