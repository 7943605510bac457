// Acceptance suite: runs every toolkit-level criterion at full scale and
// prints one pass/fail line per criterion.  Exit status is the number of
// failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "entgeo/cone.hpp"
#include "entgeo/io.hpp"
#include "entgeo/random.hpp"
#include "entgeo/report.hpp"
#include "entgeo/seesaw.hpp"
#include "entgeo/tensor.hpp"
#include "entgeo/verify.hpp"
#include "entgeo/volumetry.hpp"

using namespace entgeo;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int number, const std::string& name, bool pass, double seconds,
            const std::string& detail = "") {
  std::printf("criterion %02d [%s] %-34s (%7.1f s)%s%s\n", number, pass ? "PASS" : "FAIL",
              name.c_str(), seconds, detail.empty() ? "" : "  ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool suite_group_passes(const SuiteReport& rep, const std::vector<std::string>& names,
                        std::string& failures) {
  bool ok = true;
  for (const auto& c : rep.checks) {
    for (const auto& n : names) {
      if (c.name == n && !c.pass) {
        ok = false;
        failures += " " + c.name + "(d=" + std::to_string(c.d) + ",k=" + std::to_string(c.k) +
                    ": " + c.detail + ")";
      }
    }
  }
  return ok;
}

// ---- criterion 11 helpers -------------------------------------------------

std::string run_cli(const std::string& args, const std::string& out_file, int expected_exit) {
  const std::string cmd = std::string(ENTGEO_CLI_PATH) + " " + args + " --out " + out_file;
  const int rc = std::system(cmd.c_str());
  const int exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  if (exit_code != expected_exit)
    return "exit " + std::to_string(exit_code) + " for: " + cmd;
  return "";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main() {
  const SeedSpec seed{20100419, 0};
  const int workers = 2;

  // --- criteria 1 and 2: k-norm inequality and subset averaging -----------
  {
    Timer t;
    NormsSuiteParams p;
    p.d_min = 2;
    p.d_max = 8;
    p.vectors_per_cell = 10000;
    p.subset_vectors = 100;
    p.seed = seed;
    p.workers = workers;
    const SuiteReport rep = verify_norms(p);
    const double secs = t.seconds();
    std::string f1, f2;
    const bool c1 = suite_group_passes(
        rep, {"knorm-floor", "knorm-floor-equality", "knorm-monotone",
              "knorm-full-equals-norm", "schmidt-reconstruction"},
        f1);
    report(1, "k-norm inequality", c1 && secs < 60.0, secs, f1);
    const bool c2 = suite_group_passes(rep, {"subset-averaging"}, f2);
    report(2, "subset-averaging identities", c2, 0.0, f2);
  }

  // --- criteria 3 and 4: chain inequality and product average -------------
  {
    Timer t;
    ChainSuiteParams p;
    p.d_min = 2;
    p.d_max = 5;
    p.instances_per_cell = 1000;
    p.sk_restarts = 50;
    p.product_directions = 20;
    p.product_samples = 100000;
    p.rate_threshold = 0.99;
    p.seed = seed;
    p.workers = workers;
    const SuiteReport rep = verify_chain(p);
    const double secs = t.seconds();
    std::string f3, f4;
    const bool c3 = suite_group_passes(rep, {"chain-witness", "sk-floor-rate"}, f3);
    report(3, "chain inequality at witnesses", c3 && secs < 600.0, secs, f3);
    const bool c4 = suite_group_passes(rep, {"product-average"}, f4);
    report(4, "product-state average", c4, 0.0, f4);
  }

  // --- criterion 5: SWAP certificates, timed on their own -----------------
  {
    Timer t;
    bool ok = true;
    std::string f5;
    for (int d = 2; d <= 4; ++d) {
      SeeSawConfig<double> cfg;
      cfg.restarts = 24;
      cfg.rng = seed;
      const auto swap_map = map_of_choi(flip_operator<double>(d));
      const auto c1 = k_block_positivity(swap_map, 1, cfg);
      const auto c2 = k_block_positivity(swap_map, 2, cfg);
      if (c1.verdict == BlockPositivityCertificate<double>::Verdict::refuted ||
          std::abs(c1.min_estimate) > 1e-8 ||
          c2.verdict != BlockPositivityCertificate<double>::Verdict::refuted ||
          std::abs(c2.min_estimate + 1.0) > 1e-8) {
        ok = false;
        f5 += " d=" + std::to_string(d) + " min1=" + std::to_string(c1.min_estimate) +
              " min2=" + std::to_string(c2.min_estimate);
      }
    }
    const double secs = t.seconds();
    report(5, "flip-operator certificates", ok && secs < 30.0, secs, f5);
  }

  // --- criterion 6: duality route agreement --------------------------------
  {
    Timer t;
    DualitySuiteParams p;
    p.d_min = 2;
    p.d_max = 4;
    p.instances_per_cell = 1000;
    p.restarts = 12;
    p.seed = seed;
    p.workers = workers;
    const SuiteReport rep = verify_duality(p);
    std::string f6;
    const bool c6 = suite_group_passes(
        rep, {"route-agreement", "bipolarity-psd", "swap-blockpos", "refutation-monotone",
              "cp-sandwich"},
        f6);
    report(6, "duality route agreement", c6, t.seconds(), f6);
  }

  // --- criterion 7: two-qubit probability at 1e6, five seeds --------------
  {
    Timer t;
    ProbSuiteParams p;
    p.n_seeds = 5;
    p.samples = 1000000;
    p.stderr_max = 5e-4;
    p.monotone_samples = 4000;
    p.seed = seed;
    p.workers = workers;
    const SuiteReport rep = verify_prob(p);
    const double secs = t.seconds();
    std::string f7;
    const bool c7 = suite_group_passes(
        rep, {"two-qubit-exact", "two-qubit-stderr", "two-qubit-cross-seed", "all-states",
              "bracket-monotone-k"},
        f7);
    report(7, "two-qubit probability", c7 && secs < 300.0, secs, f7);
  }

  // --- criteria 8, 9, 10: width machinery, scaling study, Santalo ---------
  {
    Timer t;
    WidthSuiteParams p;
    p.d_min = 2;
    p.d_max = 6;
    p.directions = 1000;
    p.restarts = 6;
    p.ball_samples = 10000;
    p.seed = seed;
    p.workers = workers;
    const SuiteReport rep = verify_width(p);
    const double secs = t.seconds();
    std::string f8, f9, f10;
    const bool c8 = suite_group_passes(
        rep, {"gamma-closed-forms", "gamma-sqrt-band", "ball-width", "segment-width",
              "zero-body", "urysohn-consistency"},
        f8);
    report(8, "width machinery", c8, secs, f8);
    const bool c9 =
        suite_group_passes(rep, {"width-scaling-band", "width-scaling-monotone"}, f9);
    report(9, "width scaling study", c9 && secs < 1800.0, secs, f9);
    const bool c10 = suite_group_passes(rep, {"santalo-products"}, f10);
    report(10, "santalo products", c10, 0.0, f10);
  }

  // --- criterion 11: CLI determinism under worker counts 1, 4, 16 ---------
  {
    Timer t;
    std::string failure;
    const fs::path dir =
        fs::temp_directory_path() / ("entgeo_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    // input files
    const fs::path bell_vec = dir / "bell_vec.json";
    const fs::path swap_mat = dir / "swap.json";
    const fs::path bell_state = dir / "bell_state.json";
    {
      std::ofstream(bell_vec) << to_json(maximally_entangled<double>(2)).dump();
      std::ofstream(swap_mat) << matrix_to_json(2, flip_operator<double>(2).mat).dump();
      std::ofstream(bell_state)
          << matrix_to_json(2, projector(maximally_entangled<double>(2)).mat).dump();
    }

    struct Cmd {
      std::string name;
      std::string args;
    };
    const std::vector<Cmd> commands{
        {"knorm", "knorm --vector " + bell_vec.string() + " --k 1"},
        {"sknorm", "sknorm --matrix " + swap_mat.string() + " --k 1 --restarts 6"},
        {"blockpos", "blockpos --choi " + swap_mat.string() + " --k 2 --restarts 6"},
        {"dual", "dual --y " + swap_mat.string() + " --k 1 --restarts 6"},
        {"ppt", "ppt --state " + bell_state.string()},
        {"prob", "prob --d 2 --k 1 --samples 4000"},
        {"width", "width --d 2 --k 1 --samples 128 --restarts 4"},
        {"bounds", "bounds --d 3 --k 2"},
        {"santalo", "santalo --m 2"},
        {"verify", "verify --suite norms --samples 256 --d-min 2 --d-max 3"},
    };
    for (const Cmd& cmd : commands) {
      std::string reference;
      for (const int w : {1, 4, 16}) {
        for (int repeat = 0; repeat < 2; ++repeat) {
          const fs::path out =
              dir / (cmd.name + "_w" + std::to_string(w) + "_r" + std::to_string(repeat) + ".csv");
          const std::string err = run_cli(
              cmd.args + " --seed 7 --format csv --workers " + std::to_string(w), out.string(),
              0);
          if (!err.empty()) {
            failure = err;
            break;
          }
          const std::string body = slurp(out.string());
          if (body.empty()) failure = cmd.name + ": empty output";
          if (reference.empty())
            reference = body;
          else if (body != reference)
            failure = cmd.name + ": CSV bodies differ across workers/reruns";
        }
        if (!failure.empty()) break;
      }
      if (!failure.empty()) break;
    }

    // exit-code contract: unknown suite is a usage error (2)
    if (failure.empty()) {
      const std::string err = run_cli("verify --suite bogus 2>/dev/null",
                                      (dir / "bogus.out").string(), 2);
      if (!err.empty()) failure = "unknown-suite " + err;
    }
    // exit-code contract: a verify run exits 1 exactly when its manifest
    // records failing checks (crippled configuration, may or may not fail)
    if (failure.empty()) {
      const fs::path out = dir / "crippled.json";
      const std::string cmd = std::string(ENTGEO_CLI_PATH) +
                              " verify --suite chain --samples 10 --restarts 1 --d-max 4"
                              " --seed 3 --format json --workers 2 2>/dev/null --out " +
                              out.string();
      const int rc = std::system(cmd.c_str());
      const int exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
      try {
        const json manifest = json::parse(slurp(out.string()));
        const bool all_pass = manifest["results"][0]["summary"]["pass"].get<bool>();
        if (exit_code != (all_pass ? 0 : 1))
          failure = "verify exit code " + std::to_string(exit_code) +
                    " inconsistent with manifest pass=" + (all_pass ? "true" : "false");
      } catch (const std::exception& e) {
        failure = std::string("crippled-manifest parse: ") + e.what();
      }
    }

    fs::remove_all(dir);
    report(11, "CLI determinism", failure.empty(), t.seconds(), failure);
  }

  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return g_failures;
}
