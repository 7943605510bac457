// entgeo: command-line driver for the entanglement-geometry toolkit.
//
// Subcommands: knorm, sknorm, blockpos, dual, ppt, prob, width, bounds,
// santalo, verify.  Global flags: --seed, --stream, --workers, --out,
// --format, --config.  Exit codes: 0 all checks passed, 1 verification
// failure, 2 usage / configuration / I/O error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "entgeo/config.hpp"
#include "entgeo/io.hpp"
#include "entgeo/report.hpp"
#include "entgeo/verify.hpp"

namespace {

using namespace entgeo;

struct Output {
  std::vector<CsvRow> rows;
  json results = json::array();
};

json config_echo(const ExperimentConfig& cfg) {
  return {{"command", cfg.command},
          {"d", cfg.d},
          {"k", cfg.k},
          {"d_min", cfg.d_min},
          {"d_max", cfg.d_max},
          {"k_min", cfg.k_min},
          {"k_max", cfg.k_max},
          {"samples", cfg.samples},
          {"restarts", cfg.restarts},
          {"max_iters", cfg.max_iters},
          {"tol", cfg.tol},
          {"seed", cfg.seed},
          {"streams", cfg.stream},
          {"workers", resolve_workers(cfg.workers)},
          {"format", cfg.format},
          {"constants",
           {{"C0", cfg.constants.C0},
            {"c0", cfg.constants.c0},
            {"C", cfg.constants.C},
            {"c", cfg.constants.c}}}};
}

void emit(const ExperimentConfig& cfg, const Output& out, double wall_clock) {
  std::string body;
  if (cfg.format == "csv") {
    std::ostringstream os;
    write_csv(os, out.rows);
    body = os.str();
  } else {
    body = make_manifest(cfg.command, config_echo(cfg), out.results, wall_clock).dump(2);
    body += '\n';
  }
  if (cfg.out.empty())
    std::cout << body;
  else
    save_text_file(cfg.out, body);
}

HermitianOperator<double> load_operator(const std::string& path) {
  auto [d, m] = matrix_from_json(load_json_file(path));
  return HermitianOperator<double>::from(std::move(m));
}

std::string extra(const json& j) { return j.dump(); }

int cmd_knorm(const ExperimentConfig& cfg, const std::string& vector_file) {
  const BipartiteVector<double> xi = vector_from_json(load_json_file(vector_file));
  const double value = k_norm(xi, cfg.k);
  Output out;
  out.rows.push_back({"knorm", static_cast<int>(xi.d), cfg.k, value, 0.0, 1, cfg.seed, ""});
  out.results.push_back({{"kind", "knorm"}, {"d", xi.d}, {"k", cfg.k}, {"value", value}});
  emit(cfg, out, 0.0);
  return 0;
}

int cmd_sknorm(const ExperimentConfig& cfg, const std::string& matrix_file) {
  auto [d, m] = matrix_from_json(load_json_file(matrix_file));
  const auto t0 = std::chrono::steady_clock::now();
  const ExtremalResult<double> res = sk_norm(m, cfg.k, cfg.seesaw());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Output out;
  out.rows.push_back({"sknorm", static_cast<int>(d), cfg.k, res.value, 0.0,
                      static_cast<std::uint64_t>(cfg.restarts), cfg.seed,
                      extra({{"converged", res.converged}, {"iterations", res.iterations}})});
  out.results.push_back(to_json(res));
  emit(cfg, out, secs);
  return 0;
}

int cmd_blockpos(const ExperimentConfig& cfg, const std::string& choi_file) {
  const QuantumMap<double> m = map_of_choi(load_operator(choi_file));
  const auto cert = k_block_positivity(m, cfg.k, cfg.seesaw());
  Output out;
  const json cj = to_json(cert);
  out.rows.push_back({"blockpos", static_cast<int>(m.d), cfg.k, cert.min_estimate, 0.0,
                      static_cast<std::uint64_t>(cfg.restarts), cfg.seed,
                      extra({{"verdict", cj["verdict"]}, {"exact", cert.exact}})});
  out.results.push_back(cj);
  emit(cfg, out, 0.0);
  return 0;
}

int cmd_dual(const ExperimentConfig& cfg, const std::string& y_file) {
  const HermitianOperator<double> y = load_operator(y_file);
  const auto cert = base_dual_test(y, cfg.k, cfg.seesaw());
  Output out;
  out.rows.push_back({"dual", static_cast<int>(std::llround(std::sqrt(double(y.dim())))), cfg.k,
                      cert.slack_bases, 0.0, static_cast<std::uint64_t>(cfg.restarts), cfg.seed,
                      extra({{"member", cert.member},
                             {"direct_min", cert.direct_min},
                             {"routes_agree", cert.routes_agree}})});
  out.results.push_back(to_json(cert));
  emit(cfg, out, 0.0);
  return 0;
}

int cmd_ppt(const ExperimentConfig& cfg, const std::string& state_file) {
  const HermitianOperator<double> h = load_operator(state_file);
  const DensityMatrix<double> rho = DensityMatrix<double>::from(h);
  const PptResult<double> res = ppt_test(rho);
  Output out;
  out.rows.push_back({"ppt", static_cast<int>(std::llround(std::sqrt(double(h.dim())))), 0,
                      res.lambda_min, 0.0, 1, cfg.seed, extra({{"ppt", res.is_ppt}})});
  out.results.push_back({{"kind", "ppt"}, {"ppt", res.is_ppt}, {"lambda_min", res.lambda_min}});
  emit(cfg, out, 0.0);
  return 0;
}

int cmd_prob(const ExperimentConfig& cfg) {
  SeeSawConfig<double> bracket_cfg = cfg.seesaw();
  const auto t0 = std::chrono::steady_clock::now();
  const ProbBracket b =
      prob_schmidt_k(cfg.d, cfg.k, cfg.samples, bracket_cfg, cfg.seed_spec(), cfg.workers);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Output out;
  const std::string flags = extra({{"exact", b.exact},
                                   {"n_yes", b.n_yes},
                                   {"n_no", b.n_no},
                                   {"n_unknown", b.n_unknown}});
  out.rows.push_back({"prob.lo", cfg.d, cfg.k, b.p_lo.value, b.p_lo.std_error, b.p_lo.n,
                      cfg.seed, flags});
  out.rows.push_back({"prob.hi", cfg.d, cfg.k, b.p_hi.value, b.p_hi.std_error, b.p_hi.n,
                      cfg.seed, flags});
  out.results.push_back({{"kind", "prob_schmidt_k"},
                         {"exact", b.exact},
                         {"p_lo", to_json(b.p_lo)},
                         {"p_hi", to_json(b.p_hi)},
                         {"n_unknown", b.n_unknown}});
  emit(cfg, out, secs);
  return 0;
}

int cmd_width(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const MonteCarloEstimate est =
      width_entk(cfg.d, cfg.k, cfg.samples, cfg.seesaw(), cfg.seed_spec(), cfg.workers);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Output out;
  out.rows.push_back({"width", cfg.d, cfg.k, est.value, est.std_error, est.n, cfg.seed,
                      extra({{"lower_estimate", true}})});
  out.results.push_back(to_json(est));
  emit(cfg, out, secs);
  return 0;
}

int cmd_bounds(const ExperimentConfig& cfg) {
  Output out;
  for (const BoundEnvelope& env : bound_envelopes(cfg.d, cfg.k, cfg.constants)) {
    const std::string kind = envelope_kind_name(env.kind);
    out.rows.push_back({"bounds." + kind + ".lower", env.d, env.k, env.lower, 0.0, 0, cfg.seed,
                        env.note.empty() ? "" : extra({{"note", env.note}})});
    out.rows.push_back({"bounds." + kind + ".upper", env.d, env.k, env.upper, 0.0, 0, cfg.seed,
                        env.note.empty() ? "" : extra({{"note", env.note}})});
    out.results.push_back(to_json(env));
  }
  emit(cfg, out, 0.0);
  return 0;
}

int cmd_santalo(const ExperimentConfig& cfg, int m) {
  Output out;
  for (const SantaloPair pair : {SantaloPair::ball_ball, SantaloPair::cube_crosspolytope}) {
    const SantaloReport rep = santalo_check(pair, m, cfg.constants.c);
    out.rows.push_back({std::string("santalo.") +
                            (pair == SantaloPair::ball_ball ? "ball_ball" : "cube_crosspolytope"),
                        m, 0, rep.product, 0.0, 0, cfg.seed,
                        extra({{"satisfies_upper", rep.satisfies_upper},
                               {"satisfies_lower_at_c", rep.satisfies_lower_at_c}})});
    out.results.push_back(to_json(rep));
  }
  emit(cfg, out, 0.0);
  return 0;
}

int cmd_verify(const ExperimentConfig& cfg, const std::string& suite, bool samples_given) {
  NormsSuiteParams norms;
  ChainSuiteParams chain;
  DualitySuiteParams duality;
  WidthSuiteParams width;
  ProbSuiteParams prob;

  norms.d_min = chain.d_min = duality.d_min = width.d_min = cfg.d_min;
  norms.d_max = chain.d_max = duality.d_max = width.d_max = cfg.d_max;
  norms.seed = chain.seed = duality.seed = width.seed = prob.seed = cfg.seed_spec();
  const int workers = resolve_workers(cfg.workers);
  norms.workers = chain.workers = duality.workers = width.workers = prob.workers = workers;
  chain.sk_restarts = cfg.restarts;
  duality.restarts = cfg.restarts;

  // Command-line sample counts rescale the per-suite grids; defaults favor a
  // quick interactive run over the full acceptance-scale grids.
  norms.vectors_per_cell = samples_given ? cfg.samples : 2000;
  chain.instances_per_cell = samples_given ? cfg.samples : 100;
  chain.product_samples = samples_given ? std::max<std::uint64_t>(cfg.samples, 1000) : 20000;
  duality.instances_per_cell = samples_given ? cfg.samples : 100;
  width.directions = samples_given ? cfg.samples : 200;
  prob.samples = samples_given ? cfg.samples : 20000;

  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport rep = run_suite(suite, norms, chain, duality, width, prob);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Output out;
  out.rows = rep.csv_rows();
  out.results.push_back(to_json(rep));
  emit(cfg, out, secs);
  if (!rep.all_pass()) {
    std::cerr << "verify " << suite << ": FAILED checks present\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entgeo: geometry of rank-constrained entanglement at desk scale"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_file;
  std::string vector_file, matrix_file, choi_file, y_file, state_file, constants_file;
  std::string suite;
  int santalo_m = 2;

  // Present on every subcommand (values shared through cfg).
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--stream", cfg.stream, "RNG stream index");
    sub->add_option("--workers", cfg.workers, "worker threads (0: ENTGEO_WORKERS or 1)")
        ->envname("ENTGEO_WORKERS");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json|csv");
    sub->add_option("--config", config_file, "key=value configuration file");
    sub->add_option("--restarts", cfg.restarts, "see-saw restarts");
    sub->add_option("--max-iters", cfg.max_iters, "see-saw iteration cap");
    sub->add_option("--tol", cfg.tol, "see-saw relative improvement threshold");
  };

  CLI::App* knorm = app.add_subcommand("knorm", "k-norm of a bipartite vector");
  knorm->add_option("--vector", vector_file, "vector JSON file")->required();
  knorm->add_option("--k", cfg.k, "Schmidt rank bound")->required();
  add_common(knorm);

  CLI::App* sknorm = app.add_subcommand("sknorm", "S(k) operator norm (see-saw lower bound)");
  sknorm->add_option("--matrix", matrix_file, "operator JSON file")->required();
  sknorm->add_option("--k", cfg.k, "Schmidt rank bound")->required();
  add_common(sknorm);

  CLI::App* blockpos = app.add_subcommand("blockpos", "k-block positivity certificate");
  blockpos->add_option("--choi", choi_file, "Choi matrix JSON file")->required();
  blockpos->add_option("--k", cfg.k, "Schmidt rank bound")->required();
  add_common(blockpos);

  CLI::App* dual = app.add_subcommand("dual", "base-duality membership test");
  dual->add_option("--y", y_file, "normalized direction JSON file")->required();
  dual->add_option("--k", cfg.k, "Schmidt rank bound")->required();
  add_common(dual);

  CLI::App* ppt = app.add_subcommand("ppt", "partial-transpose criterion");
  ppt->add_option("--state", state_file, "density matrix JSON file")->required();
  add_common(ppt);

  CLI::App* prob = app.add_subcommand("prob", "Schmidt-number probability bracket");
  prob->add_option("--d", cfg.d, "local dimension")->required();
  prob->add_option("--k", cfg.k, "Schmidt rank bound")->required();
  prob->add_option("--samples", cfg.samples, "Monte Carlo samples");
  add_common(prob);

  CLI::App* width = app.add_subcommand("width", "mean width of the rank-<= k state body");
  width->add_option("--d", cfg.d, "local dimension")->required();
  width->add_option("--k", cfg.k, "Schmidt rank bound")->required();
  width->add_option("--samples", cfg.samples, "Gaussian directions");
  add_common(width);

  CLI::App* bounds = app.add_subcommand("bounds", "closed-form bound envelopes");
  bounds->add_option("--d", cfg.d, "local dimension")->required();
  bounds->add_option("--k", cfg.k, "Schmidt rank bound")->required();
  bounds->add_option("--constants", constants_file, "envelope constants key=value file");
  add_common(bounds);

  CLI::App* santalo = app.add_subcommand("santalo", "volume-radius products of polar pairs");
  santalo->add_option("--m", santalo_m, "ambient dimension (1..10)")->required();
  add_common(santalo);

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "norms|chain|duality|width|prob")->required();
  verify->add_option("--samples", cfg.samples, "per-cell sample count");
  verify->add_option("--d-min", cfg.d_min, "smallest local dimension");
  verify->add_option("--d-max", cfg.d_max, "largest local dimension");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();

    // Precedence: flags > config file > defaults.  The file is applied first
    // to a scratch copy, then explicitly-passed flags win by re-parsing.
    std::set<std::string> file_keys;
    if (!config_file.empty()) {
      ExperimentConfig from_file = cfg;
      file_keys = load_config_file(from_file, config_file);
      auto keep_flag = [&](const std::string& flag, auto& file_value, auto& flag_value) {
        if (sub->count(flag) == 0) flag_value = file_value;
      };
      keep_flag("--seed", from_file.seed, cfg.seed);
      keep_flag("--stream", from_file.stream, cfg.stream);
      keep_flag("--workers", from_file.workers, cfg.workers);
      keep_flag("--out", from_file.out, cfg.out);
      keep_flag("--format", from_file.format, cfg.format);
      keep_flag("--restarts", from_file.restarts, cfg.restarts);
      keep_flag("--max-iters", from_file.max_iters, cfg.max_iters);
      keep_flag("--tol", from_file.tol, cfg.tol);
      if (sub->count("--samples") == 0) cfg.samples = from_file.samples;
      if (sub->count("--d") == 0) cfg.d = from_file.d;
      if (sub->count("--k") == 0) cfg.k = from_file.k;
      if (sub->count("--d-min") == 0) cfg.d_min = from_file.d_min;
      if (sub->count("--d-max") == 0) cfg.d_max = from_file.d_max;
      cfg.constants = from_file.constants;
    }
    if (!constants_file.empty()) load_config_file(cfg, constants_file);

    const bool monte_carlo = cfg.command == "prob" || cfg.command == "width";
    validate_config(cfg, monte_carlo);
    if ((cfg.command == "prob" || cfg.command == "width" || cfg.command == "bounds") &&
        (cfg.k < 1 || cfg.k > cfg.d))
      throw ConfigError("need 1 <= k <= d");

    if (cfg.command == "knorm") return cmd_knorm(cfg, vector_file);
    if (cfg.command == "sknorm") return cmd_sknorm(cfg, matrix_file);
    if (cfg.command == "blockpos") return cmd_blockpos(cfg, choi_file);
    if (cfg.command == "dual") return cmd_dual(cfg, y_file);
    if (cfg.command == "ppt") return cmd_ppt(cfg, state_file);
    if (cfg.command == "prob") return cmd_prob(cfg);
    if (cfg.command == "width") return cmd_width(cfg);
    if (cfg.command == "bounds") return cmd_bounds(cfg);
    if (cfg.command == "santalo") return cmd_santalo(cfg, santalo_m);
    if (cfg.command == "verify")
      return cmd_verify(cfg, suite,
                        verify->count("--samples") > 0 || file_keys.count("samples") > 0);
    throw ConfigError("unknown command " + cfg.command);
  } catch (const ConfigError& e) {
    std::cerr << "entgeo: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "entgeo: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "entgeo: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "entgeo: " << e.what() << "\n";
    return 2;
  }
}
