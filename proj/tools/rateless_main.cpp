// Command-line front end: closed-form design, numerical optimization,
// power allocation, reference tables, and Monte Carlo validation, with
// reproducible JSON/CSV outputs and a run manifest per command.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "rateless/capacity.hpp"
#include "rateless/closed_form.hpp"
#include "rateless/io.hpp"
#include "rateless/optimizer.hpp"
#include "rateless/power_alloc.hpp"
#include "rateless/simulator.hpp"

namespace {

using nlohmann::json;
using namespace rateless;

constexpr const char* kVersion = "0.1.0";
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RATELESS_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

struct OutputSet {
  std::map<std::string, std::string> files;  // path -> contents

  void add(const std::string& path, const std::string& contents) {
    files[path] = contents;
  }
  void add_json(const std::string& path, const json& j) {
    add(path, j.dump(2) + "\n");
  }
  /// Writes all payload files plus a manifest capturing the exact argv and
  /// output digests, so any run can be replayed bit-exactly.
  void commit(const std::string& command, const std::vector<std::string>& argv,
              std::uint64_t seed, const std::string& manifest_path) {
    json digests = json::object();
    for (const auto& [path, contents] : files) {
      write_file(path, contents);
      digests[path] = digest_hex(contents);
    }
    json manifest{{"command", command},
                  {"argv", argv},
                  {"seed", seed},
                  {"version", kVersion},
                  {"outputs", digests}};
    write_file(manifest_path, manifest.dump(2) + "\n");
  }
};

std::vector<std::string> g_argv;

int run_design(const std::string& size, double rate, double power_opt,
               const std::string& prefix) {
  GainMatrix g = size == "2x2"
                     ? design_2x2(rate, power_opt > 0
                                            ? power_opt
                                            : std::exp2(rate) - 1.0)
                     : design_3x3(rate, power_opt > 0
                                            ? power_opt
                                            : std::exp2(rate) - 1.0);
  const int n = size == "2x2" ? 2 : 3;
  CodeSpec spec{rate, n, n, g.power(), 1.0};
  ShortfallReport report = validate_perfect(g, spec);

  OutputSet out;
  out.add_json(prefix + "gain.json", gain_to_json(g));
  out.add(prefix + "shortfall.csv", shortfall_to_csv(report));
  out.commit("design", g_argv, 0, prefix + "manifest.json");

  std::cout << "design " << size << " rate=" << rate << " power=" << g.power()
            << " max_shortfall_pct=" << format_double(report.max_percent)
            << " unitarity_residual="
            << format_double(report.unitarity_residual) << "\n";
  return report.max_percent < 1e-6 ? 0 : kExitValidation;
}

int run_optimize(double rate, int layers, int blocks, double power_opt,
                 std::uint64_t seed, int restarts, int max_iterations,
                 const std::string& prefix) {
  CodeSpec spec{rate, layers, blocks,
                power_opt > 0 ? power_opt : std::exp2(rate) - 1.0, 1.0};
  OptimizerConfig cfg;
  cfg.seed = seed;
  cfg.restarts = restarts;
  cfg.max_iterations = max_iterations;
  OptimizeResult res = optimize_gain_matrix(spec, cfg);

  OutputSet out;
  out.add_json(prefix + "gain.json", gain_to_json(res.gain));
  out.add(prefix + "shortfall.csv", shortfall_to_csv(res.report));
  out.commit("optimize", g_argv, seed, prefix + "manifest.json");

  std::cout << "optimize L=" << layers << " M=" << blocks << " rate=" << rate
            << " max_shortfall_pct=" << format_double(res.report.max_percent)
            << " restart=" << res.winning_restart
            << (res.non_convergence ? " NON-CONVERGED" : "") << "\n";
  return res.non_convergence ? kExitValidation : 0;
}

int run_allocate(double per_layer_rate, int layers, int blocks, double power,
                 double noise_var, const std::string& prefix) {
  CodeSpec spec{per_layer_rate * layers, layers, blocks, power, noise_var};
  PowerAllocation alloc = allocate_powers(spec);
  const double worst = verify_allocation(alloc).cwiseAbs().maxCoeff();
  if (worst > 1e-9) {
    std::cerr << "allocation residual " << worst << " exceeds 1e-9\n";
    return kExitValidation;
  }

  OutputSet out;
  out.add_json(prefix + "alloc.json", allocation_to_json(alloc));
  out.add(prefix + "alloc.csv", allocation_to_csv(alloc));
  out.add(prefix + "alloc_rounded.csv", allocation_to_csv(alloc, 2));
  out.commit("allocate", g_argv, 0, prefix + "manifest.json");

  std::cout << "allocate L=" << layers << " M=" << blocks
            << " per_layer_rate=" << per_layer_rate
            << " max_residual=" << format_double(worst) << "\n";
  return 0;
}

std::string loss_table_csv(double rate, int max_layers, int max_blocks,
                           int decimals) {
  std::ostringstream out;
  out << "L";
  for (int m = 2; m <= max_blocks; ++m) out << ",m=" << m;
  out << "\n";
  for (int layers = 1; layers <= max_layers; ++layers) {
    out << "L=" << layers;
    for (int m = 2; m <= max_blocks; ++m) {
      out << "," << format_double(layering_loss_db(m, layers, rate), decimals);
    }
    out << "\n";
  }
  return out.str();
}

std::string efficiency_table_csv(double max_rate, int points) {
  std::ostringstream out;
  out << "base_rate,efficiency_bound,linear_bound\n";
  for (int i = 1; i <= points; ++i) {
    const double r = max_rate * i / points;
    const auto [mid, linear] = efficiency_lower_bound(r);
    out << format_double(r) << "," << format_double(mid) << ","
        << format_double(linear) << "\n";
  }
  return out.str();
}

int run_tables(const std::string& which, double rate, int max_layers,
               int max_blocks, double max_rate, int points,
               const std::string& prefix) {
  OutputSet out;
  if (which == "loss") {
    out.add(prefix + "table_loss.csv",
            loss_table_csv(rate, max_layers, max_blocks, -1));
    out.add(prefix + "table_loss_rounded.csv",
            loss_table_csv(rate, max_layers, max_blocks, 2));
  } else if (which == "shortfall") {
    CodeSpec spec{5.0, 3, 10, 31.0, 1.0};
    ShortfallReport rep = shortfall_report(
        sample_design_l3_m10(), spec, ThresholdSchedule::layered_bound(spec));
    out.add(prefix + "table_shortfall.csv", shortfall_to_csv(rep));
    out.add(prefix + "table_shortfall_rounded.csv", shortfall_to_csv(rep, 2));
  } else if (which == "powers") {
    PowerAllocation alloc = allocate_powers(CodeSpec{8.0, 4, 5, 255.0, 1.0});
    out.add(prefix + "table_powers.csv", allocation_to_csv(alloc));
    out.add(prefix + "table_powers_rounded.csv", allocation_to_csv(alloc, 2));
  } else if (which == "efficiency") {
    out.add(prefix + "table_efficiency.csv",
            efficiency_table_csv(max_rate, points));
  } else {
    std::cerr << "unknown table: " << which << "\n";
    return kExitIo;
  }
  out.commit("tables", g_argv, 0, prefix + "manifest.json");
  std::cout << "tables " << which << " written\n";
  return 0;
}

int run_simulate(const std::string& alloc_path, int blocks, int num_symbols,
                 std::uint64_t seed, const std::string& dither,
                 const std::string& prefix) {
  PowerAllocation alloc;
  try {
    alloc = allocation_from_json(json::parse(read_file(alloc_path)));
  } catch (const json::parse_error& e) {
    std::cerr << "cannot parse " << alloc_path << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "cannot parse " << alloc_path << ": " << e.what() << "\n";
    return kExitIo;
  }

  SimConfig cfg;
  cfg.allocation = alloc;
  cfg.num_symbols = num_symbols;
  cfg.seed = seed;
  cfg.max_blocks = blocks;
  if (blocks < 1 || blocks > alloc.spec.blocks) {
    std::cerr << "m must lie in [1, " << alloc.spec.blocks << "]\n";
    return kExitValidation;
  }
  cfg.gain_sq = alloc.thresholds.gains_sq[blocks - 1];
  if (dither == "pm1") {
    cfg.dither = DitherAlphabet::BinaryPm1;
  } else if (dither == "phase") {
    cfg.dither = DitherAlphabet::UnitPhase;
  } else if (dither == "off") {
    cfg.dither = DitherAlphabet::Off;
  } else {
    std::cerr << "unknown dither alphabet: " << dither << "\n";
    return kExitIo;
  }

  SimReport report = simulate_dithered_repetition(cfg);

  OutputSet out;
  out.add_json(prefix + "sim.json", sim_report_to_json(report));
  out.add(prefix + "sim.csv", sim_report_to_csv(report));
  out.commit("simulate", g_argv, seed, prefix + "manifest.json");

  bool within = true;
  for (int m = 0; m < report.empirical_sinr.rows(); ++m) {
    for (int l = 0; l < report.empirical_sinr.cols(); ++l) {
      const double err = std::abs(report.empirical_sinr(m, l) -
                                  report.analytic_sinr(m, l));
      if (err > 5.0 * std::max(report.standard_error(m, l), 1e-12)) {
        within = false;
      }
    }
  }
  std::cout << "simulate m=" << blocks << " N=" << num_symbols
            << " max_offdiag_corr=" << format_double(report.max_offdiag_corr)
            << (within ? " OK" : " SINR-MISMATCH") << "\n";
  return within ? 0 : kExitValidation;
}

int dispatch(std::vector<std::string> args);

int run_rerun(const std::string& manifest_path) {
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const std::exception& e) {
    std::cerr << "cannot parse manifest: " << e.what() << "\n";
    return kExitIo;
  }
  std::vector<std::string> argv =
      manifest.at("argv").get<std::vector<std::string>>();
  return dispatch(std::move(argv));
}

int dispatch(std::vector<std::string> args) {
  CLI::App app{"Layered rateless code design and validation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // design
  auto* design = app.add_subcommand(
      "design", "Closed-form perfect gain matrix (2x2 or 3x3)");
  std::string size = "3x3";
  double rate = 6.0;
  double power = -1.0;
  std::string prefix;
  design->add_option("--size", size)->check(CLI::IsMember({"2x2", "3x3"}));
  design->add_option("--rate", rate)->required();
  design->add_option("--power", power);
  design->add_option("--out-prefix", prefix);

  // optimize
  auto* optimize = app.add_subcommand(
      "optimize", "Numerically optimized gain matrix for L <= M");
  double orate = 5.0;
  int layers = 3, blocks = 10;
  double opower = -1.0;
  std::uint64_t seed = default_seed();
  int restarts = 8, max_iterations = 400;
  std::string oprefix;
  optimize->add_option("--rate", orate)->required();
  optimize->add_option("--layers", layers)->required();
  optimize->add_option("--blocks", blocks)->required();
  optimize->add_option("--power", opower);
  optimize->add_option("--seed", seed);
  optimize->add_option("--restarts", restarts);
  optimize->add_option("--max-iterations", max_iterations);
  optimize->add_option("--out-prefix", oprefix);

  // allocate
  auto* allocate = app.add_subcommand(
      "allocate", "Power allocation for the dithered-repetition scheme");
  double per_layer_rate = 2.0;
  int alayers = 4, ablocks = 5;
  double apower = 255.0, noise_var = 1.0;
  std::string aprefix;
  allocate->add_option("--per-layer-rate", per_layer_rate)->required();
  allocate->add_option("--layers", alayers)->required();
  allocate->add_option("--blocks", ablocks)->required();
  allocate->add_option("--power", apower)->required();
  allocate->add_option("--noise-var", noise_var);
  allocate->add_option("--out-prefix", aprefix);

  // tables
  auto* tables = app.add_subcommand("tables", "Reference tables as CSV");
  std::string which;
  double trate = 5.0, max_rate = 4.0;
  int max_layers = 9, max_blocks = 10, points = 200;
  std::string tprefix;
  tables->add_option("which", which)
      ->required()
      ->check(CLI::IsMember({"loss", "shortfall", "powers", "efficiency"}));
  tables->add_option("--rate", trate);
  tables->add_option("--max-layers", max_layers);
  tables->add_option("--max-blocks", max_blocks);
  tables->add_option("--max-rate", max_rate);
  tables->add_option("--points", points);
  tables->add_option("--out-prefix", tprefix);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo MRC successive-cancellation check");
  std::string alloc_path;
  int sim_m = 1, num_symbols = 100000;
  std::uint64_t sim_seed = default_seed();
  std::string dither = "pm1";
  std::string sprefix;
  simulate->add_option("--alloc", alloc_path)->required();
  simulate->add_option("--m", sim_m)->required();
  simulate->add_option("--num-symbols", num_symbols);
  simulate->add_option("--seed", sim_seed);
  simulate->add_option("--dither", dither)
      ->check(CLI::IsMember({"pm1", "phase", "off"}));
  simulate->add_option("--out-prefix", sprefix);

  // rerun
  auto* rerun = app.add_subcommand("rerun", "Replay a run from its manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path)->required();

  std::vector<const char*> argv;
  argv.push_back("rateless");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()),
              const_cast<char**>(argv.data()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  g_argv = args;
  try {
    if (design->parsed()) return run_design(size, rate, power, prefix);
    if (optimize->parsed()) {
      return run_optimize(orate, layers, blocks, opower, seed, restarts,
                          max_iterations, oprefix);
    }
    if (allocate->parsed()) {
      return run_allocate(per_layer_rate, alayers, ablocks, apower, noise_var,
                          aprefix);
    }
    if (tables->parsed()) {
      return run_tables(which, trate, max_layers, max_blocks, max_rate, points,
                        tprefix);
    }
    if (simulate->parsed()) {
      return run_simulate(alloc_path, sim_m, num_symbols, sim_seed, dither,
                          sprefix);
    }
    if (rerun->parsed()) return run_rerun(manifest_path);
  } catch (const RateTooHighError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(std::move(args));
}
