// spectra: pressure, spectra, skeletons and family towers of symbolic models.
//
// Exit status: 0 when every checked invariant holds, 1 when one fails,
// 2 on usage or configuration errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pipeline.hpp"
#include "spectra/errors.hpp"
#include "spectra/parallel.hpp"

namespace {

using spectra::cli::Format;
using spectra::cli::RunConfig;

struct Common {
  std::string format;
  std::size_t threads = 0;
};

void add_common(CLI::App* sub, RunConfig& cfg, Common& common, bool config_required) {
  auto* opt = sub->add_option("--config,-c", cfg.config_path, "model description (key = value sections)");
  if (config_required) opt->required();
  sub->add_option("--format,-f", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output,-o", cfg.output, "write the report here instead of stdout");
  sub->add_option("--seed", cfg.seed, "seed recorded in the report and used for sampling");
  sub->add_option("--threads", common.threads, "worker threads (default: SPECTRA_THREADS or all cores)");
  sub->add_option("--resolution,-j", cfg.res_j, "resolution depth j (epsilon = 2^-j)")->check(CLI::NonNegativeNumber);
}

void add_grids(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--q-min", cfg.q_min, "smallest q of the pressure grid");
  sub->add_option("--q-max", cfg.q_max, "largest q of the pressure grid");
  sub->add_option("--q-points", cfg.q_points, "points of the pressure grid");
  sub->add_option("--alpha-points", cfg.alpha_points, "points of the spectrum grid");
}

void add_schedule(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--eps", cfg.eps, "decreasing tolerances eps_1 > eps_2 > ...")->delimiter(',');
  sub->add_option("--levels", cfg.levels, "use only the first LEVELS tolerances");
  sub->add_option("--sign", cfg.sign, "exponent side: negative or positive")
      ->check(CLI::IsMember({"negative", "positive"}));
  sub->add_option("--K0", cfg.K0, "distortion constant of the skeleton windows");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectra: entropy spectra and zero-exponent families of symbolic models"};
  app.require_subcommand(1);
  RunConfig cfg;
  Common common;

  auto* pressure = app.add_subcommand("pressure", "pressure function on a q grid (CSV)");
  add_common(pressure, cfg, common, true);
  add_grids(pressure, cfg);
  pressure->add_option("--restriction", cfg.restriction, "none, negative or positive")
      ->check(CLI::IsMember({"none", "negative", "positive"}));

  auto* spectrum = app.add_subcommand("spectrum", "entropy spectrum via the Legendre-Fenchel transform (CSV)");
  add_common(spectrum, cfg, common, true);
  add_grids(spectrum, cfg);
  spectrum->add_flag("--oracle", cfg.oracle, "compare against the closed form (depth-1 full shifts)");

  auto* skeleton = app.add_subcommand("skeleton", "extract and verify a pre-skeleton");
  add_common(skeleton, cfg, common, true);
  add_grids(skeleton, cfg);
  skeleton->add_option("--alpha", cfg.alpha, "target exponent");
  skeleton->add_option("--eps-E", cfg.eps_E, "exponent window");
  skeleton->add_option("--eps-H", cfg.eps_H, "entropy slack");
  skeleton->add_option("-m,--length", cfg.m, "word length");
  skeleton->add_option("--K0", cfg.K0, "distortion constant");
  skeleton->add_option("--words", cfg.words_out, "write the members to this file");

  auto* schedule = app.add_subcommand("schedule", "quantifier schedule with its inequality checks");
  add_common(schedule, cfg, common, true);
  add_grids(schedule, cfg);
  add_schedule(schedule, cfg);

  auto* build = app.add_subcommand("build-set", "build, verify and audit the family tower (tower.json)");
  add_common(build, cfg, common, true);
  add_grids(build, cfg);
  add_schedule(build, cfg);
  build->add_option("--budget", cfg.budget, "largest family enumerated member by member");
  build->add_option("--sample", cfg.sample, "members retained beyond the budget");
  build->add_option("--envelope-samples", cfg.envelope_samples, "tower points in the exponent check (0: skip)");
  build->add_flag("--backward", cfg.backward, "also extend member 0 into the past");

  auto* verify = app.add_subcommand("verify", "local entropy audit and distribution certificate");
  add_common(verify, cfg, common, true);
  verify->add_option("--tower", cfg.tower_path, "report written by build-set")->required();
  verify->add_option("--theta", cfg.theta, "entropy slack of the certificate");
  verify->add_option("--n", cfg.n_range, "range of n as a:b");

  auto* entropy = app.add_subcommand("entropy", "entropy estimates of a word list or of the configured shift");
  add_common(entropy, cfg, common, false);
  entropy->add_option("--input,-i", cfg.input, "one word per line");
  entropy->add_option("--n", cfg.n_range, "range of n as a:b");
  entropy->add_option("--method", cfg.method, "separated, spanning or cover_cost")
      ->check(CLI::IsMember({"separated", "spanning", "cover_cost"}));

  auto* oracle = app.add_subcommand("oracle", "closed-form spectrum and pressure (depth-1 full shifts)");
  add_common(oracle, cfg, common, true);
  add_grids(oracle, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (common.threads > 0) spectra::set_worker_count(common.threads);
  if (!common.format.empty()) cfg.format = common.format == "csv" ? Format::kCsv : Format::kJson;
  const Format format = cfg.format.value_or(spectra::cli::default_format(cfg.command));
  if (format == Format::kCsv && !spectra::cli::has_csv(cfg.command)) {
    std::cerr << "spectra " << cfg.command << ": no CSV view; use --format json\n";
    return 2;
  }

  spectra::cli::Report report;
  try {
    report = spectra::cli::run_pipeline(cfg);
  } catch (const spectra::cli::UsageError& e) {
    std::cerr << "spectra " << cfg.command << ": " << e.what() << '\n';
    return 2;
  } catch (const spectra::ConfigError& e) {
    std::cerr << "spectra " << cfg.command << ": " << e.what() << '\n';
    return 2;
  } catch (const spectra::InvalidArgument& e) {
    std::cerr << "spectra " << cfg.command << ": " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "spectra " << cfg.command << ": malformed input: " << e.what() << '\n';
    return 2;
  } catch (const spectra::Error& e) {
    report = spectra::cli::failure_report(cfg, "error", e.what());
  }

  // Error reports carry no table; they are always JSON.
  const std::string text = spectra::cli::render(report, report.csv_header.empty() ? Format::kJson : format);
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
      std::cerr << "spectra " << cfg.command << ": cannot write '" << cfg.output << "'\n";
      return 2;
    }
    out << text;
  }
  for (const auto& f : report.failures) std::cerr << "spectra " << cfg.command << ": FAIL " << f << '\n';
  return report.exit_code();
}
