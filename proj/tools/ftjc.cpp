// ftjc: run figure presets or custom sweeps, list presets, verify outputs.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftjc/runner.hpp"
#include "ftjc/table_io.hpp"

namespace {

struct RunFlags {
  std::string config_file;
  std::string preset;
  std::string out;
  std::vector<double> alpha;
  std::optional<double> mu;
  std::vector<double> mu_sweep;
  std::string seed;
  std::optional<double> beta_re;
  std::optional<double> beta_im;
  std::optional<double> t_max;
  std::optional<double> dt;
  std::optional<int> n_max;
  std::vector<std::string> observables;
  bool no_observables = false;
  std::vector<double> husimi_times;
  std::optional<double> ml_tol;
  std::optional<int> periods;
};

ftjc::SweepConfig effective_config(const RunFlags& f) {
  ftjc::SweepConfig cfg = f.preset.empty() ? ftjc::SweepConfig{} : ftjc::preset(f.preset);
  if (!f.config_file.empty()) cfg = ftjc::config_from_json(ftjc::read_text_file(f.config_file), cfg);
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (!f.alpha.empty()) cfg.alpha_list = f.alpha;
  if (f.mu) cfg.mu = *f.mu;
  if (!f.mu_sweep.empty()) cfg.mu_sweep = f.mu_sweep;
  if (f.seed == "fock") cfg.seed = ftjc::Seed{};
  if (f.seed == "coherent") cfg.seed.kind = ftjc::Seed::Kind::coherent;
  if (f.beta_re) cfg.seed.beta.real(*f.beta_re);
  if (f.beta_im) cfg.seed.beta.imag(*f.beta_im);
  if (f.t_max) cfg.t_max = *f.t_max;
  if (f.dt) cfg.dt = *f.dt;
  if (f.n_max) cfg.n_max = *f.n_max;
  if (f.no_observables) cfg.observables.clear();
  if (!f.observables.empty()) {
    cfg.observables.clear();
    for (const auto& name : f.observables) cfg.observables.push_back(ftjc::observable_from_string(name));
  }
  if (!f.husimi_times.empty()) cfg.husimi_times = f.husimi_times;
  if (f.ml_tol) cfg.ml_tol = *f.ml_tol;
  if (f.periods) cfg.period_count = *f.periods;
  return cfg;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + ftjc::format_double(xs[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-time Jaynes-Cummings simulator"};
  app.set_version_flag("--version", ftjc::library_version());
  app.require_subcommand(1);

  RunFlags flags;
  auto* run = app.add_subcommand("run", "Run a sweep and write data files plus manifest.json");
  run->add_option("--config", flags.config_file, "JSON config file")->check(CLI::ExistingFile);
  run->add_option("--preset", flags.preset, "Figure preset (see `ftjc presets`)");
  run->add_option("--out", flags.out, "Output directory");
  run->add_option("--alpha", flags.alpha, "Fractional orders")->delimiter(',');
  run->add_option("--mu", flags.mu, "Coupling mu");
  run->add_option("--mu-sweep", flags.mu_sweep, "List of couplings replacing --mu")->delimiter(',');
  run->add_option("--seed", flags.seed, "Initial state")->check(CLI::IsMember({"fock", "coherent"}));
  run->add_option("--beta", flags.beta_re, "Real part of the coherent amplitude");
  run->add_option("--beta-im", flags.beta_im, "Imaginary part of the coherent amplitude");
  run->add_option("--t-max", flags.t_max, "End time");
  run->add_option("--dt", flags.dt, "Time step");
  run->add_option("--n-max", flags.n_max, "Photon cutoff index");
  run->add_option("--observables", flags.observables, "Observables to write")->delimiter(',');
  run->add_flag("--no-observables", flags.no_observables, "Write only the manifest");
  run->add_option("--husimi-times", flags.husimi_times, "Husimi snapshot times")->delimiter(',');
  run->add_option("--ml-tol", flags.ml_tol, "Mittag-Leffler relative tolerance");
  run->add_option("--periods", flags.periods, "Number of oscillation periods to extract");

  auto* presets = app.add_subcommand("presets", "List figure presets");

  std::string manifest_path;
  auto* verify = app.add_subcommand("verify", "Check a finished run against its manifest");
  verify->add_option("manifest", manifest_path, "Path to manifest.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = effective_config(flags);
      const auto manifest = ftjc::run_experiment(cfg);
      std::cout << "wrote " << manifest.files.size() << " data files to " << cfg.output_dir.string() << '\n';
      for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << '\n';
    } else if (*presets) {
      for (const auto& name : ftjc::preset_names()) {
        const auto cfg = ftjc::preset(name);
        std::string obs;
        for (auto o : cfg.observables) obs += (obs.empty() ? "" : ",") + std::string(ftjc::to_string(o));
        std::cout << name << "\talpha=" << join(cfg.alpha_list) << "\tmu="
                  << (cfg.mu_sweep.empty() ? ftjc::format_double(cfg.mu) : join(cfg.mu_sweep)) << "\tseed="
                  << (cfg.seed.kind == ftjc::Seed::Kind::coherent ? "coherent(" + ftjc::format_double(cfg.seed.beta.real()) + ")"
                                                                   : std::string("fock_excited"))
                  << "\tt_max=" << ftjc::format_double(cfg.t_max) << "\tdt=" << ftjc::format_double(cfg.dt)
                  << "\tobservables=" << obs << '\n';
      }
    } else if (*verify) {
      const auto report = ftjc::verify_manifest(manifest_path);
      for (const auto& p : report.problems) std::cout << "FAIL " << p << '\n';
      std::cout << report.files_checked << " files checked, " << report.problems.size() << " problems\n";
      if (!report.ok()) {
        std::cerr << ftjc::error_record_json(ftjc::Error(ftjc::ErrorKind::consistency, "verification failed")) << '\n';
        return 1;
      }
    }
  } catch (const ftjc::Error& e) {
    std::cerr << ftjc::error_record_json(e) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << ftjc::error_record_json(e) << '\n';
    return 1;
  }
  return 0;
}
