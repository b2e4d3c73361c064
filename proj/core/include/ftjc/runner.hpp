#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftjc/error.hpp"
#include "ftjc/hilbert.hpp"
#include "ftjc/observables.hpp"

namespace ftjc {

enum class Observable { w, concurrence, mean_n, parity, mandel_q, var_x, moments, husimi, periods, coupling };

const char* to_string(Observable obs) noexcept;
/// Throws Error{config} for unknown names.
Observable observable_from_string(std::string_view name);

struct Seed {
  enum class Kind { fock_excited, coherent };
  Kind kind = Kind::fock_excited;
  cplx beta{};
};

struct SweepConfig {
  std::string preset;  ///< informational, echoed into the manifest
  std::vector<double> alpha_list{1.0};
  double mu = 1.0;
  std::vector<double> mu_sweep;  ///< replaces mu when non-empty
  Seed seed;
  double t_max = 10.0;
  double dt = 1e-2;
  std::optional<int> n_max;  ///< defaults to 4 (Fock) or 40 (coherent)
  std::vector<Observable> observables{Observable::w};
  std::vector<double> husimi_times;
  int husimi_resolution = 201;
  double husimi_half_width = 5.0;
  int period_count = 10;
  double ml_tol = 1e-10;
  std::filesystem::path output_dir = "ftjc-out";

  int effective_n_max() const;
  std::vector<double> mu_values() const;
  bool wants(Observable obs) const;
  /// Throws Error{config} on any inconsistency.
  void validate() const;
};

/// Names accepted by preset().
const std::vector<std::string>& preset_names();
/// Parameter sets of the figures. Throws Error{unknown_preset}.
SweepConfig preset(std::string_view name);

std::string config_to_json(const SweepConfig& cfg);
/// Overlays the keys present in `json` on `base`. Throws Error{config}.
SweepConfig config_from_json(std::string_view json, SweepConfig base = {});

struct Trajectory {
  double alpha = 1.0;
  double mu = 1.0;
  std::vector<double> times;
  std::vector<ObservableRecord> records;
  std::vector<double> norm_squared;
  std::vector<double> excitation;  ///< <n> + P_e
};

/// Evolves the configured seed on the uniform grid 0, dt, ..., t_max.
Trajectory simulate(const SweepConfig& cfg, double alpha, double mu);

/// State at time t, reached through a uniform grid of step at most dt.
JointState state_at(const SweepConfig& cfg, double alpha, double mu, double t);

struct ManifestEntry {
  std::string name;
  std::string observable;
  double alpha = 1.0;
  double mu = 1.0;
  std::optional<double> time;  ///< Husimi snapshots
  std::string sha256;
  std::size_t bytes = 0;
};

struct Manifest {
  std::string library_version;
  std::string config_json;
  std::vector<ManifestEntry> files;
  std::vector<std::string> warnings;

  std::string to_json() const;
  static Manifest from_json(std::string_view text);
};

inline constexpr const char* kManifestName = "manifest.json";

/// Writes one file per (alpha, mu, observable) plus manifest.json into cfg.output_dir.
Manifest run_experiment(const SweepConfig& cfg);

struct VerifyReport {
  std::size_t files_checked = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Checksums, completeness of the output directory and observable bounds.
VerifyReport verify_manifest(const std::filesystem::path& manifest_path);

/// Machine-readable failure record: {"error": {"kind", "message", "alpha", "n", "t"}}.
std::string error_record_json(const Error& e);
std::string error_record_json(const std::exception& e);

const char* library_version() noexcept;

}  // namespace ftjc
