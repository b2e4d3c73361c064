#include "ftjc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "ftjc/frac_evolution.hpp"
#include "ftjc/inverse_problem.hpp"
#include "ftjc/parallel.hpp"
#include "ftjc/table_io.hpp"
#include "json.hpp"

namespace ftjc {

using nlohmann::json;

namespace {

constexpr Observable kAllObservables[] = {Observable::w,      Observable::concurrence, Observable::mean_n,
                                          Observable::parity, Observable::mandel_q,    Observable::var_x,
                                          Observable::moments, Observable::husimi,     Observable::periods,
                                          Observable::coupling};

constexpr double kBoundSlack = 1e-9;
constexpr double kHusimiNormTolerance = 1e-3;

std::vector<double> uniform_grid(double t_end, std::size_t steps) {
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t[k] = t_end * static_cast<double>(k) / static_cast<double>(steps);
  return t;
}

std::size_t step_count(double t_end, double dt) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9)));
}

JointState initial_state(const SweepConfig& cfg) {
  if (cfg.seed.kind == Seed::Kind::coherent) return init_coherent_excited(cfg.seed.beta, cfg.effective_n_max());
  return init_fock_excited(cfg.effective_n_max());
}

/// blocks[n][k]; subspaces without initial weight keep identity blocks.
std::vector<std::vector<UnitaryBlock>> compute_blocks(const FractionalOrder& order, double mu, const JointState& s0,
                                                      const std::vector<double>& times, double tol) {
  const int dim = s0.n_max + 1;
  std::vector<std::vector<UnitaryBlock>> blocks(dim);
  std::vector<int> active;
  for (int n = 0; n < dim; ++n) {
    if (std::norm(s0.a_e[n]) + std::norm(s0.a_g[n]) > 0.0) {
      active.push_back(n);
    } else {
      blocks[n].resize(times.size());
      for (std::size_t k = 0; k < times.size(); ++k) blocks[n][k] = UnitaryBlock{.n = n, .t = times[k]};
    }
  }
  parallel_for(active.size(), [&](std::size_t i) {
    const int n = active[i];
    blocks[n] = block_trajectory(order, mu, n, times, tol);
  });
  return blocks;
}

JointState state_on_grid(const JointState& s0, const std::vector<std::vector<UnitaryBlock>>& blocks, std::size_t k) {
  std::vector<UnitaryBlock> at(blocks.size());
  for (std::size_t n = 0; n < blocks.size(); ++n) at[n] = blocks[n][k];
  return evolve(s0, at);
}

double excited_weight(const JointState& s) {
  double pe = 0.0;
  for (const auto& a : s.a_e) pe += std::norm(a);
  return pe;
}

std::string file_stem(Observable obs, double alpha, std::optional<double> mu) {
  std::string name = std::string(to_string(obs)) + "_a" + format_double(alpha);
  if (mu) name += "_mu" + format_double(*mu);
  return name;
}

json seed_to_json(const Seed& s) {
  if (s.kind == Seed::Kind::fock_excited) return {{"kind", "fock_excited"}};
  return {{"kind", "coherent"}, {"beta", {s.beta.real(), s.beta.imag()}}};
}

Seed seed_from_json(const json& j) {
  Seed s;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "fock_excited") return s;
  if (kind != "coherent") throw Error(ErrorKind::config, "seed.kind must be fock_excited or coherent");
  s.kind = Seed::Kind::coherent;
  const auto& b = j.at("beta");
  if (b.is_number()) {
    s.beta = b.get<double>();
  } else {
    const auto v = b.get<std::vector<double>>();
    if (v.size() != 2) throw Error(ErrorKind::config, "seed.beta must be a number or [re, im]");
    s.beta = {v[0], v[1]};
  }
  return s;
}

json config_json(const SweepConfig& c) {
  json obs = json::array();
  for (auto o : c.observables) obs.push_back(to_string(o));
  json j = {{"preset", c.preset},
            {"alpha_list", c.alpha_list},
            {"mu", c.mu},
            {"mu_sweep", c.mu_sweep},
            {"seed", seed_to_json(c.seed)},
            {"t_max", c.t_max},
            {"dt", c.dt},
            {"n_max", c.effective_n_max()},
            {"observables", obs},
            {"husimi_times", c.husimi_times},
            {"husimi_resolution", c.husimi_resolution},
            {"husimi_half_width", c.husimi_half_width},
            {"period_count", c.period_count},
            {"ml_tol", c.ml_tol},
            {"output_dir", c.output_dir.generic_string()}};
  return j;
}

void check_bounds(const std::string& name, const std::vector<double>& column, double lo, double hi,
                  std::vector<std::string>& problems) {
  for (std::size_t i = 0; i < column.size(); ++i) {
    const double v = column[i];
    if (!std::isfinite(v) || v < lo - kBoundSlack || v > hi + kBoundSlack) {
      problems.push_back(name + ": value " + format_double(v) + " out of bounds at row " + std::to_string(i + 1));
      return;
    }
  }
}

std::vector<double> column_of(const Table& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  if (it == t.columns.end()) throw Error(ErrorKind::io, "missing column " + name);
  const auto j = static_cast<std::size_t>(it - t.columns.begin());
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back(row[j]);
  return out;
}

void verify_table(const ManifestEntry& e, const std::string& text, std::vector<std::string>& problems) {
  const auto obs = observable_from_string(e.observable);
  const auto table = parse_table(text);
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (const auto& col : table.columns) check_bounds(e.name, column_of(table, col), -inf, inf, problems);
  switch (obs) {
    case Observable::w: check_bounds(e.name, column_of(table, "w"), -1.0, 1.0, problems); break;
    case Observable::concurrence: check_bounds(e.name, column_of(table, "concurrence"), 0.0, 1.0, problems); break;
    case Observable::mean_n: check_bounds(e.name, column_of(table, "mean_n"), 0.0, inf, problems); break;
    case Observable::parity: check_bounds(e.name, column_of(table, "parity"), -1.0, 1.0, problems); break;
    case Observable::mandel_q: check_bounds(e.name, column_of(table, "mandel_q"), -1.0, inf, problems); break;
    case Observable::var_x: check_bounds(e.name, column_of(table, "var_x"), 0.0, inf, problems); break;
    case Observable::moments: break;
    case Observable::periods: {
      check_bounds(e.name, column_of(table, "period"), 0.0, inf, problems);
      const auto l = column_of(table, "l");
      for (std::size_t i = 1; i < l.size(); ++i)
        if (!(l[i] > l[i - 1])) problems.push_back(e.name + ": oscillation index not increasing");
      break;
    }
    case Observable::coupling:
      check_bounds(e.name, column_of(table, "gamma"), 0.0, inf, problems);
      check_bounds(e.name, column_of(table, "w"), -1.0, 1.0, problems);
      check_bounds(e.name, column_of(table, "w_forward"), -1.0, 1.0, problems);
      break;
    case Observable::husimi: break;
  }
}

}  // namespace

const char* library_version() noexcept { return FTJC_VERSION; }

const char* to_string(Observable obs) noexcept {
  switch (obs) {
    case Observable::w: return "w";
    case Observable::concurrence: return "concurrence";
    case Observable::mean_n: return "mean_n";
    case Observable::parity: return "parity";
    case Observable::mandel_q: return "mandel_q";
    case Observable::var_x: return "var_x";
    case Observable::moments: return "moments";
    case Observable::husimi: return "husimi";
    case Observable::periods: return "periods";
    case Observable::coupling: return "coupling";
  }
  return "?";
}

Observable observable_from_string(std::string_view name) {
  for (auto o : kAllObservables)
    if (name == to_string(o)) return o;
  throw Error(ErrorKind::config, "unknown observable '" + std::string(name) + "'");
}

int SweepConfig::effective_n_max() const {
  if (n_max) return *n_max;
  return seed.kind == Seed::Kind::coherent ? kDefaultCoherentCutoff : kDefaultFockCutoff;
}

std::vector<double> SweepConfig::mu_values() const { return mu_sweep.empty() ? std::vector<double>{mu} : mu_sweep; }

bool SweepConfig::wants(Observable obs) const {
  return std::find(observables.begin(), observables.end(), obs) != observables.end();
}

void SweepConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::config, msg); };
  if (alpha_list.empty()) fail("alpha_list is empty");
  for (double a : alpha_list)
    if (!(a > 0.0 && a <= 1.0)) fail("alpha must lie in (0, 1], got " + format_double(a));
  for (double m : mu_values())
    if (!(m > 0.0) || !std::isfinite(m)) fail("mu must be positive and finite");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) fail("t_max must be positive");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (dt > t_max / 100.0) fail("dt must not exceed t_max/100");
  if (effective_n_max() < 1) fail("n_max must be at least 1");
  if (!(ml_tol >= 1e-14 && ml_tol <= 1e-6)) fail("ml_tol must lie in [1e-14, 1e-6]");
  if (period_count < 1) fail("period_count must be positive");
  if (husimi_resolution < 2) fail("husimi_resolution must be at least 2");
  if (!(husimi_half_width > 0.0)) fail("husimi_half_width must be positive");
  if (!std::isfinite(seed.beta.real()) || !std::isfinite(seed.beta.imag())) fail("beta must be finite");
  if (std::set<Observable>(observables.begin(), observables.end()).size() != observables.size())
    fail("observables contain duplicates");
  if (wants(Observable::husimi) && husimi_times.empty()) fail("husimi requested without husimi_times");
  for (double t : husimi_times)
    if (!(t >= 0.0) || !std::isfinite(t)) fail("husimi_times must be finite and non-negative");
  const bool fock = seed.kind == Seed::Kind::fock_excited;
  if (fock && wants(Observable::mandel_q)) fail("mandel_q is undefined for the vacuum field of the |e,0> seed");
  if (!fock && wants(Observable::concurrence)) fail("concurrence needs the |e,0> seed");
  if (!fock && wants(Observable::coupling)) fail("coupling extraction needs the |e,0> seed");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5",  "fig6",
                                              "fig7", "fig8", "fig9a", "fig9b", "fig10"};
  return names;
}

SweepConfig preset(std::string_view name) {
  SweepConfig c;
  c.preset = std::string(name);
  c.mu = 1.0;
  c.ml_tol = 1e-10;
  c.output_dir = std::string(name);
  const std::vector<double> fock_alphas{1.0, 0.75, 0.5, 0.25};
  const std::vector<double> coherent_alphas{1.0, 0.75, 0.5, 0.4};
  auto fock = [&](std::vector<Observable> obs, double t_max, double dt) {
    c.alpha_list = fock_alphas;
    c.seed = Seed{};
    c.n_max = kDefaultFockCutoff;
    c.observables = std::move(obs);
    c.t_max = t_max;
    c.dt = dt;
  };
  auto coherent = [&](std::vector<Observable> obs, double t_max, double dt) {
    c.alpha_list = coherent_alphas;
    c.seed = Seed{Seed::Kind::coherent, {3.0, 0.0}};
    c.n_max = kDefaultCoherentCutoff;
    c.observables = std::move(obs);
    c.t_max = t_max;
    c.dt = dt;
  };

  if (name == "fig2") {
    fock({Observable::w}, 40.0, 1e-2);
  } else if (name == "fig3") {
    fock({Observable::w, Observable::periods}, 75.0, 1e-3);
  } else if (name == "fig4") {
    fock({Observable::w}, 10.0, 1e-2);
    c.mu_sweep = {0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  } else if (name == "fig5") {
    fock({Observable::w, Observable::concurrence, Observable::coupling}, 25.0, 1e-3);
  } else if (name == "fig6") {
    coherent({Observable::mean_n}, 40.0, 1e-2);
  } else if (name == "fig7") {
    coherent({Observable::parity}, 40.0, 1e-2);
  } else if (name == "fig8") {
    coherent({Observable::mandel_q}, 40.0, 1e-2);
  } else if (name == "fig9a") {
    coherent({Observable::var_x, Observable::moments}, 40.0, 1e-2);
  } else if (name == "fig9b") {
    coherent({Observable::var_x}, 20.0, 5e-3);
  } else if (name == "fig10") {
    const double t_half_revival = std::numbers::pi * 3.0 / c.mu;
    coherent({Observable::husimi}, t_half_revival, 1e-2);
    c.husimi_times = {t_half_revival};
    // |beta| = 3 leaves ~0.2% of the weight outside [-5, 5]^2
    c.husimi_half_width = 7.0;
    c.husimi_resolution = 281;
  } else {
    throw Error(ErrorKind::unknown_preset, "unknown preset '" + std::string(name) + "'");
  }
  return c;
}

std::string config_to_json(const SweepConfig& cfg) { return config_json(cfg).dump(2); }

SweepConfig config_from_json(std::string_view text, SweepConfig c) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorKind::config, "config must be a JSON object");
    static const std::set<std::string> known{"preset",       "alpha_list",        "mu",           "mu_sweep",
                                             "seed",         "t_max",             "dt",           "n_max",
                                             "observables",  "husimi_times",      "husimi_resolution",
                                             "husimi_half_width", "period_count", "ml_tol",       "output_dir"};
    for (const auto& [key, _] : j.items())
      if (!known.contains(key)) throw Error(ErrorKind::config, "unknown config key '" + key + "'");
    if (j.contains("preset")) c.preset = j["preset"].get<std::string>();
    if (j.contains("alpha_list")) c.alpha_list = j["alpha_list"].get<std::vector<double>>();
    if (j.contains("mu")) c.mu = j["mu"].get<double>();
    if (j.contains("mu_sweep")) c.mu_sweep = j["mu_sweep"].get<std::vector<double>>();
    if (j.contains("seed")) c.seed = seed_from_json(j["seed"]);
    if (j.contains("t_max")) c.t_max = j["t_max"].get<double>();
    if (j.contains("dt")) c.dt = j["dt"].get<double>();
    if (j.contains("n_max")) c.n_max = j["n_max"].get<int>();
    if (j.contains("observables")) {
      c.observables.clear();
      for (const auto& o : j["observables"]) c.observables.push_back(observable_from_string(o.get<std::string>()));
    }
    if (j.contains("husimi_times")) c.husimi_times = j["husimi_times"].get<std::vector<double>>();
    if (j.contains("husimi_resolution")) c.husimi_resolution = j["husimi_resolution"].get<int>();
    if (j.contains("husimi_half_width")) c.husimi_half_width = j["husimi_half_width"].get<double>();
    if (j.contains("period_count")) c.period_count = j["period_count"].get<int>();
    if (j.contains("ml_tol")) c.ml_tol = j["ml_tol"].get<double>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, std::string("config: ") + e.what());
  }
  return c;
}

Trajectory simulate(const SweepConfig& cfg, double alpha, double mu) {
  cfg.validate();
  try {
    const auto order = FractionalOrder::make(alpha);
    const JointState s0 = initial_state(cfg);
    const auto times = uniform_grid(cfg.t_max, step_count(cfg.t_max, cfg.dt));
    const auto blocks = compute_blocks(order, mu, s0, times, cfg.ml_tol);
    const bool with_concurrence = cfg.wants(Observable::concurrence);

    Trajectory tr;
    tr.alpha = alpha;
    tr.mu = mu;
    tr.times = times;
    tr.records.resize(times.size());
    tr.norm_squared.resize(times.size());
    tr.excitation.resize(times.size());
    parallel_for(times.size(), [&](std::size_t k) {
      const auto s = state_on_grid(s0, blocks, k);
      try {
        tr.records[k] = observe(s, with_concurrence);
      } catch (Error& e) {
        e.with_context({.t = times[k]});
        throw;
      }
      tr.norm_squared[k] = s.norm_squared();
      tr.excitation[k] = tr.records[k].mean_n + excited_weight(s);
    });
    return tr;
  } catch (Error& e) {
    e.with_context({.alpha = alpha});
    throw;
  }
}

JointState state_at(const SweepConfig& cfg, double alpha, double mu, double t) {
  cfg.validate();
  if (!(t >= 0.0)) throw Error(ErrorKind::input, "state_at: t must be non-negative");
  try {
    const auto order = FractionalOrder::make(alpha);
    const JointState s0 = initial_state(cfg);
    if (t == 0.0) return s0;
    const auto times = uniform_grid(t, step_count(t, cfg.dt));
    const auto blocks = compute_blocks(order, mu, s0, times, cfg.ml_tol);
    return state_on_grid(s0, blocks, times.size() - 1);
  } catch (Error& e) {
    e.with_context({.alpha = alpha});
    throw;
  }
}

std::string Manifest::to_json() const {
  json files = json::array();
  for (const auto& f : this->files) {
    json e = {{"name", f.name},     {"observable", f.observable}, {"alpha", f.alpha},
              {"mu", f.mu},         {"sha256", f.sha256},         {"bytes", f.bytes}};
    if (f.time) e["time"] = *f.time;
    files.push_back(std::move(e));
  }
  const json j = {{"format", "ftjc-manifest/1"},
                  {"library_version", library_version},
                  {"config", json::parse(config_json)},
                  {"files", files},
                  {"warnings", warnings}};
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "ftjc-manifest/1") throw Error(ErrorKind::io, "unsupported manifest format");
    Manifest m;
    m.library_version = j.at("library_version").get<std::string>();
    m.config_json = j.at("config").dump();
    for (const auto& e : j.at("files")) {
      ManifestEntry f;
      f.name = e.at("name").get<std::string>();
      f.observable = e.at("observable").get<std::string>();
      f.alpha = e.at("alpha").get<double>();
      f.mu = e.at("mu").get<double>();
      f.sha256 = e.at("sha256").get<std::string>();
      f.bytes = e.at("bytes").get<std::size_t>();
      if (e.contains("time")) f.time = e["time"].get<double>();
      m.files.push_back(std::move(f));
    }
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, std::string("manifest: ") + e.what());
  }
}

Manifest run_experiment(const SweepConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + cfg.output_dir.string() + ": " + ec.message());

  Manifest manifest;
  manifest.library_version = library_version();
  manifest.config_json = config_json(cfg).dump();

  const bool tagged_mu = !cfg.mu_sweep.empty();
  auto emit = [&](ManifestEntry entry, const std::string& content) {
    write_text_file(cfg.output_dir / entry.name, content);
    entry.sha256 = sha256_hex(content);
    entry.bytes = content.size();
    manifest.files.push_back(std::move(entry));
  };

  const bool needs_series = std::any_of(cfg.observables.begin(), cfg.observables.end(),
                                        [](Observable o) { return o != Observable::husimi; });
  for (double alpha : cfg.alpha_list) {
    for (double mu : cfg.mu_values()) {
      std::optional<double> mu_tag;
      if (tagged_mu) mu_tag = mu;
      auto entry_for = [&](Observable obs) {
        return ManifestEntry{.name = file_stem(obs, alpha, mu_tag) + ".tsv",
                             .observable = to_string(obs),
                             .alpha = alpha,
                             .mu = mu};
      };

      std::optional<Trajectory> tr;
      if (needs_series) tr = simulate(cfg, alpha, mu);
      std::vector<double> w;
      if (tr) for (const auto& r : tr->records) w.push_back(r.w);

      for (Observable obs : cfg.observables) {
        Table table;
        auto series = [&](std::vector<std::string> cols, auto&& row_of) {
          table.columns = std::move(cols);
          for (std::size_t k = 0; k < tr->times.size(); ++k) table.rows.push_back(row_of(tr->times[k], tr->records[k]));
        };
        switch (obs) {
          case Observable::w:
            series({"t", "w"}, [](double t, const ObservableRecord& r) { return std::vector<double>{t, r.w}; });
            break;
          case Observable::concurrence:
            series({"t", "concurrence"},
                   [](double t, const ObservableRecord& r) { return std::vector<double>{t, *r.concurrence}; });
            break;
          case Observable::mean_n:
            series({"t", "mean_n"}, [](double t, const ObservableRecord& r) { return std::vector<double>{t, r.mean_n}; });
            break;
          case Observable::parity:
            series({"t", "parity"}, [](double t, const ObservableRecord& r) { return std::vector<double>{t, r.parity}; });
            break;
          case Observable::mandel_q:
            series({"t", "mandel_q"}, [](double t, const ObservableRecord& r) {
              if (!r.mandel_q) throw Error(ErrorKind::domain, "mandel_q: vacuum field").with_context({.t = t});
              return std::vector<double>{t, *r.mandel_q};
            });
            break;
          case Observable::var_x:
            series({"t", "var_x"}, [](double t, const ObservableRecord& r) { return std::vector<double>{t, r.var_x}; });
            break;
          case Observable::moments:
            series({"t", "re_a", "im_a", "re_a2", "im_a2"}, [](double t, const ObservableRecord& r) {
              return std::vector<double>{t, r.mean_a.real(), r.mean_a.imag(), r.mean_a2.real(), r.mean_a2.imag()};
            });
            break;
          case Observable::periods: {
            PeriodTable periods;
            try {
              periods = oscillation_periods(tr->times, w, cfg.period_count);
            } catch (Error& e) {
              e.with_context({.alpha = alpha});
              throw;
            }
            table.columns = {"l", "period"};
            for (const auto& p : periods.entries) table.rows.push_back({static_cast<double>(p.index), p.period});
            break;
          }
          case Observable::coupling: {
            const std::span<const double> t1(tr->times.data() + 1, tr->times.size() - 1);
            const std::span<const double> w1(w.data() + 1, w.size() - 1);
            const auto profile = extract_coupling(t1, w1);
            const auto forward = forward_two_level(profile, gauge_seed(profile, w1.front()));
            table.columns = {"t", "w", "gamma", "singular", "w_forward"};
            for (std::size_t k = 0; k < t1.size(); ++k)
              table.rows.push_back({t1[k], w1[k], profile.gamma[k], static_cast<double>(profile.singular[k]),
                                    forward.w[k]});
            break;
          }
          case Observable::husimi: {
            const HusimiSpec spec{-cfg.husimi_half_width, cfg.husimi_half_width, -cfg.husimi_half_width,
                                  cfg.husimi_half_width, cfg.husimi_resolution};
            for (double th : cfg.husimi_times) {
              const auto grid = husimi(field_density(state_at(cfg, alpha, mu, th)), spec);
              auto entry = entry_for(obs);
              entry.name = file_stem(obs, alpha, mu_tag) + "_t" + format_double(th) + ".tsv";
              entry.time = th;
              if (grid.coverage_warning) manifest.warnings.push_back("coverage: " + entry.name);
              emit(std::move(entry), render_husimi(grid));
            }
            continue;
          }
        }
        emit(entry_for(obs), render_table(table));
      }
    }
  }

  write_text_file(cfg.output_dir / kManifestName, manifest.to_json());
  return manifest;
}

VerifyReport verify_manifest(const std::filesystem::path& manifest_path) {
  const auto manifest = Manifest::from_json(read_text_file(manifest_path));
  const auto dir = manifest_path.parent_path();
  VerifyReport report;
  std::set<std::string> listed;
  for (const auto& e : manifest.files) {
    listed.insert(e.name);
    const auto path = dir / e.name;
    if (!std::filesystem::exists(path)) {
      report.problems.push_back(e.name + ": missing");
      continue;
    }
    const auto text = read_text_file(path);
    ++report.files_checked;
    if (sha256_hex(text) != e.sha256 || text.size() != e.bytes) {
      report.problems.push_back(e.name + ": checksum mismatch");
      continue;
    }
    try {
      if (e.observable == to_string(Observable::husimi)) {
        const auto grid = parse_husimi(text);
        for (double v : grid.values) {
          if (!(v >= 0.0)) {
            report.problems.push_back(e.name + ": negative Husimi value");
            break;
          }
        }
        const bool warned = std::find(manifest.warnings.begin(), manifest.warnings.end(), "coverage: " + e.name) !=
                            manifest.warnings.end();
        if (!warned && std::abs(grid.normalization() - 1.0) > kHusimiNormTolerance)
          report.problems.push_back(e.name + ": Husimi normalization " + format_double(grid.normalization()));
      } else {
        verify_table(e, text, report.problems);
      }
    } catch (const Error& err) {
      report.problems.push_back(e.name + ": " + err.what());
    }
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name != kManifestName && !listed.contains(name))
      report.problems.push_back(name + ": not listed in manifest");
  }
  return report;
}

std::string error_record_json(const Error& e) {
  json rec = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  const auto& ctx = e.context();
  rec["alpha"] = ctx.alpha ? json(*ctx.alpha) : json(nullptr);
  rec["n"] = ctx.n ? json(*ctx.n) : json(nullptr);
  rec["t"] = ctx.t ? json(*ctx.t) : json(nullptr);
  return json{{"error", rec}}.dump();
}

std::string error_record_json(const std::exception& e) {
  return json{{"error", {{"kind", "internal"}, {"message", e.what()}, {"alpha", nullptr}, {"n", nullptr}, {"t", nullptr}}}}
      .dump();
}

}  // namespace ftjc
