#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>

#include "doctest.h"
#include "ftjc/error.hpp"
#include "ftjc/parallel.hpp"
#include "ftjc/runner.hpp"
#include "ftjc/table_io.hpp"

using namespace ftjc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ftjc-test-" + name);
  fs::remove_all(dir);
  return dir;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected ftjc::Error");
  return ErrorKind::io;
}

SweepConfig small_fock_config(const fs::path& out) {
  SweepConfig c;
  c.alpha_list = {1.0, 0.5};
  c.t_max = 8.0;
  c.dt = 0.01;
  c.observables = {Observable::w,     Observable::concurrence, Observable::mean_n,  Observable::parity,
                   Observable::var_x, Observable::moments,     Observable::periods, Observable::coupling,
                   Observable::husimi};
  c.period_count = 1;
  c.husimi_times = {1.0};
  c.husimi_resolution = 41;
  c.output_dir = out;
  return c;
}

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, i % 40 - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("tables render and parse back exactly") {
  Table t{{"t", "w"}, {{0.0, 1.0}, {0.01, 0.98727149471644585}, {1e-300, -0.5}}};
  const auto text = render_table(t);
  const auto back = parse_table(text);
  CHECK(back.columns == t.columns);
  CHECK(back.rows == t.rows);
  CHECK(kind_of([] { parse_table("a\tb\n1\n"); }) == ErrorKind::io);
  CHECK(kind_of([] { parse_table("a\n1x\n"); }) == ErrorKind::io);
  CHECK(kind_of([] { parse_table(""); }) == ErrorKind::io);
}

TEST_CASE("sha256 digest") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("presets encode the figure parameters") {
  const auto f2 = preset("fig2");
  CHECK(f2.alpha_list == std::vector<double>{1.0, 0.75, 0.5, 0.25});
  CHECK(f2.mu == 1.0);
  CHECK(f2.seed.kind == Seed::Kind::fock_excited);

  const auto f6 = preset("fig6");
  CHECK(f6.alpha_list == std::vector<double>{1.0, 0.75, 0.5, 0.4});
  CHECK(f6.seed.kind == Seed::Kind::coherent);
  CHECK(f6.seed.beta == cplx(3.0, 0.0));

  CHECK(preset("fig3").dt == 1e-3);
  CHECK(preset("fig4").mu_sweep.front() == 0.5);
  CHECK(preset("fig4").mu_sweep.back() == 2.0);
  CHECK(preset("fig10").husimi_times.front() == doctest::Approx(3.0 * M_PI));
  for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name).validate());
  CHECK(kind_of([] { preset("nope"); }) == ErrorKind::unknown_preset);
}

TEST_CASE("config JSON round trip and overlay") {
  auto c = preset("fig9a");
  c.husimi_times = {1.5};
  c.seed.beta = {2.0, -1.0};
  const auto back = config_from_json(config_to_json(c));
  CHECK(back.alpha_list == c.alpha_list);
  CHECK(back.seed.kind == c.seed.kind);
  CHECK(back.seed.beta == c.seed.beta);
  CHECK(back.observables == c.observables);
  CHECK(back.husimi_times == c.husimi_times);
  CHECK(back.effective_n_max() == c.effective_n_max());
  CHECK(back.output_dir == c.output_dir);

  const auto overlaid = config_from_json(R"({"dt": 0.02, "observables": ["w"]})", preset("fig2"));
  CHECK(overlaid.dt == 0.02);
  CHECK(overlaid.alpha_list == preset("fig2").alpha_list);
  CHECK(kind_of([] { config_from_json(R"({"dtt": 1})"); }) == ErrorKind::config);
  CHECK(kind_of([] { config_from_json(R"({"observables": ["wigner"]})"); }) == ErrorKind::config);
  CHECK(kind_of([] { config_from_json("{not json"); }) == ErrorKind::config);
}

TEST_CASE("config validation") {
  auto bad = [](auto&& edit) {
    SweepConfig c;
    edit(c);
    return kind_of([&] { c.validate(); });
  };
  CHECK(bad([](SweepConfig& c) { c.dt = 0.5; }) == ErrorKind::config);
  CHECK(bad([](SweepConfig& c) { c.alpha_list = {0.0}; }) == ErrorKind::config);
  CHECK(bad([](SweepConfig& c) { c.alpha_list.clear(); }) == ErrorKind::config);
  CHECK(bad([](SweepConfig& c) { c.mu = -1.0; }) == ErrorKind::config);
  CHECK(bad([](SweepConfig& c) { c.observables = {Observable::mandel_q}; }) == ErrorKind::config);
  CHECK(bad([](SweepConfig& c) { c.observables = {Observable::husimi}; }) == ErrorKind::config);
  CHECK(bad([](SweepConfig& c) { c.observables = {Observable::w, Observable::w}; }) == ErrorKind::config);
  CHECK(bad([](SweepConfig& c) {
          c.seed = {Seed::Kind::coherent, 3.0};
          c.observables = {Observable::concurrence};
        }) == ErrorKind::config);
  CHECK(bad([](SweepConfig& c) { c.ml_tol = 1e-3; }) == ErrorKind::config);
}

TEST_CASE("simulated trajectories conserve norm and excitation number") {
  auto c = preset("fig6");
  c.t_max = 4.0;
  c.alpha_list = {0.5};
  const auto tr = simulate(c, 0.5, 1.0);
  REQUIRE(tr.times.size() == 401);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(std::abs(tr.norm_squared[k] - 1.0) <= 1e-9);
    CHECK(std::abs(tr.excitation[k] - tr.excitation[0]) <= 1e-9);
  }
  CHECK(tr.excitation[0] == doctest::Approx(10.0));
}

TEST_CASE("run writes a complete, verifiable, reproducible manifest") {
  const auto dir_a = scratch_dir("run-a");
  const auto m = run_experiment(small_fock_config(dir_a));
  CHECK(m.files.size() == 2 * 9);
  CHECK(fs::exists(dir_a / kManifestName));
  const auto report = verify_manifest(dir_a / kManifestName);
  CHECK(report.files_checked == m.files.size());
  for (const auto& p : report.problems) INFO(p);
  CHECK(report.ok());

  const auto periods = parse_table(read_text_file(dir_a / "periods_a1.tsv"));
  CHECK(periods.rows.at(0).at(1) == doctest::Approx(M_PI).epsilon(1e-4));

  // a different worker count must not change a single byte
  ::setenv("FTJC_WORKERS", "1", 1);
  const auto dir_b = scratch_dir("run-b");
  const auto m2 = run_experiment(small_fock_config(dir_b));
  ::setenv("FTJC_WORKERS", "2", 1);
  REQUIRE(m2.files.size() == m.files.size());
  for (std::size_t i = 0; i < m.files.size(); ++i) {
    CHECK(m.files[i].name == m2.files[i].name);
    CHECK(m.files[i].sha256 == m2.files[i].sha256);
  }

  const auto manifest = Manifest::from_json(read_text_file(dir_a / kManifestName));
  CHECK(manifest.library_version == library_version());
  CHECK(config_from_json(manifest.config_json).alpha_list == std::vector<double>{1.0, 0.5});
}

TEST_CASE("verify catches tampering and stray files") {
  const auto dir = scratch_dir("tamper");
  auto cfg = small_fock_config(dir);
  cfg.observables = {Observable::w};
  cfg.alpha_list = {0.5};
  run_experiment(cfg);
  CHECK(verify_manifest(dir / kManifestName).ok());

  auto text = read_text_file(dir / "w_a0.5.tsv");
  text[text.size() - 3] = text[text.size() - 3] == '1' ? '2' : '1';
  write_text_file(dir / "w_a0.5.tsv", text);
  write_text_file(dir / "extra.tsv", "t\n0\n");
  const auto report = verify_manifest(dir / kManifestName);
  CHECK(report.problems.size() == 2);

  fs::remove(dir / "w_a0.5.tsv");
  CHECK(!verify_manifest(dir / kManifestName).ok());
}

TEST_CASE("empty observable set writes only the manifest") {
  const auto dir = scratch_dir("empty");
  auto cfg = small_fock_config(dir);
  cfg.observables.clear();
  const auto m = run_experiment(cfg);
  CHECK(m.files.empty());
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
  CHECK(verify_manifest(dir / kManifestName).ok());
}

TEST_CASE("mu sweep tags file names") {
  const auto dir = scratch_dir("mu");
  auto cfg = small_fock_config(dir);
  cfg.observables = {Observable::w};
  cfg.alpha_list = {0.75};
  cfg.mu_sweep = {0.5, 2.0};
  const auto m = run_experiment(cfg);
  REQUIRE(m.files.size() == 2);
  CHECK(m.files[0].name == "w_a0.75_mu0.5.tsv");
  CHECK(m.files[1].name == "w_a0.75_mu2.tsv");
}

TEST_CASE("machine-readable error records") {
  Error e(ErrorKind::evaluation, "boom");
  e.with_context({.alpha = 0.5, .n = 3, .t = 1.25});
  const auto rec = error_record_json(e);
  CHECK(rec.find("\"kind\":\"evaluation\"") != std::string::npos);
  CHECK(rec.find("\"alpha\":0.5") != std::string::npos);
  CHECK(rec.find("\"n\":3") != std::string::npos);
  CHECK(rec.find("\"t\":1.25") != std::string::npos);

  auto cfg = preset("fig6");
  cfg.n_max = 10;
  CHECK(kind_of([&] { simulate(cfg, 0.5, 1.0); }) == ErrorKind::cutoff);
  try {
    simulate(cfg, 0.5, 1.0);
  } catch (const Error& err) {
    REQUIRE(err.context().alpha.has_value());
    CHECK(*err.context().alpha == 0.5);
  }
}

TEST_CASE("parallel_for covers every index and reports the first failure") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 3);
  for (const auto& h : hits) CHECK(h.load() == 1);

  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 60) throw Error(ErrorKind::input, std::to_string(i));
    }, 4);
    FAIL("expected a rethrow");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "17");
  }
  parallel_for(0, [](std::size_t) { FAIL("no calls for an empty range"); });
}

TEST_CASE("worker count comes from the environment") {
  ::setenv("FTJC_WORKERS", "3", 1);
  CHECK(worker_count() == 3);
  ::setenv("FTJC_WORKERS", "zero", 1);
  CHECK(kind_of([] { worker_count(); }) == ErrorKind::config);
  ::setenv("FTJC_WORKERS", "0", 1);
  CHECK(kind_of([] { worker_count(); }) == ErrorKind::config);
  ::unsetenv("FTJC_WORKERS");
  CHECK(worker_count() >= 1);
}
