// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tonks/commands.hpp"
#include "tonks/constants.hpp"
#include "tonks/density.hpp"
#include "tonks/errors.hpp"
#include "tonks/inference.hpp"
#include "tonks/optics.hpp"

using namespace tonks;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("tonks_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

RunConfig base_config() {
  auto c = RunConfig::defaults();
  c.output_directory = work_dir();
  return c;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::fabs(a[j] - b[j]));
  return worst;
}

Outcome normalization() {
  double worst = 0.0;
  const auto cfg = base_config();
  for (int n : {1, 2, 10, 30, 100}) {
    auto trap = cfg.trap;
    trap.atom_count = n;
    const auto grid = default_density_grid(n);
    const auto parts = parity_decomposition(trap, cfg.state, grid);
    for (int k = 0; k < 16; ++k) {
      const double total = instantaneous_density(parts, constants::two_pi * k / 16.0).integral();
      worst = std::max(worst, std::fabs(total - n) / n);
    }
  }
  return {worst < 1e-8, fmt("max relative error %.3e", worst)};
}

Outcome christoffel_darboux() {
  double worst = 0.0;
  int worst_n = 0;
  auto trap = base_config().trap;
  for (int n = 1; n <= 200; ++n) {
    trap.atom_count = n;
    const auto grid = default_density_grid(n);
    const double d = max_abs_diff(ground_density(trap, grid).values,
                                  christoffel_darboux_density(trap, grid).values);
    if (d > worst) {
      worst = d;
      worst_n = n;
    }
  }
  return {worst < 1e-10, fmt("max pointwise difference %.3e (N = %d)", worst, worst_n)};
}

Outcome density_symmetries() {
  auto cfg = base_config();
  cfg.trap.atom_count = 10;
  const auto grid = default_density_grid(10, cfg.numerics.extent_margin, 64.0);
  const auto parts = parity_decomposition(cfg.trap, cfg.state, grid);
  const double a = cfg.state.relative_phase;
  const auto left = instantaneous_density(parts, a);
  const auto middle = instantaneous_density(parts, a + constants::pi / 2);
  const auto right = instantaneous_density(parts, a + constants::pi);
  const std::size_t m = grid.size();
  double even = 0.0, mirror = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    even = std::max(even, std::fabs(middle.values[j] - middle.values[m - 1 - j]));
    mirror = std::max(mirror, std::fabs(left.values[j] - right.values[m - 1 - j]));
  }
  const auto rho0 = ground_density(cfg.trap, grid);
  const double radius = cfg.trap.dimensionless_radius();
  int peaks = 0;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    if (std::fabs(grid[j]) >= radius || std::fabs(grid[j + 1]) >= radius) continue;
    if (rho0.derivatives[j] > 0.0 && rho0.derivatives[j + 1] <= 0.0) ++peaks;
  }
  // the CSVs for visual comparison
  std::ostringstream log;
  cmd_density(cfg, default_density_times(cfg), log);
  return {even < 1e-10 && mirror < 1e-10 && peaks == 10,
          fmt("even %.2e, mirror %.2e, rho0 peaks %d", even, mirror, peaks)};
}

Outcome large_n() {
  auto trap = base_config().trap;
  std::vector<double> rms;
  for (int n : {10, 40, 160}) {
    trap.atom_count = n;
    const auto grid = default_density_grid(n);
    const auto g = ground_density(trap, grid);
    const auto avg = average_density(trap, grid);
    const double r = 0.8 * trap.dimensionless_radius();
    double sum = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (std::fabs(grid[j]) < r) {
        sum += (g.values[j] - avg.values[j]) * (g.values[j] - avg.values[j]);
        ++count;
      }
    rms.push_back(std::sqrt(sum / count) / (trap.peak_average_density() * trap.oscillator_length()));
  }
  return {rms[0] > rms[1] && rms[1] > rms[2],
          fmt("relative RMS %.4e, %.4e, %.4e", rms[0], rms[1], rms[2])};
}

Outcome wkb_vs_helmholtz() {
  std::ostringstream log;
  const auto s = cmd_field(base_config(), 0.0, log);
  const double dt = std::fabs(s.wkb_transmission - s.transmission) / s.transmission;
  return {s.wkb_deviation < 1e-3 && dt < 1e-3, fmt("|E| L2 %.3e, T %.3e", s.wkb_deviation, dt)};
}

Outcome unitarity() {
  auto cfg = base_config();
  cfg.optics.linewidth = 0.0;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    auto trap = cfg.trap;
    trap.atom_count = 1 + static_cast<int>(u(rng) * 60);
    const auto state = SuperpositionState::from_population(u(rng), 0.0);
    const auto options = cfg.timeseries_options();
    const auto grid = optical_grid(trap, cfg.optics, options);
    const auto density = instantaneous_density(parity_decomposition(trap, state, grid),
                                               constants::two_pi * u(rng));
    const auto f = solve_helmholtz(build_index_profile(density, trap, cfg.optics, options.index_mode),
                                   cfg.optics);
    worst = std::max(worst, std::fabs(f.transmission() + f.reflection() - 1.0));
  }
  return {worst < 1e-6, fmt("max | |t|^2 + |r|^2 - 1 | = %.3e", worst)};
}

Outcome spectrum_structure() {
  const auto cfg = base_config();
  const auto record = transmission_timeseries(cfg.trap, cfg.state, cfg.optics, cfg.timeseries_options());
  const double line = std::abs(fourier_coefficient(record, 2));
  double odd = 0.0;
  for (int m = 1; m <= 2 * cfg.numerics.harmonics + 1; m += 2)
    odd = std::max(odd, std::abs(fourier_coefficient(record, m)));
  const double zeta = analytic_transmission_params(cfg.trap, cfg.state, cfg.optics).zeta;
  const double dc = std::abs(fourier_coefficient(record, 0));
  double ratio_err = 0.0;
  for (int s = 1; s <= cfg.numerics.harmonics; ++s) {
    const double measured = std::abs(fourier_coefficient(record, 2 * s)) / dc;
    const double expected = std::cyl_bessel_i(double(s), std::fabs(zeta)) / std::cyl_bessel_i(0.0, std::fabs(zeta));
    ratio_err = std::max(ratio_err, std::fabs(measured - expected));
  }
  return {odd < 1e-10 * line && ratio_err < 1e-6,
          fmt("odd/|T(2w)| %.3e, Bessel ratio error %.3e", odd / line, ratio_err)};
}

Outcome bessel_identity() {
  double worst = 0.0;
  for (double z = 1e-4; z <= 1.0 + 1e-12; z *= 10.0) {
    const double lhs = 2.0 * bessel_i(1, z) / (bessel_i(0, z) - bessel_i(2, z));
    worst = std::max(worst, std::fabs(lhs - z) / z);
  }
  return {worst < 1e-12, fmt("max relative deviation %.3e", worst)};
}

std::string infer_line(Engine engine) {
  auto cfg = base_config();
  cfg.numerics.engine = engine;
  std::ostringstream log;
  const auto r = cmd_infer(cfg, InferTarget::atoms, std::nullopt, log);
  return fmt("%d/%d", r.result.atoms->best, r.result.atoms->runner_up);
}

Outcome headline() {
  auto cfg = base_config();
  cfg.numerics.workers = 1;
  std::ostringstream log;
  const auto r = cmd_infer(cfg, InferTarget::atoms, std::nullopt, log);
  const auto& a = *r.result.atoms;
  auto ok = [](int n) { return n == 30 || n == 31; };
  return {ok(a.best) && ok(a.runner_up),
          fmt("helmholtz best %d, runner-up %d (zeta %.4e); wkb2 %s, analytic %s", a.best, a.runner_up,
              r.result.zeta_estimate, infer_line(Engine::wkb2).c_str(), infer_line(Engine::analytic).c_str())};
}

struct RoundTrip {
  double product = 0.0;
  double alpha = 0.0;
  int failures = 0;
};

RoundTrip round_trip(Engine engine, int samples) {
  auto cfg = base_config();
  cfg.numerics.engine = engine;
  cfg.numerics.samples_per_period = samples;
  RoundTrip worst;
  for (double det : {-90e6, 60e6, 120e6}) {
    cfg.optics.detuning = constants::two_pi * det;
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9})
      for (double alpha : {-1.2, -0.6, 0.0, 0.6, 1.2}) {
        cfg.state = SuperpositionState::from_population(p, alpha);
        const double truth = cfg.state.mag_c0 * cfg.state.mag_c1;
        std::ostringstream log;
        try {
          const auto r = cmd_infer(cfg, InferTarget::coefficients, std::nullopt, log);
          worst.product = std::max(worst.product, std::fabs(*r.result.coefficient_product - truth));
          worst.alpha = std::max(worst.alpha, std::fabs(r.result.alpha_estimate - alpha));
        } catch (const InversionError&) {
          ++worst.failures;
        }
      }
  }
  return worst;
}

Outcome coefficient_round_trip() {
  const auto analytic = round_trip(Engine::analytic, 256);
  const auto helmholtz = round_trip(Engine::helmholtz, 32);
  const bool a_ok = analytic.failures == 0 && analytic.product < 1e-6 && analytic.alpha < 1e-8;
  const bool h_ok = helmholtz.failures == 0 && helmholtz.product < 1e-3 && helmholtz.alpha < 1e-4;
  return {a_ok && h_ok,
          fmt("analytic %s (product %.2e, alpha %.2e); helmholtz %s (product %.2e, alpha %.2e, "
              "%d of 75 rejected)",
              a_ok ? "ok" : "off", analytic.product, analytic.alpha, h_ok ? "ok" : "off", helmholtz.product,
              helmholtz.alpha, helmholtz.failures)};
}

Outcome sign_law() {
  auto cfg = base_config();
  cfg.numerics.samples_per_period = 64;
  std::string detail;
  bool ok = true;
  for (double det : {-120e6, -90e6, -60e6, 60e6, 90e6, 120e6}) {
    cfg.optics.detuning = constants::two_pi * det;
    std::ostringstream log;
    const auto s = cmd_transmit(cfg, log);
    const bool match = s.zeta_spectral && (*s.zeta_spectral > 0.0) == (det > 0.0);
    ok = ok && match;
    detail += fmt("%+.0f MHz: %s  ", det / 1e6, s.zeta_spectral ? fmt("%+.3e", *s.zeta_spectral).c_str() : "none");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "normalization", 5.0, normalization},
      {2, "Christoffel-Darboux equals orbital sum", 10.0, christoffel_darboux},
      {3, "N=10 density symmetries and peak count", 0.0, density_symmetries},
      {4, "large-N approach to the average density", 0.0, large_n},
      {5, "WKB against Helmholtz", 30.0, wkb_vs_helmholtz},
      {6, "lossless unitarity", 0.0, unitarity},
      {7, "spectrum structure", 0.0, spectrum_structure},
      {8, "Bessel identity", 0.0, bessel_identity},
      {9, "atom number of the worked example", 120.0, headline},
      {10, "coefficient round trip", 0.0, coefficient_round_trip},
      {11, "sign law", 0.0, sign_law},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && seconds >= c.time_limit) {
      o.pass = false;
      o.detail += fmt(" [over the %.0f s limit]", c.time_limit);
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::error_code ec;
  fs::remove_all(work_dir(), ec);
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
