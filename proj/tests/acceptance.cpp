// Acceptance runner: `acceptance` runs every criterion, `acceptance N` runs one.
// One line per criterion: "criterion N: PASS|FAIL <summary>".

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "csov/reports.hpp"

using namespace csov;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const int threads = 4;
const PotentialSpec well = PotentialSpec::square_well(2.0, 10.0);

Outcome figure_areas() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = figure1_summary(well);
  const double secs = seconds_since(t0);
  Outcome o;
  bool reproduced = false;
  for (const auto& r : s.readings) {
    o.summary += r.convention + ": Im " + fmt("%.2f", r.area_im) + " (" + fmt("%.1f", 100 * r.rel_err_im) + "%), Re " +
                 fmt("%.2f", r.area_re) + " (" + fmt("%.1f", 100 * r.rel_err_re) + "%); ";
    if (r.rel_err_im <= 0.05 && r.rel_err_re <= 0.05) reproduced = true;
  }
  const auto& best = s.readings.at(s.closest);
  const double flip_im = std::abs(best.alt_area_im - s.options.target_im) / s.options.target_im;
  const double flip_re = std::abs(best.alt_area_re - s.options.target_re) / s.options.target_re;
  o.summary += "closest " + best.convention + "; opposite mirror sign gives Im " + fmt("%.2f", best.alt_area_im) + " (" +
               fmt("%.1f", 100 * flip_im) + "%), Re " + fmt("%.2f", best.alt_area_re) + " (" +
               fmt("%.1f", 100 * flip_re) + "%); " + fmt("%.3f", secs) + " s";
  // when no reading reproduces both areas the criterion asks for both
  // attempts and the closest match to be reported, which the summary does
  const bool reported = s.readings.size() == 2;
  o.pass = secs < 30.0 && (reproduced || reported);
  o.summary = (reproduced ? "reproduced; " : "not reproduced by either reading, both reported; ") + o.summary;
  return o;
}

Outcome unitarity() {
  Outcome o;
  o.pass = true;
  const std::vector<std::pair<PotentialSpec, double>> cases = {{PotentialSpec::free_particle(), 1e-12},
                                                               {PotentialSpec::delta(3.0), 1e-12},
                                                               {well, 1e-12},
                                                               {PotentialSpec::poschl_teller(1.5, 1.0), 1e-8},
                                                               {PotentialSpec::poschl_teller(-4.0, 0.7), 1e-8}};
  for (const auto& [spec, tol] : cases) {
    const double d = unitarity_defect(spec, 200, 0.05, 50.0);
    o.pass = o.pass && d < tol;
    o.summary += kind_name(spec.kind()) + " " + fmt("%.2e", d) + "; ";
  }
  return o;
}

Outcome delta_vanishes() {
  const double f = delta_vanishing(PotentialSpec::free_particle(), 50);
  const double d = delta_vanishing(PotentialSpec::delta(3.0), 50);
  const double d2 = delta_vanishing(PotentialSpec::delta(-0.8), 50);
  return {f < 1e-12 && d < 1e-12 && d2 < 1e-12,
          "max |Delta|: free " + fmt("%.2e", f) + ", delta(3) " + fmt("%.2e", d) + ", delta(-0.8) " + fmt("%.2e", d2)};
}

Outcome finite_interval() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto draws = identity_draws(100, 20261016, QuadratureConfig{});
  const double secs = seconds_since(t0);
  double worst = 0.0;
  for (const auto& d : draws) worst = std::max(worst, d.residual);
  return {worst < 1e-7 && secs < 60.0,
          "worst residual over " + std::to_string(draws.size()) + " draws " + fmt("%.2e", worst) + "; " +
              fmt("%.2f", secs) + " s"};
}

Outcome special_momenta_form() {
  double lit = 0.0, conj = 0.0;
  for (const auto& r : special_momenta(well, 4)) {
    lit = std::max(lit, r.err_closed_form);
    conj = std::max(conj, r.err_conjugate);
  }
  return {lit < 1e-10, "max error vs stated form " + fmt("%.3g", lit) + "; vs its complex conjugate " +
                           fmt("%.2e", conj)};
}

Outcome cesaro() {
  std::vector<std::pair<double, double>> pairs = {{1.3, 0.7}, {2.1, 2.3}, {0.5, 1.7}, {2.6, 0.9}, {1.1, 2.8},
                                                  {3.0, 1.9}, {0.8, 0.4}, {1.6, 2.2}, {2.4, 1.2}, {0.6, 3.1}};
  const auto rows = cesaro_study(well, pairs, {50.0, 100.0, 200.0}, QuadratureConfig{}, threads);
  int monotone = 0, halves = 0;
  double worst_ratio = 0.0, worst_rem = 0.0;
  for (const auto& r : rows) {
    monotone += r.monotone;
    halves += r.monotone && r.halves;
    worst_ratio = std::max(worst_ratio, r.error.back() / std::abs(r.prediction));
    worst_rem = std::max(worst_rem, std::abs(r.remainder.back()));
  }
  const int n = int(rows.size());
  return {halves == n, std::to_string(monotone) + "/" + std::to_string(n) + " pairs monotone, " +
                           std::to_string(halves) + "/" + std::to_string(n) +
                           " halve the error; at window 200 max |remainder| " + fmt("%.3g", worst_rem) +
                           ", max error/|Delta| " + fmt("%.3f", worst_ratio)};
}

Outcome airy() {
  const auto rows = airy_study({20.0, 40.0, 80.0}, 0.0, 1.0, threads);
  bool dec = true;
  std::string s;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && !(rows[i].closure_error < rows[i - 1].closure_error)) dec = false;
    s += fmt("%.0f", rows[i].cutoff) + ": " + fmt("%.2e", rows[i].closure_error) + "; ";
  }
  return {dec && rows.back().closure_error < 1e-2, s + (dec ? "strictly decreasing" : "not decreasing")};
}

Outcome packet_flow() {
  const auto ft = packet_flow_table(well, PacketSpec::gaussian(1.0, -50.0, 0.01), threads);
  const bool pass = ft.free_drift < 1e-8 && ft.delta_drift < 1e-8 && ft.floor < 1e-6 && ft.peak >= 1e3 * ft.floor &&
                    ft.fd_ok;
  return {pass, "drift free " + fmt("%.1e", ft.free_drift) + ", delta " + fmt("%.1e", ft.delta_drift) + "; floor " +
                    fmt("%.2e", ft.floor) + ", peak " + fmt("%.3e", ft.peak) + " at t=" + fmt("%.1f", ft.peak_time) +
                    "; fd max abs " + fmt("%.1e", ft.fd_max_abs)};
}

Outcome regularization() {
  const auto r =
      regularization_compare(well, 1.3, 0.7, {25.0, 50.0, 100.0, 200.0}, {1e-2, 5e-3, 2.5e-3, 1.25e-3}, {});
  double cut = 0.0, reg = 0.0;
  for (double x : r.cutoff_ratios) cut = std::max(cut, std::abs(x - 2.0) / 2.0);
  for (double x : r.regularized_ratios) reg = std::max(reg, std::abs(x - 2.0) / 2.0);
  const double constant = r.cutoff.back().kernel_constant;
  return {cut < 0.01 && reg < 0.01 && r.residual_nonzero_decreasing,
          "ratio deviation cutoff " + fmt("%.1e", cut) + ", damped " + fmt("%.1e", reg) + "; boundary residual " +
              (r.residual_nonzero_decreasing ? "nonzero and decreasing" : "not decreasing") +
              "; cutoff norm / lambda measured " + fmt("%.6f", constant) + " (4 pi = " + fmt("%.6f", 4 * pi) +
              ", pi = " + fmt("%.6f", pi) + ", informational)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {figure_areas, unitarity,   delta_vanishes,
                                                          finite_interval, special_momenta_form, cesaro,
                                                          airy,         packet_flow, regularization};
  std::vector<int> which;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > int(criteria.size())) {
      std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
      return 2;
    }
    which.push_back(n);
  } else {
    for (int n = 1; n <= int(criteria.size()); ++n) which.push_back(n);
  }
  bool all = true;
  for (int n : which) {
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d: %s %s\n", n, o.pass ? "PASS" : "FAIL", o.summary.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
