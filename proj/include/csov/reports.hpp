#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csov/config.hpp"
#include "csov/io.hpp"

namespace csov {

// ---------------------------------------------------------------- figures

// Delta along a line of fixed k2_hat, as a function of a * k1_hat.
struct Figure1Reading {
  std::string convention;  // "scaled" (a k2_hat = value) or "absolute" (k2_hat = value)
  double k2_hat = 0.0;
  double area_im = 0.0;
  double area_re = 0.0;
  double peak_im = 0.0;
  double peak_im_k1_hat = 0.0;
  // same areas with the opposite sign on the mirror term
  double alt_area_im = 0.0;
  double alt_area_re = 0.0;
  double rel_err_im = 0.0;
  double rel_err_re = 0.0;
};

struct Figure1Options {
  double caption_value = 0.314;
  double window_lo = 0.0;  // in units of a * k1_hat
  double window_hi = 5.0;
  int samples = 2001;
  double target_im = 38.54;
  double target_re = 10.66;
};

struct Figure1Summary {
  Figure1Options options;
  std::vector<Figure1Reading> readings;
  std::size_t closest = 0;  // index into readings

  json to_json(const PotentialSpec& spec) const;
};

Figure1Reading figure1_reading(const PotentialSpec& spec, double k2_hat, const std::string& convention,
                               const Figure1Options& opt);
Figure1Summary figure1_summary(const PotentialSpec& spec, const Figure1Options& opt = {});
CsvTable figure1_curve(const PotentialSpec& spec, double k2_hat, const Figure1Options& opt);

// k from the interior wavenumber of a square well
double momentum_from_interior(const PotentialSpec& spec, double k_hat);

struct SurfaceOptions {
  double lo = -6.283185307179586;  // a * k_hat axis
  double hi = 6.283185307179586;
  int n = 129;
};

enum class SurfaceQuantity { abs2, imag, real };

struct SurfacePeak {
  double value = 0.0;
  std::vector<std::pair<double, double>> locations;  // (a k1_hat, a k2_hat)
};

// Delta over the (a k1_hat, a k2_hat) plane; header
// a_k1hat,a_k2hat,k1,k2,re_delta,im_delta,abs2_delta
CsvTable figure_surface(const PotentialSpec& spec, const SurfaceOptions& opt, int threads,
                        SurfaceQuantity q, SurfacePeak& peak);

CsvTable delta_grid_csv(const std::vector<OverlapDecomposition>& grid);

// ---------------------------------------------------------------- checks

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string trace;
  bool gating = true;  // informational checks do not affect the suite result
  json detail = json::object();
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;

  bool pass() const;
  json to_json() const;
};

// max | |R|^2 + |T|^2 - 1 | over n log-spaced k in [k_lo, k_hi]
double unitarity_defect(const PotentialSpec& spec, int n = 200, double k_lo = 0.05, double k_hi = 50.0);

// max |Delta| over an n x n grid
double delta_vanishing(const PotentialSpec& spec, int n = 50, double k_lo = 0.05, double k_hi = 5.0);

struct IdentityDraw {
  std::string potential;
  double k1, k2, x1, x2;
  double residual;
};

std::vector<IdentityDraw> identity_draws(int count, std::uint64_t seed, const QuadratureConfig& cfg);

struct SpecialMomentaRow {
  int n1, n2;
  double k1, k2;
  Complex computed;
  Complex closed_form;
  double err_closed_form;  // |computed - closed form|
  double err_conjugate;    // |computed - conj(closed form)|
};

std::vector<SpecialMomentaRow> special_momenta(const PotentialSpec& spec, int n_max = 4);

struct CesaroRow {
  double k1, k2;
  Complex prediction;               // Delta
  std::vector<double> lambdas;
  std::vector<Complex> remainder;   // Cesaro mean of overlap minus kernels
  std::vector<double> error;        // |remainder - prediction|
  bool monotone = false;
  bool halves = false;              // error(last) <= error(first) / 2
};

std::vector<CesaroRow> cesaro_study(const PotentialSpec& spec,
                                    const std::vector<std::pair<double, double>>& pairs,
                                    const std::vector<double>& lambdas, const QuadratureConfig& cfg,
                                    int threads);

struct AiryRow {
  double cutoff;
  double closure_error;
  double derivative_error;
};

std::vector<AiryRow> airy_study(const std::vector<double>& cutoffs, double x, double width, int threads);

struct FlowTable {
  double free_drift = 0.0;    // max |N(t) - N(0)|
  double delta_drift = 0.0;
  double floor = 0.0;         // max |dN/dt| at the quiet times
  double peak = 0.0;          // max |dN/dt| over the traversal window
  double peak_time = 0.0;
  double fd_max_abs = 0.0;    // max |fd - formula|
  double fd_max_rel = 0.0;    // max |fd - formula| / |formula|
  bool fd_ok = false;         // every sample within 1e-6 abs or 1e-3 rel
  std::vector<double> times;
  std::vector<double> fd;
  std::vector<double> formula;
};

FlowTable packet_flow_table(const PotentialSpec& well, const PacketSpec& packet, int threads);

SuiteReport verify_identities(const QuadratureConfig& cfg, int threads);
SuiteReport verify_regularization(const QuadratureConfig& cfg, int threads);
SuiteReport verify_airy(const QuadratureConfig& cfg, int threads);
SuiteReport verify_packets(int threads);
SuiteReport verify_all(const QuadratureConfig& cfg, int threads);

json regularization_to_json(const RegularizationReport& rep);
CsvTable regularization_table(const RegularizationReport& rep);

}  // namespace csov
