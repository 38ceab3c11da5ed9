#pragma once

#include <string>
#include <vector>

#include "csov/overlap.hpp"

namespace csov {

struct KGrid {
  double k_min = 0.0;
  double k_max = 0.0;
  int n_points = 801;

  std::vector<double> points() const;
  double spacing() const { return (k_max - k_min) / (n_points - 1); }
};

// a(k) = (sigma pi)^{-1/4} exp(-(k - P0)^2 / (2 sigma) - i k X0)
struct PacketSpec {
  double P0 = 1.0;
  double X0 = 0.0;
  double sigma = 0.01;
  KGrid k_grid;

  // grid over P0 +- half_width sqrt(sigma), clipped to k > 0
  static PacketSpec gaussian(double P0, double X0, double sigma, int n_points = 801,
                             double half_width = 7.0);

  Complex amplitude(double k) const;
  double velocity(double mass) const { return P0 / mass; }
  // throws ConfigError on bad fields, GridTooCoarse if |a| at an edge > 1e-8
  void validate() const;
};

struct CorrelationAmplitudes {
  double t = 0.0;
  Complex I_t, kI_t, T_t, kT_t, R_t, kR_t;
};

enum class NormMethod { direct, net_current_formula, stationary_phase };

std::string method_name(NormMethod m);

struct NormTrace {
  std::vector<double> times;
  std::vector<double> N;
  std::vector<double> dNdt;
  NormMethod method = NormMethod::direct;
};

// Caches a(k), R, T and the non-orthogonality matrix on the packet grid.
// States are delta-normalized (phi / sqrt(2 pi)), so the norm is
//   N(t) = int |a|^2 + (1 / 2 pi) sum a2^* a1 e^{i (E2 - E1) t} Delta(k1, k2).
class PacketEvolution {
 public:
  PacketEvolution(const PotentialSpec& spec, const PacketSpec& packet);

  double base_norm() const { return base_norm_; }
  double norm(double t) const;
  double rate(double t) const;
  CorrelationAmplitudes correlations(double t) const;
  double stationary_phase_rate(double t) const;

  const std::vector<double>& grid() const { return k_; }

 private:
  std::vector<Complex> weighted_phases(double t) const;

  PotentialSpec spec_;
  PacketSpec packet_;
  std::vector<double> k_;
  std::vector<double> w_;
  std::vector<Complex> a_;
  std::vector<ScatteringCoefficients> coef_;
  std::vector<Complex> delta_;  // row-major, delta_[i * n + j] = Delta(k_i, k_j)
  double base_norm_ = 0.0;
};

double norm_direct(const PotentialSpec& spec, const PacketSpec& packet, double t);
double norm_rate(const PotentialSpec& spec, const PacketSpec& packet, double t);
CorrelationAmplitudes correlation_amplitudes(const PotentialSpec& spec, const PacketSpec& packet,
                                             double t);
double stationary_phase_norm_rate(const PotentialSpec& spec, const PacketSpec& packet, double t);

// Leading stationary-phase centroid quantities.
Complex packet_centroid_momentum(const PacketSpec& packet, double mass, double t);
Complex packet_centroid_amplitude(const PacketSpec& packet, double mass, double t);

NormTrace norm_trace(const PotentialSpec& spec, const PacketSpec& packet,
                     const std::vector<double>& times, NormMethod method, int threads = 1);

// s-wave S-matrix element models
class S0Model {
 public:
  enum class Kind { unit, constant_phase, hard_sphere, tabulated };

  static S0Model unit();
  static S0Model constant_phase(double delta0);
  static S0Model hard_sphere(double radius);
  // linear interpolation in k of tabulated values; k must be increasing
  static S0Model tabulated(std::vector<double> k, std::vector<Complex> s);

  Complex operator()(double k) const;
  Kind kind() const { return kind_; }
  double parameter() const { return param_; }

 private:
  Kind kind_ = Kind::unit;
  double param_ = 0.0;
  std::vector<double> k_tab_;
  std::vector<Complex> s_tab_;
};

std::string s0_kind_name(S0Model::Kind k);

// Incoming spherical packet released at radius R0; the packet's P0, sigma
// and grid are used, its X0 is replaced by -R0.
struct SWaveSpec {
  S0Model s0;
  double R0 = 50.0;
  double mass = 1.0;
};

// Radial states normalized so the orthogonal part of the norm is int |a|^2:
//   N(t) = int |a|^2 + sum b2^* b1 K(k1, k2)
//   K = i [ (s2^* s1 - 1) / (4 k1 k2 (k2 - k1)) + (s1 - s2^*) / (4 k1 k2 (k1 + k2)) ]
double swave_norm(const SWaveSpec& swave, const PacketSpec& packet, double t);
double swave_norm_rate(const SWaveSpec& swave, const PacketSpec& packet, double t);

}  // namespace csov
