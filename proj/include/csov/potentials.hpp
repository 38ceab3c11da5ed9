#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "csov/numerics.hpp"

namespace csov {

enum class PotentialKind { free, delta, square_well, poschl_teller, linear };

std::string kind_name(PotentialKind kind);

// Immutable description of one solvable potential. hbar = 1 throughout.
class PotentialSpec {
 public:
  static PotentialSpec free_particle(double mass = 1.0);
  static PotentialSpec delta(double g, double mass = 1.0);
  static PotentialSpec square_well(double V0, double a, double mass = 1.0);
  // V(x) = V0 / cosh^2(mu x); nu solves nu (nu + 1) = -2 m V0 / mu^2
  static PotentialSpec poschl_teller(double V0, double mu, double mass = 1.0);
  static PotentialSpec poschl_teller_nu(double nu, double mu, double mass = 1.0);
  // V(z) = m g z
  static PotentialSpec linear(double mass, double g_accel);

  PotentialKind kind() const { return kind_; }
  double mass() const { return mass_; }
  double g() const { return g_; }
  double V0() const { return V0_; }
  double a() const { return a_; }
  double mu() const { return mu_; }
  Complex nu() const { return nu_; }
  double g_accel() const { return g_accel_; }

  double energy(double k) const { return k * k / (2.0 * mass_); }
  // pointwise potential; the delta spike is not representable and reads 0
  double value(double x) const;
  // points where the wavefunction changes its closed form
  std::vector<double> breakpoints() const;
  bool has_coefficients() const { return kind_ != PotentialKind::linear; }

 private:
  PotentialSpec() = default;
  PotentialKind kind_ = PotentialKind::free;
  double mass_ = 1.0;
  double g_ = 0.0;
  double V0_ = 0.0;
  double a_ = 0.0;
  double mu_ = 0.0;
  Complex nu_ = 0.0;
  double g_accel_ = 0.0;
};

struct Wavenumbers {
  double k = 0.0;
  Complex k_hat = 0.0;
};

struct ScatteringCoefficients {
  Complex R, T;
  std::optional<Complex> A_plus, A_minus, D;  // square well only
};

Wavenumbers interior_wavenumber(const PotentialSpec& spec, double k);

ScatteringCoefficients coefficients(const PotentialSpec& spec, double k);
// analytic continuation to complex momentum (R and T only)
ScatteringCoefficients coefficients_at(const PotentialSpec& spec, Complex k);

// Stationary state e^{ikx} + R e^{-ikx} on the left, T e^{ikx} on the right.
class ScatteringState {
 public:
  ScatteringState(const PotentialSpec& spec, double k);

  Complex value(double x) const;
  Complex derivative(double x) const;
  const ScatteringCoefficients& coefficients() const { return coef_; }
  double k() const { return k_; }

 private:
  struct HypergeometricState;

  PotentialSpec spec_;
  double k_;
  ScatteringCoefficients coef_;
  Complex k_hat_ = 0.0;
  std::shared_ptr<const HypergeometricState> hyp_;
};

Complex wavefunction(const PotentialSpec& spec, double k, double x);

// Ai((z - E/(m g)) / c) with c = (1 / (2 m^2 g))^{1/3}
double airy_state(const PotentialSpec& spec, double E, double z);

// Gauss hypergeometric 2F1(a, b; c; z) for 0 <= z < 1; omz = 1 - z is
// passed separately so points near z = 1 keep their precision.
Complex hyp2f1(Complex a, Complex b, Complex c, double z, double omz);

}  // namespace csov
