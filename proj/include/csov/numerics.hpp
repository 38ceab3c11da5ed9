#pragma once

#include <complex>
#include <functional>

#include "csov/errors.hpp"

namespace csov {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;

  void validate() const;
};

// Either end of an integration domain: a plain coordinate, a symmetric
// cutoff [-L, L], or an exponential damping e^{-eps|x|}.
struct IntervalLimit {
  enum class Kind { finite, cutoff, regulated };
  Kind kind = Kind::finite;
  double value = 0.0;

  static IntervalLimit finite(double x) { return {Kind::finite, x}; }
  static IntervalLimit cutoff(double lambda);
  static IntervalLimit regulated(double eps);
};

using ComplexFn = std::function<Complex(double)>;

// Adaptive Gauss-Kronrod (7/15) with global bisection of the worst panel.
// When omega > 0 the interval is first cut into half-periods pi/omega so
// integrands like e^{i omega x} g(x) start from resolved panels; those
// initial panels do not count against max_subdivisions.
Complex integrate_complex(const ComplexFn& f, double x1, double x2,
                          const QuadratureConfig& cfg = {}, double omega = 0.0);

// 2 sin(dk L)/dk with its Taylor branch near dk = 0.
double dirichlet_kernel(double dk, double lambda);

// Principal value of the integral of f(x)/(x - pole) over [x1, x2].
Complex principal_value(const ComplexFn& f, double pole, double x1, double x2,
                        const QuadratureConfig& cfg = {});

double airy_ai(double x);

// Principal branch of log Gamma(z), imaginary part in (-pi, pi].
Complex log_gamma_complex(Complex z);
Complex gamma_complex(Complex z);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, double* nodes, double* weights);

// Trapezoid weights for a uniform grid of n points with spacing h.
double trapezoid_weight(int i, int n, double h);

}  // namespace csov
