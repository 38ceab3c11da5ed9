#pragma once

#include <vector>

#include "csov/potentials.hpp"

namespace csov {

// Overlap of two continuum states as a distribution:
//   diag_weight * delta(k1 - k2) + mirror_weight * delta(k1 + k2) + delta_term
// The delta weights are symbolic; only delta_term is a pointwise value.
struct OverlapDecomposition {
  Complex diag_weight;
  Complex mirror_weight;
  Complex delta_term;
  double k1 = 0.0;
  double k2 = 0.0;
};

// J(k2, k1) = [ (phi_2')^* phi_1 - phi_2^* phi_1' ] evaluated from x1 to x2
struct BoundaryCurrent {
  Complex value;
  double x1 = 0.0;
  double x2 = 0.0;
};

Complex direct_overlap(const PotentialSpec& spec, double k1, double k2, double x1, double x2,
                       const QuadratureConfig& cfg = {});

BoundaryCurrent boundary_J(const PotentialSpec& spec, double k1, double k2, double x1, double x2);

// |direct_overlap + J / (2 m (E2 - E1))|
double finite_interval_identity_residual(const PotentialSpec& spec, double k1, double k2, double x1,
                                         double x2, const QuadratureConfig& cfg = {});

OverlapDecomposition overlap_decomposition(const PotentialSpec& spec, double k1, double k2);

// Pointwise non-orthogonality term built from R and T:
//   (T2^* T1 + R2^* R1 - 1) / (i (k1 - k2)) + (R1 - R2^*) / (i (k1 + k2))
Complex nonorthogonality_term(const ScatteringCoefficients& c1, double k1,
                              const ScatteringCoefficients& c2, double k2);
// Same term for a spec; near the diagonal (|k1 - k2| < 1e-4, including
// k1 == k2) it is interpolated from eight symmetric off-diagonal nodes.
Complex nonorthogonality_term(const PotentialSpec& spec, double k1, double k2);

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 2;
  std::vector<double> points() const;
};

// Row-major over (k1, k2): index = i1 * k2.n + i2.
std::vector<OverlapDecomposition> delta_grid(const PotentialSpec& spec, const GridAxis& k1,
                                             const GridAxis& k2, int threads = 1);

// Closed-form overlap over a cutoff window [-L, L] (or [-x, x] for a finite
// limit) or over the real line with damping e^{-eps|x|} on each state.
// Tails are integrated analytically, the potential region by quadrature.
Complex windowed_overlap(const PotentialSpec& spec, double k1, double k2, const IntervalLimit& limit,
                         const QuadratureConfig& cfg = {});

struct RegularizedOverlap {
  Complex diag_weight;    // coefficient of pi delta(k1 - k2) summed over tails
  Complex mirror_weight;  // coefficient of delta(k1 + k2)
  Complex pv_term;        // damped overlap minus the Lorentzian delta surrogates
  Complex total;          // full damped overlap at this eps
  double eps = 0.0;
};

RegularizedOverlap regularized_overlap(const PotentialSpec& spec, double k1, double k2, double eps);

// int_{x1}^{x2} e^{i q x} e^{-2 eps |x|} dx, either end may be infinite
Complex damped_plane_wave_integral(double q, double eps, double x1, double x2);

// Boundary-reduction residual for the damped states phi e^{-eps|x|} on [-X, X]
double regularized_boundary_residual(const PotentialSpec& spec, double k1, double k2, double eps,
                                     double X, const QuadratureConfig& cfg = {});

// Cesaro mean over L in [Lc/2, 3Lc/2] of the cutoff overlap minus the
// Dirichlet surrogates of both delta terms.
Complex cesaro_remainder(const PotentialSpec& spec, double k1, double k2, double lambda_center,
                         const QuadratureConfig& cfg = {});

// Squared L2 norms over the relative momentum of the cutoff kernel
// 2 sin(q L)/q and of the half-line damped kernel 1/(2 eps - i q).
double cutoff_kernel_norm2(double lambda, const QuadratureConfig& cfg = {});
double regularized_kernel_norm2(double eps, const QuadratureConfig& cfg = {});

struct CutoffRow {
  double lambda;
  Complex overlap;
  double kernel_norm2;
  double kernel_constant;  // kernel_norm2 / lambda
};

struct RegularizedRow {
  double eps;
  RegularizedOverlap overlap;
  double kernel_norm2;
  double kernel_constant;  // kernel_norm2 * eps
  double boundary_residual;
};

struct RegularizationReport {
  std::vector<CutoffRow> cutoff;
  std::vector<RegularizedRow> regularized;
  Complex cutoff_diag_weight;
  Complex cutoff_mirror_weight;
  bool weights_agree = false;
  std::vector<double> cutoff_ratios;       // norm(next)/norm(prev)
  std::vector<double> regularized_ratios;  // norm(next)/norm(prev)
  bool residual_nonzero_decreasing = false;
};

RegularizationReport regularization_compare(const PotentialSpec& spec, double k1, double k2,
                                            const std::vector<double>& lambdas,
                                            const std::vector<double>& epsilons,
                                            const QuadratureConfig& cfg = {});

// K(x, y) = int_{-T}^{T} Ai(t + x) Ai(t + y) dt
double airy_kernel(double x, double y, double t_cutoff, const QuadratureConfig& cfg = {});
// |int dy K(x, y) g(y) - g(x)| for g(y) = exp(-y^2 / (2 w^2))
double airy_closure_check(double t_cutoff, double x, double width);
// |int dt Ai(t + x) int dy d/dt Ai(t + y) g(y) + g'(x)|
double airy_closure_derivative_check(double t_cutoff, double x, double width);

struct TwistedMomenta {
  long n1 = 0;
  double theta1 = 0.0;
  long n2 = 0;
  double theta2 = 0.0;
};

// int_{-L}^{L} e^{-i (k2 - k1) x} dx with k = pi n / L + theta / (2 L)
Complex twisted_boundary_overlap(const TwistedMomenta& m, double lambda);

}  // namespace csov
