#include "csov/overlap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "csov/parallel.hpp"

namespace csov {

namespace {

const Complex I(0.0, 1.0);
constexpr double inf = std::numeric_limits<double>::infinity();

void require_positive_momenta(double k1, double k2) {
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw ConfigError("momenta must be positive");
}

Complex cexpm1(Complex z) {
  const double x = z.real(), y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// int_lo^hi e^{c x} dx; infinite ends need the matching sign of Re c
Complex exp_integral(Complex c, double lo, double hi) {
  if (std::isinf(lo)) return std::exp(c * hi) / c;
  if (std::isinf(hi)) return -std::exp(c * lo) / c;
  const double len = hi - lo;
  const Complex z = c * len;
  const Complex phi1 = std::abs(z) < 1e-8 ? 1.0 + 0.5 * z : cexpm1(z) / z;
  return std::exp(c * lo) * len * phi1;
}

bool closed_form_tails(const PotentialSpec& spec) {
  const auto k = spec.kind();
  return k == PotentialKind::free || k == PotentialKind::delta || k == PotentialKind::square_well;
}

// Region layout shared by the closed-form catalog: reflected plane waves on
// x <= left, transmitted wave on x >= right, quadrature in between.
struct CatalogPair {
  const PotentialSpec& spec;
  double k1, k2;
  ScatteringState s1, s2;
  double left, right;

  CatalogPair(const PotentialSpec& sp, double a, double b)
      : spec(sp), k1(a), k2(b), s1(sp, a), s2(sp, b) {
    left = right = 0.0;
    if (sp.kind() == PotentialKind::square_well) {
      left = -0.5 * sp.a();
      right = 0.5 * sp.a();
    }
  }

  Complex tails(double lo, double hi, double eps) const {
    const auto& c1 = s1.coefficients();
    const auto& c2 = s2.coefficients();
    const double q = k1 - k2, p = k1 + k2;
    const std::array<std::pair<Complex, double>, 4> lterms = {
        std::pair<Complex, double>{1.0, q}, {c1.R, -p}, {std::conj(c2.R), p},
        {std::conj(c2.R) * c1.R, -q}};
    Complex sum = 0.0;
    for (const auto& [coef, kap] : lterms) sum += coef * exp_integral(I * kap + 2.0 * eps, lo, left);
    sum += std::conj(c2.T) * c1.T * exp_integral(I * q - 2.0 * eps, right, hi);
    return sum;
  }

  Complex interior(double eps, const QuadratureConfig& cfg) const {
    if (right <= left) return 0.0;
    auto f = [&](double x) {
      return std::exp(-2.0 * eps * std::abs(x)) * std::conj(s2.value(x)) * s1.value(x);
    };
    return integrate_complex(f, left, 0.0, cfg, k1 + k2) + integrate_complex(f, 0.0, right, cfg, k1 + k2);
  }
};

QuadratureConfig tight(const QuadratureConfig& cfg) {
  QuadratureConfig t = cfg;
  t.abs_tol = std::min(cfg.abs_tol, 1e-13);
  t.rel_tol = std::min(cfg.rel_tol, 1e-12);
  t.max_subdivisions = std::max(cfg.max_subdivisions, 4000);
  return t;
}

}  // namespace

Complex direct_overlap(const PotentialSpec& spec, double k1, double k2, double x1, double x2,
                       const QuadratureConfig& cfg) {
  require_positive_momenta(k1, k2);
  if (!(x1 < x2)) throw ConfigError("direct_overlap: x1 must be < x2");
  const ScatteringState s1(spec, k1), s2(spec, k2);
  std::vector<double> cuts = {x1};
  for (double b : spec.breakpoints())
    if (b > x1 && b < x2) cuts.push_back(b);
  cuts.push_back(x2);
  auto f = [&](double x) { return std::conj(s2.value(x)) * s1.value(x); };
  Complex sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    sum += integrate_complex(f, cuts[i], cuts[i + 1], cfg, k1 + k2);
  return sum;
}

BoundaryCurrent boundary_J(const PotentialSpec& spec, double k1, double k2, double x1, double x2) {
  require_positive_momenta(k1, k2);
  if (!(x1 < x2)) throw ConfigError("boundary_J: x1 must be < x2");
  const ScatteringState s1(spec, k1), s2(spec, k2);
  auto w = [&](double x) {
    return std::conj(s2.derivative(x)) * s1.value(x) - std::conj(s2.value(x)) * s1.derivative(x);
  };
  return {w(x2) - w(x1), x1, x2};
}

double finite_interval_identity_residual(const PotentialSpec& spec, double k1, double k2, double x1,
                                         double x2, const QuadratureConfig& cfg) {
  const double dE = spec.energy(k2) - spec.energy(k1);
  if (std::abs(dE) < 1e-9) throw DegenerateEnergies("identity residual needs E(k1) != E(k2)");
  const Complex direct = direct_overlap(spec, k1, k2, x1, x2, cfg);
  const Complex J = boundary_J(spec, k1, k2, x1, x2).value;
  return std::abs(direct + J / (2.0 * spec.mass() * dE));
}

Complex nonorthogonality_term(const ScatteringCoefficients& c1, double k1,
                              const ScatteringCoefficients& c2, double k2) {
  const Complex s = std::conj(c2.T) * c1.T + std::conj(c2.R) * c1.R - 1.0;
  return s / (I * (k1 - k2)) + (c1.R - std::conj(c2.R)) / (I * (k1 + k2));
}

Complex nonorthogonality_term(const PotentialSpec& spec, double k1, double k2) {
  require_positive_momenta(k1, k2);
  const double s = k1 - k2;
  if (std::abs(s) >= 1e-4)
    return nonorthogonality_term(coefficients(spec, k1), k1, coefficients(spec, k2), k2);
  // eight symmetric nodes at +-1e-3 .. +-4e-3: rounding in the numerator is
  // divided by the node offset, so the nodes stay away from s = 0
  constexpr double h = 1e-3;
  const double c = 0.5 * (k1 + k2);
  if (!(c > 2.0 * h)) throw DegenerateMomenta("diagonal stencil needs k > 2e-3");
  std::array<double, 8> nodes;
  for (int j = 0; j < 4; ++j) {
    nodes[2 * j] = -(j + 1) * h;
    nodes[2 * j + 1] = (j + 1) * h;
  }
  Complex out = 0.0;
  for (int j = 0; j < 8; ++j) {
    const double a = c + 0.5 * nodes[j], b = c - 0.5 * nodes[j];
    double l = 1.0;
    for (int m = 0; m < 8; ++m)
      if (m != j) l *= (s - nodes[m]) / (nodes[j] - nodes[m]);
    out += l * nonorthogonality_term(coefficients(spec, a), a, coefficients(spec, b), b);
  }
  return out;
}

OverlapDecomposition overlap_decomposition(const PotentialSpec& spec, double k1, double k2) {
  require_positive_momenta(k1, k2);
  if (std::abs(k1 - k2) < 1e-9)
    throw DegenerateMomenta("overlap_decomposition: |k1 - k2| < 1e-9, use the diagonal limit");
  const auto c1 = coefficients(spec, k1), c2 = coefficients(spec, k2);
  OverlapDecomposition d;
  d.k1 = k1;
  d.k2 = k2;
  d.diag_weight = 2.0 * pi;
  d.mirror_weight = pi * (c1.R + std::conj(c2.R));
  d.delta_term = nonorthogonality_term(spec, k1, k2);
  return d;
}

std::vector<double> GridAxis::points() const {
  if (n < 2 || !(hi > lo)) throw ConfigError("grid axis needs n >= 2 and hi > lo");
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = lo + (hi - lo) * i / (n - 1);
  return p;
}

std::vector<OverlapDecomposition> delta_grid(const PotentialSpec& spec, const GridAxis& k1,
                                             const GridAxis& k2, int threads) {
  const auto p1 = k1.points(), p2 = k2.points();
  if (p1.front() <= 0.0 || p2.front() <= 0.0) throw ConfigError("delta_grid: ranges must be positive");
  std::vector<ScatteringCoefficients> c1(p1.size()), c2(p2.size());
  for (std::size_t i = 0; i < p1.size(); ++i) c1[i] = coefficients(spec, p1[i]);
  for (std::size_t j = 0; j < p2.size(); ++j) c2[j] = coefficients(spec, p2[j]);
  std::vector<OverlapDecomposition> out(p1.size() * p2.size());
  parallel_for(p1.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < p2.size(); ++j) {
      OverlapDecomposition& d = out[i * p2.size() + j];
      d.k1 = p1[i];
      d.k2 = p2[j];
      d.diag_weight = 2.0 * pi;
      d.mirror_weight = pi * (c1[i].R + std::conj(c2[j].R));
      d.delta_term = std::abs(p1[i] - p2[j]) < 1e-4
                         ? nonorthogonality_term(spec, p1[i], p2[j])
                         : nonorthogonality_term(c1[i], p1[i], c2[j], p2[j]);
    }
  });
  return out;
}

Complex windowed_overlap(const PotentialSpec& spec, double k1, double k2, const IntervalLimit& limit,
                         const QuadratureConfig& cfg) {
  require_positive_momenta(k1, k2);
  if (!closed_form_tails(spec)) {
    if (limit.kind == IntervalLimit::Kind::regulated)
      throw ConfigError("damped overlap is only available for free, delta and square_well");
    const double L = limit.value;
    return direct_overlap(spec, k1, k2, -L, L, cfg);
  }
  const CatalogPair pair(spec, k1, k2);
  if (limit.kind == IntervalLimit::Kind::regulated)
    return pair.tails(-inf, inf, limit.value) + pair.interior(limit.value, tight(cfg));
  const double L = limit.value;
  if (!(L > 0.0)) throw ConfigError("windowed_overlap: window must be positive");
  if (L < pair.right) return direct_overlap(spec, k1, k2, -L, L, cfg);
  return pair.tails(-L, L, 0.0) + pair.interior(0.0, tight(cfg));
}

RegularizedOverlap regularized_overlap(const PotentialSpec& spec, double k1, double k2, double eps) {
  require_positive_momenta(k1, k2);
  if (!(eps > 0.0)) throw ConfigError("regularized_overlap: eps must be positive");
  if (!closed_form_tails(spec))
    throw ConfigError("damped overlap is only available for free, delta and square_well");
  const CatalogPair pair(spec, k1, k2);
  const auto& c1 = pair.s1.coefficients();
  const auto& c2 = pair.s2.coefficients();
  RegularizedOverlap r;
  r.eps = eps;
  r.total = pair.tails(-inf, inf, eps) + pair.interior(eps, tight(QuadratureConfig{}));
  const Complex diag = 1.0 + std::conj(c2.R) * c1.R + std::conj(c2.T) * c1.T;
  const Complex mirror = c1.R + std::conj(c2.R);
  r.diag_weight = pi * diag;
  r.mirror_weight = pi * mirror;
  const double q = k1 - k2, p = k1 + k2, e2 = 2.0 * eps;
  // pi L(x) = 2 eps / (x^2 + 4 eps^2) tends to pi delta(x)
  r.pv_term = r.total - diag * e2 / (q * q + e2 * e2) - mirror * e2 / (p * p + e2 * e2);
  return r;
}

Complex damped_plane_wave_integral(double q, double eps, double x1, double x2) {
  if (!(x1 < x2)) throw ConfigError("damped_plane_wave_integral: x1 must be < x2");
  if (!(eps > 0.0) && (std::isinf(x1) || std::isinf(x2)))
    throw ConfigError("infinite range needs eps > 0");
  Complex sum = 0.0;
  if (x1 < 0.0) sum += exp_integral(I * q + 2.0 * eps, x1, std::min(x2, 0.0));
  if (x2 > 0.0) sum += exp_integral(I * q - 2.0 * eps, std::max(x1, 0.0), x2);
  return sum;
}

double regularized_boundary_residual(const PotentialSpec& spec, double k1, double k2, double eps,
                                     double X, const QuadratureConfig& cfg) {
  require_positive_momenta(k1, k2);
  const double dE = spec.energy(k2) - spec.energy(k1);
  if (std::abs(dE) < 1e-9) throw DegenerateEnergies("boundary residual needs E(k1) != E(k2)");
  const ScatteringState s1(spec, k1), s2(spec, k2);
  auto val = [&](const ScatteringState& s, double x) { return std::exp(-eps * std::abs(x)) * s.value(x); };
  auto der = [&](const ScatteringState& s, double x) {
    const double sg = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    return std::exp(-eps * std::abs(x)) * (s.derivative(x) - eps * sg * s.value(x));
  };
  std::vector<double> cuts = {-X, 0.0, X};
  for (double b : spec.breakpoints())
    if (b > -X && b < X) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto f = [&](double x) { return std::conj(val(s2, x)) * val(s1, x); };
  Complex direct = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    direct += integrate_complex(f, cuts[i], cuts[i + 1], cfg, k1 + k2);
  auto w = [&](double x) {
    return std::conj(der(s2, x)) * val(s1, x) - std::conj(val(s2, x)) * der(s1, x);
  };
  const Complex J = w(X) - w(-X);
  return std::abs(direct + J / (2.0 * spec.mass() * dE));
}

Complex cesaro_remainder(const PotentialSpec& spec, double k1, double k2, double lambda_center,
                         const QuadratureConfig& cfg) {
  require_positive_momenta(k1, k2);
  if (!closed_form_tails(spec)) throw ConfigError("cesaro_remainder needs a closed-form catalog potential");
  const CatalogPair pair(spec, k1, k2);
  if (0.5 * lambda_center < pair.right) throw ConfigError("cesaro window must clear the potential region");
  const Complex inner = pair.interior(0.0, tight(cfg));
  const auto& c1 = pair.s1.coefficients();
  const auto& c2 = pair.s2.coefficients();
  const Complex mirror = 0.5 * (c1.R + std::conj(c2.R));
  const double q = k1 - k2, p = k1 + k2;
  auto r = [&](double L) {
    return pair.tails(-L, L, 0.0) + inner - dirichlet_kernel(q, L) - mirror * dirichlet_kernel(p, L);
  };
  const double lo = 0.5 * lambda_center, hi = 1.5 * lambda_center;
  return integrate_complex(r, lo, hi, cfg, std::max(std::abs(q), p)) / (hi - lo);
}

double cutoff_kernel_norm2(double lambda, const QuadratureConfig& cfg) {
  if (!(lambda > 0.0)) throw ConfigError("cutoff must be positive");
  const double Q = 200.0;
  auto f = [&](double q) {
    const double d = dirichlet_kernel(q, lambda);
    return Complex(d * d, 0.0);
  };
  const double body = integrate_complex(f, 0.0, Q, cfg, 2.0 * lambda).real();
  const double tail = 2.0 / Q + std::sin(2.0 * lambda * Q) / (lambda * Q * Q);
  return 2.0 * (body + tail);
}

double regularized_kernel_norm2(double eps, const QuadratureConfig& cfg) {
  if (!(eps > 0.0)) throw ConfigError("regulator must be positive");
  const double Q = 200.0, e2 = 4.0 * eps * eps;
  auto f = [&](double q) { return Complex(1.0 / (q * q + e2), 0.0); };
  const double knee = std::min(20.0 * eps, 0.5 * Q);
  const double body = (integrate_complex(f, 0.0, knee, cfg) + integrate_complex(f, knee, Q, cfg)).real();
  const double tail = 1.0 / Q - e2 / (3.0 * Q * Q * Q);
  return 2.0 * (body + tail);
}

RegularizationReport regularization_compare(const PotentialSpec& spec, double k1, double k2,
                                            const std::vector<double>& lambdas,
                                            const std::vector<double>& epsilons,
                                            const QuadratureConfig& cfg) {
  if (lambdas.empty() || epsilons.empty()) throw ConfigError("regularization_compare: empty lists");
  RegularizationReport rep;
  for (double L : lambdas) {
    CutoffRow row{L, windowed_overlap(spec, k1, k2, IntervalLimit::cutoff(L), cfg),
                  cutoff_kernel_norm2(L, cfg), 0.0};
    row.kernel_constant = row.kernel_norm2 / L;
    rep.cutoff.push_back(row);
  }
  const double extent = std::max(20.0, spec.kind() == PotentialKind::square_well ? spec.a() + 10.0 : 0.0);
  for (double e : epsilons) {
    RegularizedRow row{e, regularized_overlap(spec, k1, k2, e), regularized_kernel_norm2(e, cfg), 0.0,
                       regularized_boundary_residual(spec, k1, k2, e, extent, tight(cfg))};
    row.kernel_constant = row.kernel_norm2 * e;
    rep.regularized.push_back(row);
  }
  for (std::size_t i = 1; i < rep.cutoff.size(); ++i)
    rep.cutoff_ratios.push_back(rep.cutoff[i].kernel_norm2 / rep.cutoff[i - 1].kernel_norm2);
  for (std::size_t i = 1; i < rep.regularized.size(); ++i)
    rep.regularized_ratios.push_back(rep.regularized[i].kernel_norm2 / rep.regularized[i - 1].kernel_norm2);

  // delta weights as masses of the two surrogate kernels times the tail coefficients
  const double L = lambdas.back(), Q = 200.0;
  const double cut_mass =
      integrate_complex([&](double q) { return Complex(dirichlet_kernel(q, L), 0.0); }, -Q, Q, cfg, L).real() +
      4.0 * std::cos(Q * L) / (Q * L);
  const double e = epsilons.back();
  const double knee = std::min(20.0 * e, 0.5 * Q);
  auto lor = [&](double q) { return Complex(4.0 * e / (q * q + 4.0 * e * e), 0.0); };
  const double reg_mass =
      2.0 * (integrate_complex(lor, 0.0, knee, cfg) + integrate_complex(lor, knee, Q, cfg)).real() + 8.0 * e / Q;
  const auto& reg = rep.regularized.back().overlap;
  rep.cutoff_diag_weight = reg.diag_weight / pi * (0.5 * cut_mass);
  rep.cutoff_mirror_weight = reg.mirror_weight / pi * (0.5 * cut_mass);
  const Complex reg_diag = reg.diag_weight / pi * (0.5 * reg_mass);
  const Complex reg_mirror = reg.mirror_weight / pi * (0.5 * reg_mass);
  rep.weights_agree = std::abs(rep.cutoff_diag_weight - reg_diag) < 1e-3 * std::abs(reg_diag) + 1e-12 &&
                      std::abs(rep.cutoff_mirror_weight - reg_mirror) < 1e-3 * std::abs(reg_mirror) + 1e-12;

  bool ok = true;
  for (std::size_t i = 0; i < rep.regularized.size(); ++i) {
    const double r = rep.regularized[i].boundary_residual;
    if (!(r > 0.0)) ok = false;
    if (i > 0 && !(rep.regularized[i].eps < rep.regularized[i - 1].eps ? r < rep.regularized[i - 1].boundary_residual
                                                                       : r > rep.regularized[i - 1].boundary_residual))
      ok = false;
  }
  rep.residual_nonzero_decreasing = ok;
  return rep;
}

// ---------------------------------------------------------------- Airy

namespace {

QuadratureConfig airy_cfg() {
  QuadratureConfig c;
  c.abs_tol = 1e-14;
  c.rel_tol = 1e-12;
  c.max_subdivisions = 20000;
  return c;
}

double airy_omega(double most_negative) { return std::sqrt(std::max(0.0, -most_negative)) + 1.0; }

template <typename Weight>
double smoothed_airy(double t, double width, Weight&& weight) {
  const double span = 12.0 * width;
  auto f = [&](double y) { return Complex(airy_ai(t + y) * weight(y), 0.0); };
  return integrate_complex(f, -span, span, airy_cfg(), airy_omega(t - span)).real();
}

template <typename Weight>
double closure_action(double t_cutoff, double x, double width, Weight&& weight) {
  if (!(t_cutoff > 0.0) || !(width > 0.0)) throw ConfigError("airy closure needs positive cutoff and width");
  auto outer = [&](double t) { return Complex(airy_ai(t + x) * smoothed_airy(t, width, weight), 0.0); };
  QuadratureConfig c = airy_cfg();
  c.abs_tol = 1e-13;
  return integrate_complex(outer, -t_cutoff, t_cutoff, c, airy_omega(-t_cutoff - std::abs(x) - 12.0 * width))
      .real();
}

}  // namespace

double airy_kernel(double x, double y, double t_cutoff, const QuadratureConfig& cfg) {
  if (!(t_cutoff > 0.0)) throw ConfigError("airy_kernel: cutoff must be positive");
  auto f = [&](double t) { return Complex(airy_ai(t + x) * airy_ai(t + y), 0.0); };
  return integrate_complex(f, -t_cutoff, t_cutoff, cfg, airy_omega(-t_cutoff - std::max(std::abs(x), std::abs(y))))
      .real();
}

double airy_closure_check(double t_cutoff, double x, double width) {
  auto g = [&](double y) { return std::exp(-y * y / (2.0 * width * width)); };
  return std::abs(closure_action(t_cutoff, x, width, g) - g(x));
}

double airy_closure_derivative_check(double t_cutoff, double x, double width) {
  const double w2 = width * width;
  auto dg = [&](double y) { return -y / w2 * std::exp(-y * y / (2.0 * w2)); };
  // d/dt Ai(t + y) = d/dy Ai(t + y); integrating by parts moves it onto g
  auto minus_dg = [&](double y) { return -dg(y); };
  return std::abs(closure_action(t_cutoff, x, width, minus_dg) + dg(x));
}

Complex twisted_boundary_overlap(const TwistedMomenta& m, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("twisted_boundary_overlap: L must be positive");
  const long dn = m.n2 - m.n1;
  const double phase = 0.5 * (m.theta2 - m.theta1);
  const double dk = (pi * static_cast<double>(dn) + phase) / lambda;
  if (dn == 0 && phase == 0.0) return 2.0 * lambda;
  const double u = dk * lambda;
  if (std::abs(u) < 1e-8) return 2.0 * lambda * (1.0 - u * u / 6.0);
  // sin(pi dn + phase) reduced exactly so integer shifts give an exact zero
  const double s = (dn % 2 == 0 ? 1.0 : -1.0) * std::sin(phase);
  return 2.0 * s / dk;
}

}  // namespace csov
