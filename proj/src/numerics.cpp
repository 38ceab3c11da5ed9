#include "csov/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace csov {

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1)
    throw ConfigError("quadrature: abs_tol, rel_tol must be > 0 and max_subdivisions >= 1");
}

IntervalLimit IntervalLimit::cutoff(double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("cutoff must be positive");
  return {Kind::cutoff, lambda};
}

IntervalLimit IntervalLimit::regulated(double eps) {
  if (!(eps > 0.0)) throw ConfigError("regulator must be positive");
  return {Kind::regulated, eps};
}

namespace {

constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  Complex value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const ComplexFn& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<Complex, 15> fv;
  fv[7] = f(c);
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * xgk[j]);
    fv[14 - j] = f(c + h * xgk[j]);
  }
  Complex k = wgk[7] * fv[7];
  Complex g = wg[3] * fv[7];
  for (int j = 0; j < 7; ++j) {
    k += wgk[j] * (fv[j] + fv[14 - j]);
    if (j % 2 == 1) g += wg[j / 2] * (fv[j] + fv[14 - j]);
  }
  const Complex mean = 0.5 * k;
  double resabs = wgk[7] * std::abs(fv[7]);
  double resasc = wgk[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j) {
    resabs += wgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    resasc += wgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  }
  double err = std::abs((k - g) * h);
  resabs *= std::abs(h);
  resasc *= std::abs(h);
  // QUADPACK error scaling
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
  for (const auto& v : fv)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NonConvergence("integrand is not finite on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
  return {a, b, k * h, err};
}

}  // namespace

Complex integrate_complex(const ComplexFn& f, double x1, double x2, const QuadratureConfig& cfg,
                          double omega) {
  cfg.validate();
  if (!(x1 < x2)) {
    if (x1 == x2) return {0.0, 0.0};
    throw ConfigError("integrate_complex: x1 must be < x2");
  }
  std::size_t initial = 1;
  if (omega > 0.0) {
    const double periods = (x2 - x1) * omega / pi;
    initial = static_cast<std::size_t>(std::min(std::ceil(periods), 1e6));
    initial = std::max<std::size_t>(initial, 1);
  }
  std::priority_queue<Panel> heap;
  Complex total = 0.0;
  double err = 0.0;
  const double step = (x2 - x1) / static_cast<double>(initial);
  for (std::size_t i = 0; i < initial; ++i) {
    const double a = x1 + step * static_cast<double>(i);
    const double b = (i + 1 == initial) ? x2 : x1 + step * static_cast<double>(i + 1);
    Panel p = gk15(f, a, b);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int splits = 0;
  while (err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (splits >= cfg.max_subdivisions)
      throw NonConvergence("integrate_complex: subdivision budget exhausted (error estimate " +
                           std::to_string(err) + ")");
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b))
      throw NonConvergence("integrate_complex: panel cannot be bisected further");
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
    // refresh the running sums now and then to keep cancellation from drifting
    if (splits % 256 == 0) {
      auto copy = heap;
      total = 0.0;
      err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        copy.pop();
      }
    }
  }
  Complex sum = 0.0;
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
  for (const auto& p : panels) sum += p.value;
  return sum;
}

double dirichlet_kernel(double dk, double lambda) {
  const double u = dk * lambda;
  if (std::abs(u) < 1e-8) return 2.0 * lambda * (1.0 - u * u / 6.0);
  return 2.0 * std::sin(u) / dk;
}

Complex principal_value(const ComplexFn& f, double pole, double x1, double x2,
                        const QuadratureConfig& cfg) {
  if (!(x1 < pole && pole < x2))
    throw PoleOutsideInterval("principal_value: pole " + std::to_string(pole) + " not inside (" +
                              std::to_string(x1) + ", " + std::to_string(x2) + ")");
  const double h = std::min(pole - x1, x2 - pole);
  // fold the symmetric part so the 1/u singularity cancels pointwise
  Complex sym = integrate_complex(
      [&](double u) { return (f(pole + u) - f(pole - u)) / u; }, 0.0, h, cfg);
  Complex rest = 0.0;
  if (x2 - pole > h) {
    rest = integrate_complex([&](double x) { return f(x) / (x - pole); }, pole + h, x2, cfg);
  } else if (pole - x1 > h) {
    rest = integrate_complex([&](double x) { return f(x) / (x - pole); }, x1, pole - h, cfg);
  }
  return sym + rest;
}

// ---------------------------------------------------------------- Airy

namespace {

constexpr long double airy_c1 = 0.355028053887817239260063186004183176L;
constexpr long double airy_c2 = 0.258819403792806798405183560189203963L;

double airy_maclaurin(double xd) {
  const long double x = xd, x3 = x * x * x;
  long double f = 1.0L, g = x, tf = 1.0L, tg = x;
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    f += tf;
    g += tg;
    if (std::fabs(tf) < 1e-22L * std::fabs(f) && std::fabs(tg) < 1e-22L * (std::fabs(g) + 1e-300L))
      break;
  }
  return static_cast<double>(airy_c1 * f - airy_c2 * g);
}

struct GLRule {
  std::array<double, 48> x{}, w{};
  GLRule() { gauss_legendre(48, x.data(), w.data()); }
};

// Ai(x) = e^{-zeta}/pi * x^{-1/4} * int_0^inf e^{-u^2} cos(u^3 / (3 x^{3/4})) du
double airy_decaying(double x) {
  static const GLRule rule;
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const double s = std::pow(x, 0.75);
  const double upper = 6.5;
  double sum = 0.0;
  for (int i = 0; i < 48; ++i) {
    const double u = 0.5 * upper * (rule.x[i] + 1.0);
    sum += rule.w[i] * std::exp(-u * u) * std::cos(u * u * u / (3.0 * s));
  }
  sum *= 0.5 * upper;
  return std::exp(-zeta) / pi * sum / std::pow(x, 0.25);
}

double airy_oscillating(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  double u = 1.0, p = 1.0, q = 0.0, last = 1.0, zk = 1.0;
  for (int k = 1; k < 80; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    zk *= zeta;
    const double term = u / zk;
    if (term > last || term < 1e-18) break;
    last = term;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) p += sign * term;
    else q += sign * term;
  }
  const double phase = zeta - pi / 4.0;
  return (std::cos(phase) * p + std::sin(phase) * q) / (std::sqrt(pi) * std::pow(z, 0.25));
}

}  // namespace

double airy_ai(double x) {
  if (std::isnan(x)) return x;
  if (x > 2.0) {
    if (x > 110.0) return 0.0;
    return airy_decaying(x);
  }
  if (x >= -7.5) return airy_maclaurin(x);
  return airy_oscillating(x);
}

// ---------------------------------------------------------------- Gamma

namespace {

constexpr std::array<double, 9> lanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

Complex log_sin_pi(Complex z) {
  const Complex w = pi * z;
  const Complex I(0.0, 1.0);
  if (w.imag() > 1.0) return -I * w + std::log(Complex(0.0, 0.5)) + std::log(1.0 - std::exp(2.0 * I * w));
  if (w.imag() < -1.0) return I * w + std::log(Complex(0.0, -0.5)) + std::log(1.0 - std::exp(-2.0 * I * w));
  return std::log(std::sin(w));
}

Complex log_gamma_raw(Complex z) {
  if (z.real() < 0.5) return std::log(pi) - log_sin_pi(z) - log_gamma_raw(1.0 - z);
  z -= 1.0;
  Complex x = lanczos[0];
  for (int i = 1; i < 9; ++i) x += lanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

Complex log_gamma_complex(Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw PoleOfGamma("log_gamma_complex: pole at z = " + std::to_string(z.real()));
  Complex r = log_gamma_raw(z);
  double im = std::remainder(r.imag(), 2.0 * pi);
  if (im <= -pi) im += 2.0 * pi;
  return {r.real(), im};
}

Complex gamma_complex(Complex z) { return std::exp(log_gamma_complex(z)); }

void gauss_legendre(int n, double* nodes, double* weights) {
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double trapezoid_weight(int i, int n, double h) { return (i == 0 || i == n - 1) ? 0.5 * h : h; }

}  // namespace csov
