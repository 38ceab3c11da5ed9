#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/airy.hpp>

#include "csov/numerics.hpp"

using namespace csov;

namespace {
const Complex I(0.0, 1.0);
}

TEST_CASE("integrate_complex: closed-form integrals") {
  CHECK(std::abs(integrate_complex([](double) { return Complex(1.0); }, 0.0, 1.0) - 1.0) < 1e-14);
  CHECK(std::abs(integrate_complex([](double x) { return std::exp(I * 0.0 * x); }, -5.0, 5.0) - 10.0) < 1e-13);
  const Complex v = integrate_complex([](double x) { return std::exp(I * x); }, -10.0, 10.0, {}, 1.0);
  CHECK(std::abs(v - 2.0 * std::sin(10.0)) < 1e-10);
  CHECK(v.real() == doctest::Approx(-1.08804).epsilon(1e-5));
  // e^{-x^2} over a wide window
  const Complex g = integrate_complex([](double x) { return Complex(std::exp(-x * x)); }, -12.0, 12.0);
  CHECK(std::abs(g - std::sqrt(pi)) < 1e-12);
  // x^2 e^{i 30 x} on [0, 2]: antiderivative e^{iwx}(x^2/(iw) + 2x/w^2 - 2/(i w^3))
  const double w = 30.0;
  auto F = [&](double x) { return std::exp(I * w * x) * (x * x / (I * w) + 2.0 * x / (w * w) - 2.0 / (I * w * w * w)); };
  const Complex osc = integrate_complex([&](double x) { return x * x * std::exp(I * w * x); }, 0.0, 2.0, {}, w);
  CHECK(std::abs(osc - (F(2.0) - F(0.0))) < 1e-10);
}

TEST_CASE("integrate_complex: linearity on random smooth integrands") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = u(rng), q = u(rng), r = u(rng);
    const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
    auto f = [&](double x) { return std::exp(I * p * x) / (1.0 + x * x); };
    auto g = [&](double x) { return Complex(std::cos(q * x) * std::exp(-r * r * x * x)); };
    const double lo = -3.0 + u(rng), hi = 3.0 + u(rng);
    const Complex lhs = integrate_complex([&](double x) { return a * f(x) + b * g(x); }, lo, hi);
    const Complex rhs = a * integrate_complex(f, lo, hi) + b * integrate_complex(g, lo, hi);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("integrate_complex: errors") {
  CHECK_THROWS_AS(integrate_complex([](double) { return Complex(1.0); }, 1.0, 0.0), ConfigError);
  QuadratureConfig tight{1e-15, 1e-15, 1};
  CHECK_THROWS_AS(integrate_complex([](double x) { return Complex(std::sqrt(std::abs(x - 0.3))); }, 0.0, 1.0, tight),
                  NonConvergence);
  CHECK_THROWS_AS(integrate_complex([](double x) { return Complex(1.0 / (x - 0.5)); }, 0.0, 1.0), NonConvergence);
  CHECK_THROWS_AS((QuadratureConfig{0.0, 1e-8, 10}.validate()), ConfigError);
  CHECK_THROWS_AS((QuadratureConfig{1e-8, 1e-8, 0}.validate()), ConfigError);
  CHECK_THROWS_AS(IntervalLimit::cutoff(0.0), ConfigError);
  CHECK_THROWS_AS(IntervalLimit::regulated(-1.0), ConfigError);
}

TEST_CASE("dirichlet_kernel: values, parity and continuity") {
  CHECK(dirichlet_kernel(0.0, 7.0) == doctest::Approx(14.0).epsilon(1e-15));
  CHECK(std::abs(dirichlet_kernel(pi / 10.0, 10.0)) < 1e-14);
  for (double dk : {1e-9, 1e-6, 3e-4, 0.2, 1.7}) {
    CHECK(dirichlet_kernel(dk, 5.0) == dirichlet_kernel(-dk, 5.0));
    CHECK(std::abs(dirichlet_kernel(dk, 5.0) - 2.0 * std::sin(dk * 5.0) / dk) < 1e-12);
  }
}

TEST_CASE("dirichlet_kernel: squared norm is 4 pi L") {
  // int 4 sin^2(qL)/q^2 dq = 4 pi L; summed over unit panels out to |q| = 4000
  // with the tail 2/q^2 added analytically
  const double L = 5.0;
  auto f = [&](double q) { return Complex(dirichlet_kernel(q, L) * dirichlet_kernel(q, L)); };
  const double Q = 4000.0;
  double sum = 0.0;
  for (double a = 0.0; a < Q; a += 1.0) sum += 2.0 * integrate_complex(f, a, a + 1.0, {1e-13, 1e-11, 200}, L).real();
  sum += 2.0 * 2.0 / Q;
  CHECK(sum == doctest::Approx(4.0 * pi * L).epsilon(1e-5));
  CHECK(std::abs(sum - pi * L) > 1.0);
}

TEST_CASE("dirichlet_kernel: smoothed delta improves with the cutoff") {
  const double k0 = 0.4, w = 0.15;
  auto g = [&](double k) { return std::exp(-(k - k0) * (k - k0) / (2.0 * w * w)); };
  double prev = 1e300;
  for (double L : {10.0, 20.0, 40.0}) {
    const Complex v = integrate_complex([&](double k) { return Complex(dirichlet_kernel(k - k0, L) * g(k)); },
                                        k0 - 12.0, k0 + 12.0, {}, L);
    const double err = std::abs(v.real() / (2.0 * pi) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("principal_value") {
  auto one = [](double) { return Complex(1.0); };
  CHECK(std::abs(principal_value(one, 0.0, -1.0, 1.0)) < 1e-10);
  CHECK(std::abs(principal_value(one, 0.0, -1.0, 2.0) - std::log(2.0)) < 1e-10);
  CHECK(std::abs(principal_value([](double x) { return Complex(x); }, 0.0, -1.0, 1.0) - 2.0) < 1e-10);
  // f odd about the pole: f(x) = cos(x - 1) gives an odd integrand over a symmetric interval
  CHECK(std::abs(principal_value([](double x) { return Complex(std::cos(x - 1.0)); }, 1.0, -1.0, 3.0)) < 1e-10);
  // pv int_0^3 e^x / (x - 1) dx = e (Ei(2) - Ei(-1)); Ei(2) = 4.954234356001890, Ei(-1) = -0.219383934395520
  const double expect = std::exp(1.0) * (4.954234356001890 + 0.219383934395520);
  CHECK(std::abs(principal_value([](double x) { return Complex(std::exp(x)); }, 1.0, 0.0, 3.0) - expect) < 1e-9);
  CHECK_THROWS_AS(principal_value(one, 3.0, -1.0, 1.0), PoleOutsideInterval);
}

TEST_CASE("airy_ai against an independent library") {
  CHECK(airy_ai(0.0) == doctest::Approx(0.3550280539).epsilon(1e-10));
  CHECK(std::abs(airy_ai(0.0) - std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0)) < 1e-15);
  CHECK(airy_ai(10.0) < 1e-9);
  for (double x = -30.0; x <= 20.0; x += 0.173) {
    const double ref = boost::math::airy_ai(x);
    CHECK(std::abs(airy_ai(x) - ref) < 1e-12 * std::max(1.0, std::abs(ref)) + 1e-14);
  }
  // relative accuracy deep in the decaying side
  for (double x : {3.0, 6.5, 12.0, 25.0})
    CHECK(airy_ai(x) == doctest::Approx(boost::math::airy_ai(x)).epsilon(1e-11));
}

TEST_CASE("airy_ai satisfies Ai'' = x Ai") {
  // fourth-order central stencil; the three-point one has truncation error
  // h^2 |Ai''''| / 12 of about 3e-6 at x = -10 for the exact function
  const double h = 1e-3;
  double worst = 0.0;
  for (double x = -10.0; x <= 5.0; x += 0.05) {
    const double d2 = (-airy_ai(x + 2 * h) + 16.0 * airy_ai(x + h) - 30.0 * airy_ai(x) + 16.0 * airy_ai(x - h) -
                       airy_ai(x - 2 * h)) /
                      (12.0 * h * h);
    worst = std::max(worst, std::abs(d2 - x * airy_ai(x)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("log_gamma_complex") {
  CHECK(std::abs(log_gamma_complex(1.0)) < 1e-14);
  CHECK(std::abs(log_gamma_complex(0.5) - std::log(std::sqrt(pi))) < 1e-14);
  CHECK(std::norm(gamma_complex(Complex(1.0, 1.0))) == doctest::Approx(pi / std::sinh(pi)).epsilon(1e-13));
  for (double x : {0.1, 0.7, 2.5, 9.3, 40.0, -0.5, -3.7})
    CHECK(log_gamma_complex(x).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  CHECK_THROWS_AS(log_gamma_complex(-2.0), PoleOfGamma);
  CHECK_THROWS_AS(log_gamma_complex(0.0), PoleOfGamma);
}

TEST_CASE("log_gamma_complex: recurrence and branch") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.5, 20.0), th(-pi, pi);
  for (int i = 0; i < 200; ++i) {
    const Complex z = std::polar(r(rng), th(rng));
    if (std::abs(z.imag()) < 1e-3 && z.real() < 0.0) continue;
    const Complex lhs = std::exp(log_gamma_complex(z + 1.0));
    const Complex rhs = z * std::exp(log_gamma_complex(z));
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
    const double im = log_gamma_complex(z).imag();
    CHECK(im > -pi);
    CHECK(im <= pi);
  }
}

TEST_CASE("gauss_legendre and trapezoid weights") {
  double x[20], w[20];
  gauss_legendre(20, x, w);
  double sum = 0.0, m6 = 0.0;
  for (int i = 0; i < 20; ++i) {
    sum += w[i];
    m6 += w[i] * std::pow(x[i], 38);
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m6 == doctest::Approx(2.0 / 39.0).epsilon(1e-12));
  double t = 0.0;
  for (int i = 0; i < 11; ++i) t += trapezoid_weight(i, 11, 0.1);
  CHECK(t == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trapezoid_weight(0, 11, 0.1) == doctest::Approx(0.05));
}
