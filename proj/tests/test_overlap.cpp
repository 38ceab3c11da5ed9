#include <doctest.h>

#include <cmath>
#include <random>

#include "csov/overlap.hpp"

using namespace csov;

namespace {

const Complex I(0.0, 1.0);

// Independent route to Delta: the overlap of the asymptotic forms
// (e^{ikx} + R e^{-ikx} for x < 0, T e^{ikx} for x > 0) over [-L, L],
// averaged over L ~ Normal(L0, W^2). The average of int_{-L}^{L} g equals
// int g(x) P(L > |x|) dx, and it kills every e^{+-iqL} term, leaving -Delta.
Complex delta_oracle(const PotentialSpec& spec, double k1, double k2, double L0 = 400.0, double W = 40.0) {
  const auto c1 = coefficients(spec, k1), c2 = coefficients(spec, k2);
  auto asym = [](const ScatteringCoefficients& c, double k, double x) {
    return x < 0.0 ? std::exp(I * k * x) + c.R * std::exp(-I * k * x) : c.T * std::exp(I * k * x);
  };
  auto f = [&](double x) {
    const double tail = 0.5 * std::erfc((std::abs(x) - L0) / (std::sqrt(2.0) * W));
    return std::conj(asym(c2, k2, x)) * asym(c1, k1, x) * tail;
  };
  const double X = L0 + 9.0 * W;
  const QuadratureConfig q{1e-11, 1e-10, 50000};
  const double w = std::max(k1 + k2, std::abs(k1 - k2));
  return -(integrate_complex(f, -X, 0.0, q, w) + integrate_complex(f, 0.0, X, q, w));
}

const PotentialSpec well = PotentialSpec::square_well(2.0, 10.0);

}  // namespace

TEST_CASE("direct overlap examples") {
  const auto fr = PotentialSpec::free_particle();
  CHECK(std::abs(direct_overlap(fr, 1.0, 1.0, -5.0, 5.0) - 10.0) < 1e-12);
  const Complex v = direct_overlap(fr, 2.0, 1.0, -20.0, 20.0);
  CHECK(std::abs(v - dirichlet_kernel(1.0, 20.0)) < 1e-10);
  CHECK(v.real() == doctest::Approx(1.8259).epsilon(1e-4));
  CHECK_THROWS_AS(direct_overlap(fr, 2.0, 1.0, 1.0, -1.0), ConfigError);
}

TEST_CASE("boundary current") {
  const auto fr = PotentialSpec::free_particle();
  const double L = 7.3, k1 = 2.0, k2 = 1.0;
  const Complex expect = -I * (k1 + k2) * (std::exp(I * (k1 - k2) * L) - std::exp(-I * (k1 - k2) * L));
  CHECK(std::abs(boundary_J(fr, k1, k2, -L, L).value - expect) < 1e-13);
  for (const auto& spec : {well, PotentialSpec::delta(2.0), PotentialSpec::poschl_teller(-2.0, 0.9)}) {
    // a state's current is position independent
    CHECK(std::abs(boundary_J(spec, 1.4, 1.4, -20.0, 13.0).value) < 1e-12);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> kk(0.2, 3.0), xx(-30.0, 30.0);
    for (int i = 0; i < 20; ++i) {
      const double a = kk(rng), b = kk(rng);
      double x1 = xx(rng), x2 = xx(rng);
      if (x1 > x2) std::swap(x1, x2);
      const Complex j12 = boundary_J(spec, a, b, x1, x2).value;
      const Complex j21 = boundary_J(spec, b, a, x1, x2).value;
      CHECK(std::abs(j21 + std::conj(j12)) < 1e-12 * std::max(1.0, std::abs(j12)));
    }
  }
}

TEST_CASE("finite-interval identity") {
  CHECK(finite_interval_identity_residual(PotentialSpec::free_particle(), 2.0, 1.0, -10.0, 10.0) < 1e-8);
  CHECK(finite_interval_identity_residual(well, 1.3, 0.7, -30.0, 30.0) < 1e-7);
  CHECK(finite_interval_identity_residual(PotentialSpec::delta(3.0), 2.0, 1.0, -20.0, 20.0) < 1e-7);
  CHECK_THROWS_AS(finite_interval_identity_residual(well, 1.0, 1.0, -5.0, 5.0), DegenerateEnergies);
}

TEST_CASE("finite-interval identity: random draws over the catalog") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> kk(0.2, 3.0), ext(0.5, 20.0), par(-3.0, 3.0);
  for (int i = 0; i < 40; ++i) {
    PotentialSpec spec = PotentialSpec::free_particle();
    double core = 0.0;
    switch (i % 4) {
      case 1: spec = PotentialSpec::delta(par(rng)); break;
      case 2: spec = PotentialSpec::square_well(par(rng), 4.0); core = 2.0; break;
      case 3: spec = PotentialSpec::poschl_teller(par(rng), 1.0); core = 8.0; break;
      default: break;
    }
    double k1 = kk(rng), k2 = kk(rng);
    while (std::abs(spec.energy(k1) - spec.energy(k2)) < 0.05) k2 = kk(rng);
    CHECK(finite_interval_identity_residual(spec, k1, k2, -core - ext(rng), core + ext(rng)) < 1e-7);
  }
}

TEST_CASE("Delta vanishes for free and delta potentials") {
  for (double k1 : {0.3, 1.1, 2.7})
    for (double k2 : {0.5, 1.1, 4.2}) {
      CHECK(nonorthogonality_term(PotentialSpec::free_particle(), k1, k2) == Complex(0.0));
      CHECK(std::abs(nonorthogonality_term(PotentialSpec::delta(3.0), k1, k2)) < 1e-12);
      CHECK(std::abs(nonorthogonality_term(PotentialSpec::delta(-0.6, 2.0), k1, k2)) < 1e-12);
    }
  const auto d = overlap_decomposition(PotentialSpec::free_particle(), 1.2, 0.8);
  CHECK(std::abs(d.diag_weight - 2.0 * pi) < 1e-15);
  CHECK(d.mirror_weight == Complex(0.0));
  CHECK(d.delta_term == Complex(0.0));
}

TEST_CASE("Delta against the window-averaged asymptotic overlap") {
  const std::vector<PotentialSpec> specs = {well, PotentialSpec::square_well(-1.5, 3.0),
                                            PotentialSpec::poschl_teller(1.5, 1.0)};
  for (const auto& spec : specs)
    for (auto [k1, k2] : {std::pair{1.3, 0.7}, std::pair{2.1, 2.6}, std::pair{0.6, 3.0}}) {
      const Complex d = nonorthogonality_term(spec, k1, k2);
      const Complex o = delta_oracle(spec, k1, k2);
      INFO(kind_name(spec.kind()), " ", k1, " ", k2);
      CHECK(std::abs(d - o) < 1e-8 * std::max(1.0, std::abs(d)));
    }
}

TEST_CASE("Delta is Hermitian") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> kk(0.1, 4.0);
  for (const auto& spec : {well, PotentialSpec::poschl_teller(-3.0, 1.2)})
    for (int i = 0; i < 50; ++i) {
      const double k1 = kk(rng), k2 = kk(rng);
      const Complex a = nonorthogonality_term(spec, k1, k2), b = nonorthogonality_term(spec, k2, k1);
      CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("Delta is anti-Hermitian as sometimes stated" * doctest::should_fail()) {
  const Complex a = nonorthogonality_term(well, 1.3, 0.7), b = nonorthogonality_term(well, 0.7, 1.3);
  CHECK(std::abs(a + std::conj(b)) < 1e-12);
}

TEST_CASE("Delta on and near the diagonal") {
  // references from a 50-digit evaluation of the k2 -> k1 limit
  const std::vector<std::pair<double, double>> refs = {
      {1.3, -9.3235996219457564}, {2.05, 8.5875868600209518}, {2.0005, 3.2415186775068116}};
  for (auto [k, ref] : refs) {
    const Complex d = nonorthogonality_term(well, k, k);
    CHECK(std::abs(d.real() - ref) < 1e-9 * std::abs(ref));
    CHECK(std::abs(d.imag()) < 1e-9);
  }
  // continuity across the switch to the stencil
  for (double k : {0.8, 1.7, 2.9}) {
    const Complex in = nonorthogonality_term(well, k, k + 0.99e-4);
    const Complex out = nonorthogonality_term(well, k, k + 1.01e-4);
    CHECK(std::abs(in - out) < 1e-4 * std::max(1.0, std::abs(in)));
  }
  CHECK_THROWS_AS(nonorthogonality_term(well, 1e-3, 1e-3), DegenerateMomenta);
  CHECK_THROWS_AS(overlap_decomposition(well, 1.0, 1.0), DegenerateMomenta);
}

TEST_CASE("square-well special momenta") {
  const double a = 10.0;
  for (int n1 = 1; n1 <= 4; ++n1)
    for (int n2 = 1; n2 <= 4; ++n2) {
      if (n1 == n2) continue;
      const double k1 = std::sqrt(std::pow(n1 * pi / a, 2) + 4.0), k2 = std::sqrt(std::pow(n2 * pi / a, 2) + 4.0);
      const double sgn = (n2 - n1) % 2 ? -1.0 : 1.0;
      const Complex stated = I * (sgn * std::exp(I * (k1 - k2) * a) - 1.0) / (k1 - k2);
      CHECK(std::abs(nonorthogonality_term(well, k1, k2) - std::conj(stated)) < 1e-10);
    }
}

TEST_CASE("square-well special momenta in the stated form" * doctest::should_fail()) {
  const double a = 10.0;
  const double k1 = std::sqrt(std::pow(pi / a, 2) + 4.0), k2 = std::sqrt(std::pow(2 * pi / a, 2) + 4.0);
  const Complex stated = I * (-std::exp(I * (k1 - k2) * a) - 1.0) / (k1 - k2);
  CHECK(std::abs(nonorthogonality_term(well, k1, k2) - stated) < 1e-10);
}

TEST_CASE("delta grid layout") {
  const auto g = delta_grid(well, {0.5, 1.5, 3}, {1.0, 2.0, 2}, 2);
  REQUIRE(g.size() == 6);
  CHECK(g[1].k1 == 0.5);
  CHECK(g[1].k2 == 2.0);
  CHECK(g[2].k1 == 1.0);
  CHECK(g[3].k1 == 1.0);
  CHECK(g[3].k2 == 2.0);
  CHECK(g[3].delta_term == nonorthogonality_term(well, 1.0, 2.0));
  // diagonal entries use the stencil
  CHECK(std::abs(g[2].delta_term - nonorthogonality_term(well, 1.0, 1.0)) < 1e-15);
  CHECK_THROWS_AS(delta_grid(well, {-1.0, 1.0, 3}, {1.0, 2.0, 2}), ConfigError);
  CHECK_THROWS_AS(delta_grid(well, {1.0, 2.0, 1}, {1.0, 2.0, 2}), ConfigError);
  const auto g1 = delta_grid(well, {0.3, 2.0, 9}, {0.4, 2.2, 7}, 1);
  const auto g4 = delta_grid(well, {0.3, 2.0, 9}, {0.4, 2.2, 7}, 4);
  for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g1[i].delta_term == g4[i].delta_term);
}

TEST_CASE("closed-form windowed overlap against quadrature") {
  for (const auto& spec : {well, PotentialSpec::delta(1.5), PotentialSpec::poschl_teller(-1.0, 1.0)})
    for (auto [k1, k2] : {std::pair{1.3, 0.7}, std::pair{0.9, 2.4}}) {
      const Complex closed = windowed_overlap(spec, k1, k2, IntervalLimit::cutoff(35.0));
      const Complex quad = direct_overlap(spec, k1, k2, -35.0, 35.0);
      CHECK(std::abs(closed - quad) < 1e-8);
    }
}

TEST_CASE("damped overlap against quadrature") {
  const double eps = 0.05, X = 450.0;
  for (const auto& spec : {well, PotentialSpec::delta(1.5), PotentialSpec::free_particle()}) {
    const double k1 = 1.3, k2 = 0.7;
    const ScatteringState s1(spec, k1), s2(spec, k2);
    auto f = [&](double x) { return std::conj(s2.value(x)) * s1.value(x) * std::exp(-2.0 * eps * std::abs(x)); };
    const Complex quad = integrate_complex(f, -X, X, {1e-12, 1e-10, 20000}, k1 + k2);
    CHECK(std::abs(regularized_overlap(spec, k1, k2, eps).total - quad) < 1e-8);
    CHECK(std::abs(windowed_overlap(spec, k1, k2, IntervalLimit::regulated(eps)) - quad) < 1e-8);
  }
}

TEST_CASE("damped plane wave integral") {
  // half line: pi delta surrogate plus i q / (q^2 + 4 eps^2)
  const double q = 0.3, eps = 0.02;
  const Complex v = damped_plane_wave_integral(q, eps, 0.0, INFINITY);
  CHECK(std::abs(v - Complex(2.0 * eps, q) / (q * q + 4.0 * eps * eps)) < 1e-13);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> xx(-15.0, 15.0);
  for (int i = 0; i < 10; ++i) {
    double x1 = xx(rng), x2 = xx(rng);
    if (x1 > x2) std::swap(x1, x2);
    auto f = [&](double x) { return std::exp(Complex(-2.0 * eps * std::abs(x), q * x)); };
    CHECK(std::abs(damped_plane_wave_integral(q, eps, x1, x2) - integrate_complex(f, x1, x2, {1e-13, 1e-12, 2000})) <
          1e-10);
  }
  CHECK_THROWS_AS(damped_plane_wave_integral(q, 0.0, 0.0, INFINITY), ConfigError);
}

TEST_CASE("regularized delta potential: remainder vanishes with eps") {
  const auto dp = PotentialSpec::delta(3.0);
  double prev = 1e300;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const double pv = std::abs(regularized_overlap(dp, 1.3, 0.7, eps).pv_term);
    CHECK(pv < prev);
    prev = pv;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("regularized weights match the cutoff weights") {
  const auto r = regularization_compare(well, 1.3, 0.7, {25.0, 50.0}, {1e-2, 5e-3});
  CHECK(r.weights_agree);
  CHECK(r.residual_nonzero_decreasing);
  const auto d = overlap_decomposition(well, 1.3, 0.7);
  CHECK(std::abs(r.cutoff_mirror_weight - d.mirror_weight) < 1e-6 * std::abs(d.mirror_weight));
  // pi (1 + T2^* T1 + R2^* R1) reaches 2 pi on the diagonal by unitarity
  const double k = 1.3;
  for (double dk : {1e-2, 1e-4, 1e-6}) {
    const auto reg = regularized_overlap(well, k + dk, k, 1e-3);
    CHECK(std::abs(reg.diag_weight - 2.0 * pi) < 50.0 * dk);
  }
}

TEST_CASE("kernel norms scale as stated") {
  const double a = cutoff_kernel_norm2(25.0), b = cutoff_kernel_norm2(50.0);
  CHECK(b / a == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(a / 25.0 == doctest::Approx(4.0 * pi).epsilon(1e-6));
  const double c = regularized_kernel_norm2(1e-2), e = regularized_kernel_norm2(5e-3);
  CHECK(e / c == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(c * 1e-2 == doctest::Approx(pi / 2.0).epsilon(1e-6));
}

TEST_CASE("cutoff kernel norm equals L pi" * doctest::should_fail()) {
  CHECK(cutoff_kernel_norm2(25.0) / 25.0 == doctest::Approx(pi).epsilon(1e-2));
}

TEST_CASE("regularized boundary residual is nonzero and shrinks with eps") {
  double prev = 1e300;
  for (double eps : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    const double r = regularized_boundary_residual(well, 1.3, 0.7, eps, 200.0);
    CHECK(r > 0.0);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("twisted boundary overlaps") {
  const double L = 12.0;
  CHECK(std::abs(twisted_boundary_overlap({3, 0.4, 5, 0.4}, L)) < 1e-13);
  CHECK(std::abs(twisted_boundary_overlap({4, 0.7, 4, 0.7}, L) - 2.0 * L) < 1e-13);
  CHECK(std::abs(twisted_boundary_overlap({2, 0.0, 2, pi}, L) - 4.0 * L / pi) < 1e-12);
  // closed form against quadrature
  const TwistedMomenta m{1, 0.3, 3, 1.9};
  const double k1 = pi * m.n1 / L + m.theta1 / (2 * L), k2 = pi * m.n2 / L + m.theta2 / (2 * L);
  const Complex quad = integrate_complex([&](double x) { return std::exp(-I * (k2 - k1) * x); }, -L, L);
  CHECK(std::abs(twisted_boundary_overlap(m, L) - quad) < 1e-12);
}

TEST_CASE("Airy closure") {
  double prev = 1e300;
  for (double T : {20.0, 40.0, 80.0}) {
    const double e = airy_closure_check(T, 0.0, 1.0);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-2);
  CHECK(std::abs(airy_kernel(0.3, -1.2, 20.0) - airy_kernel(-1.2, 0.3, 20.0)) < 1e-12);
  CHECK(airy_closure_derivative_check(80.0, 0.0, 1.0) < 1e-2);
}

TEST_CASE("Cesaro remainder tends to zero, not to Delta") {
  const double k1 = 1.3, k2 = 0.7;
  const double r50 = std::abs(cesaro_remainder(well, k1, k2, 50.0));
  const double r200 = std::abs(cesaro_remainder(well, k1, k2, 200.0));
  CHECK(r200 < r50);
  const double d = std::abs(nonorthogonality_term(well, k1, k2));
  CHECK(std::abs(std::abs(cesaro_remainder(well, k1, k2, 200.0) + nonorthogonality_term(well, k1, k2)) - d) <
        0.2 * d);
  CHECK_THROWS_AS(cesaro_remainder(well, k1, k2, 8.0), ConfigError);
}

TEST_CASE("Cesaro remainder converges to minus Delta" * doctest::should_fail()) {
  const double k1 = 1.3, k2 = 0.7;
  const Complex target = -nonorthogonality_term(well, k1, k2);
  const double e50 = std::abs(cesaro_remainder(well, k1, k2, 50.0) - target);
  const double e200 = std::abs(cesaro_remainder(well, k1, k2, 200.0) - target);
  CHECK(e200 <= 0.5 * e50);
}
