#include "csov/potentials.hpp"

#include <cmath>
#include <memory>

namespace csov {

namespace {

const Complex I(0.0, 1.0);

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

Complex csinc(Complex z) {
  if (std::abs(z) < 1e-4) {
    const Complex z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

Complex principal_sqrt(Complex z) {
  // +0.0 imaginary part keeps negative reals on the upper branch
  if (z.imag() == 0.0) z = Complex(z.real(), 0.0);
  return std::sqrt(z);
}

// product of Gamma(num)/Gamma(den); a pole in den makes the ratio vanish
Complex gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den) {
  Complex lg = 0.0;
  for (const auto& z : den) {
    try {
      lg -= log_gamma_complex(z);
    } catch (const PoleOfGamma&) {
      return 0.0;
    }
  }
  for (const auto& z : num) lg += log_gamma_complex(z);
  return std::exp(lg);
}

}  // namespace

std::string kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::free: return "free";
    case PotentialKind::delta: return "delta";
    case PotentialKind::square_well: return "square_well";
    case PotentialKind::poschl_teller: return "poschl_teller";
    case PotentialKind::linear: return "linear";
  }
  return "unknown";
}

PotentialSpec PotentialSpec::free_particle(double mass) {
  require(mass > 0.0, "mass must be positive");
  PotentialSpec s;
  s.kind_ = PotentialKind::free;
  s.mass_ = mass;
  return s;
}

PotentialSpec PotentialSpec::delta(double g, double mass) {
  require(mass > 0.0, "mass must be positive");
  require(std::isfinite(g), "g must be finite");
  PotentialSpec s;
  s.kind_ = PotentialKind::delta;
  s.mass_ = mass;
  s.g_ = g;
  return s;
}

PotentialSpec PotentialSpec::square_well(double V0, double a, double mass) {
  require(mass > 0.0, "mass must be positive");
  require(a > 0.0, "square_well width a must be positive");
  require(std::isfinite(V0), "V0 must be finite");
  PotentialSpec s;
  s.kind_ = PotentialKind::square_well;
  s.mass_ = mass;
  s.V0_ = V0;
  s.a_ = a;
  return s;
}

PotentialSpec PotentialSpec::poschl_teller(double V0, double mu, double mass) {
  require(mass > 0.0, "mass must be positive");
  require(mu > 0.0, "poschl_teller mu must be positive");
  require(std::isfinite(V0), "V0 must be finite");
  PotentialSpec s;
  s.kind_ = PotentialKind::poschl_teller;
  s.mass_ = mass;
  s.V0_ = V0;
  s.mu_ = mu;
  s.nu_ = -0.5 + principal_sqrt(Complex(0.25 - 2.0 * mass * V0 / (mu * mu), 0.0));
  return s;
}

PotentialSpec PotentialSpec::poschl_teller_nu(double nu, double mu, double mass) {
  require(mass > 0.0, "mass must be positive");
  require(mu > 0.0, "poschl_teller mu must be positive");
  PotentialSpec s;
  s.kind_ = PotentialKind::poschl_teller;
  s.mass_ = mass;
  s.mu_ = mu;
  s.nu_ = nu;
  s.V0_ = -mu * mu * nu * (nu + 1.0) / (2.0 * mass);
  return s;
}

PotentialSpec PotentialSpec::linear(double mass, double g_accel) {
  require(mass > 0.0, "mass must be positive");
  require(g_accel > 0.0, "linear potential needs g_accel > 0");
  PotentialSpec s;
  s.kind_ = PotentialKind::linear;
  s.mass_ = mass;
  s.g_accel_ = g_accel;
  return s;
}

double PotentialSpec::value(double x) const {
  switch (kind_) {
    case PotentialKind::square_well: return (x > -0.5 * a_ && x <= 0.5 * a_) ? V0_ : 0.0;
    case PotentialKind::poschl_teller: {
      const double c = std::cosh(mu_ * x);
      return V0_ / (c * c);
    }
    case PotentialKind::linear: return mass_ * g_accel_ * x;
    default: return 0.0;
  }
}

std::vector<double> PotentialSpec::breakpoints() const {
  if (kind_ == PotentialKind::delta) return {0.0};
  if (kind_ == PotentialKind::square_well) return {-0.5 * a_, 0.5 * a_};
  return {};
}

Wavenumbers interior_wavenumber(const PotentialSpec& spec, double k) {
  Wavenumbers w;
  w.k = k;
  const double V0 = spec.kind() == PotentialKind::square_well ? spec.V0() : 0.0;
  w.k_hat = principal_sqrt(Complex(k * k - 2.0 * spec.mass() * V0, 0.0));
  return w;
}

ScatteringCoefficients coefficients_at(const PotentialSpec& spec, Complex k) {
  ScatteringCoefficients c;
  const double m = spec.mass();
  switch (spec.kind()) {
    case PotentialKind::free:
      c.R = 0.0;
      c.T = 1.0;
      return c;
    case PotentialKind::delta: {
      const Complex den = k + I * m * spec.g();
      if (den == 0.0) throw DividesByZeroD("delta potential: k + i m g = 0");
      c.R = -I * m * spec.g() / den;
      c.T = k / den;
      return c;
    }
    case PotentialKind::square_well: {
      const double a = spec.a(), V0 = spec.V0();
      const Complex kh2 = k * k - 2.0 * m * V0;
      const Complex kh = principal_sqrt(kh2);
      const Complex s = a * csinc(kh * a);  // sin(kh a)/kh, entire in kh^2
      const Complex cs = std::cos(kh * a);
      // reduced denominator D / kh
      const Complex Dt = (k * k + kh2) * s + 2.0 * I * k * cs;
      if (Dt == 0.0) throw DividesByZeroD("square well: D(k) = 0");
      const Complex ph = std::exp(-I * k * a);
      c.R = ph * 2.0 * m * V0 * s / Dt;
      c.T = ph * 2.0 * I * k / Dt;
      c.D = kh * Dt;
      if (kh != 0.0) {
        c.A_plus = std::exp(-I * (k + kh) * a / 2.0) * (kh + k) * I * k / (kh * Dt);
        c.A_minus = std::exp(-I * (k - kh) * a / 2.0) * (kh - k) * I * k / (kh * Dt);
      }
      return c;
    }
    case PotentialKind::poschl_teller: {
      const Complex kap = k / spec.mu();
      const Complex nu = spec.nu();
      c.T = gamma_ratio({1.0 + nu - I * kap, -nu - I * kap}, {-I * kap, 1.0 - I * kap});
      // Gamma(i kap) Gamma(1 - i kap) = pi / sin(i pi kap)
      const Complex spk = pi * kap;
      Complex ratio;
      if (spk.real() > 30.0)
        ratio = 2.0 * std::sin(pi * nu) * std::exp(-spk);
      else
        ratio = std::sin(pi * nu) / std::sinh(spk);
      c.R = I * ratio * c.T;
      return c;
    }
    case PotentialKind::linear:
      throw ConfigError("reflection/transmission coefficients are not defined for the linear potential");
  }
  return c;
}

ScatteringCoefficients coefficients(const PotentialSpec& spec, double k) {
  if (!(k > 0.0)) throw ConfigError("coefficients: k must be positive");
  return coefficients_at(spec, Complex(k, 0.0));
}

// ------------------------------------------------------------ 2F1

Complex hyp2f1(Complex a, Complex b, Complex c, double z, double omz) {
  if (z <= 0.5) {
    Complex sum = 1.0, term = 1.0;
    for (int n = 0; n < 5000; ++n) {
      term *= (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * z;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  const Complex cab = c - a - b;
  const Complex A1 = gamma_ratio({c, cab}, {c - a, c - b});
  const Complex A2 = gamma_ratio({c, -cab}, {a, b});
  Complex out = 0.0;
  if (A1 != 0.0) out += A1 * hyp2f1(a, b, 1.0 - cab, omz, z);
  if (A2 != 0.0) out += A2 * std::exp(cab * std::log(omz)) * hyp2f1(c - a, c - b, 1.0 + cab, omz, z);
  return out;
}

struct ScatteringState::HypergeometricState {
  Complex a, b, c, kap;
  double mu;
};

ScatteringState::ScatteringState(const PotentialSpec& spec, double k) : spec_(spec), k_(k) {
  coef_ = csov::coefficients(spec, k);
  if (spec.kind() == PotentialKind::square_well) k_hat_ = interior_wavenumber(spec, k).k_hat;
  if (spec.kind() == PotentialKind::poschl_teller) {
    auto h = std::make_shared<HypergeometricState>();
    h->mu = spec.mu();
    h->kap = k / spec.mu();
    h->a = -I * h->kap - spec.nu();
    h->b = -I * h->kap + spec.nu() + 1.0;
    h->c = 1.0 - I * h->kap;
    hyp_ = h;
  }
}

namespace {

// (2 cosh y)^{i kap}
Complex cosh_power(double y, Complex kap) {
  const double l = std::abs(y) + std::log1p(std::exp(-2.0 * std::abs(y)));
  return std::exp(I * kap * l);
}

}  // namespace

Complex ScatteringState::value(double x) const {
  const Complex ikx = I * k_ * x;
  switch (spec_.kind()) {
    case PotentialKind::free: return std::exp(ikx);
    case PotentialKind::delta:
      if (x <= 0.0) return std::exp(ikx) + coef_.R * std::exp(-ikx);
      return coef_.T * std::exp(ikx);
    case PotentialKind::square_well: {
      const double h = 0.5 * spec_.a();
      if (x <= -h) return std::exp(ikx) + coef_.R * std::exp(-ikx);
      if (x > h) return coef_.T * std::exp(ikx);
      const double u = x - h;
      return coef_.T * std::exp(I * k_ * h) * (std::cos(k_hat_ * u) + I * k_ * u * csinc(k_hat_ * u));
    }
    case PotentialKind::poschl_teller: {
      const auto& s = *hyp_;
      const double e = std::exp(-2.0 * s.mu * std::abs(x));
      const double small = e / (1.0 + e), big = 1.0 / (1.0 + e);
      const double z = x >= 0.0 ? small : big, omz = x >= 0.0 ? big : small;
      return coef_.T * cosh_power(s.mu * x, s.kap) * hyp2f1(s.a, s.b, s.c, z, omz);
    }
    case PotentialKind::linear: break;
  }
  throw ConfigError("no scattering state for the linear potential");
}

Complex ScatteringState::derivative(double x) const {
  const Complex ik = I * k_;
  const Complex ikx = ik * x;
  switch (spec_.kind()) {
    case PotentialKind::free: return ik * std::exp(ikx);
    case PotentialKind::delta:
      if (x <= 0.0) return ik * (std::exp(ikx) - coef_.R * std::exp(-ikx));
      return ik * coef_.T * std::exp(ikx);
    case PotentialKind::square_well: {
      const double h = 0.5 * spec_.a();
      if (x <= -h) return ik * (std::exp(ikx) - coef_.R * std::exp(-ikx));
      if (x > h) return ik * coef_.T * std::exp(ikx);
      const double u = x - h;
      return coef_.T * std::exp(I * k_ * h) *
             (-k_hat_ * k_hat_ * u * csinc(k_hat_ * u) + ik * std::cos(k_hat_ * u));
    }
    case PotentialKind::poschl_teller: {
      const auto& s = *hyp_;
      const double e = std::exp(-2.0 * s.mu * std::abs(x));
      const double small = e / (1.0 + e), big = 1.0 / (1.0 + e);
      const double z = x >= 0.0 ? small : big, omz = x >= 0.0 ? big : small;
      const Complex F = hyp2f1(s.a, s.b, s.c, z, omz);
      const Complex dF = s.a * s.b / s.c * hyp2f1(s.a + 1.0, s.b + 1.0, s.c + 1.0, z, omz);
      const double dzdx = -2.0 * s.mu * z * omz;
      return coef_.T * cosh_power(s.mu * x, s.kap) *
             (I * s.kap * s.mu * std::tanh(s.mu * x) * F + dF * dzdx);
    }
    case PotentialKind::linear: break;
  }
  throw ConfigError("no scattering state for the linear potential");
}

Complex wavefunction(const PotentialSpec& spec, double k, double x) {
  return ScatteringState(spec, k).value(x);
}

double airy_state(const PotentialSpec& spec, double E, double z) {
  if (spec.kind() != PotentialKind::linear) throw ConfigError("airy_state needs a linear potential");
  const double m = spec.mass(), g = spec.g_accel();
  const double c = std::cbrt(1.0 / (2.0 * m * m * g));
  return airy_ai((z - E / (m * g)) / c);
}

}  // namespace csov
