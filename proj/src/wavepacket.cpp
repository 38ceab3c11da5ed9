#include "csov/wavepacket.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "csov/parallel.hpp"

namespace csov {

namespace {

const Complex I(0.0, 1.0);

double real_checked(Complex z, double scale, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvariantFailure(std::string(what) + ": non-finite value");
  if (std::abs(z.imag()) > 1e-10 * std::max(1.0, scale))
    throw InvariantFailure(std::string(what) + ": imaginary residue above 1e-10");
  return z.real();
}

// f(k1, k2) near the diagonal from eight symmetric nodes in k1 - k2
template <typename Fn>
Complex diagonal_stencil(Fn&& f, double k1, double k2) {
  constexpr double h = 1e-3;
  const double s = k1 - k2, c = 0.5 * (k1 + k2);
  std::array<double, 8> nodes;
  for (int j = 0; j < 4; ++j) {
    nodes[2 * j] = -(j + 1) * h;
    nodes[2 * j + 1] = (j + 1) * h;
  }
  Complex out = 0.0;
  for (int j = 0; j < 8; ++j) {
    double l = 1.0;
    for (int m = 0; m < 8; ++m)
      if (m != j) l *= (s - nodes[m]) / (nodes[j] - nodes[m]);
    out += l * f(c + 0.5 * nodes[j], c - 0.5 * nodes[j]);
  }
  return out;
}

std::vector<double> trapezoid_weights(const KGrid& g) {
  std::vector<double> w(g.n_points);
  for (int i = 0; i < g.n_points; ++i) w[i] = trapezoid_weight(i, g.n_points, g.spacing());
  return w;
}

}  // namespace

std::vector<double> KGrid::points() const {
  if (n_points < 2 || !(k_max > k_min)) throw ConfigError("k grid needs n_points >= 2 and k_max > k_min");
  std::vector<double> p(n_points);
  for (int i = 0; i < n_points; ++i) p[i] = k_min + (k_max - k_min) * i / (n_points - 1);
  return p;
}

PacketSpec PacketSpec::gaussian(double P0, double X0, double sigma, int n_points, double half_width) {
  if (!(sigma > 0.0)) throw ConfigError("packet sigma must be > 0");
  if (!(half_width > 0.0)) throw ConfigError("packet half width must be > 0");
  PacketSpec p;
  p.P0 = P0;
  p.X0 = X0;
  p.sigma = sigma;
  const double hw = half_width * std::sqrt(sigma);
  p.k_grid.k_min = std::max(P0 - hw, 1e-6);
  p.k_grid.k_max = P0 + hw;
  p.k_grid.n_points = n_points;
  return p;
}

Complex PacketSpec::amplitude(double k) const {
  const double norm = std::pow(sigma * pi, -0.25);
  const double d = k - P0;
  return norm * std::exp(Complex(-d * d / (2.0 * sigma), -k * X0));
}

void PacketSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("packet sigma must be > 0");
  if (!std::isfinite(P0) || !std::isfinite(X0)) throw ConfigError("packet P0 and X0 must be finite");
  if (k_grid.n_points < 2 || !(k_grid.k_max > k_grid.k_min))
    throw ConfigError("k grid needs n_points >= 2 and k_max > k_min");
  if (!(k_grid.k_min > 0.0)) throw ConfigError("k grid must lie in k > 0");
  const double edge = std::max(std::abs(amplitude(k_grid.k_min)), std::abs(amplitude(k_grid.k_max)));
  if (edge > 1e-8) throw GridTooCoarse("packet amplitude at the grid edge exceeds 1e-8");
}

std::string method_name(NormMethod m) {
  switch (m) {
    case NormMethod::direct: return "direct";
    case NormMethod::net_current_formula: return "net_current_formula";
    case NormMethod::stationary_phase: return "stationary_phase";
  }
  return "unknown";
}

// ------------------------------------------------------------ 1D packets

PacketEvolution::PacketEvolution(const PotentialSpec& spec, const PacketSpec& packet)
    : spec_(spec), packet_(packet) {
  if (!spec.has_coefficients()) throw ConfigError("packet evolution needs a scattering potential");
  packet.validate();
  k_ = packet.k_grid.points();
  w_ = trapezoid_weights(packet.k_grid);
  const std::size_t n = k_.size();
  a_.resize(n);
  coef_.resize(n);
  base_norm_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a_[i] = packet.amplitude(k_[i]);
    coef_[i] = coefficients(spec, k_[i]);
    base_norm_ += w_[i] * std::norm(a_[i]);
  }
  delta_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      delta_[i * n + j] = std::abs(k_[i] - k_[j]) < 1e-4
                              ? nonorthogonality_term(spec, k_[i], k_[j])
                              : nonorthogonality_term(coef_[i], k_[i], coef_[j], k_[j]);
}

std::vector<Complex> PacketEvolution::weighted_phases(double t) const {
  std::vector<Complex> b(k_.size());
  for (std::size_t i = 0; i < k_.size(); ++i)
    b[i] = w_[i] * a_[i] * std::exp(Complex(0.0, -spec_.energy(k_[i]) * t));
  return b;
}

double PacketEvolution::norm(double t) const {
  const auto b = weighted_phases(t);
  const std::size_t n = b.size();
  Complex sum = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Complex term = std::conj(b[j]) * delta_[i * n + j];
      row += term;
      scale += std::abs(term) * std::abs(b[i]);
    }
    sum += b[i] * row;
  }
  sum /= 2.0 * pi;
  return base_norm_ + real_checked(sum, scale / (2.0 * pi), "norm");
}

CorrelationAmplitudes PacketEvolution::correlations(double t) const {
  const auto b = weighted_phases(t);
  CorrelationAmplitudes c;
  c.t = t;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double k = k_[i];
    c.I_t += b[i];
    c.kI_t += k * b[i];
    c.T_t += b[i] * coef_[i].T;
    c.kT_t += k * b[i] * coef_[i].T;
    c.R_t += b[i] * coef_[i].R;
    c.kR_t += k * b[i] * coef_[i].R;
  }
  return c;
}

double PacketEvolution::rate(double t) const {
  const auto c = correlations(t);
  auto herm = [](Complex x, Complex y) { return std::conj(x) * y + std::conj(y) * x; };
  // time derivative of the Delta double sum, reduced to single sums
  const Complex bracket = herm(c.T_t, c.kT_t) + herm(c.R_t, c.kR_t) - herm(c.I_t, c.kI_t) +
                          std::conj(c.I_t) * c.kR_t + std::conj(c.kR_t) * c.I_t -
                          std::conj(c.kI_t) * c.R_t - std::conj(c.R_t) * c.kI_t;
  const double scale = std::abs(c.I_t) * (std::abs(c.kI_t) + std::abs(c.kT_t) + std::abs(c.kR_t)) +
                       std::abs(c.kI_t) * (std::abs(c.T_t) + std::abs(c.R_t));
  const Complex r = -bracket / (2.0 * spec_.mass() * 2.0 * pi);
  return real_checked(r, scale, "norm rate");
}

Complex packet_centroid_momentum(const PacketSpec& packet, double mass, double t) {
  return {packet.P0, -packet.sigma * (packet.X0 + packet.velocity(mass) * t)};
}

Complex packet_centroid_amplitude(const PacketSpec& packet, double mass, double t) {
  const double norm = std::pow(packet.sigma * pi, -0.25);
  const double x = packet.X0 + packet.velocity(mass) * t;
  const double E0 = packet.P0 * packet.P0 / (2.0 * mass);
  return norm * std::sqrt(2.0 * packet.sigma * pi) *
         std::exp(Complex(-packet.sigma * x * x / 2.0, -packet.P0 * packet.X0 - E0 * t));
}

double PacketEvolution::stationary_phase_rate(double t) const {
  const double m = spec_.mass();
  const Complex k0 = packet_centroid_momentum(packet_, m, t);
  const double w = std::norm(packet_centroid_amplitude(packet_, m, t));
  if (w == 0.0) return 0.0;
  const auto c = coefficients_at(spec_, k0);
  const double flux = std::norm(c.T) + std::norm(c.R) - 1.0;
  const Complex mirror = (k0 - std::conj(k0)) * (c.R - std::conj(c.R));
  const Complex r = -w * (2.0 * k0.real() * flux + mirror) / (2.0 * m * 2.0 * pi);
  return real_checked(r, w * std::abs(k0), "stationary-phase rate");
}

double norm_direct(const PotentialSpec& spec, const PacketSpec& packet, double t) {
  return PacketEvolution(spec, packet).norm(t);
}

double norm_rate(const PotentialSpec& spec, const PacketSpec& packet, double t) {
  return PacketEvolution(spec, packet).rate(t);
}

CorrelationAmplitudes correlation_amplitudes(const PotentialSpec& spec, const PacketSpec& packet,
                                             double t) {
  return PacketEvolution(spec, packet).correlations(t);
}

double stationary_phase_norm_rate(const PotentialSpec& spec, const PacketSpec& packet, double t) {
  packet.validate();
  return PacketEvolution(spec, packet).stationary_phase_rate(t);
}

NormTrace norm_trace(const PotentialSpec& spec, const PacketSpec& packet,
                     const std::vector<double>& times, NormMethod method, int threads) {
  const PacketEvolution evo(spec, packet);
  NormTrace tr;
  tr.method = method;
  tr.times = times;
  tr.N.assign(times.size(), 0.0);
  tr.dNdt.assign(times.size(), 0.0);
  parallel_for(times.size(), threads, [&](std::size_t i) {
    const double t = times[i];
    tr.N[i] = evo.norm(t);
    switch (method) {
      case NormMethod::direct: {
        const double h = 1e-3 / std::max(1.0, spec.energy(packet.P0));
        tr.dNdt[i] = (evo.norm(t + h) - evo.norm(t - h)) / (2.0 * h);
        break;
      }
      case NormMethod::net_current_formula: tr.dNdt[i] = evo.rate(t); break;
      case NormMethod::stationary_phase: tr.dNdt[i] = evo.stationary_phase_rate(t); break;
    }
  });
  return tr;
}

// ------------------------------------------------------------ s-wave

S0Model S0Model::unit() { return {}; }

S0Model S0Model::constant_phase(double delta0) {
  S0Model s;
  s.kind_ = Kind::constant_phase;
  s.param_ = delta0;
  return s;
}

S0Model S0Model::hard_sphere(double radius) {
  if (!(radius >= 0.0)) throw ConfigError("hard-sphere radius must be >= 0");
  S0Model s;
  s.kind_ = Kind::hard_sphere;
  s.param_ = radius;
  return s;
}

S0Model S0Model::tabulated(std::vector<double> k, std::vector<Complex> values) {
  if (k.size() < 2 || k.size() != values.size()) throw ConfigError("tabulated s0 needs >= 2 matching points");
  for (std::size_t i = 1; i < k.size(); ++i)
    if (!(k[i] > k[i - 1])) throw ConfigError("tabulated s0 momenta must increase");
  S0Model s;
  s.kind_ = Kind::tabulated;
  s.k_tab_ = std::move(k);
  s.s_tab_ = std::move(values);
  return s;
}

Complex S0Model::operator()(double k) const {
  switch (kind_) {
    case Kind::unit: return 1.0;
    case Kind::constant_phase: return std::exp(Complex(0.0, 2.0 * param_));
    case Kind::hard_sphere: return std::exp(Complex(0.0, -2.0 * k * param_));
    case Kind::tabulated: {
      if (k < k_tab_.front() || k > k_tab_.back()) throw ConfigError("s0 table does not cover k");
      const auto it = std::upper_bound(k_tab_.begin(), k_tab_.end(), k);
      const std::size_t j = std::min<std::size_t>(it - k_tab_.begin(), k_tab_.size() - 1);
      const double u = (k - k_tab_[j - 1]) / (k_tab_[j] - k_tab_[j - 1]);
      return (1.0 - u) * s_tab_[j - 1] + u * s_tab_[j];
    }
  }
  return 1.0;
}

std::string s0_kind_name(S0Model::Kind k) {
  switch (k) {
    case S0Model::Kind::unit: return "unit";
    case S0Model::Kind::constant_phase: return "constant_phase";
    case S0Model::Kind::hard_sphere: return "hard_sphere";
    case S0Model::Kind::tabulated: return "tabulated";
  }
  return "unknown";
}

namespace {

struct SWaveGrid {
  std::vector<double> k;
  std::vector<Complex> b;  // weight * a(k) * e^{-i E t}
  std::vector<Complex> s;
};

SWaveGrid swave_grid(const SWaveSpec& sw, const PacketSpec& packet, double t) {
  if (!(sw.mass > 0.0)) throw ConfigError("s-wave mass must be > 0");
  PacketSpec p = packet;
  p.X0 = -sw.R0;
  p.validate();
  SWaveGrid g;
  g.k = p.k_grid.points();
  const auto w = trapezoid_weights(p.k_grid);
  g.b.resize(g.k.size());
  g.s.resize(g.k.size());
  for (std::size_t i = 0; i < g.k.size(); ++i) {
    const double k = g.k[i];
    g.b[i] = w[i] * p.amplitude(k) * std::exp(Complex(0.0, -k * k / (2.0 * sw.mass) * t));
    g.s[i] = sw.s0(k);
  }
  return g;
}

Complex swave_kernel(Complex s1, double k1, Complex s2, double k2) {
  const double d = 4.0 * k1 * k2;
  return I * ((std::conj(s2) * s1 - 1.0) / (d * (k2 - k1)) + (s1 - std::conj(s2)) / (d * (k1 + k2)));
}

}  // namespace

double swave_norm(const SWaveSpec& sw, const PacketSpec& packet, double t) {
  const auto g = swave_grid(sw, packet, t);
  const std::size_t n = g.k.size();
  const double h = packet.k_grid.spacing();
  double base = 0.0;
  for (std::size_t i = 0; i < n; ++i) base += std::norm(g.b[i]) / trapezoid_weight(int(i), int(n), h);
  Complex sum = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex K;
      if (std::abs(g.k[i] - g.k[j]) < 1e-4)
        K = diagonal_stencil([&](double a, double b) { return swave_kernel(sw.s0(a), a, sw.s0(b), b); },
                             g.k[i], g.k[j]);
      else
        K = swave_kernel(g.s[i], g.k[i], g.s[j], g.k[j]);
      const Complex term = std::conj(g.b[j]) * g.b[i] * K;
      sum += term;
      scale += std::abs(term);
    }
  return base + real_checked(sum, scale, "s-wave norm");
}

double swave_norm_rate(const SWaveSpec& sw, const PacketSpec& packet, double t) {
  const auto g = swave_grid(sw, packet, t);
  const std::size_t n = g.k.size();
  Complex sum = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double k1 = g.k[i], k2 = g.k[j];
      const Complex S = std::conj(g.s[j]) * g.s[i];
      const Complex br = ((S - 1.0) * (k1 + k2) + (g.s[i] - std::conj(g.s[j])) * (k2 - k1)) / (k1 * k2);
      const Complex term = std::conj(g.b[j]) * g.b[i] * br;
      sum += term;
      scale += std::abs(term);
    }
  const double c = 0.25 / (2.0 * sw.mass);
  return -c * real_checked(sum, scale, "s-wave norm rate");
}

}  // namespace csov
