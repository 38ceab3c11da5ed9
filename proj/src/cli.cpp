#include "csov/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "csov/parallel.hpp"
#include "csov/reports.hpp"

namespace csov {

namespace {

// values given on the command line; an option only overrides the config
// file when its count() is nonzero
struct PotentialFlags {
  std::string kind;
  double g = 0, V0 = 0, a = 0, mu = 0, nu = 0, mass = 1, g_accel = 0;
  std::vector<std::pair<const char*, CLI::Option*>> opts;
  CLI::Option* kind_opt = nullptr;

  void attach(CLI::App* app) {
    kind_opt = app->add_option("--potential", kind, "free | delta | square_well | poschl_teller | linear");
    opts = {{"g", app->add_option("--g", g, "delta strength")},
            {"V0", app->add_option("--V0", V0, "well or barrier height")},
            {"a", app->add_option("--a", a, "square-well width")},
            {"mu", app->add_option("--mu", mu, "inverse width of 1/cosh^2")},
            {"nu", app->add_option("--nu", nu, "1/cosh^2 strength exponent")},
            {"mass", app->add_option("--mass", mass, "particle mass")},
            {"g_accel", app->add_option("--g-accel", g_accel, "linear-potential acceleration")}};
  }

  double value(const char* key) const {
    const std::string k = key;
    if (k == "g") return g;
    if (k == "V0") return V0;
    if (k == "a") return a;
    if (k == "mu") return mu;
    if (k == "nu") return nu;
    if (k == "mass") return mass;
    return g_accel;
  }

  bool any() const {
    if (kind_opt->count()) return true;
    for (const auto& [k, o] : opts)
      if (o->count()) return true;
    return false;
  }

  // config potential (if any) with flags layered on top
  std::optional<PotentialSpec> resolve(const std::optional<PotentialSpec>& from_config) const {
    if (!any()) return from_config;
    json j = from_config ? potential_to_json(*from_config) : json::object();
    if (kind_opt->count() && (!j.contains("kind") || j["kind"] != kind)) j = json{{"kind", kind}};
    if (!j.contains("kind")) throw ConfigError("potential parameters given without --potential");
    for (const auto& [k, o] : opts)
      if (o->count()) {
        j[k] = value(k);
        if (std::string(k) == "nu") j.erase("V0");
        if (std::string(k) == "V0" && j["kind"] == "poschl_teller") j.erase("nu");
      }
    return potential_from_json(j);
  }
};

struct Global {
  std::string config_path;
  std::string out_path;
  std::string format;
  double tol = 0.0;
  int threads = 1;
  CLI::Option *out_opt, *format_opt, *tol_opt, *threads_opt;
};

struct Context {
  RunConfig rc;
  std::ostream& out;
  std::ostream& err;

  json section(const char* name) const {
    return rc.sections.contains(name) ? rc.sections.at(name) : json::object();
  }

  void emit(const std::string& content, const std::string& path) const {
    if (path.empty())
      out << content;
    else
      write_atomic(path, content);
  }
  void emit(const std::string& content) const { emit(content, rc.output_path); }
};

double num(const json& j, const char* key, double fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string(where) + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string str(const json& j, const char* key, const std::string& fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ConfigError(std::string(where) + ": '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

// a range given either as "lo:hi:n" or [lo, hi, n]
std::vector<double> range_value(const json& j, const char* key, const std::string& fallback, const char* where) {
  if (!j.contains(key)) return parse_range(fallback);
  const auto& v = j.at(key);
  if (v.is_string()) return parse_range(v.get<std::string>());
  if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() && v[2].is_number_integer())
    return linspace(v[0].get<double>(), v[1].get<double>(), v[2].get<int>());
  throw ConfigError(std::string(where) + ": '" + key + "' must be \"lo:hi:n\" or [lo, hi, n]");
}

std::vector<double> list_value(const json& j, const char* key, std::vector<double> fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(std::string(where) + ": '" + key + "' must be a list");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string(where) + ": '" + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError("expected a comma-separated list of numbers, got '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::string sidecar_path(const std::string& path) {
  const std::string ext = ".csv";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return path.substr(0, path.size() - ext.size()) + ".json";
  return path + ".json";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

PotentialSpec require_potential(const std::optional<PotentialSpec>& p, const char* cmd) {
  if (!p) throw ConfigError(std::string(cmd) + ": no potential given (use --potential or the config file)");
  return *p;
}

// ---------------------------------------------------------------- commands

struct CoeffsArgs {
  PotentialFlags pot;
  std::string k;
  CLI::Option* k_opt = nullptr;
};

int cmd_coeffs(const Context& cx, const CoeffsArgs& a) {
  const json sec = cx.section("coeffs");
  reject_unknown_keys(sec, {"k"}, "coeffs");
  const auto spec = require_potential(a.pot.resolve(cx.rc.potential), "coeffs");
  if (!spec.has_coefficients()) throw ConfigError("coeffs: the linear potential has no R and T");
  const auto ks = a.k_opt->count() ? parse_range(a.k) : range_value(sec, "k", "0.1:5:50", "coeffs");
  CsvTable t;
  t.header = {"k", "re_R", "im_R", "re_T", "im_T", "unitarity_defect"};
  json rows = json::array();
  for (double k : ks) {
    const auto c = coefficients(spec, k);
    const double defect = std::abs(std::norm(c.R) + std::norm(c.T) - 1.0);
    t.add_row({format_double(k), format_double(c.R.real()), format_double(c.R.imag()), format_double(c.T.real()),
               format_double(c.T.imag()), format_double(defect)});
    json row = {{"k", k}, {"R", complex_json(c.R)}, {"T", complex_json(c.T)}, {"unitarity_defect", defect}};
    if (c.D) {
      row["A_plus"] = complex_json(*c.A_plus);
      row["A_minus"] = complex_json(*c.A_minus);
      row["D"] = complex_json(*c.D);
    }
    rows.push_back(row);
  }
  if (cx.rc.format == "json")
    cx.emit(dump({{"potential", potential_to_json(spec)}, {"rows", rows}}));
  else
    cx.emit(t.str());
  return exit_ok;
}

struct OverlapArgs {
  PotentialFlags pot;
  double k1 = 0, k2 = 0, x1 = 0, x2 = 0, lambda = 0, eps = 0;
  std::string k1_range, k2_range;
  std::vector<CLI::Option*> o;  // k1, k2, x1, x2, lambda, eps, k1_range, k2_range
};

int cmd_overlap(const Context& cx, const OverlapArgs& a) {
  const json sec = cx.section("overlap");
  reject_unknown_keys(sec, {"k1", "k2", "x1", "x2", "lambda", "eps", "k1_range", "k2_range"}, "overlap");
  const auto spec = require_potential(a.pot.resolve(cx.rc.potential), "overlap");
  auto pick = [&](std::size_t i, double flag, const char* key, double fallback) {
    return a.o[i]->count() ? flag : num(sec, key, fallback, "overlap");
  };
  const bool grid_mode = a.o[6]->count() || a.o[7]->count() || sec.contains("k1_range") || sec.contains("k2_range");
  if (grid_mode) {
    const auto r1 = a.o[6]->count() ? parse_range(a.k1_range) : range_value(sec, "k1_range", "0.1:3:30", "overlap");
    const auto r2 = a.o[7]->count() ? parse_range(a.k2_range) : range_value(sec, "k2_range", "0.1:3:30", "overlap");
    if (r1.size() < 2 || r2.size() < 2) throw ConfigError("overlap: grid ranges need n >= 2");
    const GridAxis g1{r1.front(), r1.back(), int(r1.size())}, g2{r2.front(), r2.back(), int(r2.size())};
    const auto grid = delta_grid(spec, g1, g2, cx.rc.threads);
    const json meta = {{"potential", potential_to_json(spec)},
                       {"k1", {g1.lo, g1.hi, g1.n}},
                       {"k2", {g2.lo, g2.hi, g2.n}},
                       {"layout", "row-major over (k1, k2)"},
                       {"diagonal", "interpolated for |k1 - k2| < 1e-4"},
                       {"quadrature", quadrature_to_json(cx.rc.quadrature)}};
    if (cx.rc.format == "json") {
      json j = meta;
      j["rows"] = json::array();
      for (const auto& d : grid) j["rows"].push_back({d.k1, d.k2, d.delta_term.real(), d.delta_term.imag()});
      cx.emit(dump(j));
    } else {
      cx.emit(delta_grid_csv(grid).str());
      if (!cx.rc.output_path.empty()) write_atomic(sidecar_path(cx.rc.output_path), dump(meta));
    }
    return exit_ok;
  }

  if (!a.o[0]->count() && !sec.contains("k1")) throw ConfigError("overlap: --k1 is required");
  if (!a.o[1]->count() && !sec.contains("k2")) throw ConfigError("overlap: --k2 is required");
  const double k1 = pick(0, a.k1, "k1", 0), k2 = pick(1, a.k2, "k2", 0);
  const double L = pick(4, a.lambda, "lambda", 30.0);
  const double x1 = pick(2, a.x1, "x1", -L), x2 = pick(3, a.x2, "x2", L);
  const auto& q = cx.rc.quadrature;

  json j;
  j["potential"] = potential_to_json(spec);
  j["k1"] = k1;
  j["k2"] = k2;
  j["interval"] = {x1, x2};
  CsvTable t;
  t.header = {"quantity", "re", "im"};
  auto add = [&](const char* name, Complex z) {
    j[name] = complex_json(z);
    t.add_row({name, format_double(z.real()), format_double(z.imag())});
  };
  if (spec.has_coefficients()) {
    add("direct", direct_overlap(spec, k1, k2, x1, x2, q));
    const auto J = boundary_J(spec, k1, k2, x1, x2);
    add("boundary_J", J.value);
    if (std::abs(spec.energy(k1) - spec.energy(k2)) >= 1e-9) {
      const double res = finite_interval_identity_residual(spec, k1, k2, x1, x2, q);
      add("identity_residual", res);
    }
    add("delta_term", nonorthogonality_term(spec, k1, k2));
    if (std::abs(k1 - k2) >= 1e-9) {
      const auto d = overlap_decomposition(spec, k1, k2);
      add("diag_weight", d.diag_weight);
      add("mirror_weight", d.mirror_weight);
    }
    add("cutoff_overlap", windowed_overlap(spec, k1, k2, IntervalLimit::cutoff(L), q));
    if (a.o[5]->count() || sec.contains("eps")) {
      const double eps = pick(5, a.eps, "eps", 0.0);
      const auto r = regularized_overlap(spec, k1, k2, eps);
      add("regularized_total", r.total);
      add("regularized_diag_weight", r.diag_weight);
      add("regularized_mirror_weight", r.mirror_weight);
      add("regularized_pv_term", r.pv_term);
    }
  } else {
    throw ConfigError("overlap: the linear potential is handled by `verify airy`");
  }
  j["note"] = "delta weights are symbolic coefficients of delta(k1 - k2) and delta(k1 + k2)";
  cx.emit(cx.rc.format == "json" ? dump(j) : t.str());
  return exit_ok;
}

struct FigureArgs {
  PotentialFlags pot;
  int id = 1;
  double k2hat = 0.314;
  std::string convention = "both";
  std::string window, axis;
  int samples = 2001, n = 129;
  std::vector<CLI::Option*> o;  // k2hat, convention, window, samples, axis, n
};

int cmd_figure(const Context& cx, const FigureArgs& a) {
  const json sec = cx.section("figure");
  reject_unknown_keys(sec, {"id", "k2hat", "convention", "window", "samples", "axis", "n"}, "figure");
  auto spec_opt = a.pot.resolve(cx.rc.potential);
  const auto spec = spec_opt ? *spec_opt : PotentialSpec::square_well(2.0, 10.0);
  if (a.id < 1 || a.id > 4) throw ConfigError("figure: id must be 1, 2, 3 or 4");

  if (a.id == 1) {
    Figure1Options opt;
    opt.caption_value = a.o[0]->count() ? a.k2hat : num(sec, "k2hat", opt.caption_value, "figure");
    const std::string conv = a.o[1]->count() ? a.convention : str(sec, "convention", "both", "figure");
    if (conv != "both" && conv != "scaled" && conv != "absolute")
      throw ConfigError("figure: --k2hat-convention must be scaled, absolute or both");
    if (a.o[2]->count() || sec.contains("window")) {
      const auto w = a.o[2]->count() ? parse_range(a.window + ":2") : range_value(sec, "window", "0:5:2", "figure");
      opt.window_lo = w.front();
      opt.window_hi = w.back();
    }
    opt.samples = a.o[3]->count() ? a.samples : int(num(sec, "samples", opt.samples, "figure"));
    Figure1Summary s;
    s.options = opt;
    if (conv == "both") {
      s = figure1_summary(spec, opt);
    } else {
      const double k2 = conv == "scaled" ? opt.caption_value / spec.a() : opt.caption_value;
      s.readings.push_back(figure1_reading(spec, k2, conv, opt));
      s.closest = 0;
    }
    const json summary = s.to_json(spec);
    if (cx.rc.output_path.empty()) {
      cx.out << dump(summary);
    } else if (cx.rc.format == "json") {
      cx.emit(dump(summary));
    } else {
      const auto& best = s.readings.at(s.closest);
      cx.emit(figure1_curve(spec, best.k2_hat, opt).str());
      write_atomic(sidecar_path(cx.rc.output_path), dump(summary));
    }
    return exit_ok;
  }

  SurfaceOptions opt;
  if (a.o[4]->count() || sec.contains("axis")) {
    const auto ax = a.o[4]->count() ? parse_range(a.axis + ":2") : range_value(sec, "axis", "-6.28:6.28:2", "figure");
    opt.lo = ax.front();
    opt.hi = ax.back();
  }
  opt.n = a.o[5]->count() ? a.n : int(num(sec, "n", opt.n, "figure"));
  const SurfaceQuantity q =
      a.id == 2 ? SurfaceQuantity::abs2 : (a.id == 3 ? SurfaceQuantity::imag : SurfaceQuantity::real);
  SurfacePeak peak;
  const auto table = figure_surface(spec, opt, cx.rc.threads, q, peak);
  json summary = {{"figure", a.id},
                  {"potential", potential_to_json(spec)},
                  {"quantity", a.id == 2 ? "abs2_delta" : (a.id == 3 ? "im_delta" : "re_delta")},
                  {"axes", "a*k1_hat, a*k2_hat"},
                  {"axis_range", {opt.lo, opt.hi, opt.n}},
                  {"peak_value", peak.value},
                  {"peak_locations", json::array()}};
  for (const auto& [u1, u2] : peak.locations) summary["peak_locations"].push_back({u1, u2});
  if (cx.rc.output_path.empty()) {
    cx.out << dump(summary);
  } else if (cx.rc.format == "json") {
    cx.emit(dump(summary));
  } else {
    cx.emit(table.str());
    write_atomic(sidecar_path(cx.rc.output_path), dump(summary));
  }
  return exit_ok;
}

struct PacketArgs {
  PotentialFlags pot;
  double P0 = 1.0, X0 = -50.0, sigma = 0.01, R0 = 50.0, delta0 = 0.0, rs = 0.0;
  int n_points = 801;
  std::string t, method, channel, s0;
  std::vector<CLI::Option*> o;  // P0, X0, sigma, n_points, t, method, channel, s0, R0, delta0, rs
};

S0Model s0_from(const json& sec, const PacketArgs& a) {
  json s = sec.contains("s0") ? sec.at("s0") : json::object();
  if (!s.is_object()) throw ConfigError("packet: 's0' must be an object");
  reject_unknown_keys(s, {"kind", "delta0", "radius", "table"}, "packet.s0");
  const std::string kind = a.o[7]->count() ? a.s0 : str(s, "kind", "unit", "packet.s0");
  const double delta0 = a.o[9]->count() ? a.delta0 : num(s, "delta0", 0.0, "packet.s0");
  const double rs = a.o[10]->count() ? a.rs : num(s, "radius", 0.0, "packet.s0");
  if (kind == "unit") return S0Model::unit();
  if (kind == "constant_phase") return S0Model::constant_phase(delta0);
  if (kind == "hard_sphere") return S0Model::hard_sphere(rs);
  if (kind == "tabulated") {
    if (!s.contains("table") || !s.at("table").is_array())
      throw ConfigError("packet.s0: tabulated model needs 'table': [[k, re, im], ...]");
    std::vector<double> k;
    std::vector<Complex> v;
    for (const auto& row : s.at("table")) {
      if (!row.is_array() || row.size() != 3) throw ConfigError("packet.s0: table rows are [k, re, im]");
      k.push_back(row[0].get<double>());
      v.emplace_back(row[1].get<double>(), row[2].get<double>());
    }
    return S0Model::tabulated(k, v);
  }
  throw ConfigError("packet: unknown s0 model '" + kind + "'");
}

int cmd_packet(const Context& cx, const PacketArgs& a) {
  const json sec = cx.section("packet");
  reject_unknown_keys(sec, {"P0", "X0", "sigma", "n_points", "k_min", "k_max", "t", "method", "channel", "s0", "R0"},
                      "packet");
  auto val = [&](std::size_t i, double flag, const char* key, double fallback) {
    return a.o[i]->count() ? flag : num(sec, key, fallback, "packet");
  };
  PacketSpec packet = PacketSpec::gaussian(val(0, a.P0, "P0", 1.0), val(1, a.X0, "X0", -50.0),
                                           val(2, a.sigma, "sigma", 0.01), int(val(3, a.n_points, "n_points", 801)));
  packet.k_grid.k_min = num(sec, "k_min", packet.k_grid.k_min, "packet");
  packet.k_grid.k_max = num(sec, "k_max", packet.k_grid.k_max, "packet");
  packet.validate();
  const auto times = a.o[4]->count() ? parse_range(a.t) : range_value(sec, "t", "0:150:151", "packet");
  const std::string method = a.o[5]->count() ? a.method : str(sec, "method", "net_current", "packet");
  const std::string channel = a.o[6]->count() ? a.channel : str(sec, "channel", "line", "packet");

  CsvTable t;
  json rows = json::array();
  if (channel == "swave") {
    if (method != "net_current" && method != "direct")
      throw ConfigError("packet: the s-wave channel supports --method net_current or direct");
    const SWaveSpec sw{s0_from(sec, a), val(8, a.R0, "R0", 50.0), 1.0};
    t.header = {"t", "N", "dNdt", "method"};
    std::vector<double> N(times.size()), R(times.size());
    const double h = 1e-3 / std::max(1.0, packet.P0 * packet.P0 / 2.0);
    parallel_for(times.size(), cx.rc.threads, [&](std::size_t i) {
      N[i] = swave_norm(sw, packet, times[i]);
      R[i] = method == "direct"
                 ? (swave_norm(sw, packet, times[i] + h) - swave_norm(sw, packet, times[i] - h)) / (2.0 * h)
                 : swave_norm_rate(sw, packet, times[i]);
    });
    const std::string m = method == "direct" ? "direct" : "net_current_formula";
    for (std::size_t i = 0; i < times.size(); ++i) {
      t.add_row({format_double(times[i]), format_double(N[i]), format_double(R[i]), m});
      rows.push_back({{"t", times[i]}, {"N", N[i]}, {"dNdt", R[i]}, {"method", m}});
    }
  } else if (channel == "line") {
    const auto spec = require_potential(a.pot.resolve(cx.rc.potential), "packet");
    if (method == "compare") {
      const auto exact = norm_trace(spec, packet, times, NormMethod::net_current_formula, cx.rc.threads);
      const auto sp = norm_trace(spec, packet, times, NormMethod::stationary_phase, cx.rc.threads);
      t.header = {"t", "N", "dNdt_direct", "dNdt_stationary_phase", "rel_diff"};
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double d = exact.dNdt[i], s = sp.dNdt[i];
        const double scale = std::max(std::abs(d), std::abs(s));
        const double rel = scale > 0.0 ? std::abs(d - s) / scale : 0.0;
        t.add_row({format_double(times[i]), format_double(exact.N[i]), format_double(d), format_double(s),
                   format_double(rel)});
        rows.push_back({{"t", times[i]},
                        {"N", exact.N[i]},
                        {"dNdt_direct", d},
                        {"dNdt_stationary_phase", s},
                        {"rel_diff", rel}});
      }
    } else {
      NormMethod m;
      if (method == "direct")
        m = NormMethod::direct;
      else if (method == "net_current")
        m = NormMethod::net_current_formula;
      else if (method == "stationary_phase")
        m = NormMethod::stationary_phase;
      else
        throw ConfigError("packet: --method must be direct, net_current, stationary_phase or compare");
      const auto tr = norm_trace(spec, packet, times, m, cx.rc.threads);
      t.header = {"t", "N", "dNdt", "method"};
      for (std::size_t i = 0; i < times.size(); ++i) {
        t.add_row({format_double(tr.times[i]), format_double(tr.N[i]), format_double(tr.dNdt[i]), method_name(m)});
        rows.push_back({{"t", tr.times[i]}, {"N", tr.N[i]}, {"dNdt", tr.dNdt[i]}, {"method", method_name(m)}});
      }
    }
  } else {
    throw ConfigError("packet: --channel must be line or swave");
  }
  if (cx.rc.format == "json")
    cx.emit(dump({{"packet", packet_to_json(packet)}, {"channel", channel}, {"rows", rows}}));
  else
    cx.emit(t.str());
  return exit_ok;
}

int cmd_verify(const Context& cx, const std::string& suite_arg, bool suite_given) {
  const json sec = cx.section("verify");
  reject_unknown_keys(sec, {"suite"}, "verify");
  const std::string suite = suite_given ? suite_arg : str(sec, "suite", "all", "verify");
  SuiteReport rep;
  const auto& q = cx.rc.quadrature;
  if (suite == "identities")
    rep = verify_identities(q, cx.rc.threads);
  else if (suite == "regularization")
    rep = verify_regularization(q, cx.rc.threads);
  else if (suite == "airy")
    rep = verify_airy(q, cx.rc.threads);
  else if (suite == "packets")
    rep = verify_packets(cx.rc.threads);
  else if (suite == "all")
    rep = verify_all(q, cx.rc.threads);
  else
    throw ConfigError("verify: suite must be identities, regularization, airy, packets or all");
  cx.emit(dump(rep.to_json()));
  for (const auto& c : rep.checks)
    cx.err << (c.pass ? "pass " : (c.gating ? "FAIL " : "info ")) << c.name << " value=" << format_double(c.value)
           << " threshold=" << format_double(c.threshold) << "\n";
  return rep.pass() ? exit_ok : exit_invariant;
}

struct RegcmpArgs {
  PotentialFlags pot;
  double k1 = 1.3, k2 = 0.7;
  std::string lambdas, eps;
  std::vector<CLI::Option*> o;  // k1, k2, lambdas, eps
};

int cmd_regcmp(const Context& cx, const RegcmpArgs& a) {
  const json sec = cx.section("regcmp");
  reject_unknown_keys(sec, {"k1", "k2", "lambdas", "eps"}, "regcmp");
  auto spec_opt = a.pot.resolve(cx.rc.potential);
  const auto spec = spec_opt ? *spec_opt : PotentialSpec::square_well(2.0, 10.0);
  const double k1 = a.o[0]->count() ? a.k1 : num(sec, "k1", 1.3, "regcmp");
  const double k2 = a.o[1]->count() ? a.k2 : num(sec, "k2", 0.7, "regcmp");
  const auto lambdas = a.o[2]->count() ? parse_list(a.lambdas) : list_value(sec, "lambdas", {25, 50, 100, 200}, "regcmp");
  const auto eps = a.o[3]->count() ? parse_list(a.eps) : list_value(sec, "eps", {1e-2, 5e-3, 2.5e-3, 1.25e-3}, "regcmp");
  const auto rep = regularization_compare(spec, k1, k2, lambdas, eps, cx.rc.quadrature);
  if (cx.rc.format == "json") {
    json j = regularization_to_json(rep);
    j["potential"] = potential_to_json(spec);
    j["k1"] = k1;
    j["k2"] = k2;
    cx.emit(dump(j));
  } else {
    cx.emit(regularization_table(rep).str());
  }
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Overlaps of continuum scattering states and wave-packet norm flow", "csov"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
  g.out_opt = app.add_option("--out", g.out_path, "output file (default: stdout)");
  g.format_opt = app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  g.tol_opt = app.add_option("--tol", g.tol, "absolute and relative quadrature tolerance");
  g.threads_opt = app.add_option("--threads", g.threads, "worker threads");

  CoeffsArgs ca;
  auto* coeffs = app.add_subcommand("coeffs", "reflection and transmission coefficients");
  ca.pot.attach(coeffs);
  ca.k_opt = coeffs->add_option("--k", ca.k, "momentum range lo:hi:n");

  OverlapArgs oa;
  auto* overlap = app.add_subcommand("overlap", "overlap of two scattering states, or a grid of Delta");
  oa.pot.attach(overlap);
  oa.o = {overlap->add_option("--k1", oa.k1, "first momentum"), overlap->add_option("--k2", oa.k2, "second momentum"),
          overlap->add_option("--x1", oa.x1, "interval start"), overlap->add_option("--x2", oa.x2, "interval end"),
          overlap->add_option("--lambda", oa.lambda, "cutoff L of [-L, L]"),
          overlap->add_option("--eps", oa.eps, "damping for the regularized overlap"),
          overlap->add_option("--k1-range", oa.k1_range, "grid mode: lo:hi:n"),
          overlap->add_option("--k2-range", oa.k2_range, "grid mode: lo:hi:n")};

  FigureArgs fa;
  auto* figure = app.add_subcommand("figure", "square-well Delta curves and surfaces");
  fa.pot.attach(figure);
  figure->add_option("id", fa.id, "1: line at fixed k2_hat, 2: |Delta|^2, 3: Im, 4: Re")->required();
  fa.o = {figure->add_option("--k2hat", fa.k2hat, "fixed interior wavenumber value"),
          figure->add_option("--k2hat-convention", fa.convention, "scaled | absolute | both")
              ->check(CLI::IsMember({"scaled", "absolute", "both"})),
          figure->add_option("--window", fa.window, "a*k1_hat window lo:hi"),
          figure->add_option("--samples", fa.samples, "curve samples"),
          figure->add_option("--axis", fa.axis, "a*k_hat axis lo:hi"),
          figure->add_option("--n", fa.n, "surface points per axis")};

  PacketArgs pa;
  auto* packet = app.add_subcommand("packet", "norm and norm rate of a Gaussian packet");
  pa.pot.attach(packet);
  pa.o = {packet->add_option("--P0", pa.P0, "mean momentum"),
          packet->add_option("--X0", pa.X0, "initial centre"),
          packet->add_option("--sigma", pa.sigma, "momentum variance"),
          packet->add_option("--n-points", pa.n_points, "momentum grid points"),
          packet->add_option("--t", pa.t, "time range lo:hi:n"),
          packet->add_option("--method", pa.method, "direct | net_current | stationary_phase | compare"),
          packet->add_option("--channel", pa.channel, "line | swave"),
          packet->add_option("--s0", pa.s0, "unit | constant_phase | hard_sphere | tabulated"),
          packet->add_option("--R0", pa.R0, "s-wave release radius"),
          packet->add_option("--delta0", pa.delta0, "constant phase shift"),
          packet->add_option("--rs", pa.rs, "hard-sphere radius")};

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run invariant suites");
  auto* suite_opt = verify->add_option("suite", suite, "identities | regularization | airy | packets | all");

  RegcmpArgs ra;
  auto* regcmp = app.add_subcommand("regcmp", "cutoff versus damped overlaps");
  ra.pot.attach(regcmp);
  ra.o = {regcmp->add_option("--k1", ra.k1, "first momentum"), regcmp->add_option("--k2", ra.k2, "second momentum"),
          regcmp->add_option("--lambdas", ra.lambdas, "comma-separated cutoffs"),
          regcmp->add_option("--eps", ra.eps, "comma-separated damping values")};

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  }

  try {
    Context cx{g.config_path.empty() ? RunConfig{} : load_config(g.config_path), out, err};
    if (g.out_opt->count()) cx.rc.output_path = g.out_path;
    if (g.format_opt->count()) cx.rc.format = g.format;
    if (g.threads_opt->count()) cx.rc.threads = g.threads;
    if (g.tol_opt->count()) {
      cx.rc.quadrature.abs_tol = g.tol;
      cx.rc.quadrature.rel_tol = g.tol;
    }
    cx.rc.validate();

    if (coeffs->parsed()) return cmd_coeffs(cx, ca);
    if (overlap->parsed()) return cmd_overlap(cx, oa);
    if (figure->parsed()) return cmd_figure(cx, fa);
    if (packet->parsed()) return cmd_packet(cx, pa);
    if (verify->parsed()) return cmd_verify(cx, suite, suite_opt->count() > 0);
    if (regcmp->parsed()) return cmd_regcmp(cx, ra);
    err << "error: no subcommand\n";
    return exit_config;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << "\n";
    return exit_nonconvergence;
  } catch (const InvariantFailure& e) {
    err << "error: " << e.what() << "\n";
    return exit_invariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return exit_config;
  }
}

}  // namespace csov
