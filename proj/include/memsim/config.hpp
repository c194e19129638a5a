#pragma once

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "memsim/circuit.hpp"
#include "memsim/classify.hpp"
#include "memsim/devices.hpp"
#include "memsim/drive.hpp"
#include "memsim/errors.hpp"
#include "memsim/integrator.hpp"

namespace memsim {

/// Flat `key = value` run description. Lines starting with `#` and text
/// after an unquoted `#` are comments.
///
///   device = divergent-r | divergent-g | ferroelectric | resistor | capacitor
///            | tangent-pinch | twisted-pinch
///   device.<param>        model parameters (see the device tables below)
///   drive.shape           sinusoidal | triangular
///   drive.amplitude, drive.frequency, drive.phase, drive.offset
///   circuit               none | series
///   circuit.c_std         standard capacitor (F)
///   integrator.method     rk4 | rk45
///   integrator.steps_per_period, integrator.rtol, integrator.atol,
///   integrator.dt_min, integrator.dt_max, integrator.n_periods,
///   integrator.steady_tol
///   classify.gap_tol, classify.slope_tol, classify.area_tol
///   analysis.limit_scan_decades   0 disables, otherwise >= 2
///   analysis.current              true | false (numeric current + peaks)
///   analysis.peak_factor
///   analysis.smoothing            odd moving-average width for the current
///   output.svg                    true | false
class RunConfig {
public:
  static RunConfig parse(std::istream& in, const std::string& origin = "<config>") {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      const std::string text = trim(line);
      if (text.empty())
        continue;
      const auto eq = text.find('=');
      if (eq == std::string::npos)
        throw InputError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
      const std::string key = trim(text.substr(0, eq));
      const std::string value = trim(text.substr(eq + 1));
      if (key.empty() || value.empty())
        throw InputError(origin + ":" + std::to_string(lineno) + ": empty key or value");
      if (cfg.values_.count(key))
        throw InputError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
      cfg.values_[key] = value;
    }
    cfg.check_keys();
    return cfg;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream f(path);
    if (!f)
      throw InputError("cannot open config file '" + path + "'");
    return parse(f, path);
  }

  static RunConfig from_string(const std::string& text) {
    std::istringstream s(text);
    return parse(s);
  }

  /// Returns a copy with `key` set to `value`; the key must be valid for this
  /// configuration.
  RunConfig with(const std::string& key, const std::string& value) const {
    RunConfig c = *this;
    c.values_[key] = value;
    c.check_keys();
    return c;
  }

  bool is_valid_key(const std::string& key) const {
    const auto allowed = allowed_keys(device_name(), circuit_name());
    return allowed.count(key) > 0;
  }

  std::string device_name() const { return get_string("device", ""); }
  std::string circuit_name() const { return get_string("circuit", "none"); }
  const std::map<std::string, std::string>& values() const { return values_; }

  // Typed views. All validate against the model invariants.

  MemElement element() const {
    const std::string d = device_name();
    if (d == "divergent-r" || d == "divergent-g") {
      DivergentRParams p;
      p.g0 = num("device.g0", p.g0);
      p.alpha = num("device.alpha", p.alpha);
      p.beta = num("device.beta", p.beta);
      p.i_ref = num("device.i_ref", p.i_ref);
      p.x0 = num("device.x0", p.x0);
      return d == "divergent-r" ? divergent_r_memristor(p) : divergent_g_memristor(p);
    }
    if (d == "ferroelectric")
      return ferroelectric_memcapacitor(ferro_params());
    if (d == "resistor")
      return linear_resistor(num("device.r", 1.0));
    if (d == "capacitor")
      return linear_capacitor(num("device.c", 33e-9));
    if (d == "tangent-pinch" || d == "twisted-pinch") {
      TangentPinchParams p;
      p.odd_coupling = d == "twisted-pinch";
      p.r0 = num("device.r0", p.r0);
      p.dr = num("device.dr", p.dr);
      p.beta = num("device.beta", p.beta);
      p.i_ref = num("device.i_ref", p.i_ref);
      p.x0 = num("device.x0", p.x0);
      return tangent_pinch_memristor(p);
    }
    throw InputError("unknown device '" + d + "'");
  }

  FerroParams ferro_params() const {
    FerroParams p;
    p.p_s = num("device.p_s", p.p_s);
    p.p_r = num("device.p_r", p.p_r);
    p.e_c = num("device.e_c", p.e_c);
    p.eps_r = num("device.eps_r", p.eps_r);
    p.thickness = num("device.thickness", p.thickness);
    p.area = num("device.area", p.area);
    p.tau = num("device.tau", p.tau);
    p.p0 = num("device.p0", p.p0);
    p.validate();
    return p;
  }

  DriveWaveform drive() const {
    DriveWaveform d;
    const std::string shape = get_string("drive.shape", "sinusoidal");
    if (shape == "sinusoidal")
      d.shape = WaveShape::Sinusoidal;
    else if (shape == "triangular")
      d.shape = WaveShape::Triangular;
    else
      throw InputError("drive.shape must be 'sinusoidal' or 'triangular'");
    d.amplitude = num("drive.amplitude", 1.0);
    d.frequency = num("drive.frequency", 1.0);
    d.phase = num("drive.phase", 0.0);
    d.offset = num("drive.offset", 0.0);
    d.quantity = series() ? Quantity::Voltage : element().input_quantity();
    d.validate();
    return d;
  }

  bool series() const {
    const std::string c = circuit_name();
    if (c != "none" && c != "series")
      throw InputError("circuit must be 'none' or 'series'");
    return c == "series";
  }

  double c_std() const {
    const double c = num("circuit.c_std", 33e-9);
    if (!(c > 0.0))
      throw InputError("circuit.c_std must be positive");
    return c;
  }

  IntegratorConfig integrator() const {
    IntegratorConfig c;
    const std::string m = get_string("integrator.method", "rk4");
    if (m == "rk4")
      c.method = Method::RK4Fixed;
    else if (m == "rk45")
      c.method = Method::RK45Adaptive;
    else
      throw InputError("integrator.method must be 'rk4' or 'rk45'");
    const double steps = num("integrator.steps_per_period", 1000.0);
    if (!(steps >= 8.0) || steps != std::floor(steps))
      throw InputError("integrator.steps_per_period must be an integer >= 8");
    const double period = 1.0 / num("drive.frequency", 1.0);
    c.dt = period / steps;
    c.rtol = num("integrator.rtol", c.rtol);
    c.atol = num("integrator.atol", c.atol);
    c.dt_min = num("integrator.dt_min", c.dt_min);
    c.dt_max = num("integrator.dt_max", c.dt_max);
    const double n = num("integrator.n_periods", 4.0);
    if (n != std::floor(n))
      throw InputError("integrator.n_periods must be an integer");
    c.n_periods = static_cast<int>(n);
    c.steady_tol = num("integrator.steady_tol", c.steady_tol);
    c.validate();
    return c;
  }

  ClassifierTolerances tolerances() const {
    ClassifierTolerances t;
    t.gap_tol = num("classify.gap_tol", t.gap_tol);
    t.slope_tol = num("classify.slope_tol", t.slope_tol);
    t.area_tol = num("classify.area_tol", t.area_tol);
    t.validate();
    return t;
  }

  int limit_scan_decades() const {
    const double d = num("analysis.limit_scan_decades", 0.0);
    if (d != std::floor(d) || d < 0.0 || d == 1.0)
      throw InputError("analysis.limit_scan_decades must be 0 or an integer >= 2");
    return static_cast<int>(d);
  }

  bool analyze_current() const { return flag("analysis.current", false); }

  double peak_factor() const {
    const double f = num("analysis.peak_factor", 5.0);
    if (!(f > 0.0))
      throw InputError("analysis.peak_factor must be positive");
    return f;
  }

  std::size_t smoothing() const {
    const double w = num("analysis.smoothing", 1.0);
    if (w < 1.0 || w != std::floor(w) || std::fmod(w, 2.0) != 1.0)
      throw InputError("analysis.smoothing must be an odd integer >= 1");
    return static_cast<std::size_t>(w);
  }

  bool svg() const { return flag("output.svg", false); }

  /// Builds every typed view once so that all parameter errors surface
  /// before a run starts.
  void validate() const {
    (void)element();
    (void)drive();
    if (series()) {
      (void)c_std();
      if (element().kind() != ElementKind::Memcapacitive)
        throw InputError("circuit = series needs a memcapacitive device");
    }
    (void)integrator();
    (void)tolerances();
    const int dec = limit_scan_decades();
    if (dec > 0 && (series() || !is_memristive(element().kind())))
      throw InputError("analysis.limit_scan_decades needs a directly driven memristive device");
    (void)peak_factor();
    (void)smoothing();
    (void)svg();
    (void)analyze_current();
  }

private:
  std::map<std::string, std::string> values_;

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
      return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static std::set<std::string> allowed_keys(const std::string& device, const std::string& circuit) {
    std::set<std::string> k{"device",
                            "drive.shape",
                            "drive.amplitude",
                            "drive.frequency",
                            "drive.phase",
                            "drive.offset",
                            "circuit",
                            "integrator.method",
                            "integrator.steps_per_period",
                            "integrator.rtol",
                            "integrator.atol",
                            "integrator.dt_min",
                            "integrator.dt_max",
                            "integrator.n_periods",
                            "integrator.steady_tol",
                            "classify.gap_tol",
                            "classify.slope_tol",
                            "classify.area_tol",
                            "analysis.limit_scan_decades",
                            "analysis.current",
                            "analysis.peak_factor",
                            "analysis.smoothing",
                            "output.svg"};
    auto add = [&](std::initializer_list<const char*> names) {
      for (const char* n : names) k.insert(std::string("device.") + n);
    };
    if (device == "divergent-r" || device == "divergent-g")
      add({"g0", "alpha", "beta", "i_ref", "x0"});
    else if (device == "ferroelectric")
      add({"p_s", "p_r", "e_c", "eps_r", "thickness", "area", "tau", "p0"});
    else if (device == "resistor")
      add({"r"});
    else if (device == "capacitor")
      add({"c"});
    else if (device == "tangent-pinch" || device == "twisted-pinch")
      add({"r0", "dr", "beta", "i_ref", "x0"});
    if (circuit == "series")
      k.insert("circuit.c_std");
    return k;
  }

  void check_keys() const {
    if (!values_.count("device"))
      throw InputError("config is missing 'device'");
    const auto allowed = allowed_keys(device_name(), circuit_name());
    for (const auto& [key, value] : values_)
      if (!allowed.count(key))
        throw InputError("unknown config key '" + key + "' for device '" + device_name() + "'");
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double num(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end())
      return fallback;
    const char* s = it->second.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || errno == ERANGE || !std::isfinite(v))
      throw InputError("config key '" + key + "': '" + it->second + "' is not a finite number");
    return v;
  }

  bool flag(const std::string& key, bool fallback) const {
    const std::string v = get_string(key, fallback ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes")
      return true;
    if (v == "false" || v == "0" || v == "no")
      return false;
    throw InputError("config key '" + key + "' must be true or false");
  }
};

} // namespace memsim
