#include "rramtk/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rramtk {

namespace {

constexpr double kExpArgMax = 700.0;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void ModelParams::validate() const {
  require(a_p > 0 && a_n > 0, "ModelParams: current scales a_p, a_n must be > 0");
  require(b_p > 0 && b_n > 0, "ModelParams: voltage sharpness b_p, b_n must be > 0");
  require(t_p > 0 && t_n > 0, "ModelParams: sensitivity exponents t_p, t_n must be > 0");
  if (window_kind == WindowKind::exponential)
    require(k_p > 0 && k_n > 0, "ModelParams: exponential window needs k_p, k_n > 0");
  require(eta == 1 || eta == -1, "ModelParams: eta must be +1 or -1");
  require(v_guard >= 0, "ModelParams: v_guard must be >= 0");
}

void DeviceState::validate() const {
  require(r_floor > 0, "DeviceState: r_floor must be > 0");
  require(r_floor <= r && r <= r_ceil, "DeviceState: r outside [r_floor, r_ceil]");
}

double limexp(double x) { return std::exp(x > kExpArgMax ? kExpArgMax : x); }

double current(const ModelParams& p, double r, double v) {
  if (!(r > 0)) throw std::domain_error("current: resistive state must be > 0");
  if (v >= 0) return p.a_p * (1.0 / r) * std::sinh(p.b_p * v);
  return p.a_n * (1.0 / r) * std::sinh(p.b_n * v);
}

double sensitivity(const ModelParams& p, double v) {
  if (v > 0) return p.A_p * (-1.0 + limexp(p.t_p * std::abs(v)));
  if (v < 0) return p.A_n * (-1.0 + limexp(p.t_n * std::abs(v)));
  return 0.0;
}

double boundary(const ModelParams& p, double v) {
  if (v > 0) return p.r_p0 + p.r_p1 * v + p.r_p2 * v * v;
  return p.r_n0 + p.r_n1 * v + p.r_n2 * v * v;
}

double window(const ModelParams& p, double r, double v) {
  if (!(r > 0)) throw std::domain_error("window: resistive state must be > 0");
  if (v == 0) return 0.0;
  const double rb = boundary(p, v);
  if (p.window_kind == WindowKind::quadratic) {
    if (v > 0 && r < rb) return (rb - r) * (rb - r);
    if (v < 0 && r > rb) return (r - rb) * (r - rb);
    return 0.0;
  }
  if (v > 0 && r < p.eta * rb) return -1.0 + limexp(p.eta * p.k_p * (rb - r));
  if (v < 0 && r > p.eta * rb) return -1.0 + limexp(p.eta * p.k_n * (r - rb));
  return 0.0;
}

double smooth_theta(double x, double b) {
  if (!(b > 0)) throw std::domain_error("smooth_theta: b must be > 0");
  // Both signs share one exp evaluation so theta(x) + theta(-x) == 1 exactly.
  if (x >= 0) return 1.0 / (1.0 + limexp(-x / b));
  return 1.0 - 1.0 / (1.0 + limexp(x / b));
}

double sensitivity_smoothed(const ModelParams& p, double v, double b) {
  const double sp = p.A_p * (-1.0 + limexp(p.t_p * std::abs(v)));
  const double sn = p.A_n * (-1.0 + limexp(p.t_n * std::abs(v)));
  return smooth_theta(v, b) * sp + smooth_theta(-v, b) * sn;
}

double window_smoothed(const ModelParams& p, double r, double v, double b) {
  if (!(r > 0)) throw std::domain_error("window_smoothed: resistive state must be > 0");
  const double rp = p.r_p0 + p.r_p1 * v + p.r_p2 * v * v;
  const double rn = p.r_n0 + p.r_n1 * v + p.r_n2 * v * v;
  double fp = 0, fn = 0;
  if (p.window_kind == WindowKind::quadratic) {
    if (r < rp) fp = (rp - r) * (rp - r);
    if (r > rn) fn = (r - rn) * (r - rn);
  } else {
    if (r < p.eta * rp) fp = -1.0 + limexp(p.eta * p.k_p * (rp - r));
    if (r > p.eta * rn) fn = -1.0 + limexp(p.eta * p.k_n * (r - rn));
  }
  return smooth_theta(v, b) * fp + smooth_theta(-v, b) * fn;
}

double analytical_step(const ModelParams& p, double r0, double v_bias, double t) {
  if (t < 0) throw std::domain_error("analytical_step: duration must be >= 0");
  if (t == 0 || std::abs(v_bias) <= p.v_guard) return r0;

  const double s = sensitivity(p, v_bias);
  const double rb = boundary(p, v_bias);

  if (v_bias > 0) {
    if (p.window_kind == WindowKind::quadratic) {
      if (r0 >= rb) return r0;
      const double d = rb - r0;
      return rb - d / (1.0 + s * d * t);
    }
    const double kap = p.eta * p.k_p;
    if (!(r0 < p.eta * rb)) return r0;
    // R(t) = r_p + ln(1 + (e^{kap (R0 - r_p)} - 1) e^{-kap s t}) / kap
    const double g = std::expm1(kap * (r0 - rb));
    const double decay = limexp(-kap * s * t);
    return rb + std::log1p(g * decay) / kap;
  }

  // v_bias < 0
  if (p.window_kind == WindowKind::quadratic) {
    if (r0 <= rb) return r0;
    const double u = r0 - rb;
    return rb + u / (1.0 - s * u * t);  // s < 0, so the denominator grows
  }
  const double kap = p.eta * p.k_n;
  if (!(r0 > p.eta * rb)) return r0;
  // u(t) = -(1/kap) ln(1 - (1 - e^{-kap u0}) e^{kap s t}),  u = R - r_n
  const double u0 = r0 - rb;
  const double w = -std::expm1(-kap * u0);
  const double decay = limexp(kap * s * t);
  return rb - std::log1p(-w * decay) / kap;
}

double numeric_step(const ModelParams& p, double r0, double v_bias, double t,
                    int n_substeps, bool smoothed) {
  if (t < 0) throw std::domain_error("numeric_step: duration must be >= 0");
  if (n_substeps < 1) throw std::domain_error("numeric_step: n_substeps must be >= 1");
  if (t == 0 || std::abs(v_bias) <= p.v_guard) return r0;

  const auto rate = [&](double r) {
    if (smoothed) return sensitivity_smoothed(p, v_bias) * window_smoothed(p, r, v_bias);
    return sensitivity(p, v_bias) * window(p, r, v_bias);
  };

  const double h = t / n_substeps;
  double r = r0;
  for (int i = 0; i < n_substeps; ++i) {
    const double k1 = rate(r);
    const double k2 = rate(r + 0.5 * h * k1);
    const double k3 = rate(r + 0.5 * h * k2);
    const double k4 = rate(r + h * k3);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return r;
}

double iv_invert(const ModelParams& p, double v, double i) {
  if (v == 0 || i == 0) throw std::domain_error("iv_invert: needs nonzero bias and current");
  if (v >= 0) return p.a_p * std::sinh(p.b_p * v) / i;
  return p.a_n * std::sinh(p.b_n * v) / i;
}

namespace {

ModelParams make_exp_10k17k() {
  ModelParams p;
  p.window_kind = WindowKind::exponential;
  p.a_p = 0.24;
  p.a_n = 0.24;
  p.b_p = 2.81;
  p.b_n = 2.81;
  p.A_p = 743.47;
  p.A_n = -6.8e4;
  p.t_p = 6.51;
  p.t_n = 0.31;
  p.k_p = 5.11e-4;
  p.k_n = 1.17e-3;
  p.r_p0 = 16.71e3;
  p.r_n0 = 29.30e3;
  p.r_n1 = 23.69e3;
  p.eta = 1;
  p.v_guard = 0.5;
  return p;
}

ModelParams make_exp_4k5_6k() {
  ModelParams p;
  p.window_kind = WindowKind::exponential;
  p.a_p = 0.24;
  p.a_n = 0.24;
  p.b_p = 2.81;
  p.b_n = 2.81;
  p.A_p = 0.12;
  p.A_n = -79.03;
  p.t_p = 0.59;
  p.t_n = 1.12;
  p.k_p = 8.10e-3;
  p.k_n = 9.43e-3;
  p.r_p0 = 3085;
  p.r_p1 = 1862;
  p.r_n0 = 5193;
  p.r_n1 = 378;
  p.eta = 1;
  p.v_guard = 0.5;
  return p;
}

}  // namespace

const ModelParams& builtin_params(std::string_view name) {
  static const ModelParams exp_10k17k = make_exp_10k17k();
  static const ModelParams exp_4k5_6k = make_exp_4k5_6k();
  if (name == "exp-10k17k") return exp_10k17k;
  if (name == "exp-4k5-6k") return exp_4k5_6k;
  throw std::invalid_argument("unknown built-in parameter set: " + std::string(name));
}

DeviceState builtin_state(std::string_view name) {
  if (name == "exp-10k17k") return DeviceState{13.5e3, 10e3, 17e3};
  if (name == "exp-4k5-6k") return DeviceState{5.25e3, 4.5e3, 6.0e3};
  throw std::invalid_argument("unknown built-in parameter set: " + std::string(name));
}

std::vector<std::string> builtin_param_names() { return {"exp-10k17k", "exp-4k5-6k"}; }

}  // namespace rramtk
