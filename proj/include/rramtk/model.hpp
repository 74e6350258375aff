#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rramtk {

/// Which window function a parameter set was fitted against.
enum class WindowKind { quadratic, exponential };

/// Full fitting-parameter set of one voltage-driven RRAM device model.
///
/// The device follows i = a*(1/R)*sinh(b*v) with polarity-split coefficients
/// and dR/dt = s(v)*f(R,v), where s is an exponential switching-sensitivity
/// function and f is either a quadratic or an exponential window bounding the
/// resistive state between the voltage-dependent limits r_p(v) and r_n(v).
struct ModelParams {
  WindowKind window_kind = WindowKind::quadratic;

  double a_p = 0;  ///< positive-branch current scale (A*ohm)
  double a_n = 0;  ///< negative-branch current scale (A*ohm)
  double b_p = 0;  ///< positive-branch voltage sharpness (1/V)
  double b_n = 0;  ///< negative-branch voltage sharpness (1/V)

  double A_p = 0;  ///< positive sensitivity amplitude (A_n <= 0 by convention)
  double A_n = 0;
  double t_p = 0;  ///< sensitivity exponents (1/V)
  double t_n = 0;

  // Boundary polynomials r_p(v) = r_p0 + r_p1*v + r_p2*v^2 (v > 0) and
  // r_n(v) = r_n0 + r_n1*v + r_n2*v^2 (v <= 0).
  double r_p0 = 0, r_p1 = 0, r_p2 = 0;
  double r_n0 = 0, r_n1 = 0, r_n2 = 0;

  double k_p = 0;  ///< exponential-window slope (1/ohm), exponential kind only
  double k_n = 0;

  int eta = 1;            ///< switching-direction sign, +1 or -1
  double v_guard = 0.5;   ///< read-guard magnitude (V); |v| <= v_guard holds state

  /// Throws std::invalid_argument if any invariant is violated.
  void validate() const;
};

/// Resistive state of one memristor with its admissible absolute bounds.
struct DeviceState {
  double r = 0;        ///< current resistive state (ohm)
  double r_floor = 0;  ///< absolute lower bound (ohm), > 0
  double r_ceil = 0;   ///< absolute upper bound (ohm)

  void validate() const;
};

/// exp() with its argument clamped to at most 700, so evaluation saturates
/// instead of overflowing.
double limexp(double x);

/// Device current at resistive state r and bias v. Throws std::domain_error
/// for non-positive r.
double current(const ModelParams& p, double r, double v);

/// Switching sensitivity s(v); exactly zero at v = 0.
double sensitivity(const ModelParams& p, double v);

/// State boundary r_p(v) for v > 0, r_n(v) for v <= 0.
double boundary(const ModelParams& p, double v);

/// Window function f(R, v); zero outside the active switching region.
/// Throws std::domain_error for non-positive r.
double window(const ModelParams& p, double r, double v);

/// Logistic sigmoid (1 + exp(-x/b))^-1 with exact complement:
/// smooth_theta(x,b) + smooth_theta(-x,b) == 1 bit-exactly. Throws
/// std::domain_error for b <= 0.
double smooth_theta(double x, double b);

/// Sigmoid-reshaped variants of the piecewise branch selection. Only the
/// numeric integrator consumes these; the closed-form update assumes exact
/// branches.
double sensitivity_smoothed(const ModelParams& p, double v, double b = 1e-6);
double window_smoothed(const ModelParams& p, double r, double v, double b = 1e-3);

/// Closed-form solution of dR/dt = s(Vb)*f(R,Vb) held at constant bias for
/// duration t. Returns r0 unchanged when |v_bias| <= v_guard or when the
/// window's boundary condition excludes switching. Throws std::domain_error
/// for t < 0.
double analytical_step(const ModelParams& p, double r0, double v_bias, double t);

/// Fixed-step RK4 integration of the same ODE with identical guard and
/// boundary-hold behaviour; independent check of analytical_step. Set
/// smoothed to integrate the sigmoid-reshaped right-hand side instead.
double numeric_step(const ModelParams& p, double r0, double v_bias, double t,
                    int n_substeps, bool smoothed = false);

/// Resistive state recovered from a measured current at known bias:
/// inverts i = a*(1/R)*sinh(b*v). Throws std::domain_error when v or i is 0.
double iv_invert(const ModelParams& p, double v, double i);

/// Built-in parameter sets from the Pt/TiOx/Pt fits: "exp-10k17k" and
/// "exp-4k5-6k". Throws std::invalid_argument for unknown names.
const ModelParams& builtin_params(std::string_view name);

/// Nominal admissible state bounds (with mid-range initial state) matching a
/// built-in parameter set.
DeviceState builtin_state(std::string_view name);

std::vector<std::string> builtin_param_names();

}  // namespace rramtk
