#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "hofer/error.hpp"

namespace hofer {

enum class ChartKind { plane, cylinder };

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Autonomous Hamiltonian on a global chart with coordinates (q, p), or
/// (theta, y) on the cylinder, and symplectic form dq ^ dp.
template <typename Scalar>
struct ChartFlowSpec {
  ChartKind chart = ChartKind::plane;
  std::function<Scalar(const Point2<Scalar>&)> hamiltonian;
  std::function<Point2<Scalar>(const Point2<Scalar>&)> gradient;
  Scalar step = Scalar(1e-3);
  Scalar t_final = Scalar(1);
  /// integrate throws StepTooLarge beyond this energy drift.
  Scalar max_energy_drift = std::numeric_limits<Scalar>::infinity();
};

template <typename Scalar>
struct Trajectory {
  std::vector<std::pair<Scalar, Point2<Scalar>>> samples;
  Scalar energy_drift = Scalar(0);
  Scalar jacobian_drift = Scalar(0);
};

template <typename Scalar>
struct CommutationError {
  Scalar commute = Scalar(0);  // max dist(Phi^s Psi^t x, Psi^t Phi^s x)
  Scalar compose = Scalar(0);  // max dist(phi_H^t x, Phi^t Psi^t x)

  Scalar max() const { return std::max(commute, compose); }
};

/// X_H = (dH/dp, -dH/dq). Throws OutsideChart at non-finite points.
template <typename Scalar>
Point2<Scalar> hamiltonian_vector_field(const ChartFlowSpec<Scalar>& spec, const Point2<Scalar>& x) {
  if (!x.allFinite()) throw Error(ErrorCode::OutsideChart, "point is not finite");
  Point2<Scalar> g = spec.gradient(x);
  return {g.y(), -g.x()};
}

template <typename Scalar>
Point2<Scalar> rk4_step(const ChartFlowSpec<Scalar>& spec, const Point2<Scalar>& x, Scalar h) {
  const Point2<Scalar> k1 = hamiltonian_vector_field(spec, x);
  const Point2<Scalar> k2 = hamiltonian_vector_field(spec, Point2<Scalar>(x + (h / 2) * k1));
  const Point2<Scalar> k3 = hamiltonian_vector_field(spec, Point2<Scalar>(x + (h / 2) * k2));
  const Point2<Scalar> k4 = hamiltonian_vector_field(spec, Point2<Scalar>(x + h * k3));
  return x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

/// Number of equal steps no longer than spec.step covering [0, t].
template <typename Scalar>
long step_count(const ChartFlowSpec<Scalar>& spec, Scalar t) {
  if (!(spec.step > Scalar(0))) throw Error(ErrorCode::InvalidParams, "step must be positive");
  if (!(t >= Scalar(0)) || !std::isfinite(static_cast<double>(t)))
    throw Error(ErrorCode::InvalidParams, "time must be finite and non-negative");
  using std::ceil;
  return static_cast<long>(ceil(t / spec.step - Scalar(1e-9)));
}

/// Time-t map. The cylinder angle is left unwrapped.
template <typename Scalar>
Point2<Scalar> flow_map(const ChartFlowSpec<Scalar>& spec, Point2<Scalar> x, Scalar t) {
  const long n = step_count(spec, t);
  if (n == 0) return x;
  const Scalar h = t / Scalar(n);
  for (long i = 0; i < n; ++i) x = rk4_step(spec, x, h);
  return x;
}

template <typename Scalar>
Scalar chart_distance(ChartKind chart, const Point2<Scalar>& a, const Point2<Scalar>& b) {
  Point2<Scalar> d = a - b;
  if (chart == ChartKind::cylinder) {
    using std::round;
    const Scalar period = Scalar(2) * std::numbers::pi_v<Scalar>;
    d.x() -= period * round(d.x() / period);
  }
  return d.norm();
}

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Symmetrised central difference of the gradient.
template <typename Scalar>
Matrix2<Scalar> hamiltonian_hessian(const ChartFlowSpec<Scalar>& spec, const Point2<Scalar>& x) {
  using std::abs;
  using std::sqrt;
  Matrix2<Scalar> hess;
  for (int i = 0; i < 2; ++i) {
    const Scalar delta = sqrt(sqrt(std::numeric_limits<Scalar>::epsilon())) * std::max(Scalar(1), Scalar(abs(x[i])));
    Point2<Scalar> e = Point2<Scalar>::Zero();
    e[i] = delta;
    hess.col(i) = (spec.gradient(Point2<Scalar>(x + e)) - spec.gradient(Point2<Scalar>(x - e))) / (2 * delta);
  }
  return (hess + hess.transpose()) / 2;
}

/// One Runge-Kutta step of the flow together with its linearisation
/// J' = S Hess(H) J, S = [[0, 1], [-1, 0]].
template <typename Scalar>
void rk4_variational_step(const ChartFlowSpec<Scalar>& spec, Point2<Scalar>& x, Matrix2<Scalar>& jac, Scalar h) {
  auto tangent = [&](const Point2<Scalar>& y, const Matrix2<Scalar>& m) {
    const Matrix2<Scalar> hess = hamiltonian_hessian(spec, y);
    Matrix2<Scalar> s_hess;
    s_hess << hess(1, 0), hess(1, 1), -hess(0, 0), -hess(0, 1);
    return Matrix2<Scalar>(s_hess * m);
  };
  const Point2<Scalar> k1 = hamiltonian_vector_field(spec, x);
  const Matrix2<Scalar> m1 = tangent(x, jac);
  const Point2<Scalar> x2 = x + (h / 2) * k1;
  const Point2<Scalar> k2 = hamiltonian_vector_field(spec, x2);
  const Matrix2<Scalar> m2 = tangent(x2, Matrix2<Scalar>(jac + (h / 2) * m1));
  const Point2<Scalar> x3 = x + (h / 2) * k2;
  const Point2<Scalar> k3 = hamiltonian_vector_field(spec, x3);
  const Matrix2<Scalar> m3 = tangent(x3, Matrix2<Scalar>(jac + (h / 2) * m2));
  const Point2<Scalar> x4 = x + h * k3;
  const Point2<Scalar> k4 = hamiltonian_vector_field(spec, x4);
  const Matrix2<Scalar> m4 = tangent(x4, Matrix2<Scalar>(jac + h * m3));
  x += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  jac += (h / 6) * (m1 + 2 * m2 + 2 * m3 + m4);
}

/// Fixed-step classical Runge-Kutta trajectory from x0 over [0, t_final].
/// Every `record_every`-th step is sampled, plus the last one. The Jacobian
/// of the time-t map is carried along through the variational equation and
/// jacobian_drift is the largest |det - 1| seen.
template <typename Scalar>
Trajectory<Scalar> integrate(const ChartFlowSpec<Scalar>& spec, const Point2<Scalar>& x0, int record_every = 1) {
  using std::abs;
  Trajectory<Scalar> out;
  out.samples.emplace_back(Scalar(0), x0);
  const long n = step_count(spec, spec.t_final);
  if (n == 0) return out;
  const Scalar h = spec.t_final / Scalar(n);
  const Scalar e0 = spec.hamiltonian(x0);
  Point2<Scalar> x = x0;
  Matrix2<Scalar> jac = Matrix2<Scalar>::Identity();
  for (long i = 1; i <= n; ++i) {
    rk4_variational_step(spec, x, jac, h);
    out.energy_drift = std::max(out.energy_drift, Scalar(abs(spec.hamiltonian(x) - e0)));
    out.jacobian_drift = std::max(out.jacobian_drift, Scalar(abs(jac.determinant() - Scalar(1))));
    if (i == n || (record_every > 0 && i % record_every == 0)) out.samples.emplace_back(Scalar(i) * h, x);
  }
  if (out.energy_drift > spec.max_energy_drift)
    throw Error(ErrorCode::StepTooLarge, "energy drift exceeds the configured bound");
  return out;
}

/// Hamiltonian a + b.
template <typename Scalar>
ChartFlowSpec<Scalar> sum_spec(const ChartFlowSpec<Scalar>& a, const ChartFlowSpec<Scalar>& b) {
  ChartFlowSpec<Scalar> out = a;
  out.hamiltonian = [ha = a.hamiltonian, hb = b.hamiltonian](const Point2<Scalar>& x) { return ha(x) + hb(x); };
  out.gradient = [ga = a.gradient, gb = b.gradient](const Point2<Scalar>& x) {
    return Point2<Scalar>(ga(x) + gb(x));
  };
  return out;
}

/// Hamiltonian f(H) for a scalar profile f with derivative df.
template <typename Scalar>
ChartFlowSpec<Scalar> composed_spec(const ChartFlowSpec<Scalar>& base, std::function<Scalar(Scalar)> f,
                                    std::function<Scalar(Scalar)> df) {
  ChartFlowSpec<Scalar> out = base;
  out.hamiltonian = [h = base.hamiltonian, f](const Point2<Scalar>& x) { return f(h(x)); };
  out.gradient = [h = base.hamiltonian, g = base.gradient, df](const Point2<Scalar>& x) {
    return Point2<Scalar>(df(h(x)) * g(x));
  };
  return out;
}

/// Flows Phi of K and Psi of H0 against each other and against the flow of
/// K + H0.
template <typename Scalar>
CommutationError<Scalar> verify_commutation(const ChartFlowSpec<Scalar>& spec_k, const ChartFlowSpec<Scalar>& spec_h0,
                                            const std::vector<Point2<Scalar>>& samples, Scalar t, Scalar s) {
  const ChartFlowSpec<Scalar> spec_h = sum_spec(spec_k, spec_h0);
  CommutationError<Scalar> out;
  for (const auto& x : samples) {
    const Point2<Scalar> psi_t = flow_map(spec_h0, x, t);
    const Point2<Scalar> a = flow_map(spec_k, psi_t, s);
    const Point2<Scalar> b = flow_map(spec_h0, flow_map(spec_k, x, s), t);
    out.commute = std::max(out.commute, chart_distance(spec_k.chart, a, b));
    const Point2<Scalar> c = flow_map(spec_h, x, t);
    const Point2<Scalar> d = flow_map(spec_k, psi_t, t);
    out.compose = std::max(out.compose, chart_distance(spec_k.chart, c, d));
  }
  return out;
}

}  // namespace hofer
