#include "hofer/decomposition.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "hofer/error.hpp"

namespace hofer {

namespace {

// Integral of 1 - smoothstep over [0, u], smoothstep(u) = 3u^2 - 2u^3.
double ramp_integral(double u) { return u - u * u * u + 0.5 * u * u * u * u; }

// Finds r with k + r == h exactly, starting from the rounded difference.
bool exact_remainder(double h, double k, double& r) {
  r = h - k;
  for (int i = 0; i < 8 && k + r != h; ++i)
    r = std::nextafter(r, k + r < h ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity());
  return k + r == h;
}

// Splits h into k + r with k within a few ulps of the cutoff value, moving
// toward zero first. Some pairs have every candidate sum on a rounding tie.
std::pair<double, double> exact_split(double h, double k) {
  double r = 0.0;
  for (int step = 0; step < 8; ++step) {
    for (double sign : {k > 0.0 ? -1.0 : 1.0, k > 0.0 ? 1.0 : -1.0}) {
      double shifted = k;
      for (int i = 0; i < step; ++i) shifted = std::nextafter(shifted, sign * std::numeric_limits<double>::infinity());
      if (exact_remainder(h, shifted, r)) return {shifted, r};
    }
  }
  throw Error(ErrorCode::InvalidParams, "cannot split value exactly");
}

std::string number(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

}  // namespace

CutoffProfile::CutoffProfile(double c_minus, double c_plus, double epsilon)
    : c_minus_(c_minus), c_plus_(c_plus), epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorCode::InvalidBand, "epsilon must be positive, got " + number(epsilon));
  if (!(c_minus <= c_plus) || !std::isfinite(c_minus) || !std::isfinite(c_plus))
    throw Error(ErrorCode::InvalidBand, "need c_minus <= c_plus");
}

double CutoffProfile::operator()(double s) const {
  const double e = epsilon_;
  if (s >= c_plus_ + 3.0 * e) return c_plus_ + 2.0 * e;
  if (s <= c_minus_ - 3.0 * e) return c_minus_ - 2.0 * e;
  if (s > c_plus_ + e) return c_plus_ + e + 2.0 * e * ramp_integral((s - (c_plus_ + e)) / (2.0 * e));
  if (s < c_minus_ - e) return c_minus_ - e - 2.0 * e * ramp_integral((c_minus_ - e - s) / (2.0 * e));
  return s;
}

double CutoffProfile::derivative(double s) const {
  const double e = epsilon_;
  auto one_minus_step = [](double u) { return 1.0 - u * u * (3.0 - 2.0 * u); };
  if (s >= c_plus_ + 3.0 * e || s <= c_minus_ - 3.0 * e) return 0.0;
  if (s > c_plus_ + e) return one_minus_step((s - (c_plus_ + e)) / (2.0 * e));
  if (s < c_minus_ - e) return one_minus_step((c_minus_ - e - s) / (2.0 * e));
  return 1.0;
}

std::array<double, 4> CutoffProfile::knots() const {
  return {c_minus_ - 3.0 * epsilon_, c_minus_ - epsilon_, c_plus_ + epsilon_, c_plus_ + 3.0 * epsilon_};
}

CutoffProfile build_cutoff(double c_minus, double c_plus, double epsilon) { return {c_minus, c_plus, epsilon}; }

double Decomposition::k_span() const { return K.values.size() ? K.max() - K.min() : 0.0; }

double default_epsilon(const GrowthReport& report, const HamiltonianField& field) {
  double peak = field.values.size() ? field.values.cwiseAbs().maxCoeff() : 0.0;
  double e = 0.1 * std::max({std::abs(report.c_plus), std::abs(report.c_minus), peak * 1e-2});
  return e > 0.0 ? e : 0.1;
}

double default_kappa(const HamiltonianField& field, double c_minus, double c_plus, double epsilon) {
  double gap = epsilon;
  for (Eigen::Index v = 0; v < field.values.size(); ++v) {
    const double h = field.values[v];
    if (h > c_plus) gap = std::min(gap, h - c_plus);
    if (h < c_minus) gap = std::min(gap, c_minus - h);
  }
  return gap / 2;
}

double sikorav_constant(const SurfaceMesh& mesh, const std::vector<SubComplex>& hull_discs) {
  double area = 0.0;
  for (const auto& disc : hull_discs) area += disc.area(mesh);
  return 16.0 * area;
}

Decomposition decompose(const SurfaceMesh& mesh, const HamiltonianField& field, const GrowthReport& report,
                        double epsilon, double kappa) {
  check_compact_support(mesh, field);
  if (report.field_digest != field_digest(field))
    throw Error(ErrorCode::MismatchedInputs, "report was computed for a different field");
  Decomposition out;
  out.rho = build_cutoff(report.c_minus, report.c_plus, epsilon);
  out.epsilon = epsilon;
  out.kappa = kappa;
  out.c_plus = report.c_plus;
  out.c_minus = report.c_minus;
  out.field_digest = report.field_digest;
  if (!(kappa > 0.0 && kappa < epsilon))
    throw Error(ErrorCode::KappaNotRegular, "kappa must lie in (0, epsilon)");
  const auto& h = field.values;
  for (Eigen::Index v = 0; v < h.size(); ++v)
    if (h[v] == report.c_plus + kappa || h[v] == report.c_minus - kappa)
      throw Error(ErrorCode::KappaNotRegular, "kappa hits the vertex value " + number(h[v]));

  out.K.mesh_name = out.H0.mesh_name = field.mesh_name;
  out.K.values.resize(h.size());
  out.H0.values.resize(h.size());
  for (Eigen::Index v = 0; v < h.size(); ++v) {
    const auto [k, r] = exact_split(h[v], out.rho(h[v]));
    out.K.values[v] = k + 0.0;
    out.H0.values[v] = r + 0.0;
  }

  auto cap = [&](double offset) {
    std::vector<bool> upper(h.size());
    std::vector<bool> lower(h.size());
    for (Eigen::Index v = 0; v < h.size(); ++v) {
      upper[v] = h[v] >= report.c_plus + offset;
      lower[v] = h[v] <= report.c_minus - offset;
    }
    SubComplex z = SubComplex::induced(mesh, upper);
    z |= SubComplex::induced(mesh, lower);
    return z;
  };
  out.z_eps = cap(epsilon);
  out.z_kappa = cap(kappa);
  out.hull_discs = hull(mesh, out.z_kappa).discs;
  out.sikorav_C = sikorav_constant(mesh, out.hull_discs);
  return out;
}

BoundCertificate upper_bound_certificate(const Decomposition& decomposition, const GrowthReport& report) {
  if (decomposition.field_digest != report.field_digest || decomposition.c_plus != report.c_plus ||
      decomposition.c_minus != report.c_minus)
    throw Error(ErrorCode::MismatchedInputs, "decomposition and report describe different fields");
  BoundCertificate cert;
  cert.C = decomposition.sikorav_C;
  cert.epsilon = decomposition.epsilon;
  cert.kappa = decomposition.kappa;
  cert.slope = report.mu + 4.0 * decomposition.epsilon;
  cert.k_span = decomposition.k_span();
  cert.bounded = report.mu == 0.0;
  cert.statement = "r_H(t) <= " + number(cert.C) + " + " + number(cert.slope) + " t for all t >= 0";
  if (cert.bounded) cert.statement += "; r_H(t) <= " + number(cert.C) + " for all t >= 0";
  cert.assumptions = {
      "K = rho(H) and H0 = H - K Poisson-commute, so phi_H^t = phi_K^t phi_H0^t",
      "the flow of K has Hofer length at most (max K - min K) t <= (mu + 4 eps) t",
      "H0 is supported in the hull of Z(kappa), a disjoint union of discs of total area C / 16",
  };
  return cert;
}

}  // namespace hofer
