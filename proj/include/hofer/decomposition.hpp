#pragma once

#include <array>
#include <string>
#include <vector>

#include "hofer/field.hpp"
#include "hofer/minimax.hpp"
#include "hofer/surface.hpp"

namespace hofer {

/// Monotone cutoff rho. It is the identity on [c- - eps, c+ + eps], constant
/// c+ + 2 eps above c+ + 3 eps and c- - 2 eps below c- - 3 eps. In each
/// transition band rho' = 1 - smoothstep, so rho is quartic there, C^2
/// overall, and 0 < rho' < 1 inside the bands.
class CutoffProfile {
 public:
  CutoffProfile() = default;
  /// Throws InvalidBand unless epsilon > 0 and c_minus <= c_plus.
  CutoffProfile(double c_minus, double c_plus, double epsilon);

  double operator()(double s) const;
  double derivative(double s) const;
  /// c- - 3 eps, c- - eps, c+ + eps, c+ + 3 eps
  std::array<double, 4> knots() const;

  double c_minus() const { return c_minus_; }
  double c_plus() const { return c_plus_; }
  double epsilon() const { return epsilon_; }

 private:
  double c_minus_ = 0.0;
  double c_plus_ = 0.0;
  double epsilon_ = 1.0;
};

CutoffProfile build_cutoff(double c_minus, double c_plus, double epsilon);

struct Decomposition {
  CutoffProfile rho;
  HamiltonianField K;
  HamiltonianField H0;
  double epsilon = 0.0;
  double kappa = 0.0;
  double c_plus = 0.0;
  double c_minus = 0.0;
  SubComplex z_eps;
  SubComplex z_kappa;
  std::vector<SubComplex> hull_discs;
  double sikorav_C = 0.0;
  std::size_t field_digest = 0;

  /// max K - min K
  double k_span() const;
};

/// 0.1 max(|c+|, |c-|, 0.01 max|H|), or 0.1 when all three vanish.
double default_epsilon(const GrowthReport& report, const HamiltonianField& field);
/// Half of min(epsilon, distance from c+ (c-) to the nearest vertex value
/// above (below) it).
double default_kappa(const HamiltonianField& field, double c_minus, double c_plus, double epsilon);

/// K = rho(H), H0 = H - K with K + H0 == H bit for bit, Z(eps), Z(kappa) and
/// the hull of Z(kappa). Throws MismatchedInputs when the report was made
/// for another field, InvalidBand, KappaNotRegular, and
/// NonContractibleBoundary if Z(kappa) carries a non-contractible circle.
Decomposition decompose(const SurfaceMesh& mesh, const HamiltonianField& field, const GrowthReport& report,
                        double epsilon, double kappa);

/// 16 times the total area of the discs.
double sikorav_constant(const SurfaceMesh& mesh, const std::vector<SubComplex>& hull_discs);

struct BoundCertificate {
  double C = 0.0;
  double slope = 0.0;  // mu + 4 eps
  double epsilon = 0.0;
  double kappa = 0.0;
  double k_span = 0.0;
  bool bounded = false;  // mu == 0: r_H(t) <= C for every t
  std::string statement;
  std::vector<std::string> assumptions;
};

/// Throws MismatchedInputs when decomposition and report disagree on the
/// field or on c+-.
BoundCertificate upper_bound_certificate(const Decomposition& decomposition, const GrowthReport& report);

}  // namespace hofer
