#pragma once

#include <Eigen/Dense>
#include <functional>

#include "step2heat/group_spec.hpp"

namespace step2heat {

/// j(x) = x / sinh x, extended by j(0) = 1. Strictly decreasing on [0, inf),
/// values in (0, 1]. Underflow-safe at large x (j(x) ~ 2x e^{-x}).
double j_scalar(double x);

/// x coth x, extended by value 1 at x = 0; equals j(x) cosh(x). >= 1.
double xcoth(double x);

/// sinh(x)/x with value 1 at x = 0; the reciprocal of j. Overflows for
/// x beyond ~700, so callers keep it composed with a bounded factor.
double sinhc(double x);

/// Eigendecomposition of A(lambda) = -J(lambda)^2 = J(lambda)^T J(lambda)
/// together with the even-function evaluations every kernel formula needs.
/// Eigenvalues are ascending, clamped to [0, inf); tiny negative round-off
/// (above -1e-12 relative) clamps to zero, anything worse signals an
/// upstream bug and throws NumericError.
struct SpectralData {
  Eigen::VectorXd lambda;
  Eigen::VectorXd eigenvalues;    // mu_i of A(lambda), ascending, >= 0
  Eigen::MatrixXd eigenvectors;   // orthogonal V with A = V diag(mu) V^T
  Eigen::VectorXd sqrt_mu;        // sqrt(mu_i)
  Eigen::VectorXd j_sqrt;         // j(sqrt mu_i)
  Eigen::VectorXd xcoth_sqrt;     // sqrt(mu_i) coth sqrt(mu_i)
  double det_j = 1.0;             // prod_i j(sqrt mu_i), in (0, 1]
};

/// A(lambda) = -J(lambda)^2, formed as J^T J so the result is symmetric PSD
/// by construction.
Eigen::MatrixXd a_of(const GroupSpec& spec, const Eigen::VectorXd& lambda);

SpectralData spectral(const GroupSpec& spec, const Eigen::VectorXd& lambda);

/// V diag(f(sqrt mu_i)) V^T: the even analytic calculus of sqrt(A).
Eigen::MatrixXd even_apply(const SpectralData& sd, const std::function<double(double)>& f);

/// det j(sqrt A(lambda)) = prod j(sqrt mu_i).
double det_j_sqrtA(const SpectralData& sd);

/// Lower bound k0 on the second-largest eigenvalue of sqrt(A(lambda)) over
/// unit lambda: for every valid step-two spec, sqrt(A(lambda)) has at least
/// two eigenvalues >= k0 |lambda|, which drives the integrable tail bound
/// det j(sqrt A(lambda)) <= j(k0 |lambda|)^2.
struct DecayEstimate {
  double k0 = 0.0;
  int sample_count = 0;
  double safety_factor = 0.9;
};

/// Minimizes the second-largest singular value of J(lambda) over the unit
/// sphere by quasi-uniform sampling plus derivative-free local refinement,
/// then applies the safety factor. samples >= 64.
DecayEstimate estimate_k0(const GroupSpec& spec, int samples = 256,
                          double safety_factor = 0.9);

/// Largest singular value of J(lambda) over the unit sphere (sampled the
/// same way, with safety factor >= 1); controls amplitude growth rates and
/// analyticity-strip estimates used by the quadrature planner.
double estimate_smax(const GroupSpec& spec, int samples = 256);

}  // namespace step2heat
