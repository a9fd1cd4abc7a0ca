#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace step2heat {

/// e^M by scaling-and-squaring with a truncated Taylor series. Matrices here
/// are tiny (the horizontal dimension), so robustness beats sophistication.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& M);

/// Generalized Ornstein-Uhlenbeck generator tr(Q grad^2 u) + <Bz, grad u>.
struct OUSystem {
  Eigen::MatrixXd Q;  // symmetric PSD
  Eigen::MatrixXd B;  // drift

  OUSystem(Eigen::MatrixXd Q_, Eigen::MatrixXd B_);
  int dim() const { return static_cast<int>(Q.rows()); }
};

enum class CovarianceMethod {
  Auto,     // closed j-form when B = -2D symmetric and Q = I, else numeric
  Closed,   // require the j-form fast path
  Numeric,  // force the quadrature path (dual-route testing)
};

/// Kalman covariance K(t) = (1/t) Int_0^t e^{sB} Q e^{sB^T} ds.
/// The B = -2D (D symmetric), Q = I case evaluates the closed identity
/// K(t) = e^{-tD} j(2tD)^{-1} e^{-tD} through the eigendecomposition of D;
/// the general case integrates with adaptive Gauss-Legendre.
Eigen::MatrixXd covariance_K(const OUSystem& sys, double t,
                             CovarianceMethod method = CovarianceMethod::Auto);

/// Hypoellipticity check: K(t) > 0, with threshold relative to trace.
struct KalmanResult {
  bool positive = false;
  double smallest_eigenvalue = 0.0;
};
KalmanResult kalman_check(const OUSystem& sys, double t);

/// Transition kernel of d_t = tr(Q grad^2) + <Bz, grad>:
///   q(z,zeta,t) = (4 pi)^{-m/2} det(tK(t))^{-1/2} exp(-m_t(z,zeta)^2 / 4t),
///   m_t^2 = <K(t)^{-1}(zeta - e^{tB} z), zeta - e^{tB} z>.
/// Throws NumericError if the Kalman condition fails at t.
double hormander_q(const OUSystem& sys, const Eigen::VectorXd& z,
                   const Eigen::VectorXd& zeta, double t);

/// Fourier-side solution oracle (convention f^(xi) = Int e^{-2 pi i <xi,z>} f):
///   u^(xi,t) = e^{-t tr B} e^{-4 t pi^2 <K(t) e^{-tB^T} xi, e^{-tB^T} xi>}
///              f^(e^{-tB^T} xi).
/// Test oracle against hormander_q via numerical Fourier transforms.
std::complex<double> fourier_hat_oracle(
    const OUSystem& sys,
    const std::function<std::complex<double>(const Eigen::VectorXd&)>& f_hat,
    const Eigen::VectorXd& xi, double t);

/// Generalized harmonic oscillator Delta - |Dz|^2 - d_t with D symmetric PSD.
struct OscillatorParams {
  Eigen::MatrixXd D;
  double t = 0.0;

  OscillatorParams(Eigen::MatrixXd D_, double t_);
  int dim() const { return static_cast<int>(D.rows()); }
};

/// Mehler kernel
///   P(z,zeta,t) = (4 pi t)^{-m/2} sqrt(det j(2tD))
///     exp{-(1/4t)[<j(2tD) cosh(2tD) z, z> + <j(2tD) cosh(2tD) zeta, zeta>
///                 - 2 <j(2tD) z, zeta>]}.
double mehler_P(const OscillatorParams& p, const Eigen::VectorXd& z,
                const Eigen::VectorXd& zeta);

/// Scalar-frequency form for D = sqrt(omega) I (the 1866 formula):
///   (4 pi t)^{-n/2} (2 sqrt(w) t / sinh(2 sqrt(w) t))^{n/2}
///   e^{-(sqrt(w)/2)(coth(2 sqrt(w) t)(|x|^2+|y|^2) - 2 csch(2 sqrt(w) t) <x,y>)}.
double mehler_classical(double omega, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y, double t);

/// Conjugation weight linking oscillator and OU solutions:
///   v(z,t) = e^{-(1/2 <Dz,z> + t tr D)} w(z,t).
double oscillator_from_ou_weight(const Eigen::MatrixXd& D, const Eigen::VectorXd& z, double t);
double ou_from_oscillator_weight(const Eigen::MatrixXd& D, const Eigen::VectorXd& z, double t);

/// Function-level transforms for the conjugation above (round trip is the
/// identity up to round-off).
std::function<double(const Eigen::VectorXd&, double)> oscillator_from_ou(
    const Eigen::MatrixXd& D, std::function<double(const Eigen::VectorXd&, double)> w);
std::function<double(const Eigen::VectorXd&, double)> ou_from_oscillator(
    const Eigen::MatrixXd& D, std::function<double(const Eigen::VectorXd&, double)> v);

}  // namespace step2heat
