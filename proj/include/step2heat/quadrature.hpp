#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace step2heat {

/// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
/// the Legendre recurrence and cached per n (thread-safe).
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};
const Rule1D& gauss_legendre(int n);

/// Node-count ladder used by every refinement loop. Snapping keeps repeated
/// evaluations on shared grids so per-grid caches stay hot.
int ladder_snap(int n);
int ladder_next(int n);

/// Tensor Gauss-Legendre grid over [-R, R]^k restricted to the half-space
/// lambda_k > 0. The grid is symmetric under lambda -> -lambda, so for an
/// integrand with even real part the full integral is twice the half sum.
struct HalfGrid {
  int k = 0;
  double R = 0.0;
  int n = 0;                     // nodes per dimension
  std::size_t count = 0;         // number of half-domain nodes
  std::vector<double> lambda;    // count*k, node i at [i*k, (i+1)*k)
  std::vector<double> weight;    // count
};
HalfGrid make_half_grid(int k, double R, int n);

/// Integral of f over [-R, R]^k by globally adaptive subdivision with the
/// embedded degree-7/5 Genz-Malik rule (degree-10/7 Gauss-Kronrod-free
/// alternative in one dimension). Intended for k >= 4 where tensor grids
/// are not affordable; works for any k >= 1.
double adaptive_cubature(const std::function<double(const double*)>& f, int k,
                         double R, double rel_tol, std::size_t max_evals,
                         double* est_error);

/// Adaptive Gauss-Legendre on [a, b] for matrix-valued integrands:
/// bisection until the 15- vs 7-node panel difference meets rel_tol.
Eigen::MatrixXd adaptive_gl_matrix(const std::function<Eigen::MatrixXd(double)>& f,
                                   double a, double b, double rel_tol = 1e-12,
                                   int max_depth = 24);

}  // namespace step2heat
