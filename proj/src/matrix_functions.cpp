#include "step2heat/matrix_functions.hpp"

#include <cmath>
#include <cstdint>

#include "step2heat/errors.hpp"

namespace step2heat {

double j_scalar(double x) {
  x = std::fabs(x);
  if (x < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
  }
  if (x < 1.0) return x / std::sinh(x);
  // 2x e^{-x} / (1 - e^{-2x}): no overflow, graceful underflow to 0.
  double e = std::exp(-x);
  return 2.0 * x * e / (1.0 - e * e);
}

double xcoth(double x) {
  x = std::fabs(x);
  if (x < 1e-4) {
    double x2 = x * x;
    return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x / std::tanh(x);
}

double sinhc(double x) {
  x = std::fabs(x);
  if (x < 1e-4) {
    double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

Eigen::MatrixXd a_of(const GroupSpec& spec, const Eigen::VectorXd& lambda) {
  Eigen::MatrixXd J = spec.j_of(lambda);
  return J.transpose() * J;
}

SpectralData spectral(const GroupSpec& spec, const Eigen::VectorXd& lambda) {
  Eigen::MatrixXd A = a_of(spec, lambda);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw NumericError("eigensolver failed on A(lambda); non-symmetric input upstream");

  SpectralData sd;
  sd.lambda = lambda;
  sd.eigenvalues = es.eigenvalues();
  sd.eigenvectors = es.eigenvectors();

  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  int m = static_cast<int>(sd.eigenvalues.size());
  sd.sqrt_mu.resize(m);
  sd.j_sqrt.resize(m);
  sd.xcoth_sqrt.resize(m);
  sd.det_j = 1.0;
  for (int i = 0; i < m; ++i) {
    double mu = sd.eigenvalues[i];
    if (mu < -1e-12 * scale)
      throw NumericError("A(lambda) has a significantly negative eigenvalue; upstream bug");
    if (mu < 0.0) mu = 0.0;
    sd.eigenvalues[i] = mu;
    sd.sqrt_mu[i] = std::sqrt(mu);
    sd.j_sqrt[i] = j_scalar(sd.sqrt_mu[i]);
    sd.xcoth_sqrt[i] = xcoth(sd.sqrt_mu[i]);
    sd.det_j *= sd.j_sqrt[i];
  }
  return sd;
}

Eigen::MatrixXd even_apply(const SpectralData& sd, const std::function<double(double)>& f) {
  Eigen::VectorXd d(sd.sqrt_mu.size());
  for (int i = 0; i < d.size(); ++i) d[i] = f(sd.sqrt_mu[i]);
  return sd.eigenvectors * d.asDiagonal() * sd.eigenvectors.transpose();
}

double det_j_sqrtA(const SpectralData& sd) { return sd.det_j; }

namespace {

// Deterministic 64-bit mix for reproducible quasi-random sphere samples.
uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Quasi-uniform points on S^{k-1}: exact poles for k=1, golden-angle ladder
// for k=2, seeded Gaussian normalization otherwise.
std::vector<Eigen::VectorXd> sphere_samples(int k, int n) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  if (k == 1) {
    Eigen::VectorXd v(1);
    v[0] = 1.0;
    out.push_back(v);
    return out;
  }
  if (k == 2) {
    for (int i = 0; i < n; ++i) {
      double th = M_PI * i / n;  // half circle; +-lambda give the same A
      Eigen::VectorXd v(2);
      v << std::cos(th), std::sin(th);
      out.push_back(v);
    }
    return out;
  }
  uint64_t state = 0x5eed5eedULL + static_cast<uint64_t>(k);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v(k);
    for (int j = 0; j < k; ++j) {
      double u1 = uniform01(state), u2 = uniform01(state);
      if (u1 < 1e-300) u1 = 1e-300;
      v[j] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    double nrm = v.norm();
    if (nrm < 1e-8) { --i; continue; }
    out.push_back(v / nrm);
  }
  return out;
}

double second_largest_singular(const GroupSpec& spec, const Eigen::VectorXd& lambda) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_of(spec, lambda));
  const Eigen::VectorXd& mu = es.eigenvalues();  // ascending
  double v = mu[mu.size() - 2];
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

double largest_singular(const GroupSpec& spec, const Eigen::VectorXd& lambda) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_of(spec, lambda));
  double v = es.eigenvalues().maxCoeff();
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

// Derivative-free sphere minimization: axis perturbations with shrinking
// step, renormalized to the sphere. The objective is Lipschitz but only
// piecewise smooth (eigenvalue crossings), so no gradients.
template <typename F>
double refine_on_sphere(const F& f, Eigen::VectorXd x, double fx, int iters) {
  int k = static_cast<int>(x.size());
  if (k == 1) return fx;
  double step = 0.25;
  for (int it = 0; it < iters; ++it) {
    bool improved = false;
    for (int j = 0; j < k; ++j) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd y = x;
        y[j] += sgn * step;
        y.normalize();
        double fy = f(y);
        if (fy < fx) {
          fx = fy;
          x = y;
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      if (step < 1e-7) break;
    }
  }
  return fx;
}

}  // namespace

DecayEstimate estimate_k0(const GroupSpec& spec, int samples, double safety_factor) {
  if (samples < 64) samples = 64;
  auto f = [&](const Eigen::VectorXd& v) { return second_largest_singular(spec, v); };
  auto pts = sphere_samples(spec.k(), samples);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd argbest;
  for (const auto& v : pts) {
    double fv = f(v);
    if (fv < best) {
      best = fv;
      argbest = v;
    }
  }
  best = refine_on_sphere(f, argbest, best, 60);
  if (!(best > 0.0))
    throw NumericError("decay-constant estimate is not positive; spec violates the rank-2 property");
  DecayEstimate d;
  d.k0 = safety_factor * best;
  d.sample_count = static_cast<int>(pts.size());
  d.safety_factor = safety_factor;
  return d;
}

double estimate_smax(const GroupSpec& spec, int samples) {
  auto f = [&](const Eigen::VectorXd& v) { return -largest_singular(spec, v); };
  auto pts = sphere_samples(spec.k(), samples);
  double best = 0.0;
  Eigen::VectorXd argbest = pts.front();
  for (const auto& v : pts) {
    double fv = f(v);
    if (fv < -best) {
      best = -fv;
      argbest = v;
    }
  }
  best = -refine_on_sphere(f, argbest, -best, 60);
  return 1.05 * best;  // maximization with headroom
}

}  // namespace step2heat
