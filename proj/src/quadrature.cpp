#include "step2heat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include "step2heat/errors.hpp"

namespace step2heat {

namespace {

Rule1D compute_gauss_legendre(int n) {
  Rule1D rule;
  rule.x.resize(n);
  rule.w.resize(n);
  // Newton on P_n with Chebyshev-style initial guesses; symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {  // ascend the three-term recurrence
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      double dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
    }
    double dp = n * (x * p0 - p1) / (x * x - 1.0);
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

std::mutex g_rule_mutex;
std::map<int, Rule1D> g_rules;

constexpr int kLadder[] = {8,   12,  16,  24,  32,  48,   64,   96,   128,  192,
                           256, 384, 512, 768, 1024, 1536, 2048, 3072, 4096};

}  // namespace

const Rule1D& gauss_legendre(int n) {
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = g_rules.find(n);
  if (it == g_rules.end()) it = g_rules.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

int ladder_snap(int n) {
  for (int v : kLadder)
    if (v >= n) return v;
  return kLadder[std::size(kLadder) - 1];
}

int ladder_next(int n) {
  for (int v : kLadder)
    if (v > n) return v;
  return kLadder[std::size(kLadder) - 1];
}

HalfGrid make_half_grid(int k, double R, int n) {
  const Rule1D& r = gauss_legendre(n);
  HalfGrid grid;
  grid.k = k;
  grid.R = R;
  grid.n = n;
  // Last coordinate runs over the positive nodes only. Gauss nodes for even n
  // avoid 0, for odd n the 0 node sits on the symmetry plane; we use even
  // ladder values so the half-grid split is exact.
  std::vector<double> full_x(n), full_w(n), half_x, half_w;
  for (int i = 0; i < n; ++i) {
    full_x[i] = R * r.x[i];
    full_w[i] = R * r.w[i];
    if (r.x[i] > 0.0) {
      half_x.push_back(R * r.x[i]);
      half_w.push_back(R * r.w[i]);
    }
  }
  std::size_t npos = half_x.size();
  std::size_t total = npos;
  for (int d = 0; d + 1 < k; ++d) total *= n;
  grid.count = total;
  grid.lambda.resize(total * k);
  grid.weight.resize(total);
  std::vector<int> idx(k, 0);
  for (std::size_t i = 0; i < total; ++i) {
    double w = 1.0;
    for (int d = 0; d + 1 < k; ++d) {
      grid.lambda[i * k + d] = full_x[idx[d]];
      w *= full_w[idx[d]];
    }
    grid.lambda[i * k + (k - 1)] = half_x[idx[k - 1]];
    w *= half_w[idx[k - 1]];
    grid.weight[i] = w;
    for (int d = 0; d < k; ++d) {
      if (++idx[d] < ((d + 1 < k) ? n : static_cast<int>(npos))) break;
      idx[d] = 0;
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Genz-Malik adaptive cubature

namespace {

struct GMRule {
  int k;
  double l2, l4, l5;
  double w1, w2, w3, w4, w5;       // degree-7 weights (per point)
  double e1, e2, e3, e4;           // embedded degree-5 weights
};

GMRule make_gm(int k) {
  GMRule r;
  r.k = k;
  r.l2 = std::sqrt(9.0 / 70.0);
  r.l4 = std::sqrt(9.0 / 10.0);
  r.l5 = std::sqrt(9.0 / 19.0);
  double kk = k;
  r.w1 = (12824.0 - 9120.0 * kk + 400.0 * kk * kk) / 19683.0;
  r.w2 = 980.0 / 6561.0;
  r.w3 = (1820.0 - 400.0 * kk) / 19683.0;
  r.w4 = 200.0 / 19683.0;
  r.w5 = 6859.0 / 19683.0 / std::pow(2.0, k);
  r.e1 = (729.0 - 950.0 * kk + 50.0 * kk * kk) / 729.0;
  r.e2 = 245.0 / 486.0;
  r.e3 = (265.0 - 100.0 * kk) / 1458.0;
  r.e4 = 25.0 / 729.0;
  return r;
}

struct Region {
  std::vector<double> lo, hi;
  double value = 0.0, error = 0.0;
  int split_dim = 0;
};

// Applies the embedded rule on one hyperrectangle; fills value/error and the
// dimension with the largest fourth divided difference.
void gm_apply(const GMRule& r, const std::function<double(const double*)>& f,
              Region& reg, std::size_t& evals) {
  int k = r.k;
  std::vector<double> c(k), h(k), p(k);
  double vol = 1.0;
  for (int d = 0; d < k; ++d) {
    c[d] = 0.5 * (reg.lo[d] + reg.hi[d]);
    h[d] = 0.5 * (reg.hi[d] - reg.lo[d]);
    vol *= 2.0 * h[d];
  }
  auto eval_at = [&](const std::vector<double>& q) {
    ++evals;
    return f(q.data());
  };

  double f1 = eval_at(c);
  double s2 = 0.0, s3 = 0.0;
  std::vector<double> fourth(k, 0.0);
  for (int d = 0; d < k; ++d) {
    p = c;
    p[d] = c[d] + r.l2 * h[d];
    double fa = eval_at(p);
    p[d] = c[d] - r.l2 * h[d];
    double fb = eval_at(p);
    p[d] = c[d] + r.l4 * h[d];
    double fc = eval_at(p);
    p[d] = c[d] - r.l4 * h[d];
    double fd = eval_at(p);
    s2 += fa + fb;
    s3 += fc + fd;
    // fourth divided difference along axis d (split heuristic)
    fourth[d] = std::fabs(fa + fb - 2.0 * f1 - (r.l2 / r.l4) * (r.l2 / r.l4) * (fc + fd - 2.0 * f1));
  }
  double s4 = 0.0;
  for (int d1 = 0; d1 < k; ++d1)
    for (int d2 = d1 + 1; d2 < k; ++d2)
      for (double sa : {-1.0, 1.0})
        for (double sb : {-1.0, 1.0}) {
          p = c;
          p[d1] = c[d1] + sa * r.l4 * h[d1];
          p[d2] = c[d2] + sb * r.l4 * h[d2];
          s4 += eval_at(p);
        }
  double s5 = 0.0;
  std::vector<int> signs(k, 0);
  for (;;) {
    p = c;
    for (int d = 0; d < k; ++d) p[d] = c[d] + (signs[d] ? 1.0 : -1.0) * r.l5 * h[d];
    s5 += eval_at(p);
    int d = 0;
    for (; d < k; ++d) {
      if (signs[d] == 0) {
        signs[d] = 1;
        break;
      }
      signs[d] = 0;
    }
    if (d == k) break;
  }

  double v7 = vol * (r.w1 * f1 + r.w2 * s2 + r.w3 * s3 + r.w4 * s4 + r.w5 * s5);
  double v5 = vol * (r.e1 * f1 + r.e2 * s2 + r.e3 * s3 + r.e4 * s4);
  reg.value = v7;
  reg.error = std::fabs(v7 - v5);
  reg.split_dim =
      static_cast<int>(std::max_element(fourth.begin(), fourth.end()) - fourth.begin());
}

}  // namespace

double adaptive_cubature(const std::function<double(const double*)>& f, int k,
                         double R, double rel_tol, std::size_t max_evals,
                         double* est_error) {
  GMRule rule = make_gm(k);
  std::size_t evals = 0;
  auto cmp = [](const Region& a, const Region& b) { return a.error < b.error; };
  std::priority_queue<Region, std::vector<Region>, decltype(cmp)> heap(cmp);

  Region root;
  root.lo.assign(k, -R);
  root.hi.assign(k, R);
  gm_apply(rule, f, root, evals);
  double total = root.value, toterr = root.error;
  heap.push(std::move(root));

  while (toterr > rel_tol * std::max(std::fabs(total), 1e-300) && evals < max_evals) {
    Region worst = heap.top();
    heap.pop();
    total -= worst.value;
    toterr -= worst.error;
    int d = worst.split_dim;
    double mid = 0.5 * (worst.lo[d] + worst.hi[d]);
    for (int half = 0; half < 2; ++half) {
      Region child;
      child.lo = worst.lo;
      child.hi = worst.hi;
      (half == 0 ? child.hi[d] : child.lo[d]) = mid;
      gm_apply(rule, f, child, evals);
      total += child.value;
      toterr += child.error;
      heap.push(std::move(child));
    }
  }
  if (est_error) *est_error = toterr;
  return total;
}

Eigen::MatrixXd adaptive_gl_matrix(const std::function<Eigen::MatrixXd(double)>& f,
                                   double a, double b, double rel_tol, int max_depth) {
  const Rule1D& lo = gauss_legendre(8);
  const Rule1D& hi = gauss_legendre(16);
  std::function<Eigen::MatrixXd(double, double, int)> go =
      [&](double x0, double x1, int depth) -> Eigen::MatrixXd {
    double c = 0.5 * (x0 + x1), h = 0.5 * (x1 - x0);
    Eigen::MatrixXd vlo, vhi;
    for (std::size_t i = 0; i < lo.x.size(); ++i) {
      Eigen::MatrixXd fi = f(c + h * lo.x[i]) * (h * lo.w[i]);
      vlo = i == 0 ? fi : Eigen::MatrixXd(vlo + fi);
    }
    for (std::size_t i = 0; i < hi.x.size(); ++i) {
      Eigen::MatrixXd fi = f(c + h * hi.x[i]) * (h * hi.w[i]);
      vhi = i == 0 ? fi : Eigen::MatrixXd(vhi + fi);
    }
    double err = (vhi - vlo).cwiseAbs().maxCoeff();
    double scale = std::max(vhi.cwiseAbs().maxCoeff(), 1e-300);
    if (err <= rel_tol * scale || depth >= max_depth) return vhi;
    return go(x0, c, depth + 1) + go(c, x1, depth + 1);
  };
  return go(a, b, 0);
}

}  // namespace step2heat
