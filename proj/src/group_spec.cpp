#include "step2heat/group_spec.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "step2heat/errors.hpp"

namespace step2heat {

namespace {

// Entries come from hand-written documents with small integers; anything
// larger than this relative to the matrix scale is a real violation.
constexpr double kSkewTol = 1e-12;

double max_abs(const Eigen::MatrixXd& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace

GroupSpec::GroupSpec(std::string name, int m, int k, std::vector<Eigen::MatrixXd> J)
    : name_(std::move(name)), m_(m), k_(k), J_(std::move(J)) {
  if (m_ < 2) throw ValidationError("m must be at least 2 (got " + std::to_string(m_) + ")");
  if (k_ < 1) throw ValidationError("k must be at least 1 (got " + std::to_string(k_) + ")");
  if (static_cast<int>(J_.size()) != k_)
    throw ValidationError("expected k=" + std::to_string(k_) + " matrices, got " +
                          std::to_string(J_.size()));

  double scale = 0.0;
  for (int l = 0; l < k_; ++l) {
    const Eigen::MatrixXd& Jl = J_[l];
    if (Jl.rows() != m_ || Jl.cols() != m_)
      throw ValidationError("J[" + std::to_string(l) + "] is not " + std::to_string(m_) + "x" +
                            std::to_string(m_));
    scale = std::max(scale, max_abs(Jl));
    double skew = max_abs(Jl + Jl.transpose());
    if (skew > kSkewTol * std::max(1.0, max_abs(Jl)))
      throw ValidationError("J[" + std::to_string(l) + "] is not skew-symmetric (max |J+J^T| = " +
                            std::to_string(skew) + ")");
  }
  if (scale == 0.0) throw ValidationError("all J matrices are zero; the group is abelian");

  // Independence of {J_l} as vectors in R^{m^2}: the k x m^2 stacking has rank k.
  Eigen::MatrixXd stacked(k_, m_ * m_);
  for (int l = 0; l < k_; ++l)
    stacked.row(l) = Eigen::Map<const Eigen::VectorXd>(J_[l].data(), m_ * m_).transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(stacked);
  lu.setThreshold(1e-12);
  if (lu.rank() != k_)
    throw ValidationError("the matrices J[0..k) are linearly dependent (rank " +
                          std::to_string(lu.rank()) + " < k=" + std::to_string(k_) + ")");

  // H-type iff the bilinear anticommutation relations hold.
  heisenberg_type_ = true;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m_, m_);
  for (int l = 0; l < k_ && heisenberg_type_; ++l)
    for (int lp = l; lp < k_ && heisenberg_type_; ++lp) {
      Eigen::MatrixXd anti = J_[l] * J_[lp] + J_[lp] * J_[l];
      if (l == lp) anti += 2.0 * eye;
      if (max_abs(anti) > 1e-12) heisenberg_type_ = false;
    }
}

void GroupSpec::check_point(const GroupPoint& g) const {
  if (g.z.size() != m_ || g.sigma.size() != k_)
    throw ValidationError("point dimensions (" + std::to_string(g.z.size()) + "," +
                          std::to_string(g.sigma.size()) + ") do not match group (m=" +
                          std::to_string(m_) + ", k=" + std::to_string(k_) + ")");
}

Eigen::MatrixXd GroupSpec::j_of(const Eigen::VectorXd& lambda) const {
  if (lambda.size() != k_) throw ValidationError("lambda has wrong dimension");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m_, m_);
  for (int l = 0; l < k_; ++l)
    if (lambda[l] != 0.0) out += lambda[l] * J_[l];
  return out;
}

GroupPoint GroupSpec::multiply(const GroupPoint& g, const GroupPoint& h) const {
  check_point(g);
  check_point(h);
  GroupPoint out;
  out.z = g.z + h.z;
  out.sigma = g.sigma + h.sigma;
  for (int l = 0; l < k_; ++l) out.sigma[l] += 0.5 * (J_[l] * g.z).dot(h.z);
  return out;
}

GroupPoint GroupSpec::inverse(const GroupPoint& g) const {
  check_point(g);
  return GroupPoint{-g.z, -g.sigma};
}

GroupPoint GroupSpec::dilate(double r, const GroupPoint& g) const {
  if (!(r > 0.0)) throw ValidationError("dilation factor must be positive");
  check_point(g);
  return GroupPoint{r * g.z, r * r * g.sigma};
}

Eigen::MatrixXd HorizontalOperator::sigma_coeff(const Eigen::VectorXd& z) const {
  int k = spec_->k();
  Eigen::MatrixXd jz(z.size(), k);
  for (int l = 0; l < k; ++l) jz.col(l) = spec_->J(l) * z;
  return 0.25 * (jz.transpose() * jz);
}

Eigen::MatrixXd HorizontalOperator::theta_coeff(const Eigen::VectorXd& z) const {
  int k = spec_->k();
  Eigen::MatrixXd out(k, z.size());
  for (int l = 0; l < k; ++l) out.row(l) = (spec_->J(l) * z).transpose();
  return out;
}

// ---------------------------------------------------------------------------
// Document I/O

GroupSpec parse_group_spec(const std::string& document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed group document: ") + e.what());
  }
  try {
    std::string name = doc.value("name", std::string("unnamed"));
    if (!doc.contains("m") || !doc.contains("k") || !doc.contains("J"))
      throw ValidationError("group document must contain fields m, k, J");
    int m = doc.at("m").get<int>();
    int k = doc.at("k").get<int>();
    const auto& jlist = doc.at("J");
    if (!jlist.is_array())
      throw ValidationError("field J must be an array of matrices");
    std::vector<Eigen::MatrixXd> J;
    J.reserve(jlist.size());
    for (const auto& entry : jlist) {
      Eigen::MatrixXd M(m, m);
      if (entry.is_array() && !entry.empty() && entry[0].is_array()) {
        // nested rows
        if (static_cast<int>(entry.size()) != m)
          throw ValidationError("matrix has wrong row count");
        for (int i = 0; i < m; ++i) {
          if (static_cast<int>(entry[i].size()) != m)
            throw ValidationError("matrix row has wrong length");
          for (int j = 0; j < m; ++j) M(i, j) = entry[i][j].get<double>();
        }
      } else {
        // flat row-major
        if (static_cast<int>(entry.size()) != m * m)
          throw ValidationError("flat matrix must have m*m entries");
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) M(i, j) = entry[i * m + j].get<double>();
      }
      J.push_back(std::move(M));
    }
    return GroupSpec(name, m, k, std::move(J));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed group document: ") + e.what());
  }
}

GroupSpec load_group_spec(const std::string& path_or_builtin) {
  constexpr const char* prefix = "builtin:";
  if (path_or_builtin.rfind(prefix, 0) == 0)
    return builtin_group(path_or_builtin.substr(std::string(prefix).size()));
  std::ifstream in(path_or_builtin);
  if (!in) throw ValidationError("cannot open group document: " + path_or_builtin);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_group_spec(buf.str());
}

std::string to_json(const GroupSpec& spec) {
  nlohmann::json doc;
  doc["name"] = spec.name();
  doc["m"] = spec.m();
  doc["k"] = spec.k();
  auto jlist = nlohmann::json::array();
  for (int l = 0; l < spec.k(); ++l) {
    auto flat = nlohmann::json::array();
    const Eigen::MatrixXd& M = spec.J(l);
    for (int i = 0; i < spec.m(); ++i)
      for (int j = 0; j < spec.m(); ++j) flat.push_back(M(i, j));
    jlist.push_back(std::move(flat));
  }
  doc["J"] = std::move(jlist);
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Built-in groups

GroupSpec heisenberg_group(int n) {
  if (n < 1) throw ValidationError("heisenberg_group requires n >= 1");
  int m = 2 * n;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < n; ++i) {
    J(2 * i, 2 * i + 1) = 1.0;
    J(2 * i + 1, 2 * i) = -1.0;
  }
  return GroupSpec("heisenberg" + std::to_string(n), m, 1, {J});
}

GroupSpec quaternionic_group() {
  // Left multiplication by the quaternion units i, j, k on R^4.
  Eigen::MatrixXd Li = Eigen::MatrixXd::Zero(4, 4);
  Li(0, 1) = -1; Li(1, 0) = 1; Li(2, 3) = -1; Li(3, 2) = 1;
  Eigen::MatrixXd Lj = Eigen::MatrixXd::Zero(4, 4);
  Lj(0, 2) = -1; Lj(2, 0) = 1; Lj(1, 3) = 1; Lj(3, 1) = -1;
  Eigen::MatrixXd Lk = Eigen::MatrixXd::Zero(4, 4);
  Lk(0, 3) = -1; Lk(3, 0) = 1; Lk(1, 2) = -1; Lk(2, 1) = 1;
  return GroupSpec("quaternionic", 4, 3, {Li, Lj, Lk});
}

GroupSpec free_step_two(int q) {
  if (q < 2) throw ValidationError("free_step_two requires q >= 2");
  std::vector<Eigen::MatrixXd> J;
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(q, q);
      M(i, j) = 1.0;
      M(j, i) = -1.0;
      J.push_back(std::move(M));
    }
  return GroupSpec("free" + std::to_string(q), q, q * (q - 1) / 2, std::move(J));
}

GroupSpec builtin_group(const std::string& name) {
  if (name == "heisenberg1") return heisenberg_group(1);
  if (name == "heisenberg2") return heisenberg_group(2);
  if (name == "heisenberg3") return heisenberg_group(3);
  if (name == "quaternionic") return quaternionic_group();
  if (name == "free3") return free_step_two(3);
  if (name == "free4") return free_step_two(4);
  throw ValidationError("unknown builtin group: " + name);
}

std::vector<std::string> builtin_group_names() {
  return {"heisenberg1", "heisenberg2", "heisenberg3", "quaternionic", "free3", "free4"};
}

}  // namespace step2heat
