#include "vsds/gp.hpp"

#include <cmath>

#include "vsds/errors.hpp"

namespace vsds::gp {

void HyperParams::validate() const {
  if (!(signal_var > 0.0) || !(length_scale > 0.0) || !(noise_var >= 0.0))
    throw InvalidArgument("gp hyperparameters must satisfy signal_var > 0, length_scale > 0, noise_var >= 0");
}

double kernel(const Point2& a, const Point2& b, const HyperParams& h) {
  return h.signal_var * std::exp(-(a - b).squaredNorm() / (2.0 * h.length_scale));
}

bool Dataset::add(const Point2& x, const ModulationParams& p) {
  for (const auto& xi : inputs_)
    if ((xi - x).norm() <= kDuplicateTol) return false;
  inputs_.push_back(x);
  outputs_.push_back(p);
  return true;
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.inputs_[i] != b.inputs_[i]) return false;
    if (a.outputs_[i].phi != b.outputs_[i].phi || a.outputs_[i].kappa != b.outputs_[i].kappa) return false;
  }
  return true;
}

Model Model::fit(Dataset dataset, const HyperParams& hyper) {
  hyper.validate();
  Model m(std::move(dataset), hyper);
  const auto n = static_cast<Eigen::Index>(m.dataset_.size());
  if (n == 0) return m;

  const auto& xs = m.dataset_.inputs();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = hyper.signal_var + hyper.noise_var;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = kernel(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)], hyper);
      k(i, j) = v;
      k(j, i) = v;
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success)
    throw SingularKernel("cholesky factorization of the kernel matrix failed (duplicate inputs?)");
  m.chol_l_ = llt.matrixL();

  Eigen::MatrixXd y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i, 0) = m.dataset_.outputs()[static_cast<std::size_t>(i)].phi;
    y(i, 1) = m.dataset_.outputs()[static_cast<std::size_t>(i)].kappa;
  }
  m.weights_ = llt.solve(y);
  return m;
}

Eigen::VectorXd Model::kernel_vector(const Point2& x) const {
  const auto& xs = dataset_.inputs();
  Eigen::VectorXd ks(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) ks(static_cast<Eigen::Index>(i)) = kernel(x, xs[i], hyper_);
  return ks;
}

double Model::variance(const Point2& x) const {
  if (dataset_.empty()) return hyper_.signal_var;
  Eigen::VectorXd v = kernel_vector(x);
  chol_l_.triangularView<Eigen::Lower>().solveInPlace(v);
  return std::max(0.0, hyper_.signal_var - v.squaredNorm());
}

Prediction Model::predict(const Point2& x) const {
  Prediction out;
  if (dataset_.empty()) {
    out.variance = hyper_.signal_var;
    return out;
  }
  Eigen::VectorXd ks = kernel_vector(x);

  // Means are accumulated in stored-point order so that a reloaded dataset
  // reproduces predictions bit for bit.
  double phi = 0.0;
  double kappa = 0.0;
  for (Eigen::Index i = 0; i < ks.size(); ++i) {
    phi += ks(i) * weights_(i, 0);
    kappa += ks(i) * weights_(i, 1);
  }
  out.mean = {phi, kappa};

  chol_l_.triangularView<Eigen::Lower>().solveInPlace(ks);
  out.variance = std::max(0.0, hyper_.signal_var - ks.squaredNorm());
  return out;
}

}  // namespace vsds::gp
