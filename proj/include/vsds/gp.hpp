#pragma once

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include <memory>
#include <vector>

#include "vsds/types.hpp"

namespace vsds {

/// Rotation angle and speed scaling of the modulated flow at one position.
struct ModulationParams {
  double phi = 0.0;    // rad, (-pi, pi]
  double kappa = 0.0;  // > -1
};

}  // namespace vsds

namespace vsds::gp {

/// Squared-exponential kernel hyperparameters. `length_scale` divides the
/// squared distance directly: k = signal_var * exp(-|x - x'|^2 / (2 l)).
struct HyperParams {
  double signal_var = 1.0;
  double length_scale = 0.001;  // m^2
  double noise_var = 0.01;

  void validate() const;
};

[[nodiscard]] double kernel(const Point2& a, const Point2& b, const HyperParams& h);

/// Training pairs: remote-frame positions mapped to modulation parameters.
/// Both output channels share the inputs.
class Dataset {
 public:
  static constexpr double kDuplicateTol = 1e-9;

  Dataset() = default;

  /// Appends a pair unless a stored input lies within kDuplicateTol of `x`.
  /// Returns whether the point was stored.
  bool add(const Point2& x, const ModulationParams& p);

  /// Removes every stored point for which `pred` holds; returns the count.
  template <class Pred>
  std::size_t remove_if(Pred pred) {
    std::size_t removed = 0;
    std::size_t w = 0;
    for (std::size_t r = 0; r < inputs_.size(); ++r) {
      if (pred(inputs_[r], outputs_[r])) {
        ++removed;
        continue;
      }
      inputs_[w] = inputs_[r];
      outputs_[w] = outputs_[r];
      ++w;
    }
    inputs_.resize(w);
    outputs_.resize(w);
    return removed;
  }

  [[nodiscard]] std::size_t size() const { return inputs_.size(); }
  [[nodiscard]] bool empty() const { return inputs_.empty(); }
  [[nodiscard]] const std::vector<Point2>& inputs() const { return inputs_; }
  [[nodiscard]] const std::vector<ModulationParams>& outputs() const { return outputs_; }

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::vector<Point2> inputs_;
  std::vector<ModulationParams> outputs_;
};

struct Prediction {
  ModulationParams mean;
  double variance = 0.0;
};

/// Fitted regressor. Immutable once built; `predict` may be called from any
/// number of threads.
class Model {
 public:
  /// Factorizes K + noise_var * I. Throws SingularKernel when the Cholesky
  /// decomposition fails.
  static Model fit(Dataset dataset, const HyperParams& hyper);

  /// Prior-only model.
  Model() : Model(fit(Dataset{}, HyperParams{})) {}

  [[nodiscard]] Prediction predict(const Point2& x) const;

  /// Predictive variance only; skips the mean accumulation.
  [[nodiscard]] double variance(const Point2& x) const;

  [[nodiscard]] const Dataset& dataset() const { return dataset_; }
  [[nodiscard]] const HyperParams& hyper() const { return hyper_; }

  /// Lower Cholesky factor of K + noise_var * I.
  [[nodiscard]] const Eigen::MatrixXd& cholesky_factor() const { return chol_l_; }

 private:
  Model(Dataset d, HyperParams h) : dataset_(std::move(d)), hyper_(h) {}

  Eigen::VectorXd kernel_vector(const Point2& x) const;

  Dataset dataset_;
  HyperParams hyper_;
  Eigen::MatrixXd chol_l_;
  Eigen::MatrixXd weights_;  // (K + noise I)^-1 Y, n x 2 (phi, kappa)
};

using ModelPtr = std::shared_ptr<const Model>;

}  // namespace vsds::gp
