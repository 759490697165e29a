#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <utility>
#include <vector>

// Independent reference implementations used by the tests. None of them share
// code with the library beyond plain data types.
namespace vsds::testing {

inline std::filesystem::path data_dir() { return VSDS_TEST_DATA_DIR; }

/// Gauss-Jordan inverse with partial pivoting on a dense row-major matrix.
inline std::vector<std::vector<double>> naive_inverse(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(inv[c], inv[p]);
    const double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

struct NaivePrediction {
  double phi = 0.0;
  double kappa = 0.0;
  double variance = 0.0;
};

/// Direct-inverse GP posterior: mean k^T (K + s I)^-1 y, variance
/// g - k^T (K + s I)^-1 k, with k(a, b) = g exp(-|a - b|^2 / (2 l)).
class NaiveGp {
 public:
  NaiveGp(std::vector<std::pair<double, double>> xs, std::vector<double> phi, std::vector<double> kappa, double g,
          double l, double s)
      : xs_(std::move(xs)), phi_(std::move(phi)), kappa_(std::move(kappa)), g_(g), l_(l) {
    const std::size_t n = xs_.size();
    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) k[i][j] = kern(xs_[i], xs_[j]) + (i == j ? s : 0.0);
    inv_ = naive_inverse(std::move(k));
  }

  [[nodiscard]] NaivePrediction predict(std::pair<double, double> x) const {
    const std::size_t n = xs_.size();
    std::vector<double> kx(n);
    for (std::size_t i = 0; i < n; ++i) kx[i] = kern(x, xs_[i]);
    NaivePrediction out;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += inv_[i][j] * kx[j];
      out.phi += row * phi_[i];
      out.kappa += row * kappa_[i];
      quad += kx[i] * row;
    }
    out.variance = g_ - quad;
    return out;
  }

 private:
  [[nodiscard]] double kern(std::pair<double, double> a, std::pair<double, double> b) const {
    const double dy = a.first - b.first;
    const double dz = a.second - b.second;
    return g_ * std::exp(-(dy * dy + dz * dz) / (2.0 * l_));
  }

  std::vector<std::pair<double, double>> xs_;
  std::vector<double> phi_, kappa_;
  double g_, l_;
  std::vector<std::vector<double>> inv_;
};

/// Distance from (y, z) to a polyline given as parallel coordinate lists.
template <class Pt>
double distance_to_polyline(const std::vector<Pt>& pts, const Pt& x) {
  double best = INFINITY;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double ay = pts[i].x(), az = pts[i].y();
    const double dy = pts[i + 1].x() - ay, dz = pts[i + 1].y() - az;
    const double len2 = dy * dy + dz * dz;
    double t = len2 > 0.0 ? ((x.x() - ay) * dy + (x.y() - az) * dz) / len2 : 0.0;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    const double ey = ay + t * dy - x.x(), ez = az + t * dz - x.y();
    best = std::min(best, std::sqrt(ey * ey + ez * ez));
  }
  return best;
}

}  // namespace vsds::testing
