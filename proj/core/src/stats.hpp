#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "densemimo/simulator.hpp"

namespace densemimo::detail {

/// Compensated (Neumaier) running sum.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Per-realization totals of one measured quantity.
struct Cluster {
  double count = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
};

/// Ratio estimator sum / count over clusters, with the between-cluster variance. Falls back
/// to the within-sample variance when fewer than two clusters carry data.
inline Estimate cluster_estimate(std::span<const Cluster> clusters) {
  NeumaierSum n;
  NeumaierSum s;
  NeumaierSum s2;
  std::size_t used = 0;
  for (const Cluster& c : clusters) {
    n.add(c.count);
    s.add(c.sum);
    s2.add(c.sum_sq);
    if (c.count > 0.0) ++used;
  }
  Estimate e;
  const double total = n.value();
  if (!(total > 0.0)) return e;
  e.mean = s.value() / total;
  double var = 0.0;
  if (used >= 2) {
    NeumaierSum dev;
    for (const Cluster& c : clusters) {
      if (c.count <= 0.0) continue;
      const double r = c.sum - e.mean * c.count;
      dev.add(r * r);
    }
    const double k = static_cast<double>(used);
    var = k / (k - 1.0) * dev.value() / (total * total);
  } else if (total > 1.0) {
    const double sample_var = std::max(0.0, (s2.value() - total * e.mean * e.mean) / (total - 1.0));
    var = sample_var / total;
  }
  e.std_error = std::sqrt(var);
  e.ci_half_width = kZ99 * e.std_error;
  return e;
}

}  // namespace densemimo::detail
