#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "riccilab/geometry.hpp"
#include "riccilab/random_fields.hpp"

namespace riccilab::testing {

inline constexpr double kTau = 2.0 * std::numbers::pi;

// Smooth analytic conformal factor u and its exact partials, used as oracle
// input for christoffel/curvature checks.
struct ConformalTestFunction {
  double amplitude = 0.05;

  double u(const std::vector<double>& x) const {
    double s = std::sin(kTau * x[0]) * std::cos(kTau * x[1]);
    if (x.size() > 2) s *= std::cos(kTau * x[2]);
    return amplitude * s;
  }

  double du(const std::vector<double>& x, int axis) const {
    const double cx = std::cos(kTau * x[0]), sx = std::sin(kTau * x[0]);
    const double cy = std::cos(kTau * x[1]), sy = std::sin(kTau * x[1]);
    const double cz = x.size() > 2 ? std::cos(kTau * x[2]) : 1.0;
    const double sz = x.size() > 2 ? std::sin(kTau * x[2]) : 0.0;
    double v = 0;
    switch (axis) {
      case 0: v = kTau * cx * cy * cz; break;
      case 1: v = -kTau * sx * sy * cz; break;
      case 2: v = -kTau * sx * cy * sz; break;
    }
    return amplitude * v;
  }

  double laplacian(const std::vector<double>& x) const {
    const int n = x.size() > 2 ? 3 : 2;
    return -n * kTau * kTau * u(x);
  }
};

inline std::vector<double> point_coords(const Chart& chart, long p) {
  std::vector<double> x(chart.dim());
  for (int a = 0; a < chart.dim(); ++a) x[a] = chart.position(p, a);
  return x;
}

template <typename F>
Eigen::ArrayXd sample_scalar(const Chart& chart, F&& f) {
  Eigen::ArrayXd out(chart.points());
  for (long p = 0; p < chart.points(); ++p) {
    const std::vector<double> x = point_coords(chart, p);
    out[p] = f(x);
  }
  return out;
}

// Observed convergence order from residuals at successively doubled N.
inline double observed_order(const std::vector<double>& residuals) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i)
    worst = std::min(worst, std::log2(residuals[i] / residuals[i + 1]));
  return worst;
}

}  // namespace riccilab::testing
