#pragma once

#include <Eigen/Core>

#include <array>
#include <memory>
#include <vector>

#include "riccilab/errors.hpp"

namespace riccilab {

// Periodic rectangular coordinate chart.  Points are stored in lexicographic
// (row-major) order with axis 0 slowest and the last axis fastest; all index
// arithmetic wraps exactly.  Charts are immutable and shared between fields.
class Chart {
 public:
  static constexpr int kMinPointsPerAxis = 8;

  Chart(int dim, std::vector<int> extents, std::vector<double> periods)
      : dim_(dim), extents_(std::move(extents)), periods_(std::move(periods)) {
    if (dim_ != 2 && dim_ != 3)
      throw InvariantViolation("chart dimension must be 2 or 3");
    if (static_cast<int>(extents_.size()) != dim_ ||
        static_cast<int>(periods_.size()) != dim_)
      throw InvariantViolation("chart extent/period arrays must match dimension");
    points_ = 1;
    for (int a = 0; a < dim_; ++a) {
      if (extents_[a] < kMinPointsPerAxis)
        throw InvariantViolation("chart needs at least 8 points per axis");
      if (!(periods_[a] > 0.0))
        throw InvariantViolation("chart period lengths must be positive");
      spacings_.push_back(periods_[a] / extents_[a]);
      points_ *= extents_[a];
    }
    build_shift_maps();
  }

  static std::shared_ptr<const Chart> cubic(int dim, int points_per_axis,
                                            double period = 1.0) {
    return std::make_shared<const Chart>(
        dim, std::vector<int>(dim, points_per_axis),
        std::vector<double>(dim, period));
  }

  int dim() const { return dim_; }
  long points() const { return points_; }
  int extent(int axis) const { return extents_[axis]; }
  double period(int axis) const { return periods_[axis]; }
  double spacing(int axis) const { return spacings_[axis]; }

  double min_spacing() const {
    double s = spacings_[0];
    for (double v : spacings_) s = std::min(s, v);
    return s;
  }
  double max_spacing() const {
    double s = spacings_[0];
    for (double v : spacings_) s = std::max(s, v);
    return s;
  }

  // Volume of one grid cell (the quadrature weight of the periodic
  // trapezoidal rule).
  double cell_volume() const {
    double v = 1.0;
    for (double s : spacings_) v *= s;
    return v;
  }

  long index(const std::array<int, 3>& coord) const {
    long idx = 0;
    for (int a = 0; a < dim_; ++a) idx = idx * extents_[a] + coord[a];
    return idx;
  }

  std::array<int, 3> coordinate(long idx) const {
    std::array<int, 3> c{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
      c[a] = static_cast<int>(idx % extents_[a]);
      idx /= extents_[a];
    }
    return c;
  }

  double position(long idx, int axis) const {
    return coordinate(idx)[axis] * spacings_[axis];
  }

  // Index map realizing a periodic shift by `offset` grid points along
  // `axis`; offsets -2..2 are precomputed (the reach of the 5-point stencil).
  const Eigen::ArrayXi& shift_map(int axis, int offset) const {
    return shift_maps_[axis][offset + 2];
  }

  bool same_grid(const Chart& other) const {
    return dim_ == other.dim_ && extents_ == other.extents_ &&
           periods_ == other.periods_;
  }

 private:
  void build_shift_maps() {
    shift_maps_.resize(dim_);
    for (int a = 0; a < dim_; ++a) {
      for (int off = -2; off <= 2; ++off) {
        Eigen::ArrayXi map(points_);
        for (long p = 0; p < points_; ++p) {
          auto c = coordinate(p);
          c[a] = (c[a] + off % extents_[a] + extents_[a]) % extents_[a];
          map[p] = static_cast<int>(index(c));
        }
        shift_maps_[a][off + 2] = std::move(map);
      }
    }
  }

  int dim_;
  std::vector<int> extents_;
  std::vector<double> periods_;
  std::vector<double> spacings_;
  long points_ = 0;
  std::vector<std::array<Eigen::ArrayXi, 5>> shift_maps_;
};

using ChartPtr = std::shared_ptr<const Chart>;

}  // namespace riccilab
