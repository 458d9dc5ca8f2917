#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "riccilab/chart.hpp"
#include "riccilab/errors.hpp"

namespace riccilab {

// Slot variance.  Slot order follows the order indices appear in the
// defining formula, e.g. the connection coefficients Gamma^k_{ij} are stored
// with slots (Upper, Lower, Lower) and component (k, i, j).
enum class Slot : std::uint8_t { Lower = 0, Upper = 1 };

using SlotList = std::vector<Slot>;

inline SlotList slots_lower(int k) { return SlotList(k, Slot::Lower); }
inline SlotList slots_upper(int l) { return SlotList(l, Slot::Upper); }

// Components of a valence-(k,l) tensor sampled on a periodic chart.
// Storage is (points x components), column-major, so each component is a
// contiguous array over grid points; component flattening is row-major over
// slots (slot 0 most significant).
template <typename Scalar = double>
class TensorField {
 public:
  using Data = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Column = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  TensorField() = default;

  TensorField(ChartPtr chart, SlotList slots)
      : chart_(std::move(chart)), slots_(std::move(slots)) {
    long comps = 1;
    for (std::size_t s = 0; s < slots_.size(); ++s) comps *= chart_->dim();
    data_ = Data::Zero(chart_->points(), comps);
  }

  static TensorField scalar_field(ChartPtr chart) {
    return TensorField(std::move(chart), SlotList{});
  }

  const ChartPtr& chart() const { return chart_; }
  int dim() const { return chart_->dim(); }
  int rank() const { return static_cast<int>(slots_.size()); }
  long comps() const { return data_.cols(); }
  long points() const { return data_.rows(); }
  const SlotList& slots() const { return slots_; }
  Slot slot(int s) const { return slots_[s]; }

  Data& data() { return data_; }
  const Data& data() const { return data_; }

  // Flat component index from per-slot indices.
  template <typename... I>
  long flat(I... idx) const {
    static_assert(sizeof...(I) > 0);
    long f = 0;
    ((f = f * chart_->dim() + idx), ...);
    return f;
  }

  template <typename... I>
  auto c(I... idx) {
    return data_.col(flat(idx...));
  }
  template <typename... I>
  auto c(I... idx) const {
    return data_.col(flat(idx...));
  }

  auto col(long comp) { return data_.col(comp); }
  auto col(long comp) const { return data_.col(comp); }

  Scalar max_abs() const { return data_.abs().maxCoeff(); }

  bool same_shape(const TensorField& o) const {
    return chart_->same_grid(*o.chart_) && slots_ == o.slots_;
  }

  TensorField& operator+=(const TensorField& o) {
    require_same_shape(o);
    data_ += o.data_;
    return *this;
  }
  TensorField& operator-=(const TensorField& o) {
    require_same_shape(o);
    data_ -= o.data_;
    return *this;
  }
  TensorField& operator*=(Scalar s) {
    data_ *= s;
    return *this;
  }

  friend TensorField operator+(TensorField a, const TensorField& b) {
    a += b;
    return a;
  }
  friend TensorField operator-(TensorField a, const TensorField& b) {
    a -= b;
    return a;
  }
  friend TensorField operator*(Scalar s, TensorField a) {
    a *= s;
    return a;
  }

  void require_same_shape(const TensorField& o) const {
    if (!same_shape(o)) throw ValenceMismatch("tensor fields differ in chart or valence");
  }

 private:
  ChartPtr chart_;
  SlotList slots_;
  Data data_;
};

// Multi-index iteration helper: advances idx through all n^rank component
// tuples in flat order.  Returns false after the last tuple.
inline bool next_component(std::vector<int>& idx, int n) {
  for (int s = static_cast<int>(idx.size()) - 1; s >= 0; --s) {
    if (++idx[s] < n) return true;
    idx[s] = 0;
  }
  return false;
}

// 4th-order central difference along `axis` with periodic wraparound:
//   f'_i = (-f_{i+2} + 8 f_{i+1} - 8 f_{i-1} + f_{i-2}) / (12 dx).
// Same valence as the input; exact linearity by construction.
template <typename Scalar>
TensorField<Scalar> partial_derivative(const TensorField<Scalar>& f, int axis) {
  const Chart& chart = *f.chart();
  const auto& p1 = chart.shift_map(axis, 1);
  const auto& p2 = chart.shift_map(axis, 2);
  const auto& m1 = chart.shift_map(axis, -1);
  const auto& m2 = chart.shift_map(axis, -2);
  const Scalar w = Scalar(1) / (Scalar(12) * chart.spacing(axis));

  TensorField<Scalar> out(f.chart(), f.slots());
  for (long c = 0; c < f.comps(); ++c) {
    auto v = f.col(c);
    // paired differences keep the derivative of a constant exactly zero
    out.col(c) = w * (Scalar(8) * (v(p1) - v(m1)) - (v(p2) - v(m2)));
  }
  return out;
}

// Trace over two slots of opposite variance within one tensor.
template <typename Scalar>
TensorField<Scalar> contract(const TensorField<Scalar>& v, int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == b || b >= v.rank())
    throw ValenceMismatch("contract: invalid slot pair");
  if (v.slot(a) == v.slot(b))
    throw ValenceMismatch("contract: slots must have opposite variance");
  const int n = v.dim();

  SlotList out_slots;
  for (int s = 0; s < v.rank(); ++s)
    if (s != a && s != b) out_slots.push_back(v.slot(s));
  TensorField<Scalar> out(v.chart(), out_slots);

  std::vector<int> idx(out_slots.size(), 0);
  std::vector<int> full(v.rank(), 0);
  long oc = 0;
  do {
    int t = 0;
    for (int s = 0; s < v.rank(); ++s)
      if (s != a && s != b) full[s] = idx[t++];
    auto acc = out.col(oc++);
    for (int m = 0; m < n; ++m) {
      full[a] = m;
      full[b] = m;
      long fc = 0;
      for (int s = 0; s < v.rank(); ++s) fc = fc * n + full[s];
      acc += v.col(fc);
    }
  } while (next_component(idx, n));
  return out;
}

// Product contraction over one up/down slot pair: result slots are the
// remaining slots of v followed by the remaining slots of w.
template <typename Scalar>
TensorField<Scalar> contract(const TensorField<Scalar>& v, int sv,
                             const TensorField<Scalar>& w, int sw) {
  if (!v.chart()->same_grid(*w.chart()))
    throw ValenceMismatch("contract: fields live on different charts");
  if (v.slot(sv) == w.slot(sw))
    throw ValenceMismatch("contract: slots must have opposite variance");
  const int n = v.dim();

  SlotList out_slots;
  for (int s = 0; s < v.rank(); ++s)
    if (s != sv) out_slots.push_back(v.slot(s));
  for (int s = 0; s < w.rank(); ++s)
    if (s != sw) out_slots.push_back(w.slot(s));
  TensorField<Scalar> out(v.chart(), out_slots);

  std::vector<int> idx(out_slots.size(), 0);
  std::vector<int> vi(v.rank(), 0), wi(w.rank(), 0);
  long oc = 0;
  do {
    int t = 0;
    for (int s = 0; s < v.rank(); ++s)
      if (s != sv) vi[s] = idx[t++];
    for (int s = 0; s < w.rank(); ++s)
      if (s != sw) wi[s] = idx[t++];
    auto acc = out.col(oc++);
    for (int m = 0; m < n; ++m) {
      vi[sv] = m;
      wi[sw] = m;
      long vc = 0, wc = 0;
      for (int s = 0; s < v.rank(); ++s) vc = vc * n + vi[s];
      for (int s = 0; s < w.rank(); ++s) wc = wc * n + wi[s];
      acc += v.col(vc) * w.col(wc);
    }
  } while (next_component(idx, n));
  return out;
}

// Pointwise product with a scalar field.
template <typename Scalar>
TensorField<Scalar> scale_by(const TensorField<Scalar>& v,
                             const typename TensorField<Scalar>::Column& weight) {
  TensorField<Scalar> out = v;
  for (long c = 0; c < out.comps(); ++c) out.col(c) *= weight;
  return out;
}

// Symmetrize / antisymmetry checks over a slot pair of equal variance.
template <typename Scalar>
void symmetrize(TensorField<Scalar>& v, int a, int b) {
  const int n = v.dim();
  std::vector<int> idx(v.rank(), 0);
  do {
    if (idx[a] < idx[b]) {
      std::vector<int> sw = idx;
      std::swap(sw[a], sw[b]);
      long c1 = 0, c2 = 0;
      for (int s = 0; s < v.rank(); ++s) {
        c1 = c1 * n + idx[s];
        c2 = c2 * n + sw[s];
      }
      auto mean = (Scalar(0.5) * (v.col(c1) + v.col(c2))).eval();
      v.col(c1) = mean;
      v.col(c2) = mean;
    }
  } while (next_component(idx, n));
}

template <typename Scalar>
Scalar symmetry_defect(const TensorField<Scalar>& v, int a, int b) {
  const int n = v.dim();
  Scalar defect = 0;
  std::vector<int> idx(v.rank(), 0);
  do {
    if (idx[a] < idx[b]) {
      std::vector<int> sw = idx;
      std::swap(sw[a], sw[b]);
      long c1 = 0, c2 = 0;
      for (int s = 0; s < v.rank(); ++s) {
        c1 = c1 * n + idx[s];
        c2 = c2 * n + sw[s];
      }
      defect = std::max(defect, (v.col(c1) - v.col(c2)).abs().maxCoeff());
    }
  } while (next_component(idx, n));
  return defect;
}

template <typename Scalar>
Scalar antisymmetry_defect(const TensorField<Scalar>& v, int a, int b) {
  const int n = v.dim();
  Scalar defect = 0;
  std::vector<int> idx(v.rank(), 0);
  do {
    if (idx[a] <= idx[b]) {
      std::vector<int> sw = idx;
      std::swap(sw[a], sw[b]);
      long c1 = 0, c2 = 0;
      for (int s = 0; s < v.rank(); ++s) {
        c1 = c1 * n + idx[s];
        c2 = c2 * n + sw[s];
      }
      defect = std::max(defect, (v.col(c1) + v.col(c2)).abs().maxCoeff());
    }
  } while (next_component(idx, n));
  return defect;
}

}  // namespace riccilab
