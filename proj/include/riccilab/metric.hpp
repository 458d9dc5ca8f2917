#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>

#include "riccilab/tensor.hpp"

namespace riccilab {

// Symmetric positive-definite (0,2) field with cached inverse, volume
// density and grid-minimum eigenvalue.  The inverse comes from a per-point
// Cholesky solve; points whose smallest eigenvalue falls below the rejection
// threshold raise SingularMetric.
template <typename Scalar = double>
class MetricField {
 public:
  static constexpr Scalar kDefaultEigThreshold = Scalar(1e-6);

  MetricField() = default;

  explicit MetricField(TensorField<Scalar> g,
                       Scalar eig_threshold = kDefaultEigThreshold)
      : g_(std::move(g)) {
    if (g_.rank() != 2 || g_.slot(0) != Slot::Lower || g_.slot(1) != Slot::Lower)
      throw ValenceMismatch("metric must be a (0,2) field");
    const int n = g_.dim();
    const Scalar scale = std::max(g_.max_abs(), Scalar(1));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((g_.c(i, j) - g_.c(j, i)).abs().maxCoeff() > Scalar(1e-12) * scale)
          throw InvariantViolation("metric components are not symmetric");

    inv_ = TensorField<Scalar>(g_.chart(), slots_upper(2));
    sqrt_det_.resize(g_.points());
    min_eig_ = std::numeric_limits<Scalar>::max();

    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat m(n, n), id = Mat::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Mat> eig;
    for (long p = 0; p < g_.points(); ++p) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g_.c(i, j)[p];
      eig.compute(m, Eigen::EigenvaluesOnly);
      const Scalar lmin = eig.eigenvalues().minCoeff();
      min_eig_ = std::min(min_eig_, lmin);
      if (lmin <= eig_threshold)
        throw SingularMetric("metric eigenvalue " + std::to_string(lmin) +
                             " below threshold at grid point " + std::to_string(p));
      Eigen::LLT<Mat> llt(m);
      Mat minv = llt.solve(id);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv_.c(i, j)[p] = Scalar(0.5) * (minv(i, j) + minv(j, i));
      Scalar det = 1;
      for (int i = 0; i < n; ++i) det *= llt.matrixL()(i, i);
      sqrt_det_[p] = det;  // product of Cholesky diagonal = sqrt(det)
    }
  }

  const ChartPtr& chart() const { return g_.chart(); }
  int dim() const { return g_.dim(); }
  const TensorField<Scalar>& tensor() const { return g_; }
  const TensorField<Scalar>& inverse() const { return inv_; }
  const typename TensorField<Scalar>::Column& sqrt_det() const { return sqrt_det_; }
  Scalar min_eigenvalue() const { return min_eig_; }

 private:
  TensorField<Scalar> g_;
  TensorField<Scalar> inv_;
  typename TensorField<Scalar>::Column sqrt_det_;
  Scalar min_eig_ = 0;
};

// Raise (lower) one slot against a (2,0) inverse-metric field (a (0,2)
// metric field).  The slot position is preserved.
template <typename Scalar>
TensorField<Scalar> flip_slot(const TensorField<Scalar>& v, int s,
                              const TensorField<Scalar>& metric_like) {
  const int n = v.dim();
  const Slot target =
      metric_like.slot(0) == Slot::Upper ? Slot::Upper : Slot::Lower;
  if (v.slot(s) == target)
    throw ValenceMismatch("flip_slot: slot already has target variance");

  SlotList out_slots = v.slots();
  out_slots[s] = target;
  TensorField<Scalar> out(v.chart(), out_slots);

  std::vector<int> idx(v.rank(), 0);
  do {
    long oc = 0;
    for (int t = 0; t < v.rank(); ++t) oc = oc * n + idx[t];
    auto acc = out.col(oc);
    std::vector<int> src = idx;
    for (int m = 0; m < n; ++m) {
      src[s] = m;
      long sc = 0;
      for (int t = 0; t < v.rank(); ++t) sc = sc * n + src[t];
      acc += metric_like.c(idx[s], m) * v.col(sc);
    }
  } while (next_component(idx, n));
  return out;
}

template <typename Scalar>
TensorField<Scalar> raise_slot(const TensorField<Scalar>& v, int s,
                               const MetricField<Scalar>& g) {
  return flip_slot(v, s, g.inverse());
}

template <typename Scalar>
TensorField<Scalar> lower_slot(const TensorField<Scalar>& v, int s,
                               const MetricField<Scalar>& g) {
  return flip_slot(v, s, g.tensor());
}

// Pointwise inner product <V,W> induced by gt: every Lower slot of V is
// raised with gt^{-1}, every Upper slot lowered with gt, then contracted
// against W componentwise.
template <typename Scalar>
typename TensorField<Scalar>::Column inner_product(
    const MetricField<Scalar>& gt, const TensorField<Scalar>& v,
    const TensorField<Scalar>& w) {
  if (v.slots() != w.slots() || !v.chart()->same_grid(*w.chart()))
    throw ValenceMismatch("inner_product: fields must share chart and valence");
  TensorField<Scalar> flipped = v;
  for (int s = 0; s < v.rank(); ++s)
    flipped = flip_slot(flipped, s,
                        v.slot(s) == Slot::Lower ? gt.inverse() : gt.tensor());
  typename TensorField<Scalar>::Column out =
      TensorField<Scalar>::Column::Zero(v.points());
  for (long c = 0; c < v.comps(); ++c) out += flipped.col(c) * w.col(c);
  return out;
}

template <typename Scalar>
typename TensorField<Scalar>::Column norm_squared(const MetricField<Scalar>& gt,
                                                  const TensorField<Scalar>& v) {
  return inner_product(gt, v, v);
}

// Neumaier-compensated sum in fixed storage order; the deterministic
// reduction used by every grid integral.
template <typename Scalar>
Scalar compensated_sum(const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& a) {
  Scalar sum = 0, comp = 0;
  for (long i = 0; i < a.size(); ++i) {
    const Scalar x = a[i];
    const Scalar t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

// Integral of a scalar sample array against the volume measure of gt.
template <typename Scalar>
Scalar integrate(const MetricField<Scalar>& gt,
                 const typename TensorField<Scalar>::Column& f) {
  const typename TensorField<Scalar>::Column weighted = f * gt.sqrt_det();
  return gt.chart()->cell_volume() * compensated_sum<Scalar>(weighted);
}

template <typename Scalar>
Scalar volume(const MetricField<Scalar>& gt) {
  return gt.chart()->cell_volume() * compensated_sum<Scalar>(gt.sqrt_det());
}

}  // namespace riccilab
