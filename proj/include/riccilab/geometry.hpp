#pragma once

#include <optional>
#include <vector>

#include "riccilab/metric.hpp"

namespace riccilab {

// Stencil derivative of a single component array.
template <typename Scalar>
typename TensorField<Scalar>::Column stencil_derivative(
    const Chart& chart, const typename TensorField<Scalar>::Column& v, int axis) {
  const auto& p1 = chart.shift_map(axis, 1);
  const auto& p2 = chart.shift_map(axis, 2);
  const auto& m1 = chart.shift_map(axis, -1);
  const auto& m2 = chart.shift_map(axis, -2);
  const Scalar w = Scalar(1) / (Scalar(12) * chart.spacing(axis));
  return w * (Scalar(8) * (v(p1) - v(m1)) - (v(p2) - v(m2)));
}

// Gamma^k_{ij} = 1/2 g^{km} (d_i g_{jm} + d_j g_{im} - d_m g_{ij}),
// stored with component (k,i,j); symmetric in (i,j) by construction.
template <typename Scalar>
TensorField<Scalar> christoffel(const MetricField<Scalar>& g) {
  const int n = g.dim();
  std::vector<TensorField<Scalar>> dg;
  dg.reserve(n);
  for (int a = 0; a < n; ++a) dg.push_back(partial_derivative(g.tensor(), a));

  TensorField<Scalar> gamma(g.chart(), SlotList{Slot::Upper, Slot::Lower, Slot::Lower});
  const auto& inv = g.inverse();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        auto acc = gamma.c(k, i, j);
        for (int m = 0; m < n; ++m)
          acc += Scalar(0.5) * inv.c(k, m) *
                 (dg[i].c(j, m) + dg[j].c(i, m) - dg[m].c(i, j));
        if (j != i) gamma.c(k, j, i) = gamma.c(k, i, j);
      }
  return gamma;
}

// Covariant derivative with the derivative slot prepended:
// (D V)_{d I} = d_d V_I + sum_{upper s} Gamma^{I_s}_{dm} V_{I_s->m}
//                       - sum_{lower s} Gamma^m_{d I_s} V_{I_s->m}.
template <typename Scalar>
TensorField<Scalar> covariant_derivative(const TensorField<Scalar>& gamma,
                                         const TensorField<Scalar>& v) {
  const int n = v.dim();
  SlotList out_slots;
  out_slots.push_back(Slot::Lower);
  for (Slot s : v.slots()) out_slots.push_back(s);
  TensorField<Scalar> out(v.chart(), out_slots);

  for (int d = 0; d < n; ++d) {
    TensorField<Scalar> pd = partial_derivative(v, d);
    if (v.rank() == 0) {
      out.col(d) = pd.col(0);
      continue;
    }
    std::vector<int> idx(v.rank(), 0);
    do {
      long vc = 0;
      for (int s = 0; s < v.rank(); ++s) vc = vc * n + idx[s];
      auto acc = out.col(out.flat(d) * v.comps() + vc);
      acc = pd.col(vc);
      for (int s = 0; s < v.rank(); ++s) {
        std::vector<int> sub = idx;
        for (int m = 0; m < n; ++m) {
          sub[s] = m;
          long sc = 0;
          for (int t = 0; t < v.rank(); ++t) sc = sc * n + sub[t];
          if (v.slot(s) == Slot::Upper)
            acc += gamma.c(idx[s], d, m) * v.col(sc);
          else
            acc -= gamma.c(m, d, idx[s]) * v.col(sc);
        }
      }
    } while (next_component(idx, n));
  }
  return out;
}

// Contracted covariant derivative D_l V^l_I for a field whose slot 0 is
// Upper; avoids materializing the rank+1 intermediate.
template <typename Scalar>
TensorField<Scalar> covariant_divergence(const TensorField<Scalar>& gamma,
                                         const TensorField<Scalar>& v) {
  if (v.rank() < 1 || v.slot(0) != Slot::Upper)
    throw ValenceMismatch("covariant_divergence: slot 0 must be contravariant");
  const int n = v.dim();
  const Chart& chart = *v.chart();

  SlotList out_slots(v.slots().begin() + 1, v.slots().end());
  TensorField<Scalar> out(v.chart(), out_slots);

  std::vector<int> idx(out_slots.size(), 0);
  do {
    long oc = 0;
    for (std::size_t s = 0; s < idx.size(); ++s) oc = oc * n + idx[s];
    auto acc = out.col(oc);
    std::vector<int> full(v.rank(), 0);
    for (std::size_t s = 0; s < idx.size(); ++s) full[s + 1] = idx[s];
    for (int l = 0; l < n; ++l) {
      full[0] = l;
      long vc = 0;
      for (int s = 0; s < v.rank(); ++s) vc = vc * n + full[s];
      acc += stencil_derivative<Scalar>(chart, v.col(vc), l);
      // trace term Gamma^l_{lm} V^m_I
      for (int m = 0; m < n; ++m) {
        std::vector<int> sub = full;
        sub[0] = m;
        long sc = 0;
        for (int s = 0; s < v.rank(); ++s) sc = sc * n + sub[s];
        acc += gamma.c(l, l, m) * v.col(sc);
      }
      // slot corrections on the remaining indices
      for (int s = 1; s < v.rank(); ++s) {
        std::vector<int> sub = full;
        for (int m = 0; m < n; ++m) {
          sub[s] = m;
          long sc = 0;
          for (int t = 0; t < v.rank(); ++t) sc = sc * n + sub[t];
          if (v.slot(s) == Slot::Upper)
            acc += gamma.c(full[s], l, m) * v.col(sc);
          else
            acc -= gamma.c(m, l, full[s]) * v.col(sc);
        }
      }
    }
  } while (next_component(idx, n));
  return out;
}

// Christoffel symbols, Ricci, scalar curvature and (optionally) the full
// (3,1) Riemann tensor R_{ijk}^p, stored with component (i,j,k,p) and slots
// (Lower,Lower,Lower,Upper).  Sign convention pinned by the Ricci identity
//   (D_i D_j - D_j D_i) W_k = -R_{ijk}^p W_p
// and Rc_{jk} = R_{pjk}^p, which gives Rc = -(Lap u) delta on 2D conformal
// metrics e^{2u} delta and positive curvature on round spheres.
template <typename Scalar = double>
struct CurvatureBundle {
  TensorField<Scalar> christoffel;               // (1,2): comp (k,i,j)
  TensorField<Scalar> ricci;                     // (0,2), symmetrized
  typename TensorField<Scalar>::Column scalar;   // R = g^{jk} Rc_{jk}
  std::optional<TensorField<Scalar>> riemann;    // (3,1): comp (i,j,k,p)
  Scalar ricci_asymmetry = 0;                    // raw stencil asymmetry, O(dx^4)
};

template <typename Scalar>
CurvatureBundle<Scalar> curvature(const MetricField<Scalar>& g,
                                  bool with_riemann = false) {
  const int n = g.dim();
  CurvatureBundle<Scalar> bundle;
  bundle.christoffel = christoffel(g);
  const TensorField<Scalar>& gam = bundle.christoffel;

  TensorField<Scalar> rc(g.chart(), slots_lower(2));
  // quadratic terms: Gamma^p_{pm} Gamma^m_{jk} - Gamma^p_{jm} Gamma^m_{pk}
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      auto acc = rc.c(j, k);
      for (int m = 0; m < n; ++m)
        for (int p = 0; p < n; ++p)
          acc += gam.c(p, p, m) * gam.c(m, j, k) - gam.c(p, j, m) * gam.c(m, p, k);
    }
  // derivative terms, one axis at a time: d_pGamma^p_{jk} - d_jGamma^p_{pk}
  std::vector<TensorField<Scalar>> dgam_all;
  for (int a = 0; a < n; ++a) {
    TensorField<Scalar> dgam = partial_derivative(gam, a);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) rc.c(j, k) += dgam.c(a, j, k);
    for (int p = 0; p < n; ++p)
      for (int k = 0; k < n; ++k) rc.c(a, k) -= dgam.c(p, p, k);
    if (with_riemann) dgam_all.push_back(std::move(dgam));
  }

  bundle.ricci_asymmetry = symmetry_defect(rc, 0, 1);
  symmetrize(rc, 0, 1);
  bundle.ricci = std::move(rc);

  bundle.scalar = TensorField<Scalar>::Column::Zero(g.tensor().points());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      bundle.scalar += g.inverse().c(j, k) * bundle.ricci.c(j, k);

  if (with_riemann) {
    TensorField<Scalar> rm(
        g.chart(), SlotList{Slot::Lower, Slot::Lower, Slot::Lower, Slot::Upper});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int p = 0; p < n; ++p) {
            auto acc = rm.c(i, j, k, p);
            acc = dgam_all[i].c(p, j, k) - dgam_all[j].c(p, i, k);
            for (int m = 0; m < n; ++m)
              acc += gam.c(p, i, m) * gam.c(m, j, k) - gam.c(p, j, m) * gam.c(m, i, k);
            rm.c(j, i, k, p) = -acc;
          }
    bundle.riemann = std::move(rm);
  }
  return bundle;
}

}  // namespace riccilab
