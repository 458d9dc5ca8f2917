#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "riccilab/metric.hpp"

namespace riccilab {

// Deterministic, platform-independent sample streams.  All randomized
// scenarios derive every draw from (seed, stream ids) so reruns are
// bit-identical regardless of call order elsewhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0,1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b = 0) {
    Rng r(seed * 0x2545f4914f6cdd1dull + a * 0x9e3779b97f4a7c15ull + b);
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
};

inline Eigen::ArrayXd positions(const Chart& chart, int axis) {
  Eigen::ArrayXd x(chart.points());
  for (long p = 0; p < chart.points(); ++p) x[p] = chart.position(p, axis);
  return x;
}

// Low-frequency wavevectors (one representative per +-k pair, |k|^2 <= 4).
inline std::vector<std::vector<int>> low_frequency_modes(int dim) {
  std::vector<std::vector<int>> modes;
  std::vector<int> k(dim, -2);
  while (true) {
    int norm2 = 0, first_nonzero = 0;
    for (int a = 0; a < dim; ++a) {
      norm2 += k[a] * k[a];
      if (first_nonzero == 0 && k[a] != 0) first_nonzero = k[a];
    }
    if (norm2 > 0 && norm2 <= 4 && first_nonzero > 0) modes.push_back(k);
    int a = dim - 1;
    while (a >= 0 && k[a] == 2) k[a--] = -2;
    if (a < 0) break;
    ++k[a];
  }
  return modes;
}

// Smooth random scalar field: sum of low-frequency trigonometric modes with
// total coefficient mass `amplitude`.
inline Eigen::ArrayXd random_trig_field(const Chart& chart, Rng& rng,
                                        double amplitude) {
  const auto modes = low_frequency_modes(chart.dim());
  std::vector<double> coeff(modes.size()), phase(modes.size());
  double mass = 0;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    int norm2 = 0;
    for (int a = 0; a < chart.dim(); ++a) norm2 += modes[m][a] * modes[m][a];
    coeff[m] = rng.uniform(-1.0, 1.0) / (1.0 + norm2);
    phase[m] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    mass += std::abs(coeff[m]);
  }
  const double scale = amplitude * rng.uniform(0.6, 1.0) / mass;

  std::vector<Eigen::ArrayXd> pos;
  for (int a = 0; a < chart.dim(); ++a) pos.push_back(positions(chart, a));

  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(chart.points());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    Eigen::ArrayXd arg = Eigen::ArrayXd::Constant(chart.points(), phase[m]);
    for (int a = 0; a < chart.dim(); ++a)
      arg += (2.0 * std::numbers::pi * modes[m][a] / chart.period(a)) * pos[a];
    out += (scale * coeff[m]) * arg.cos();
  }
  return out;
}

// Random symmetric (0,2) perturbation with componentwise amplitude bound.
inline TensorField<double> random_symmetric_field(ChartPtr chart, Rng& rng,
                                                  double amplitude) {
  const int n = chart->dim();
  TensorField<double> f(chart, slots_lower(2));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Eigen::ArrayXd comp = random_trig_field(*chart, rng, amplitude);
      f.c(i, j) = comp;
      if (j != i) f.c(j, i) = comp;
    }
  return f;
}

inline TensorField<double> random_one_form(ChartPtr chart, Rng& rng,
                                           double amplitude) {
  TensorField<double> f(chart, slots_lower(1));
  for (int i = 0; i < chart->dim(); ++i)
    f.c(i) = random_trig_field(*chart, rng, amplitude);
  return f;
}

// g = delta + low-frequency perturbation, rejecting draws whose minimum
// eigenvalue falls below `min_eig`.  Rejection re-derives the stream from the
// attempt counter, so results do not depend on how much entropy a rejected
// draw consumed.
inline MetricField<double> random_metric(ChartPtr chart, std::uint64_t seed,
                                         double amplitude = 0.15,
                                         double min_eig = 0.3) {
  const int n = chart->dim();
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng rng(Rng::derive(seed, 0xa11ce, attempt));
    TensorField<double> f = random_symmetric_field(chart, rng, amplitude);
    for (int i = 0; i < n; ++i) f.c(i, i) += 1.0;
    try {
      return MetricField<double>(std::move(f), min_eig);
    } catch (const SingularMetric&) {
      continue;
    }
  }
  throw SingularMetric("random_metric: no positive-definite draw in 64 attempts");
}

// Metric near `base`: base + random symmetric perturbation.
inline MetricField<double> perturbed_metric(const MetricField<double>& base,
                                            std::uint64_t seed, double amplitude,
                                            double min_eig = 0.3) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng rng(Rng::derive(seed, 0xbea7, attempt));
    TensorField<double> f =
        base.tensor() + random_symmetric_field(base.chart(), rng, amplitude);
    try {
      return MetricField<double>(std::move(f), min_eig);
    } catch (const SingularMetric&) {
      continue;
    }
  }
  throw SingularMetric("perturbed_metric: no positive-definite draw in 64 attempts");
}

inline TensorField<double> conformal_metric_tensor(ChartPtr chart,
                                                   const Eigen::ArrayXd& u) {
  const int n = chart->dim();
  TensorField<double> f(chart, slots_lower(2));
  Eigen::ArrayXd factor = (2.0 * u).exp();
  for (int i = 0; i < n; ++i) f.c(i, i) = factor;
  return f;
}

inline MetricField<double> flat_metric(ChartPtr chart) {
  TensorField<double> f(chart, slots_lower(2));
  for (int i = 0; i < chart->dim(); ++i) f.c(i, i).setOnes();
  return MetricField<double>(std::move(f));
}

}  // namespace riccilab
