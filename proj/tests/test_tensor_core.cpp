#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "riccilab/geometry.hpp"
#include "riccilab/random_fields.hpp"
#include "riccilab/serialize.hpp"
#include "test_helpers.hpp"

using namespace riccilab;
using namespace riccilab::testing;

TEST_CASE("partial derivative of a constant field vanishes") {
  auto chart = Chart::cubic(2, 16);
  TensorField<double> f(chart, slots_lower(1));
  f.c(0).setConstant(3.7);
  f.c(1).setConstant(-1.2);
  auto df = partial_derivative(f, 0);
  CHECK(df.max_abs() == 0.0);
}

TEST_CASE("partial derivative matches analytic derivative at 4th order") {
  std::vector<double> residuals;
  for (int N : {16, 32, 64}) {
    auto chart = Chart::cubic(2, N);
    TensorField<double> f = TensorField<double>::scalar_field(chart);
    f.col(0) = sample_scalar(*chart, [](const std::vector<double>& x) {
      return std::sin(kTau * x[0]);
    });
    Eigen::ArrayXd exact = sample_scalar(*chart, [](const std::vector<double>& x) {
      return kTau * std::cos(kTau * x[0]);
    });
    auto df = partial_derivative(f, 0);
    residuals.push_back((df.col(0) - exact).abs().maxCoeff());
  }
  CHECK(residuals[2] < 1e-4);
  CHECK(observed_order(residuals) > 3.5);
  // factor between successive doublings stays near the nominal 16
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
    double factor = residuals[i] / residuals[i + 1];
    CHECK(factor > 12.0);
    CHECK(factor < 20.0);
  }
}

TEST_CASE("partial derivative is exactly linear") {
  auto chart = Chart::cubic(2, 16);
  Rng rng(7);
  TensorField<double> a = random_symmetric_field(chart, rng, 0.5);
  TensorField<double> b = random_symmetric_field(chart, rng, 0.5);
  auto lhs = partial_derivative(a + b, 1);
  auto rhs = partial_derivative(a, 1) + partial_derivative(b, 1);
  CHECK((lhs.data() - rhs.data()).abs().maxCoeff() < 1e-13);
}

TEST_CASE("christoffel symbols of flat and constant-scaled metrics vanish") {
  for (int dim : {2, 3}) {
    auto chart = Chart::cubic(dim, 12);
    auto gamma_flat = christoffel(flat_metric(chart));
    CHECK(gamma_flat.max_abs() == 0.0);

    TensorField<double> scaled(chart, slots_lower(2));
    for (int i = 0; i < dim; ++i) scaled.c(i, i).setConstant(2.5);
    auto gamma_scaled = christoffel(MetricField<double>(scaled));
    CHECK(gamma_scaled.max_abs() < 1e-14);
  }
}

TEST_CASE("christoffel symbols of conformal metrics match symbolic oracle") {
  ConformalTestFunction cf;
  std::vector<double> residuals;
  for (int N : {16, 32, 64}) {
    auto chart = Chart::cubic(2, N);
    Eigen::ArrayXd u = sample_scalar(*chart, [&](auto& x) { return cf.u(x); });
    MetricField<double> g(conformal_metric_tensor(chart, u));
    auto gamma = christoffel(g);

    double res = 0;
    const int n = chart->dim();
    for (long p = 0; p < chart->points(); ++p) {
      auto x = point_coords(*chart, p);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double oracle = (k == i ? cf.du(x, j) : 0.0) +
                            (k == j ? cf.du(x, i) : 0.0) -
                            (i == j ? cf.du(x, k) : 0.0);
            res = std::max(res, std::abs(gamma.c(k, i, j)[p] - oracle));
          }
    }
    residuals.push_back(res);
  }
  CHECK(residuals.back() < 4e-6);
  CHECK(observed_order(residuals) > 3.5);
}

TEST_CASE("metric inverse satisfies g^{ik} g_{kj} = delta to 1e-12") {
  auto chart = Chart::cubic(3, 8);
  auto g = random_metric(chart, 11);
  auto id = contract(g.inverse(), 1, g.tensor(), 0);
  const int n = 3;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double target = i == j ? 1.0 : 0.0;
      CHECK((id.c(i, j) - target).abs().maxCoeff() < 1e-12);
    }
  CHECK(g.min_eigenvalue() > 0.3);
}

TEST_CASE("covariant derivative of the metric itself vanishes") {
  auto chart = Chart::cubic(2, 64);
  auto g = random_metric(chart, 3);
  auto gamma = christoffel(g);
  auto dg = covariant_derivative(gamma, g.tensor());
  CHECK(dg.max_abs() < 1e-10);
}

TEST_CASE("covariant derivative reduces to the partial derivative on flat charts") {
  auto chart = Chart::cubic(2, 16);
  Rng rng(5);
  auto v = random_one_form(chart, rng, 0.4);
  auto gamma = christoffel(flat_metric(chart));
  auto dv = covariant_derivative(gamma, v);
  for (int d = 0; d < 2; ++d) {
    auto pd = partial_derivative(v, d);
    for (int k = 0; k < 2; ++k)
      CHECK((dv.c(d, k) - pd.c(k)).abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("Ricci identity: second covariant derivatives commute up to curvature") {
  // (D_i D_j - D_j D_i) W_k + R_{ijk}^p W_p -> 0 at 4th order; this check
  // pins the sign and ordering conventions of the Riemann assembly.
  std::vector<double> residuals;
  for (int N : {16, 32, 64}) {
    auto chart = Chart::cubic(2, N);
    auto g = random_metric(chart, 21, 0.1);
    Rng rng(22);
    auto w = random_one_form(chart, rng, 0.3);
    auto bundle = curvature(g, /*with_riemann=*/true);
    auto dw = covariant_derivative(bundle.christoffel, w);
    auto ddw = covariant_derivative(bundle.christoffel, dw);
    auto rw = contract(*bundle.riemann, 3, w, 0);
    double res = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          res = std::max(res, (ddw.c(i, j, k) - ddw.c(j, i, k) + rw.c(i, j, k))
                                  .abs()
                                  .maxCoeff());
    residuals.push_back(res);
  }
  CHECK(observed_order(residuals) > 3.5);
  CHECK(residuals.back() < 1e-4);
}

TEST_CASE("curvature of the flat metric vanishes") {
  for (int dim : {2, 3}) {
    auto chart = Chart::cubic(dim, 8);
    auto bundle = curvature(flat_metric(chart), true);
    CHECK(bundle.ricci.max_abs() == 0.0);
    CHECK(bundle.riemann->max_abs() == 0.0);
    CHECK(bundle.scalar.abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("2D conformal Ricci tensor matches -(lap u) delta") {
  ConformalTestFunction cf;
  std::vector<double> residuals;
  for (int N : {16, 32, 64}) {
    auto chart = Chart::cubic(2, N);
    Eigen::ArrayXd u = sample_scalar(*chart, [&](auto& x) { return cf.u(x); });
    auto bundle = curvature(MetricField<double>(conformal_metric_tensor(chart, u)));
    Eigen::ArrayXd lap = sample_scalar(*chart, [&](auto& x) { return cf.laplacian(x); });
    double res = 0;
    res = std::max(res, (bundle.ricci.c(0, 0) + lap).abs().maxCoeff());
    res = std::max(res, (bundle.ricci.c(1, 1) + lap).abs().maxCoeff());
    res = std::max(res, bundle.ricci.c(0, 1).abs().maxCoeff());
    residuals.push_back(res);
  }
  CHECK(observed_order(residuals) > 3.5);
  // nominal 16x shrink per doubling
  double factor = residuals[1] / residuals[2];
  CHECK(factor > 12.0);
  CHECK(factor < 20.0);
}

TEST_CASE("product metric T^2 x S^1 has block-diagonal Ricci") {
  auto chart = Chart::cubic(3, 12);
  TensorField<double> g(chart, slots_lower(2));
  ConformalTestFunction cf;
  Eigen::ArrayXd u = sample_scalar(*chart, [&](const std::vector<double>& x) {
    return cf.u({x[0], x[1]});  // depends on the T^2 block only
  });
  Eigen::ArrayXd factor = (2.0 * u).exp();
  g.c(0, 0) = factor;
  g.c(1, 1) = factor;
  g.c(2, 2).setConstant(1.3);
  auto bundle = curvature(MetricField<double>(std::move(g)));
  CHECK(bundle.ricci.c(0, 2).abs().maxCoeff() < 1e-12);
  CHECK(bundle.ricci.c(1, 2).abs().maxCoeff() < 1e-12);
  CHECK(bundle.ricci.c(2, 2).abs().maxCoeff() < 1e-12);
  CHECK(bundle.ricci.c(0, 0).abs().maxCoeff() > 1e-3);
}

TEST_CASE("Riemann tensor is exactly antisymmetric in the first two slots") {
  auto chart = Chart::cubic(2, 16);
  auto g = random_metric(chart, 31);
  auto bundle = curvature(g, true);
  CHECK(antisymmetry_defect(*bundle.riemann, 0, 1) == 0.0);
  CHECK(symmetry_defect(bundle.ricci, 0, 1) == 0.0);
  CHECK(bundle.ricci_asymmetry < 1e-2);
  CHECK(bundle.christoffel.max_abs() > 0.0);
  CHECK(symmetry_defect(bundle.christoffel, 1, 2) == 0.0);
}

TEST_CASE("norms and inner products") {
  auto chart = Chart::cubic(3, 8);
  auto gt = random_metric(chart, 41);
  SUBCASE("|gt|^2 = n at every point") {
    auto nsq = norm_squared(gt, gt.tensor());
    CHECK((nsq - 3.0).abs().maxCoeff() < 1e-11);
  }
  SUBCASE("symmetry and scaling") {
    Rng rng(42);
    auto v = random_symmetric_field(chart, rng, 0.5);
    auto w = random_symmetric_field(chart, rng, 0.5);
    auto vw = inner_product(gt, v, w);
    auto wv = inner_product(gt, w, v);
    CHECK((vw - wv).abs().maxCoeff() < 1e-13);
    auto v2 = norm_squared(gt, 2.0 * v);
    CHECK((v2 - 4.0 * norm_squared(gt, v)).abs().maxCoeff() < 1e-12);
    CHECK(norm_squared(gt, v).minCoeff() >= 0.0);
    // Cauchy-Schwarz pointwise
    Eigen::ArrayXd cs = vw.square() - norm_squared(gt, v) * norm_squared(gt, w);
    CHECK(cs.maxCoeff() < 1e-12);
  }
}

TEST_CASE("deterministic generation and curvature evaluation") {
  auto chart = Chart::cubic(2, 24);
  auto g1 = random_metric(chart, 123);
  auto g2 = random_metric(chart, 123);
  CHECK((g1.tensor().data() - g2.tensor().data()).abs().maxCoeff() == 0.0);
  auto b1 = curvature(g1);
  auto b2 = curvature(g2);
  CHECK((b1.ricci.data() - b2.ricci.data()).abs().maxCoeff() == 0.0);
  CHECK((b1.scalar - b2.scalar).abs().maxCoeff() == 0.0);
}

TEST_CASE("serialization round trip and byte stability") {
  auto chart = Chart::cubic(2, 8);
  Rng rng(77);
  auto f = random_symmetric_field(chart, rng, 0.3);
  std::ostringstream os1(std::ios::binary), os2(std::ios::binary);
  write_field(os1, f);
  write_field(os2, f);
  CHECK(os1.str() == os2.str());
  std::istringstream is(os1.str(), std::ios::binary);
  auto f2 = read_field(is);
  CHECK(f2.slots() == f.slots());
  CHECK(f2.chart()->same_grid(*f.chart()));
  CHECK((f2.data() - f.data()).abs().maxCoeff() == 0.0);
}

TEST_CASE("compensated sum is deterministic and accurate") {
  Eigen::ArrayXd a(4);
  a << 1e16, 1.0, -1e16, 1.0;
  CHECK(compensated_sum<double>(a) == 2.0);
}

TEST_CASE("singular metric is rejected") {
  auto chart = Chart::cubic(2, 8);
  TensorField<double> g(chart, slots_lower(2));
  g.c(0, 0).setConstant(1.0);
  g.c(1, 1).setConstant(-0.5);
  CHECK_THROWS_AS(MetricField<double>(std::move(g)), SingularMetric);
}

TEST_CASE("covariant divergence agrees with contracted covariant derivative") {
  auto chart = Chart::cubic(2, 16);
  auto g = random_metric(chart, 51);
  auto gamma = christoffel(g);
  Rng rng(52);
  TensorField<double> a(chart, SlotList{Slot::Upper, Slot::Lower, Slot::Lower});
  for (long c = 0; c < a.comps(); ++c) a.col(c) = random_trig_field(*chart, rng, 0.4);
  auto direct = covariant_divergence(gamma, a);
  auto generic = contract(covariant_derivative(gamma, a), 0, 1);
  CHECK((direct.data() - generic.data()).abs().maxCoeff() < 1e-13);
}
