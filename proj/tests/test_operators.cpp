// Copyright 2026 The roughfrac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "roughfrac/operators.hpp"

using namespace roughfrac;

namespace {

const Exponents e1(1, 0.5);
const Exponents e2(2, 1.0);
const auto half = TestFunction::indicator(1, 0.5);

QuadratureSpec doubled(QuadratureSpec q) {
  q.angular_nodes *= 2;
  q.radial_panels *= 2;
  return q;
}

std::vector<Point> random_points(int dim, int count, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r(lo, hi), th(0.0, kTwoPi);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    const double rad = r(rng), a = th(rng);
    out.push_back(dim == 1 ? Point{a < kPi ? rad : -rad, 0.0} : Point{rad * std::cos(a), rad * std::sin(a)});
  }
  return out;
}

}  // namespace

TEST(FracIntegral, OneSidedOracle) {
  EXPECT_NEAR(frac_integral(SphereKernel::pair(1, 1), e1, half, {1, 0}), 2 * (std::sqrt(1.5) - std::sqrt(0.5)), 1e-9);
  EXPECT_NEAR(frac_integral(SphereKernel::pair(1, 1), e1, half, {1, 0}), 1.0352762, 1e-7);
}

TEST(FracIntegral, CenteredOracle) {
  EXPECT_NEAR(frac_integral(SphereKernel::pair(1, 1), e1, half, {0, 0}), 2.8284271, 1e-7);
}

TEST(FracIntegral, OddKernelEvenFunction) {
  EXPECT_NEAR(frac_integral(SphereKernel::pair(-1, 1), e1, half, {0, 0}), 0.0, 1e-12);
}

TEST(FracIntegral, DimensionMismatch) {
  EXPECT_THROW(frac_integral(SphereKernel::pair(1, 1), e2, half, {0, 0}), ParameterError);
  EXPECT_THROW(frac_integral(SphereKernel::constant(2, 1), e2, half, {0, 0}), ParameterError);
}

TEST(FracIntegralAbs, OddKernelMatchesConstant) {
  EXPECT_NEAR(frac_integral_abs(SphereKernel::pair(-1, 1), e1, half, {1, 0}), 1.0352762, 1e-7);
}

TEST(FracIntegralAbs, ZeroKernel) {
  EXPECT_EQ(frac_integral_abs(SphereKernel::pair(0, 0), e1, half, {0.3, 0}), 0.0);
  EXPECT_EQ(frac_integral_abs(SphereKernel::constant(2, 0), e2, TestFunction::cone(2, 1), {0.3, 0.2}), 0.0);
}

TEST(FracIntegralAbs, NonnegativeForNonnegativeF) {
  const auto f = TestFunction::mixture(2, {Component{1.0, ConeProfile{0.6}, Point{0.2, 0}},
                                           Component{0.5, BallProfile{0.3}, Point{-0.4, 0.3}}});
  for (auto x : random_points(2, 50, 0.0, 3.0, 5))
    EXPECT_GE(frac_integral_abs(SphereKernel::cosine(0, 1, 3), e2, f, x), 0.0);
}

TEST(FracMaximal, OffSupportOracle) {
  EXPECT_NEAR(frac_maximal(SphereKernel::constant(1, 1), e1, half, {1, 0}), std::sqrt(2.0 / 3.0), 1e-6);
}

TEST(FracMaximal, CenterOracle) {
  EXPECT_NEAR(frac_maximal(SphereKernel::constant(1, 1), e1, half, {0, 0}), std::sqrt(2.0), 1e-6);
}

TEST(FracMaximal, ZeroFunction) {
  EXPECT_EQ(frac_maximal(SphereKernel::constant(1, 1), e1, half.scaled_by(0.0), {0.2, 0}), 0.0);
}

TEST(Operators, LimitDifferenceAtOneForTAbs) {
  // f_{0.2} = 5 χ_{[-0.1, 0.1]}: T f_t(1) = 10 (√1.1 - √0.9).
  const auto ft = half.rescaled(0.2);
  const double v = frac_integral_abs(SphereKernel::constant(1, 1), e1, ft, {1, 0});
  const double diff = std::abs(v - limit_coefficient(OpKind::t_abs, half) *
                                      limit_field_value(OpKind::t_abs, SphereKernel::constant(1, 1), e1, {1, 0}));
  EXPECT_NEAR(diff, std::abs(10 * (std::sqrt(1.1) - std::sqrt(0.9)) - 1), 1e-9);
  EXPECT_NEAR(diff, 1.2552e-3, 1e-6);
}

TEST(Operators, TwoDimensionalConstantKernelDisk) {
  // T f(0) for f = χ_{B(0,R)}, Ω ≡ 1, α = 1: ∫_0^R 2π dr = 2πR.
  EXPECT_NEAR(frac_integral(SphereKernel::constant(2, 1), e2, TestFunction::indicator(2, 0.7), {0, 0}),
              kTwoPi * 0.7, 1e-9);
  // Off center, compare against a Cartesian midpoint sum.
  const Point x{1.3, 0.4};
  const auto f = TestFunction::cone(2, 1.0);
  const int n = 1000;
  const double h = 2.0 / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Point y{-1 + (i + 0.5) * h, -1 + (j + 0.5) * h};
      s += f(y) / norm(x - y);
    }
  EXPECT_NEAR(frac_integral(SphereKernel::constant(2, 1), e2, f, x), s * h * h, 1e-4);
}

TEST(Operators, KernelWithJumpsMatchesDirectSum) {
  const Point x{0.9, -0.5};
  const auto f = TestFunction::indicator(2, 0.5);
  const auto k = SphereKernel::sign_cos();
  const int n = 1600;
  const double h = 1.0 / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Point y{-0.5 + (i + 0.5) * h, -0.5 + (j + 0.5) * h};
      if (f(y) != 0.0) s += k(x - y) / norm(x - y);
    }
  EXPECT_NEAR(frac_integral(k, e2, f, x), s * h * h, 2e-3);
}

TEST(Operators, SublinearityAndDomination) {
  const auto k = SphereKernel::cosine(0.2, 1, 2);
  const auto f = TestFunction::mixture(2, {Component{1.0, ConeProfile{0.6}, Point{0.2, 0}},
                                           Component{-0.8, BallProfile{0.3}, Point{-0.4, 0.3}}});
  for (auto x : random_points(2, 10, 0.0, 3.0, 17)) {
    const double dom = frac_integral_dominant(k, e2, f, x);
    EXPECT_LE(std::abs(frac_integral(k, e2, f, x)), dom + 1e-6);
    EXPECT_LE(frac_maximal(k, e2, f, x), dom + 1e-6);
  }
}

TEST(Operators, DominationOnGridOneD) {
  const auto k = SphereKernel::pair(3, 1);
  const auto f = TestFunction::mixture(1, {Component{1.0, ConeProfile{0.4}, Point{0.1, 0}},
                                           Component{0.5, GaussProfile{0.2, 0.5}, Point{-0.3, 0}}});
  const auto g = Grid::annulus(1, 0.05, 5.0, 128);
  const auto m = grid_apply(OpKind::maximal, k, e1, f, g);
  const auto d = grid_apply_dominant(k, e1, f, g);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_LE(m[i], d[i] + 1e-6);
}

TEST(Operators, QuadratureDoublingStable) {
  const QuadratureSpec q;
  struct Case {
    SphereKernel k;
    Exponents e;
    TestFunction f;
    Point x;
  };
  const std::vector<Case> cases{
      {SphereKernel::pair(1, 1), e1, half, {1, 0}},
      {SphereKernel::pair(1, 1), e1, half, {0, 0}},
      {SphereKernel::cosine(2, 1, 1), e2, TestFunction::indicator(2, 0.5), {1.2, 0.3}},
      {SphereKernel::sign_cos(), e2, TestFunction::cone(2, 0.5), {0.1, 0.2}},
      {SphereKernel::cosine(2, 1, 1), Exponents(2, 0.5), TestFunction::gaussian(2, 0.3, 0.9), {0.4, -0.6}},
  };
  for (const auto& c : cases) {
    for (OpKind kind : {OpKind::t_signed, OpKind::t_abs, OpKind::maximal}) {
      const double a = apply_operator(kind, c.k, c.e, c.f, c.x, q);
      const double b = apply_operator(kind, c.k, c.e, c.f, c.x, doubled(q));
      EXPECT_LE(std::abs(a - b), 1e-4 * std::max(std::abs(b), 1e-3)) << to_string(kind) << " " << c.k.describe();
    }
  }
}

TEST(Operators, RadiusScanDoublingStable) {
  QuadratureSpec fine;
  fine.maximal_radius_samples *= 2;
  for (Point x : {Point{1, 0}, Point{0, 0}, Point{0.7, 0}, Point{-2.5, 0}}) {
    const double a = frac_maximal(SphereKernel::constant(1, 1), e1, half, x);
    const double b = frac_maximal(SphereKernel::constant(1, 1), e1, half, x, fine);
    EXPECT_LE(std::abs(a - b), 1e-5 * b);
  }
}

TEST(Operators, DilationCovariance) {
  const auto k = SphereKernel::cosine(2, 1, 1);
  const auto f = TestFunction::cone(2, 0.5);
  const Point x{1.1, 0.6};
  for (OpKind kind : {OpKind::t_signed, OpKind::maximal}) {
    const double ref = apply_operator(kind, k, e2, f, x);
    for (double t : {0.5, 0.1, 0.02}) {
      const double v = apply_operator(kind, k, e2, f.rescaled(t), t * x) * std::pow(t, e2.gap());
      EXPECT_NEAR(v, ref, 1e-6 * ref) << to_string(kind) << " t=" << t;
    }
  }
}

TEST(Operators, LinearInF) {
  const auto k = SphereKernel::sign_cos();
  const auto f = TestFunction::cone(2, 0.5);
  const Point x{0.8, 0.1};
  EXPECT_NEAR(frac_integral(k, e2, f.scaled_by(-3.0), x), -3.0 * frac_integral(k, e2, f, x), 1e-12);
  EXPECT_NEAR(frac_maximal(k, e2, f.scaled_by(-3.0), x), 3.0 * frac_maximal(k, e2, f, x), 1e-12);
}

TEST(GridApply, ZeroKernelGivesZeroField) {
  const auto g = Grid::annulus(2, 1.0, 4.0, 8, 16);
  for (OpKind kind : {OpKind::t_signed, OpKind::t_abs, OpKind::maximal})
    for (double v : grid_apply(kind, SphereKernel::constant(2, 0), e2, TestFunction::cone(2, 0.3), g)) EXPECT_EQ(v, 0.0);
}

TEST(GridApply, DoublingF) {
  const auto g = Grid::annulus(1, 1.0, 8.0, 16);
  const auto k = SphereKernel::pair(-1, 2);
  for (OpKind kind : {OpKind::t_signed, OpKind::t_abs, OpKind::maximal}) {
    const auto a = grid_apply(kind, k, e1, half, g);
    const auto b = grid_apply(kind, k, e1, half.scaled_by(2.0), g);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], 2.0 * a[i], 1e-13 * std::abs(b[i]) + 1e-15);
  }
}

TEST(GridApply, MatchesPointEvaluation) {
  const auto g = Grid::annulus(1, 1.0, 8.0, 8);
  const auto k = SphereKernel::constant(1, 1);
  for (OpKind kind : {OpKind::t_signed, OpKind::t_abs, OpKind::maximal}) {
    const auto field = grid_apply(kind, k, e1, half, g);
    for (std::size_t i : {std::size_t{0}, std::size_t{5}, std::size_t{11}})
      EXPECT_NEAR(field[i], apply_operator(kind, k, e1, half, g.points()[i]), 1e-12);
  }
}

TEST(GridApply, WorkerCountIndependent) {
  const auto g = Grid::annulus(2, 1.0, 4.0, 8, 16);
  const auto k = SphereKernel::sign_cos();
  const auto f = TestFunction::cone(2, 0.4);
  const auto a = grid_apply(OpKind::maximal, k, e2, f, g, {}, 1);
  const auto b = grid_apply(OpKind::maximal, k, e2, f, g, {}, 3);
  EXPECT_EQ(a, b);
}

TEST(GridApply, DimensionMismatch) {
  const auto g = Grid::annulus(2, 1.0, 4.0, 8, 16);
  EXPECT_THROW(grid_apply(OpKind::t_abs, SphereKernel::pair(1, 1), e1, half, g), ParameterError);
}

TEST(VectorField, SingletonEqualsScalar) {
  const auto g = Grid::annulus(1, 1.0, 16.0, 32);
  const auto k = SphereKernel::pair(3, 1);
  const VectorTestFunction vf{{half}, 2.0};
  const auto v = vector_lr_field(OpKind::maximal, k, e1, vf, g, {}, true, 0.1);
  const auto s = limit_difference(OpKind::maximal, k, e1, half.rescaled(0.1), half.l1(), g);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], std::abs(s[i]), 1e-12 * std::abs(s[i]) + 1e-300);
}

TEST(VectorField, CopiesScaleByJToOneOverR) {
  const auto g = Grid::annulus(1, 1.0, 16.0, 32);
  const auto k = SphereKernel::pair(1, -1);
  const VectorTestFunction one{{half}, 3.0};
  const VectorTestFunction three{{half, half, half}, 3.0};
  const auto a = vector_lr_field(OpKind::t_signed, k, e1, one, g, {}, false);
  const auto b = vector_lr_field(OpKind::t_signed, k, e1, three, g, {}, false);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], std::cbrt(3.0) * a[i], 1e-12 * b[i] + 1e-300);
}

TEST(VectorField, ZeroPadding) {
  const auto g = Grid::annulus(1, 1.0, 16.0, 32);
  const auto k = SphereKernel::constant(1, 1);
  const VectorTestFunction one{{half}, 2.0};
  const VectorTestFunction padded{{half, half.scaled_by(0.0)}, 2.0};
  const auto a = vector_lr_field(OpKind::t_abs, k, e1, one, g, {}, true, 0.05);
  const auto b = vector_lr_field(OpKind::t_abs, k, e1, padded, g, {}, true, 0.05);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(VectorField, MixedDimensionsRejected) {
  const auto g = Grid::annulus(1, 1.0, 16.0, 32);
  const VectorTestFunction bad{{half, TestFunction::cone(2, 1)}, 2.0};
  EXPECT_THROW(vector_lr_field(OpKind::t_abs, SphereKernel::constant(1, 1), e1, bad, g, {}, false), ParameterError);
}

TEST(QuadratureSpec, Validation) {
  QuadratureSpec q;
  q.angular_nodes = 0;
  EXPECT_THROW(frac_integral(SphereKernel::pair(1, 1), e1, half, {1, 0}, q), ParameterError);
}
