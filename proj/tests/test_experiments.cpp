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
#include <vector>

#include "roughfrac/experiments.hpp"

using namespace roughfrac;

namespace {

const Exponents e1(1, 0.5);
const Exponents e2(2, 1.0);
const auto half = TestFunction::indicator(1, 0.5);
const std::vector<double> schedule{0.2, 0.1, 0.05, 0.025};

Grid line_grid() { return Grid::annulus(1, 1.0, 64.0, 128); }

}  // namespace

TEST(LogLogSlope, PowerLaws) {
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3 * v * v);
  EXPECT_NEAR(loglog_slope(x, y), 2.0, 1e-12);
  EXPECT_EQ(loglog_slope(x, std::vector<double>{0, 0, 0, 1}), 0.0);
}

TEST(LimitRun, ZeroKernelGivesZero) {
  const auto run = limit_run(OpKind::maximal, SphereKernel::pair(0, 0), e1, half, 1.0, schedule, line_grid());
  for (double d : run.metrics) EXPECT_EQ(d, 0.0);
  const auto rep = rate_check(run, 0.0);
  EXPECT_TRUE(rep.passed) << rep.message;
  EXPECT_EQ(rep.min_constant, 0.0);
}

TEST(LimitRun, OneDimensionalMaximal) {
  const auto run = limit_run(OpKind::maximal, SphereKernel::constant(1, 1), e1, half, 1.0, schedule, line_grid());
  ASSERT_EQ(run.metrics.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(run.betas[i], beta_t(e1, 1.0, schedule[i]));
    EXPECT_EQ(run.bounds[i], rate_bound(e1, 1.0, schedule[i]));
    EXPECT_LE(run.metrics[i], 2.0 * run.bounds[i]);
    if (i > 0) {
      EXPECT_LT(run.metrics[i], run.metrics[i - 1]);
    }
  }
  EXPECT_GE(run.slope, 0.8);
  EXPECT_TRUE(run.certified);
  const auto rep = rate_check(run, 2.0);
  EXPECT_TRUE(rep.passed) << rep.message;
  EXPECT_LE(rep.min_constant, 2.0);
}

TEST(LimitRun, OneDimensionalTAbs) {
  const auto run = limit_run(OpKind::t_abs, SphereKernel::constant(1, 1), e1, half, 1.0, schedule, line_grid());
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(run.metrics[i], run.metrics[i - 1]);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(run.metrics[i], 2.0 * run.bounds[i]);
  // An even f has zero first moment; the difference decays one order faster in t.
  EXPECT_GT(run.slope, 1.5);
}

TEST(LimitRun, SignedOddKernel) {
  const auto run = limit_run(OpKind::t_signed, SphereKernel::pair(-1, 1), e1, half, 1.0, schedule, line_grid());
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(run.metrics[i], run.metrics[i - 1]);
  EXPECT_TRUE(rate_check(run, 2.0).passed);
}

TEST(LimitRun, TwoDimensionalMaximalSlope) {
  const auto grid = Grid::annulus(2, 1.0, 64.0, 24, 48);
  QuadratureSpec q;
  q.angular_nodes = 128;
  q.radial_panels = 32;
  const auto run = limit_run(OpKind::maximal, SphereKernel::cosine(2, 1, 1), e2, TestFunction::indicator(2, 0.5), 1.0,
                             schedule, grid, q);
  EXPECT_GE(run.slope, 0.8);
  EXPECT_LE(run.slope, 2.2);
}

TEST(LimitRun, ScheduleErrors) {
  const auto g = line_grid();
  const auto k = SphereKernel::constant(1, 1);
  EXPECT_THROW(limit_run(OpKind::maximal, k, e1, half, 1.0, std::vector<double>{0.6, 0.1}, g), ParameterError);
  EXPECT_THROW(limit_run(OpKind::maximal, k, e1, half, 1.0, std::vector<double>{0.1, 0.2}, g), ParameterError);
  EXPECT_THROW(limit_run(OpKind::maximal, k, e1, TestFunction::indicator(1, 8.0), 1.0, std::vector<double>{0.2}, g),
               ParameterError);
  EXPECT_THROW(limit_run(OpKind::maximal, k, e1, half, 1.0, std::vector<double>{}, g), ParameterError);
}

TEST(LimitRun, GridMustExcludeTheBall) {
  const auto g = Grid::annulus(1, 0.5, 64.0, 64);
  EXPECT_THROW(limit_run(OpKind::maximal, SphereKernel::constant(1, 1), e1, half, 1.0, schedule, g), ParameterError);
}

TEST(RateCheck, ConstantMetricFails) {
  LimitRun run;
  run.t = schedule;
  for (double t : schedule) {
    run.metrics.push_back(0.01);
    run.bounds.push_back(rate_bound(e1, 1.0, t));
  }
  const auto rep = rate_check(run, 100.0);
  EXPECT_FALSE(rep.passed);
  EXPECT_FALSE(rep.monotone);
}

TEST(RateCheck, UncertifiedIsInconclusive) {
  LimitRun run;
  run.metrics = {0.2, 0.1};
  run.bounds = {1.0, 1.0};
  run.certified = false;
  const auto rep = rate_check(run, 2.0);
  EXPECT_TRUE(rep.inconclusive);
  EXPECT_FALSE(rep.passed);
}

TEST(RateCheck, BoundExceeded) {
  LimitRun run;
  run.metrics = {0.2, 0.1};
  run.bounds = {0.05, 0.025};
  const auto rep = rate_check(run, 2.0);
  EXPECT_FALSE(rep.passed);
  EXPECT_NEAR(rep.min_constant, 4.0, 1e-15);
}

TEST(VectorLimitRun, SingletonEqualsScalar) {
  const auto k = SphereKernel::pair(3, 1);
  const auto s = limit_run(OpKind::maximal, k, e1, half, 1.0, schedule, line_grid());
  const auto v = vector_limit_run(OpKind::maximal, k, e1, VectorTestFunction{{half}, 2.0}, 1.0, schedule, line_grid());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(v.metrics[i], s.metrics[i], 1e-12);
}

TEST(VectorLimitRun, CopiesScale) {
  const auto k = SphereKernel::pair(3, 1);
  const auto s = limit_run(OpKind::t_abs, k, e1, half, 1.0, schedule, line_grid());
  const auto v =
      vector_limit_run(OpKind::t_abs, k, e1, VectorTestFunction{{half, half, half}, 2.0}, 1.0, schedule, line_grid());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(v.metrics[i], std::sqrt(3.0) * s.metrics[i], 1e-10);
  EXPECT_NE(v.note.find("J=3"), std::string::npos);
}

TEST(IdentityCheck, PairKernel) {
  const auto g = Grid::annulus(1, 1.0 / 256, 256.0, 2048);
  const auto rep = identity_check(SphereKernel::pair(1, 1), e1, g);
  EXPECT_NEAR(rep.closed_form, std::sqrt(2.0), 1e-12);
  EXPECT_LT(rep.rel_err, 0.01);
  EXPECT_TRUE(rep.lambda_independent);
  EXPECT_EQ(rep.levels.size(), 5u);
}

TEST(IdentityCheck, ZeroKernel) {
  const auto g = Grid::annulus(1, 1.0, 64.0, 64);
  const auto rep = identity_check(SphereKernel::pair(0, 0), e1, g);
  EXPECT_EQ(rep.closed_form, 0.0);
  EXPECT_EQ(rep.numeric, 0.0);
}

TEST(OpnormLowerBound, ZeroEntrySkipped) {
  const auto g = Grid::annulus(1, 1.0 / 16, 64.0, 128);
  const std::vector<TestFunction> fam{half.scaled_by(0.0), half.rescaled(0.025)};
  const auto rep = opnorm_lower_bound(OpKind::maximal, SphereKernel::constant(1, 1), e1, fam, g);
  EXPECT_EQ(rep.ratios.size(), 1u);
  EXPECT_EQ(rep.warnings.size(), 1u);
  EXPECT_GT(rep.value, 0.9 * std::sqrt(2.0));
}

TEST(YoungMonitor, ZeroKernelAndBound) {
  const auto g = Grid::annulus(1, 1.0 / 16, 64.0, 128);
  const std::vector<TestFunction> fam{half, TestFunction::cone(1, 0.3)};
  EXPECT_EQ(young_monitor(SphereKernel::pair(0, 0), e1, fam, g).value, 0.0);
  const auto rep = young_monitor(SphereKernel::pair(3, 1), e1, fam, g);
  EXPECT_GT(rep.value, 0.0);
  // The weak-type Young inequality constant stays finite; here it is O(1).
  EXPECT_LT(rep.value, 10.0);
}

TEST(ConvergenceTypes, DisjointTranslate) {
  const auto g = Grid::interval(-4.0, 4.0, 800);
  std::vector<double> target(g.size()), moved(g.size());
  const auto pts = g.points();
  for (std::size_t i = 0; i < g.size(); ++i) {
    target[i] = std::abs(pts[i].x) < 0.5 ? 1.0 : 0.0;
    moved[i] = std::abs(pts[i].x - 2.0) < 0.5 ? 1.0 : 0.0;
  }
  const std::vector<double> lambdas{0.5};
  const auto rows = convergence_types({{0.1, moved}, {0.01, moved}}, target, lambdas, g, 2.0);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.type2, 2.0, 0.02);
    EXPECT_LE(r.type3, 1e-12);
  }
}

TEST(ConvergenceTypes, ChebyshevRelation) {
  const auto g = Grid::interval(-3.0, 3.0, 600);
  std::vector<double> target(g.size());
  const auto pts = g.points();
  for (std::size_t i = 0; i < g.size(); ++i) target[i] = std::exp(-pts[i].x * pts[i].x);
  std::vector<std::pair<double, std::vector<double>>> fam;
  for (double t : {0.4, 0.2, 0.1}) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::exp(-(pts[i].x - t) * (pts[i].x - t));
    fam.emplace_back(t, v);
  }
  const std::vector<double> lambdas{0.05, 0.1, 0.3};
  const double q = 2.0;
  const auto rows = convergence_types(fam, target, lambdas, g, q);
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& r : rows) EXPECT_LE(r.type2, std::pow(r.type1 / r.lambda, q) * (1 + 1e-12));
  // Translations converge: metrics at the smallest t are below those at the largest.
  EXPECT_LT(rows.back().type1, rows.front().type1);
}

TEST(Reduction, OneDimensionIsExact) {
  const auto g = line_grid();
  const std::vector<double> eps{0.4, 0.2};
  const auto rep =
      reduction_decomposition(OpKind::maximal, SphereKernel::pair(3, 1), eps, e1, half, 1.0, 0.05, g);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.kernel_gap, 0.0);
    EXPECT_NEAR(r.constant, 1.0, 1e-12);
    EXPECT_TRUE(r.holds);
  }
}

TEST(Reduction, ScheduleErrors) {
  const auto g = line_grid();
  EXPECT_THROW(reduction_decomposition(OpKind::maximal, SphereKernel::pair(3, 1), std::vector<double>{0.1, 0.2}, e1,
                                       half, 1.0, 0.05, g),
               ParameterError);
}
