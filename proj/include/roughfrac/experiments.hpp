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
#pragma once

// Experiment drivers: limiting runs A f_t -> K ‖f‖_1 in weak norms away from
// the origin, rate checks, the weak-norm identity for K, operator-norm and
// weak Young monitors, convergence-type monitors, and the rough-kernel
// reduction through mollified kernels.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "roughfrac/errors.hpp"
#include "roughfrac/fields.hpp"
#include "roughfrac/functions.hpp"
#include "roughfrac/grid.hpp"
#include "roughfrac/kernel.hpp"
#include "roughfrac/lorentz.hpp"
#include "roughfrac/operators.hpp"

namespace roughfrac {

/// Least-squares slope of log y against log x; points with y <= 0 are dropped.
/// Returns 0 when fewer than two points remain.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "loglog_slope: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return 0.0;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= n, my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

struct LimitRun {
  OpKind op = OpKind::maximal;
  double rho = 1.0;
  std::vector<double> t;
  std::vector<double> metrics;  // D(t) over the grid
  std::vector<double> betas;
  std::vector<double> bounds;   // (1 + β_t) t + β_t
  std::vector<double> slope_so_far;
  std::vector<WeakNormResult> tails;
  std::vector<DecayCertificate> certificates;
  double slope = 0.0;
  bool certified = true;
  std::string note;
};

namespace detail {

inline void check_schedule(std::span<const double> ts, double rho, double support_radius) {
  require(rho > 0.0, "rho: must be > 0");
  require(!ts.empty(), "t_schedule: must not be empty");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    require(ts[i] > 0.0, "t_schedule: t must be > 0");
    require(ts[i] < rho / 2.0, "t_schedule: t must be < rho/2");
    require(ts[i] * support_radius < rho, "t_schedule: t * support_radius must be < rho");
    if (i > 0) require(ts[i] < ts[i - 1], "t_schedule: must be strictly decreasing");
  }
}

inline void check_grid(const Grid& grid, const Exponents& e, double rho) {
  require(grid.dim() == e.dim(), "grid: dimension differs from exponents");
  require(grid.inner_radius() >= rho * (1.0 - 1e-12), "grid: inner radius must be >= rho");
}

// Decay order of A f_t - K ‖f‖_1 at infinity: one order beyond K, two when the
// first moment of f vanishes and A is linear.
inline double tail_gamma(OpKind kind, const Exponents& e, const TestFunction& f) {
  const Point m = f.first_moment();
  const bool centered = std::abs(m.x) + std::abs(m.y) <= 1e-14 * std::max(1.0, f.l1());
  return e.gap() + ((kind != OpKind::maximal && centered) ? 2.0 : 1.0);
}

inline DecayCertificate ring_certificate(const Grid& grid, std::span<const double> field, double gamma) {
  double c = 0.0;
  const auto pts = grid.points();
  for (std::size_t i : grid.outer_ring()) c = std::max(c, std::abs(field[i]) * std::pow(norm(pts[i]), gamma));
  return {c, gamma};
}

inline void record(LimitRun& run, const Exponents& e, const Grid& grid, double t, std::span<const double> field,
                   double gamma) {
  const DecayCertificate cert = ring_certificate(grid, field, gamma);
  std::optional<DecayCertificate> c;
  if (gamma * e.q() > e.dim()) c = cert;
  else run.certified = false;
  const WeakNormResult w = weak_quasinorm(grid, field, e.q(), c);
  run.t.push_back(t);
  run.metrics.push_back(w.value);
  run.betas.push_back(beta_t(e, run.rho, t));
  run.bounds.push_back(rate_bound(e, run.rho, t));
  run.tails.push_back(w);
  run.certificates.push_back(cert);
  run.slope_so_far.push_back(loglog_slope(run.t, run.metrics));
}

}  // namespace detail

/// D(t) = ‖A f_t - c_f K‖_{L^{q,∞}(grid)} for each t of the schedule, where K is
/// the |Omega| field (M, T_abs) or the signed field (T_signed).
inline LimitRun limit_run(OpKind kind, const SphereKernel& k, const Exponents& e, const TestFunction& f, double rho,
                          std::span<const double> t_schedule, const Grid& grid, const QuadratureSpec& quad = {},
                          int workers = 0) {
  detail::check_schedule(t_schedule, rho, f.support_radius());
  detail::check_grid(grid, e, rho);
  detail::check_inputs(k, e, f, quad);
  LimitRun run;
  run.op = kind;
  run.rho = rho;
  const double coef = limit_coefficient(kind, f);
  const double gamma = detail::tail_gamma(kind, e, f);
  for (double t : t_schedule) {
    const auto field = limit_difference(kind, k, e, f.rescaled(t), coef, grid, quad, workers);
    detail::record(run, e, grid, t, field, gamma);
  }
  run.slope = run.slope_so_far.back();
  run.note = run.certified ? "tail certified" : "uncertified tail";
  return run;
}

/// Vector-valued run: D(t) is the weak norm of the pointwise ℓ^r composite of
/// the entrywise differences. The sequence is finite, so the ℓ^r tail of
/// {‖f_j‖_1}_{j > J} vanishes and is recorded as such.
inline LimitRun vector_limit_run(OpKind kind, const SphereKernel& k, const Exponents& e,
                                 const VectorTestFunction& vf, double rho, std::span<const double> t_schedule,
                                 const Grid& grid, const QuadratureSpec& quad = {}, int workers = 0) {
  vf.validate();
  double support = 0.0;
  double gamma = std::numeric_limits<double>::infinity();
  for (const auto& f : vf.entries) {
    support = std::max(support, f.support_radius());
    gamma = std::min(gamma, detail::tail_gamma(kind, e, f));
    detail::check_inputs(k, e, f, quad);
  }
  detail::check_schedule(t_schedule, rho, support);
  detail::check_grid(grid, e, rho);
  LimitRun run;
  run.op = kind;
  run.rho = rho;
  for (double t : t_schedule) {
    const auto field = vector_lr_field(kind, k, e, vf, grid, quad, true, t, workers);
    detail::record(run, e, grid, t, field, gamma);
  }
  run.slope = run.slope_so_far.back();
  run.note = std::string(run.certified ? "tail certified" : "uncertified tail") + "; J=" +
             std::to_string(vf.entries.size()) + ", l^r tail beyond J is 0";
  return run;
}

struct RateReport {
  bool passed = false;
  bool inconclusive = false;
  bool monotone = false;
  double min_constant = 0.0;  // smallest C with D(t) <= C · bound(t) for all t
  std::string message;
};

/// D(t) <= C ((1 + β_t) t + β_t) at every t, D nonincreasing up to 5% per step
/// with a net decrease over the schedule (or identically zero).
inline RateReport rate_check(const LimitRun& run, double constant) {
  detail::require(constant >= 0.0, "rate_check: C must be >= 0");
  detail::require(!run.metrics.empty() && run.metrics.size() == run.bounds.size(), "rate_check: empty run");
  RateReport rep;
  if (!run.certified) {
    rep.inconclusive = true;
    rep.message = "inconclusive: uncertified tail";
    return rep;
  }
  bool all_zero = true;
  rep.monotone = true;
  for (std::size_t i = 0; i < run.metrics.size(); ++i) {
    all_zero = all_zero && run.metrics[i] == 0.0;
    rep.min_constant = std::max(rep.min_constant, run.metrics[i] / run.bounds[i]);
    if (i > 0 && run.metrics[i] > 1.05 * run.metrics[i - 1]) rep.monotone = false;
  }
  if (!all_zero && !(run.metrics.back() < run.metrics.front())) rep.monotone = false;
  const bool bounded = rep.min_constant <= constant;
  rep.passed = bounded && rep.monotone;
  rep.message = rep.passed ? "pass" : (!rep.monotone ? "fail: D(t) not decreasing" : "fail: D(t) exceeds C * bound");
  return rep;
}

struct IdentityReport {
  double closed_form = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
  std::vector<double> levels;        // λ
  std::vector<double> level_values;  // λ^q |{|K| > λ}|
  double level_max_rel_err = 0.0;
  bool lambda_independent = true;
};

/// Sampled weak norm of K = |Omega|/|x|^{n-α} over the grid against the closed
/// form, plus λ-independence of λ^q |{K > λ}| at five levels (1% tolerance).
inline IdentityReport identity_check(const SphereKernel& k, const Exponents& e, const Grid& grid,
                                     int workers = 0) {
  detail::require(grid.dim() == e.dim(), "identity_check: grid dimension differs from exponents");
  IdentityReport rep;
  rep.closed_form = homog_weak_norm_closed(k, e);
  const HomogeneousField field{k, e, false};
  const auto pts = grid.points();
  std::vector<double> values(grid.size());
  detail::parallel_for(grid.size(), workers, [&](std::size_t i) { values[i] = field(pts[i]); });
  rep.numeric = weak_quasinorm(grid, values, e.q()).value;
  rep.rel_err = rep.closed_form == 0.0 ? std::abs(rep.numeric)
                                       : std::abs(rep.numeric - rep.closed_form) / rep.closed_form;
  const double target = std::pow(rep.closed_form, e.q());
  for (double lambda : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const double v = std::pow(lambda, e.q()) * superlevel_measure(k, e, lambda);
    rep.levels.push_back(lambda);
    rep.level_values.push_back(v);
    const double err = target == 0.0 ? v : std::abs(v - target) / target;
    rep.level_max_rel_err = std::max(rep.level_max_rel_err, err);
  }
  rep.lambda_independent = rep.level_max_rel_err <= 0.01;
  return rep;
}

struct RatioReport {
  double value = 0.0;
  std::vector<double> ratios;  // one per accepted family entry
  std::vector<std::string> warnings;
};

namespace detail {

template <class Ratio>
RatioReport family_ratios(const std::vector<TestFunction>& family, Ratio&& ratio) {
  require(!family.empty(), "family: must be nonempty");
  RatioReport rep;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i].l1() == 0.0) {
      rep.warnings.push_back("family entry " + std::to_string(i) + " has zero L1 norm; skipped");
      continue;
    }
    const double r = ratio(family[i]);
    rep.ratios.push_back(r);
    rep.value = std::max(rep.value, r);
  }
  return rep;
}

}  // namespace detail

/// max_f ‖A f‖_{L^{q,∞}(grid)} / ‖f‖_1 over the family.
inline RatioReport opnorm_lower_bound(OpKind kind, const SphereKernel& k, const Exponents& e,
                                      const std::vector<TestFunction>& family, const Grid& grid,
                                      const QuadratureSpec& quad = {}, int workers = 0) {
  return detail::family_ratios(family, [&](const TestFunction& f) {
    const auto field = grid_apply(kind, k, e, f, grid, quad, workers);
    return weak_quasinorm(grid, field, e.q()).value / f.l1();
  });
}

/// max_f ‖T_{|Omega|} f‖_{L^{q,∞}(grid)} / (‖K‖_{L^{q,∞}} ‖f‖_1); 0 when Omega = 0.
inline RatioReport young_monitor(const SphereKernel& k, const Exponents& e, const std::vector<TestFunction>& family,
                                 const Grid& grid, const QuadratureSpec& quad = {}, int workers = 0) {
  const double closed = homog_weak_norm_closed(k, e);
  return detail::family_ratios(family, [&](const TestFunction& f) {
    if (closed == 0.0) return 0.0;
    const auto field = grid_apply(OpKind::t_abs, k, e, f, grid, quad, workers);
    return weak_quasinorm(grid, field, e.q()).value / (closed * f.l1());
  });
}

struct TypesRow {
  double t = 0.0;
  double lambda = 0.0;
  double type1 = 0.0;  // ‖g_t - g‖_{L^{q,∞}}
  double type2 = 0.0;  // |{|g_t - g| > λ}|
  double type3 = 0.0;  // | |{|g_t| > λ}| - |{|g| > λ}| |
};

/// Convergence-type metrics of a family {(t, g_t)} against g on a shared grid.
inline std::vector<TypesRow> convergence_types(const std::vector<std::pair<double, std::vector<double>>>& family,
                                               std::span<const double> target, std::span<const double> lambdas,
                                               const Grid& grid, double q) {
  detail::require(target.size() == grid.size(), "convergence_types: target does not match the grid");
  detail::require(!lambdas.empty(), "convergence_types: lambda grid must be nonempty");
  std::vector<TypesRow> rows;
  const auto mu = grid.measures();
  for (const auto& [t, g] : family) {
    detail::require(g.size() == grid.size(), "convergence_types: family member does not match the grid");
    std::vector<double> diff(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) diff[i] = g[i] - target[i];
    const double type1 = weak_quasinorm(diff, mu, q).value;
    for (double lambda : lambdas) {
      TypesRow row{t, lambda, type1, distribution_measure(diff, mu, lambda), 0.0};
      row.type3 = std::abs(distribution_measure(g, mu, lambda) - distribution_measure(target, mu, lambda));
      rows.push_back(row);
    }
  }
  return rows;
}

struct ReductionRow {
  double eps = 0.0;
  double lhs = 0.0;         // D_Omega(t)
  double d_eps = 0.0;       // D_{Omega_eps}(t)
  double m_diff = 0.0;      // ‖M_{Omega-Omega_eps} f_t‖ (M) or ‖T_{|Omega-Omega_eps|} |f_t|‖ (T)
  double field_diff = 0.0;  // ‖f‖_1 ‖(Omega - Omega_eps) field‖_{q,∞}
  double constant = 0.0;    // lhs / (d_eps + m_diff + field_diff)
  double kernel_gap = 0.0;  // ‖Omega - Omega_eps‖_{L^q(S^{n-1})}
  bool holds = false;       // constant <= 4
};

struct ReductionReport {
  OpKind op = OpKind::maximal;
  double t = 0.0;
  std::vector<ReductionRow> rows;
  bool gaps_decreasing = true;
  bool all_hold = true;
};

/// Splits D_Omega(t) through the cap-averaged kernels Omega_eps:
///   D_Omega <= C (D_{Omega_eps} + ‖M_{Omega-Omega_eps} f_t‖ + ‖f‖_1 ‖(Omega-Omega_eps) field‖).
inline ReductionReport reduction_decomposition(OpKind kind, const SphereKernel& rough,
                                               std::span<const double> eps_schedule, const Exponents& e,
                                               const TestFunction& f, double rho, double t, const Grid& grid,
                                               const QuadratureSpec& quad = {}, int workers = 0,
                                               int table_size = kDefaultTableSize) {
  detail::require(!eps_schedule.empty(), "eps_schedule: must not be empty");
  for (std::size_t i = 1; i < eps_schedule.size(); ++i)
    detail::require(eps_schedule[i] < eps_schedule[i - 1], "eps_schedule: must be strictly decreasing");
  const double ts[] = {t};
  detail::check_schedule(ts, rho, f.support_radius());
  detail::check_grid(grid, e, rho);
  detail::check_inputs(rough, e, f, quad);

  ReductionReport rep;
  rep.op = kind;
  rep.t = t;
  const TestFunction ft = f.rescaled(t);
  const double coef = limit_coefficient(kind, f);
  const double q = e.q();
  const auto pts = grid.points();
  const double lhs = weak_quasinorm(grid, limit_difference(kind, rough, e, ft, coef, grid, quad, workers), q).value;

  for (double eps : eps_schedule) {
    const SphereKernel smooth = mollify_kernel(rough, eps, table_size);
    ReductionRow row;
    row.eps = eps;
    row.lhs = lhs;
    row.d_eps = weak_quasinorm(grid, limit_difference(kind, smooth, e, ft, coef, grid, quad, workers), q).value;
    // Omega - Omega_eps as a table on the mollifier's nodes (n = 1: a pair).
    SphereKernel gap = smooth;
    if (e.dim() == 1) {
      gap = SphereKernel::pair(rough.at_side(-1) - smooth.at_side(-1), rough.at_side(1) - smooth.at_side(1));
    } else {
      std::vector<double> v(static_cast<std::size_t>(table_size));
      for (int i = 0; i < table_size; ++i) {
        const double th = kTwoPi * i / table_size;
        v[i] = rough.at_angle(th) - smooth.at_angle(th);
      }
      gap = SphereKernel::table(std::move(v));
    }
    // |A_Omega f - A_{Omega_eps} f| <= M_{Omega-Omega_eps} f for M, T_{|Omega-Omega_eps|} |f| for T.
    const auto gap_values = kind == OpKind::maximal ? grid_apply(OpKind::maximal, gap, e, ft, grid, quad, workers)
                                                    : grid_apply_dominant(gap, e, ft, grid, quad, workers);
    row.m_diff = weak_quasinorm(grid, gap_values, q).value;
    std::vector<double> gap_field(grid.size());
    const HomogeneousField gf{gap, e, false};
    for (std::size_t i = 0; i < grid.size(); ++i) gap_field[i] = std::abs(coef) * gf(pts[i]);
    row.field_diff = weak_quasinorm(grid, gap_field, q).value;
    const double rhs = row.d_eps + row.m_diff + row.field_diff;
    row.constant = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    row.kernel_gap = lq_distance(rough, smooth, q);
    row.holds = row.constant <= 4.0;
    rep.all_hold = rep.all_hold && row.holds;
    if (!rep.rows.empty() && !(row.kernel_gap < rep.rows.back().kernel_gap)) rep.gaps_decreasing = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace roughfrac
