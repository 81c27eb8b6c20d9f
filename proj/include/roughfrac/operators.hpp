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

// Pointwise and grid evaluation of
//
//   T f(x) = ∫ Omega(x - y) |x - y|^{alpha - n} f(y) dy
//          = ∫_0^∞ r^{alpha - 1} ∫_{S^{n-1}} Omega(θ) f(x - rθ) dσ(θ) dr,
//   M f(x) = sup_{r > 0} r^{alpha - n} ∫_{B(x, r)} |Omega(x - y) f(y)| dy,
//
// in polar coordinates centered at x. The radial axis is cut at every radius
// where the sphere ∂B(x, r) meets a component boundary or center of f. On
// S^1 the angular integral runs only over the arcs that meet supp f, split at
// kernel jumps; radial segments use the substitution r = m - h cos ψ, which
// absorbs the square-root behaviour of the arc length at segment ends. A
// segment that starts at r = 0 under a non-polynomial weight r^{alpha-1} is
// integrated on a geometrically graded mesh.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "roughfrac/errors.hpp"
#include "roughfrac/fields.hpp"
#include "roughfrac/functions.hpp"
#include "roughfrac/grid.hpp"
#include "roughfrac/kernel.hpp"
#include "roughfrac/lorentz.hpp"
#include "roughfrac/parallel.hpp"
#include "roughfrac/quadrature.hpp"

namespace roughfrac {

enum class OpKind { maximal, t_abs, t_signed };

inline const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::maximal: return "M";
    case OpKind::t_abs: return "T_abs";
    default: return "T_signed";
  }
}

struct QuadratureSpec {
  int angular_nodes = 256;  // Gauss nodes per full circle (n = 2)
  int radial_panels = 64;   // Gauss panels per radial integral, shared by its segments
  double grading_ratio = 0.3;  // geometric mesh ratio toward r = 0 for the r^{alpha-1} weight
  int maximal_radius_samples = 64;
  int refinement_passes = 2;

  void validate() const {
    detail::require(angular_nodes >= 8, "quadrature: angular_nodes must be >= 8");
    detail::require(radial_panels >= 8, "quadrature: radial_panels must be >= 8");
    detail::require(maximal_radius_samples >= 8, "quadrature: maximal_radius_samples must be >= 8");
    detail::require(refinement_passes >= 0, "quadrature: refinement_passes must be >= 0");
    detail::require(grading_ratio > 0.0 && grading_ratio < 1.0, "quadrature: grading_ratio must be in (0, 1)");
  }
};

namespace detail {

class PointIntegrator {
 public:
  PointIntegrator(const SphereKernel& k, const TestFunction& f, Point x, bool abs_kernel, bool abs_f,
                  const QuadratureSpec& quad)
      : kernel_(k), x_(x), abs_kernel_(abs_kernel), abs_f_(abs_f), quad_(quad), dim_(f.dim()) {
    require(k.dim() == f.dim(), "operator: kernel and test function dimensions differ");
    for (const auto& p : f.pieces()) {
      if (p.weight == 0.0) continue;
      Part part{p.center, p.radius, p.weight, p.profile, p.scale, 0.0, 0.0};
      const Point rel = x - p.center;
      part.dist = norm(rel);
      part.angle = std::atan2(rel.y, rel.x);
      parts_.push_back(part);
    }
    reach_ = 0.0;
    gap_ = parts_.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    std::vector<double> b{0.0};
    for (const auto& p : parts_) {
      reach_ = std::max(reach_, p.dist + p.radius);
      gap_ = std::min(gap_, std::max(0.0, p.dist - p.radius));
      if (dim_ == 1) {
        const double s = x.x - p.center.x;
        for (double v : {s - p.radius, s, s + p.radius, -s - p.radius, -s, -s + p.radius})
          if (v > 0.0) b.push_back(v);
      } else {
        for (double v : {p.dist - p.radius, p.radius - p.dist, p.dist, p.dist + p.radius})
          if (v > 0.0) b.push_back(v);
      }
    }
    std::sort(b.begin(), b.end());
    for (double v : b)
      if (breaks_.empty() || v > breaks_.back() * (1.0 + 1e-14) + 1e-300) breaks_.push_back(v);
    if (const auto& kb = kernel_.breakpoints(); !kb.empty()) kernel_breaks_ = kb;
    segments_ = std::max<int>(1, static_cast<int>(breaks_.size()) - 1);
  }

  bool empty() const { return parts_.empty(); }
  double reach() const { return reach_; }
  double gap() const { return gap_; }
  const std::vector<double>& breaks() const { return breaks_; }

  /// ∫_{S^{n-1}} W(θ) φ(f(x - rθ)) dσ(θ).
  double inner(double r) const {
    if (dim_ == 1) return weight_at_side(1) * fval({x_.x - r, 0.0}) + weight_at_side(-1) * fval({x_.x + r, 0.0});
    return inner_circle(r);
  }

  /// ∫_a^b r^{gamma - 1} inner(r) dr.
  double integrate(double a, double b, double gamma) const {
    if (!(b > a)) return 0.0;
    double sum = 0.0;
    for (std::size_t s = 0; s + 1 < breaks_.size(); ++s) {
      const double s0 = breaks_[s], s1 = breaks_[s + 1];
      const double lo = std::max(a, s0), hi = std::min(b, s1);
      if (!(hi > lo)) continue;
      sum += integrate_segment(s0, s1, lo, hi, gamma);
    }
    return sum;
  }

 private:
  struct Part {
    Point center;
    double radius;
    double weight;
    const Profile* profile;
    double scale;
    double dist;
    double angle;
  };

  double weight_at_side(int s) const {
    const double w = kernel_.at_side(s);
    return abs_kernel_ ? std::abs(w) : w;
  }
  double weight_at_angle(double th) const {
    const double w = kernel_.at_angle(th);
    return abs_kernel_ ? std::abs(w) : w;
  }

  double fval(Point y) const {
    double v = 0.0;
    for (const auto& p : parts_) v += p.weight * profile_value(*p.profile, norm(y - p.center) / p.scale);
    return abs_f_ ? std::abs(v) : v;
  }

  double inner_circle(double r) const {
    // Arc of directions θ with x - rθ inside each component disk.
    struct Arc {
      double center;
      double half;  // >= π means the full circle
    };
    std::vector<Arc> arcs;
    arcs.reserve(parts_.size());
    for (const auto& p : parts_) {
      if (p.dist <= 1e-15 * (p.radius + r)) {
        if (r < p.radius) arcs.push_back({0.0, kPi});
        continue;
      }
      const double c = (r * r + p.dist * p.dist - p.radius * p.radius) / (2.0 * r * p.dist);
      if (c >= 1.0) continue;
      arcs.push_back({p.angle, c <= -1.0 ? kPi : std::acos(c)});
    }
    if (arcs.empty()) return 0.0;

    std::vector<double> cuts{0.0, kTwoPi};
    for (const auto& a : arcs) {
      if (a.half >= kPi) continue;
      cuts.push_back(wrap_angle(a.center - a.half));
      cuts.push_back(wrap_angle(a.center + a.half));
      cuts.push_back(wrap_angle(a.center));
    }
    for (double t : kernel_breaks_) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());

    auto covered = [&](double th) {
      for (const auto& a : arcs) {
        if (a.half >= kPi) return true;
        double d = std::abs(wrap_angle(th - a.center));
        d = std::min(d, kTwoPi - d);
        if (d < a.half) return true;
      }
      return false;
    };
    auto integrand = [&](double th) {
      return weight_at_angle(th) * fval({x_.x - r * std::cos(th), x_.y - r * std::sin(th)});
    };
    const double per_radian = quad_.angular_nodes / (quad::kGaussOrder * kTwoPi);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (!(b > a) || !covered(0.5 * (a + b))) continue;
      const int panels = std::max(1, static_cast<int>(std::ceil(per_radian * (b - a))));
      sum += quad::composite(a, b, panels, integrand);
    }
    return sum;
  }

  double integrate_segment(double s0, double s1, double lo, double hi, double gamma) const {
    const int seg_panels = std::max(1, quad_.radial_panels / segments_);
    const bool singular_weight = std::abs(gamma - std::round(gamma)) > 1e-12 || gamma < 1.0;
    double sum = 0.0;
    if (lo == 0.0 && singular_weight) {
      // Geometric mesh on [0, c]; the innermost piece [0, e] uses inner(e/2) e^γ/γ.
      const double c = std::min(hi, 0.5 * s1);
      const double sigma = quad_.grading_ratio;
      const int levels = static_cast<int>(std::ceil(13.0 * std::log(10.0) / (gamma * std::log(1.0 / sigma))));
      double top = c;
      for (int j = 0; j < levels; ++j) {
        const double bottom = top * sigma;
        sum += quad::panel(bottom, top, [&](double r) { return std::pow(r, gamma - 1.0) * inner(r); });
        top = bottom;
      }
      sum += inner(0.5 * top) * std::pow(top, gamma) / gamma;
      lo = c;
      if (!(hi > lo)) return sum;
    }
    auto weight = [gamma](double r) { return gamma == 1.0 ? 1.0 : std::pow(r, gamma - 1.0); };
    if (dim_ == 1) {
      const int panels = std::max(1, static_cast<int>(std::ceil(seg_panels * (hi - lo) / (s1 - s0))));
      return sum + quad::composite(lo, hi, panels, [&](double r) { return weight(r) * inner(r); });
    }
    const double m = 0.5 * (s0 + s1), h = 0.5 * (s1 - s0);
    auto psi_of = [&](double r) { return std::acos(std::clamp((m - r) / h, -1.0, 1.0)); };
    const double pa = psi_of(lo), pb = psi_of(hi);
    const int panels = std::max(1, static_cast<int>(std::ceil(seg_panels * (pb - pa) / kPi)));
    return sum + quad::composite(pa, pb, panels, [&](double psi) {
             const double r = m - h * std::cos(psi);
             return h * std::sin(psi) * weight(r) * inner(r);
           });
  }

  const SphereKernel& kernel_;
  Point x_;
  bool abs_kernel_;
  bool abs_f_;
  QuadratureSpec quad_;
  int dim_;
  std::vector<Part> parts_;
  std::vector<double> breaks_;
  std::vector<double> kernel_breaks_;
  double reach_ = 0.0;
  double gap_ = 0.0;
  int segments_ = 1;
};

inline void check_inputs(const SphereKernel& k, const Exponents& e, const TestFunction& f,
                         const QuadratureSpec& quad) {
  require(k.dim() == e.dim() && f.dim() == e.dim(), "operator: kernel, exponents and function dimensions differ");
  quad.validate();
}

inline double fractional_integral(const SphereKernel& k, const Exponents& e, const TestFunction& f, Point x,
                                  const QuadratureSpec& quad, bool abs_kernel) {
  check_inputs(k, e, f, quad);
  const PointIntegrator pi(k, f, x, abs_kernel, false, quad);
  if (pi.empty()) return 0.0;
  return pi.integrate(pi.gap(), pi.reach(), e.alpha());
}

}  // namespace detail

/// T_Omega^alpha f(x).
inline double frac_integral(const SphereKernel& k, const Exponents& e, const TestFunction& f, Point x,
                            const QuadratureSpec& quad = {}) {
  return detail::fractional_integral(k, e, f, x, quad, false);
}

/// T_{|Omega|}^alpha f(x) (f keeps its sign).
inline double frac_integral_abs(const SphereKernel& k, const Exponents& e, const TestFunction& f, Point x,
                                const QuadratureSpec& quad = {}) {
  return detail::fractional_integral(k, e, f, x, quad, true);
}

/// M_Omega^alpha f(x). Radii are scanned over [dist(x, supp f), reach] on a
/// log grid plus every kink radius, then refined around the best candidate.
inline double frac_maximal(const SphereKernel& k, const Exponents& e, const TestFunction& f, Point x,
                           const QuadratureSpec& quad = {}) {
  detail::check_inputs(k, e, f, quad);
  const detail::PointIntegrator pi(k, f, x, true, true, quad);
  if (pi.empty() || k.is_zero()) return 0.0;
  const int n = e.dim();
  const double hi = pi.reach();
  const double lo = pi.gap() > 0.0 ? pi.gap() : hi * 1e-4;

  std::vector<double> radii;
  const int samples = quad.maximal_radius_samples;
  for (int i = 0; i <= samples; ++i) radii.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / samples));
  for (double b : pi.breaks())
    if (b > lo && b < hi) radii.push_back(b);
  radii.front() = lo;
  radii.back() = hi;
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  // Ball integrals B(r) = ∫_0^r s^{n-1} inner(s) ds, accumulated in order.
  std::vector<double> ball(radii.size());
  double acc = pi.integrate(0.0, radii[0], n);
  ball[0] = acc;
  for (std::size_t i = 1; i < radii.size(); ++i) {
    acc += pi.integrate(radii[i - 1], radii[i], n);
    ball[i] = acc;
  }
  auto objective = [&](double r, double b) { return std::pow(r, e.alpha() - n) * b; };
  std::size_t best = 0;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (objective(radii[i], ball[i]) > objective(radii[best], ball[best])) best = i;
  double best_value = objective(radii[best], ball[best]);

  // Three-point refinement: bisect both neighbouring gaps of the current best.
  double left_r = best > 0 ? radii[best - 1] : radii[best], left_b = best > 0 ? ball[best - 1] : ball[best];
  double mid_r = radii[best], mid_b = ball[best];
  double right_r = best + 1 < radii.size() ? radii[best + 1] : radii[best];
  for (int pass = 0; pass < quad.refinement_passes; ++pass) {
    const double lr = 0.5 * (left_r + mid_r), rr = 0.5 * (mid_r + right_r);
    const double lb = left_b + pi.integrate(left_r, lr, n);
    const double rb = mid_b + pi.integrate(mid_r, rr, n);
    const double vl = objective(lr, lb), vm = objective(mid_r, mid_b), vr = objective(rr, rb);
    if (vl > vm && vl >= vr) {
      right_r = mid_r;
      mid_r = lr, mid_b = lb;
    } else if (vr > vm) {
      left_r = mid_r, left_b = mid_b;
      mid_r = rr, mid_b = rb;
    } else {
      left_r = lr, left_b = lb;
      right_r = rr;
    }
    best_value = std::max({best_value, vl, vm, vr});
  }
  return best_value;
}

/// Value of the operator of the given kind at x.
inline double apply_operator(OpKind kind, const SphereKernel& k, const Exponents& e, const TestFunction& f, Point x,
                             const QuadratureSpec& quad = {}) {
  switch (kind) {
    case OpKind::maximal: return frac_maximal(k, e, f, x, quad);
    case OpKind::t_abs: return frac_integral_abs(k, e, f, x, quad);
    default: return frac_integral(k, e, f, x, quad);
  }
}

/// The limit field K(x): |Omega(x)|/|x|^{n-α} for M and T_{|Omega|}, the signed
/// field for T_Omega.
inline double limit_field_value(OpKind kind, const SphereKernel& k, const Exponents& e, Point x) {
  return HomogeneousField{k, e, kind == OpKind::t_signed}(x);
}

/// Coefficient multiplying K in the limit of A f_t: ‖f‖_1 for M (which sees
/// |f|), the signed mass ∫f for the linear operators.
inline double limit_coefficient(OpKind kind, const TestFunction& f) {
  return kind == OpKind::maximal ? f.l1() : f.mass();
}

namespace detail {

template <class Fn>
std::vector<double> grid_map(const char* label, const Grid& grid, int workers, Fn&& fn) {
  std::vector<double> out(grid.size());
  const auto pts = grid.points();
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    try {
      out[i] = fn(pts[i]);
    } catch (const std::exception& ex) {
      std::ostringstream os;
      os.precision(9);
      os << label << " failed at point (" << pts[i].x << ", " << pts[i].y << "): " << ex.what();
      throw NumericError(os.str());
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) {
      std::ostringstream os;
      os.precision(9);
      os << label << " produced a non-finite value at point (" << pts[i].x << ", " << pts[i].y << ")";
      throw NumericError(os.str());
    }
  }
  return out;
}

}  // namespace detail

/// T_{|Omega|}^alpha |f|(x): the positive operator dominating M and T pointwise.
inline double frac_integral_dominant(const SphereKernel& k, const Exponents& e, const TestFunction& f, Point x,
                                     const QuadratureSpec& quad = {}) {
  detail::check_inputs(k, e, f, quad);
  const detail::PointIntegrator pi(k, f, x, true, true, quad);
  if (pi.empty()) return 0.0;
  return pi.integrate(pi.gap(), pi.reach(), e.alpha());
}

/// Pointwise application at every grid sample. The output is positional, so
/// it does not depend on the worker count.
inline std::vector<double> grid_apply(OpKind kind, const SphereKernel& k, const Exponents& e, const TestFunction& f,
                                      const Grid& grid, const QuadratureSpec& quad = {}, int workers = 0) {
  detail::require(grid.dim() == e.dim(), "grid_apply: grid dimension differs from exponents");
  detail::check_inputs(k, e, f, quad);
  return detail::grid_map(to_string(kind), grid, workers,
                          [&](Point x) { return apply_operator(kind, k, e, f, x, quad); });
}

/// T_{|Omega|} |f| at every grid sample.
inline std::vector<double> grid_apply_dominant(const SphereKernel& k, const Exponents& e, const TestFunction& f,
                                               const Grid& grid, const QuadratureSpec& quad = {}, int workers = 0) {
  detail::require(grid.dim() == e.dim(), "grid_apply: grid dimension differs from exponents");
  detail::check_inputs(k, e, f, quad);
  return detail::grid_map("T_abs|f|", grid, workers,
                          [&](Point x) { return frac_integral_dominant(k, e, f, x, quad); });
}

/// A f(x) - coef · K(x) over the grid, with f already dilated by the caller.
inline std::vector<double> limit_difference(OpKind kind, const SphereKernel& k, const Exponents& e,
                                            const TestFunction& ft, double coef, const Grid& grid,
                                            const QuadratureSpec& quad = {}, int workers = 0) {
  std::vector<double> field = grid_apply(kind, k, e, ft, grid, quad, workers);
  const auto pts = grid.points();
  for (std::size_t i = 0; i < field.size(); ++i) field[i] -= coef * limit_field_value(kind, k, e, pts[i]);
  return field;
}

/// Pointwise ℓ^r magnitude of {A f_{j,t}(x) - K(x) c_j} (subtract_limit) or of {A f_j(x)}.
inline std::vector<double> vector_lr_field(OpKind kind, const SphereKernel& k, const Exponents& e,
                                           const VectorTestFunction& vf, const Grid& grid,
                                           const QuadratureSpec& quad, bool subtract_limit, double t = 1.0,
                                           int workers = 0) {
  vf.validate();
  detail::require(vf.entries.front().dim() == e.dim(), "vector_lr_field: entries do not match the dimension");
  if (subtract_limit) detail::require(t > 0.0, "vector_lr_field: t must be > 0");
  std::vector<double> acc(grid.size(), 0.0);
  for (const auto& f : vf.entries) {
    const std::vector<double> part =
        subtract_limit ? limit_difference(kind, k, e, f.rescaled(t), limit_coefficient(kind, f), grid, quad, workers)
                       : grid_apply(kind, k, e, f, grid, quad, workers);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::pow(std::abs(part[i]), vf.r);
  }
  for (double& v : acc) v = std::pow(v, 1.0 / vf.r);
  return acc;
}

}  // namespace roughfrac
