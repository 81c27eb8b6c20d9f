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

// Compactly supported test functions with closed-form L^1 norms, and the
// L^1-preserving dilations f_t(x) = t^{-n} f(x / t).

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "roughfrac/errors.hpp"
#include "roughfrac/point.hpp"

namespace roughfrac {

/// χ_{B(0, radius)}.
struct BallProfile {
  double radius = 1.0;
  friend bool operator==(const BallProfile&, const BallProfile&) = default;
};

/// (1 - |x| / radius)_+.
struct ConeProfile {
  double radius = 1.0;
  friend bool operator==(const ConeProfile&, const ConeProfile&) = default;
};

/// exp(-|x|^2 / (2 sigma^2)) χ_{B(0, cutoff)}.
struct GaussProfile {
  double sigma = 1.0;
  double cutoff = 3.0;
  friend bool operator==(const GaussProfile&, const GaussProfile&) = default;
};

using Profile = std::variant<BallProfile, ConeProfile, GaussProfile>;

inline double profile_radius(const Profile& p) {
  return std::visit(
      [](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, GaussProfile>) return s.cutoff;
        else return s.radius;
      },
      p);
}

/// Value at distance r from the profile's center.
inline double profile_value(const Profile& p, double r) {
  return std::visit(
      [r](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallProfile>) {
          return r <= s.radius ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<S, ConeProfile>) {
          return r < s.radius ? 1.0 - r / s.radius : 0.0;
        } else {
          return r <= s.cutoff ? std::exp(-r * r / (2.0 * s.sigma * s.sigma)) : 0.0;
        }
      },
      p);
}

/// ∫_{R^n} profile.
inline double profile_mass(const Profile& p, int dim) {
  return std::visit(
      [dim](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallProfile>) {
          return dim == 1 ? 2.0 * s.radius : kPi * s.radius * s.radius;
        } else if constexpr (std::is_same_v<S, ConeProfile>) {
          return dim == 1 ? s.radius : kPi * s.radius * s.radius / 3.0;
        } else {
          const double z = s.cutoff / s.sigma;
          if (dim == 1) return s.sigma * std::sqrt(kTwoPi) * std::erf(z / std::sqrt(2.0));
          return kTwoPi * s.sigma * s.sigma * (-std::expm1(-0.5 * z * z));
        }
      },
      p);
}

struct Component {
  double weight = 1.0;
  Profile profile;
  Point shift;
  friend bool operator==(const Component&, const Component&) = default;
};

/// f(x) = scale^{-n} Σ_i weight_i · profile_i(x / scale - shift_i).
///
/// The dilation parameter is kept separate from the base profile so that
/// rescaling composes exactly: rescaled(a).rescaled(b) == rescaled(a * b).
class TestFunction {
 public:
  static TestFunction indicator(int dim, double radius) { return single(dim, BallProfile{radius}); }
  static TestFunction cone(int dim, double radius) { return single(dim, ConeProfile{radius}); }
  static TestFunction gaussian(int dim, double sigma, double cutoff) {
    detail::require(sigma > 0.0, "gauss: sigma must be > 0");
    return single(dim, GaussProfile{sigma, cutoff});
  }
  static TestFunction mixture(int dim, std::vector<Component> parts) {
    detail::require(dim == 1 || dim == 2, "test function: dim must be 1 or 2");
    detail::require(!parts.empty(), "test function: mixture needs at least one component");
    for (const auto& c : parts) {
      detail::require(profile_radius(c.profile) > 0.0, "test function: radius must be > 0");
      detail::require(dim == 2 || c.shift.y == 0.0, "test function: 1-d shift must have y == 0");
    }
    TestFunction f;
    f.dim_ = dim;
    f.parts_ = std::move(parts);
    f.l1_base_ = f.compute_l1();
    return f;
  }

  int dim() const { return dim_; }
  double scale() const { return scale_; }
  const std::vector<Component>& parts() const { return parts_; }

  double operator()(Point x) const {
    const Point z = (1.0 / scale_) * x;
    double sum = 0.0;
    for (const auto& c : parts_) sum += c.weight * profile_value(c.profile, norm(z - c.shift));
    return sum / std::pow(scale_, dim_);
  }

  /// f_t(x) = t^{-n} f(x / t).
  TestFunction rescaled(double t) const {
    detail::require(t > 0.0, "rescale: t must be > 0");
    TestFunction g = *this;
    g.scale_ = scale_ * t;
    return g;
  }

  /// c · f.
  TestFunction scaled_by(double c) const {
    TestFunction g = *this;
    for (auto& part : g.parts_) part.weight *= c;
    g.l1_base_ *= std::abs(c);
    return g;
  }

  /// Smallest R with supp f ⊆ B(0, R) (from the component geometry).
  double support_radius() const {
    double r = 0.0;
    for (const auto& c : parts_) r = std::max(r, norm(c.shift) + profile_radius(c.profile));
    return scale_ * r;
  }

  /// ‖f‖_{L^1}; invariant under rescaling.
  double l1() const { return l1_base_; }

  /// ∫ f (signed).
  double mass() const {
    double m = 0.0;
    for (const auto& c : parts_) m += c.weight * profile_mass(c.profile, dim_);
    return m;
  }

  /// ∫ y f(y) dy.
  Point first_moment() const {
    Point m;
    for (const auto& c : parts_) m = m + (c.weight * profile_mass(c.profile, dim_) * scale_) * c.shift;
    return m;
  }

  struct Piece {
    Point center;
    double radius;
    double weight;  // already divided by scale^n
    const Profile* profile;
    double scale;
  };

  /// Components of the dilated function in physical coordinates.
  std::vector<Piece> pieces() const {
    std::vector<Piece> out;
    const double amp = 1.0 / std::pow(scale_, dim_);
    for (const auto& c : parts_)
      out.push_back({scale_ * c.shift, scale_ * profile_radius(c.profile), c.weight * amp, &c.profile, scale_});
    return out;
  }

  friend bool operator==(const TestFunction& a, const TestFunction& b) {
    return a.dim_ == b.dim_ && a.scale_ == b.scale_ && a.parts_ == b.parts_ && a.l1_base_ == b.l1_base_;
  }

 private:
  static TestFunction single(int dim, Profile p) { return mixture(dim, {Component{1.0, p, Point{}}}); }

  double compute_l1() const {
    bool all_pos = true, all_neg = true;
    for (const auto& c : parts_) {
      all_pos = all_pos && c.weight >= 0.0;
      all_neg = all_neg && c.weight <= 0.0;
    }
    if (all_pos || all_neg) {
      double s = 0.0;
      for (const auto& c : parts_) s += std::abs(c.weight) * profile_mass(c.profile, dim_);
      return s;
    }
    return numeric_l1();
  }

  // Mixed-sign mixtures: |f| is integrated after summing the components. Along
  // each line the zeros of f are located and used as breakpoints, so every
  // Gauss-Kronrod panel sees a smooth integrand.
  template <class G>
  static double abs_line_integral(G&& g, std::vector<double> breaks, double tol) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<double> pts;
    constexpr int kProbe = 48;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i], b = breaks[i + 1];
      if (!(b > a)) continue;
      pts.push_back(a);
      double xl = a + (b - a) * 0.5 / kProbe, gl = g(xl);
      for (int j = 1; j < kProbe; ++j) {
        const double xr = a + (b - a) * (j + 0.5) / kProbe, gr = g(xr);
        if ((gl < 0.0 && gr > 0.0) || (gl > 0.0 && gr < 0.0)) {
          double lo = xl, hi = xr;
          for (int it = 0; it < 60 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            ((g(mid) < 0.0) == (gl < 0.0) ? lo : hi) = mid;
          }
          pts.push_back(0.5 * (lo + hi));
        }
        xl = xr, gl = gr;
      }
    }
    if (!breaks.empty()) pts.push_back(breaks.back());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (pts[i + 1] > pts[i])
        sum += GK::integrate([&](double x) { return std::abs(g(x)); }, pts[i], pts[i + 1], 8, tol);
    return sum;
  }

  double numeric_l1() const {
    const TestFunction& self = *this;
    std::vector<double> xb;
    for (const auto& c : parts_) {
      const double r = profile_radius(c.profile);
      xb.insert(xb.end(), {c.shift.x - r, c.shift.x, c.shift.x + r});
    }
    if (dim_ == 1) return abs_line_integral([&](double x) { return self.base_value({x, 0.0}); }, xb, 1e-12);
    auto column = [&](double x) {
      std::vector<double> yb;
      for (const auto& c : parts_) {
        const double r = profile_radius(c.profile);
        const double dx = x - c.shift.x;
        yb.push_back(c.shift.y);
        if (std::abs(dx) < r) {
          const double h = std::sqrt(r * r - dx * dx);
          yb.push_back(c.shift.y - h);
          yb.push_back(c.shift.y + h);
        }
      }
      return abs_line_integral([&](double y) { return self.base_value({x, y}); }, yb, 1e-11);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    std::sort(xb.begin(), xb.end());
    xb.erase(std::unique(xb.begin(), xb.end()), xb.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < xb.size(); ++i) s += GK::integrate(column, xb[i], xb[i + 1], 10, 1e-9);
    return s;
  }

  double base_value(Point z) const {
    double sum = 0.0;
    for (const auto& c : parts_) sum += c.weight * profile_value(c.profile, norm(z - c.shift));
    return sum;
  }

  int dim_ = 1;
  double scale_ = 1.0;
  std::vector<Component> parts_;
  double l1_base_ = 0.0;
};

inline double eval_test_function(const TestFunction& f, Point x) { return f(x); }
inline TestFunction rescale(const TestFunction& f, double t) { return f.rescaled(t); }
inline double l1_norm(const TestFunction& f) { return f.l1(); }

/// g(x) = f(x / R) / (R^n ‖f‖_1), for which g_t = f_{Rt} / ‖f‖_1.
inline TestFunction normalized_profile(const TestFunction& f, double radius) {
  detail::require(radius > 0.0, "normalization radius must be > 0");
  detail::require(f.l1() > 0.0, "cannot normalize a function with zero L1 norm");
  return f.rescaled(radius).scaled_by(1.0 / f.l1());
}

/// A finite sequence {f_j} with the ℓ^r exponent used to combine them.
struct VectorTestFunction {
  std::vector<TestFunction> entries;
  double r = 2.0;

  void validate() const {
    detail::require(!entries.empty(), "vector test function: need J >= 1 entries");
    detail::require(r > 1.0 && std::isfinite(r), "vector test function: r must be in (1, inf)");
    for (const auto& f : entries)
      detail::require(f.dim() == entries.front().dim(), "vector test function: entries have mixed dimensions");
  }
};

}  // namespace roughfrac
