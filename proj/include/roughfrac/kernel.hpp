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

// Rough kernels on the unit sphere S^{n-1} (n = 1, 2) and their homogeneous
// degree-zero extensions to R^n \ {0}.
//
// On S^0 = {-1, +1} the surface measure is counting measure (two unit point
// masses); on S^1 it is arclength, parametrized by the angle theta.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "roughfrac/errors.hpp"
#include "roughfrac/point.hpp"
#include "roughfrac/quadrature.hpp"

namespace roughfrac {

/// Resolution used when a closed-form kernel is converted to a table.
inline constexpr int kDefaultTableSize = 1 << 16;

/// n = 1: values on the negative and positive half-lines.
struct PairKernel {
  double minus = 0.0;
  double plus = 0.0;
};

/// n = 2: Omega(theta) = value.
struct ConstantKernel {
  double value = 0.0;
};

/// n = 2: Omega(theta) = a + b cos(k theta).
struct CosineKernel {
  double a = 0.0;
  double b = 0.0;
  int k = 1;
};

/// n = 2: piecewise constant. values[i] holds on [starts[i], starts[i+1]);
/// the last value wraps around through 2π back to starts[0].
struct SignPattern {
  std::vector<double> starts;
  std::vector<double> values;
};

/// n = 2: samples at theta_i = 2π i / N with periodic linear interpolation.
struct AngleTable {
  std::shared_ptr<const std::vector<double>> values;
  // cumulative[i] = integral of the interpolant over [0, theta_i], size N + 1.
  std::shared_ptr<const std::vector<double>> cumulative;
};

class SphereKernel {
 public:
  using Repr = std::variant<PairKernel, ConstantKernel, CosineKernel, SignPattern, AngleTable>;

  static SphereKernel pair(double minus, double plus) { return SphereKernel(1, PairKernel{minus, plus}); }

  static SphereKernel constant(int dim, double c) {
    detail::require(dim == 1 || dim == 2, "kernel: dim must be 1 or 2");
    if (dim == 1) return pair(c, c);
    return SphereKernel(2, ConstantKernel{c});
  }

  static SphereKernel cosine(double a, double b, int k) {
    detail::require(k >= 0, "kernel: cosine frequency must be >= 0");
    return SphereKernel(2, CosineKernel{a, b, k});
  }

  /// sign(cos theta): +1 on the right half-plane, -1 on the left.
  static SphereKernel sign_cos() { return sign_pattern({kPi / 2, 3 * kPi / 2}, {-1.0, 1.0}); }

  static SphereKernel sign_pattern(std::vector<double> starts, std::vector<double> values) {
    detail::require(!starts.empty() && starts.size() == values.size(),
                    "kernel: sign pattern needs matching, nonempty starts/values");
    std::vector<std::pair<double, double>> pieces;
    for (std::size_t i = 0; i < starts.size(); ++i) pieces.emplace_back(wrap_angle(starts[i]), values[i]);
    std::sort(pieces.begin(), pieces.end());
    SignPattern p;
    for (auto [s, v] : pieces) {
      p.starts.push_back(s);
      p.values.push_back(v);
    }
    return SphereKernel(2, std::move(p));
  }

  static SphereKernel table(std::vector<double> values) {
    detail::require(values.size() >= 8, "kernel: table needs at least 8 samples");
    const std::size_t n = values.size();
    const double h = kTwoPi / static_cast<double>(n);
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + 0.5 * h * (values[i] + values[(i + 1) % n]);
    AngleTable t;
    t.values = std::make_shared<const std::vector<double>>(std::move(values));
    t.cumulative = std::make_shared<const std::vector<double>>(std::move(cum));
    return SphereKernel(2, std::move(t));
  }

  int dim() const { return dim_; }
  const Repr& repr() const { return repr_; }

  /// Omega(x / |x|).
  double operator()(Point x) const {
    if (dim_ == 1) {
      if (x.x == 0.0) throw DomainError("kernel evaluated at the origin");
      return at_side(x.x > 0.0 ? 1 : -1);
    }
    if (x.x == 0.0 && x.y == 0.0) throw DomainError("kernel evaluated at the origin");
    return at_angle(std::atan2(x.y, x.x));
  }

  /// n = 1 only: value on the half-line of the given sign.
  double at_side(int sign) const {
    const auto& p = std::get<PairKernel>(repr_);
    return sign > 0 ? p.plus : p.minus;
  }

  /// n = 2 only: Omega(cos theta, sin theta).
  double at_angle(double theta) const {
    return std::visit(
        [theta](const auto& r) -> double {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, PairKernel>) {
            return std::cos(theta) >= 0.0 ? r.plus : r.minus;
          } else if constexpr (std::is_same_v<R, ConstantKernel>) {
            return r.value;
          } else if constexpr (std::is_same_v<R, CosineKernel>) {
            return r.a + r.b * std::cos(r.k * theta);
          } else if constexpr (std::is_same_v<R, SignPattern>) {
            const double w = wrap_angle(theta);
            auto it = std::upper_bound(r.starts.begin(), r.starts.end(), w);
            if (it == r.starts.begin()) return r.values.back();
            return r.values[static_cast<std::size_t>(it - r.starts.begin()) - 1];
          } else {
            const auto& v = *r.values;
            const std::size_t n = v.size();
            const double u = wrap_angle(theta) / kTwoPi * static_cast<double>(n);
            std::size_t i = static_cast<std::size_t>(u);
            if (i >= n) i = n - 1;
            const double frac = u - static_cast<double>(i);
            return v[i] + frac * (v[(i + 1) % n] - v[i]);
          }
        },
        repr_);
  }

  double sup_abs() const {
    return std::visit(
        [](const auto& r) -> double {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, PairKernel>) {
            return std::max(std::abs(r.minus), std::abs(r.plus));
          } else if constexpr (std::is_same_v<R, ConstantKernel>) {
            return std::abs(r.value);
          } else if constexpr (std::is_same_v<R, CosineKernel>) {
            if (r.k == 0) return std::abs(r.a + r.b);
            return std::max(std::abs(r.a + r.b), std::abs(r.a - r.b));
          } else if constexpr (std::is_same_v<R, SignPattern>) {
            double m = 0.0;
            for (double v : r.values) m = std::max(m, std::abs(v));
            return m;
          } else {
            double m = 0.0;
            for (double v : *r.values) m = std::max(m, std::abs(v));
            return m;
          }
        },
        repr_);
  }

  bool is_zero() const { return sup_abs() == 0.0; }

  /// Angles in [0, 2π) where the kernel jumps. Tables report none.
  std::vector<double> breakpoints() const {
    if (const auto* p = std::get_if<SignPattern>(&repr_)) return p->starts;
    return {};
  }

  /// n = 2: integral of Omega over [0, theta] for any real theta.
  double primitive(double theta) const {
    return std::visit(
        [theta, this](const auto& r) -> double {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, PairKernel>) {
            throw ParameterError("kernel: primitive is defined on S^1 only");
          } else if constexpr (std::is_same_v<R, ConstantKernel>) {
            return r.value * theta;
          } else if constexpr (std::is_same_v<R, CosineKernel>) {
            if (r.k == 0) return (r.a + r.b) * theta;
            return r.a * theta + r.b * std::sin(r.k * theta) / r.k;
          } else {
            const double turns = std::floor(theta / kTwoPi);
            const double w = theta - turns * kTwoPi;
            return turns * period_integral(r) + partial_integral(r, w);
          }
        },
        repr_);
  }

  /// Round-trippable text form (the CLI kernel grammar where one exists).
  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&os](const auto& r) {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, PairKernel>) {
            os << "pair:" << r.minus << "," << r.plus;
          } else if constexpr (std::is_same_v<R, ConstantKernel>) {
            os << "const:" << r.value;
          } else if constexpr (std::is_same_v<R, CosineKernel>) {
            os << "cos:" << r.a << "," << r.b << "," << r.k;
          } else if constexpr (std::is_same_v<R, SignPattern>) {
            os << "pattern:";
            for (std::size_t i = 0; i < r.starts.size(); ++i) os << (i ? ";" : "") << r.starts[i] << "=" << r.values[i];
          } else {
            os << "table[" << r.values->size() << "]";
          }
        },
        repr_);
    return os.str();
  }

 private:
  SphereKernel(int dim, Repr repr) : dim_(dim), repr_(std::move(repr)) {}

  static double period_integral(const SignPattern& p) {
    return partial_integral(p, kTwoPi);
  }
  static double period_integral(const AngleTable& t) { return t.cumulative->back(); }

  // Integral over [0, w] for w in [0, 2π].
  static double partial_integral(const SignPattern& p, double w) {
    const std::size_t m = p.starts.size();
    double sum = 0.0;
    double pos = 0.0;
    double value = p.values.back();  // holds on [0, starts[0])
    for (std::size_t i = 0; i <= m; ++i) {
      const double next = i < m ? p.starts[i] : kTwoPi;
      if (w <= next) return sum + value * (w - pos);
      sum += value * (next - pos);
      pos = next;
      if (i < m) value = p.values[i];
    }
    return sum;
  }

  static double partial_integral(const AngleTable& t, double w) {
    const auto& v = *t.values;
    const std::size_t n = v.size();
    const double h = kTwoPi / static_cast<double>(n);
    const double u = w / h;
    std::size_t i = static_cast<std::size_t>(u);
    if (i >= n) return t.cumulative->back();
    const double s = u - static_cast<double>(i);
    return (*t.cumulative)[i] + h * (s * v[i] + 0.5 * s * s * (v[(i + 1) % n] - v[i]));
  }

  int dim_ = 2;
  Repr repr_;
};

inline double eval_kernel(const SphereKernel& k, Point x) { return k(x); }

namespace detail {

// Integral of |u + (v - u) s|^q over s in [0, 1], scaled by h.
inline double linear_piece_power(double u, double v, double h, double q) {
  if ((u >= 0.0 && v >= 0.0) || (u <= 0.0 && v <= 0.0)) {
    const double au = std::abs(u), av = std::abs(v);
    if (au == av) return h * std::pow(au, q);
    return h * (std::pow(av, q + 1.0) - std::pow(au, q + 1.0)) / ((q + 1.0) * (av - au));
  }
  const double au = std::abs(u), av = std::abs(v);
  const double h0 = h * au / (au + av);
  return (h0 * std::pow(au, q) + (h - h0) * std::pow(av, q)) / (q + 1.0);
}

}  // namespace detail

/// (∫_{S^{n-1}} |Omega|^q dσ)^{1/q}: exact for closed forms and tables,
/// adaptive quadrature for cosine kernels with q != 2.
inline double sphere_norm(const SphereKernel& k, double q) {
  detail::require(q >= 1.0 && std::isfinite(q), "sphere_norm: q must be in [1, inf)");
  const double power_integral = std::visit(
      [q](const auto& r) -> double {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, PairKernel>) {
          return std::pow(std::abs(r.minus), q) + std::pow(std::abs(r.plus), q);
        } else if constexpr (std::is_same_v<R, ConstantKernel>) {
          return kTwoPi * std::pow(std::abs(r.value), q);
        } else if constexpr (std::is_same_v<R, CosineKernel>) {
          if (r.k == 0) return kTwoPi * std::pow(std::abs(r.a + r.b), q);
          if (q == 2.0) return kTwoPi * r.a * r.a + kPi * r.b * r.b;
          // Split at the zeros of a + b cos(k theta) and at multiples of π/k.
          std::vector<double> breaks;
          for (int j = 0; j <= 2 * r.k; ++j) breaks.push_back(j * kPi / r.k);
          if (r.b != 0.0 && std::abs(r.a / r.b) <= 1.0) {
            const double z = std::acos(-r.a / r.b);
            for (int j = -1; j <= r.k; ++j) {
              for (double c : {z, -z}) {
                const double theta = (c + kTwoPi * j) / r.k;
                if (theta > 0.0 && theta < kTwoPi) breaks.push_back(theta);
              }
            }
          }
          return quad::piecewise_adaptive(0.0, kTwoPi, breaks, [&r, q](double th) {
            return std::pow(std::abs(r.a + r.b * std::cos(r.k * th)), q);
          });
        } else if constexpr (std::is_same_v<R, SignPattern>) {
          double sum = 0.0;
          const std::size_t m = r.starts.size();
          for (std::size_t i = 0; i < m; ++i) {
            const double next = i + 1 < m ? r.starts[i + 1] : r.starts[0] + kTwoPi;
            sum += (next - r.starts[i]) * std::pow(std::abs(r.values[i]), q);
          }
          return sum;
        } else {
          const auto& v = *r.values;
          const std::size_t n = v.size();
          const double h = kTwoPi / static_cast<double>(n);
          double sum = 0.0;
          for (std::size_t i = 0; i < n; ++i) sum += detail::linear_piece_power(v[i], v[(i + 1) % n], h, q);
          return sum;
        }
      },
      k.repr());
  return std::pow(power_integral, 1.0 / q);
}

/// ‖Omega_1 - Omega_2‖_{L^q(S^{n-1})} by piecewise adaptive quadrature.
inline double lq_distance(const SphereKernel& a, const SphereKernel& b, double q) {
  detail::require(a.dim() == b.dim(), "lq_distance: kernels of different dimension");
  detail::require(q >= 1.0, "lq_distance: q must be >= 1");
  if (a.dim() == 1) {
    return std::pow(std::pow(std::abs(a.at_side(-1) - b.at_side(-1)), q) +
                        std::pow(std::abs(a.at_side(1) - b.at_side(1)), q),
                    1.0 / q);
  }
  std::vector<double> breaks;
  for (const SphereKernel* k : {&a, &b}) {
    for (double t : k->breakpoints()) breaks.push_back(t);
    if (const auto* t = std::get_if<AngleTable>(&k->repr())) {
      const std::size_t n = t->values->size();
      for (std::size_t i = 1; i < n; ++i) breaks.push_back(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double sum = 0.0;
  std::vector<double> edges{0.0};
  for (double t : breaks) edges.push_back(t);
  edges.push_back(kTwoPi);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    sum += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double th) { return std::pow(std::abs(a.at_angle(th) - b.at_angle(th)), q); }, edges[i], edges[i + 1], 6,
        1e-12);
  }
  return std::pow(sum, 1.0 / q);
}

/// Omega_N = Omega · χ{|Omega| <= N}. Cosine kernels become tables of `table_size` samples.
inline SphereKernel truncate_kernel(const SphereKernel& k, double level, int table_size = kDefaultTableSize) {
  detail::require(level > 0.0, "truncate_kernel: N must be > 0");
  if (level >= k.sup_abs()) return k;
  auto cut = [level](double v) { return std::abs(v) <= level ? v : 0.0; };
  if (const auto* p = std::get_if<PairKernel>(&k.repr())) return SphereKernel::pair(cut(p->minus), cut(p->plus));
  if (std::holds_alternative<ConstantKernel>(k.repr())) return SphereKernel::constant(2, 0.0);
  if (const auto* p = std::get_if<SignPattern>(&k.repr())) {
    std::vector<double> values;
    for (double v : p->values) values.push_back(cut(v));
    return SphereKernel::sign_pattern(p->starts, std::move(values));
  }
  std::vector<double> values;
  if (const auto* t = std::get_if<AngleTable>(&k.repr())) {
    for (double v : *t->values) values.push_back(cut(v));
  } else {
    detail::require(table_size >= 8, "truncate_kernel: table size must be >= 8");
    values.resize(static_cast<std::size_t>(table_size));
    for (int i = 0; i < table_size; ++i) values[i] = cut(k.at_angle(kTwoPi * i / table_size));
  }
  return SphereKernel::table(std::move(values));
}

/// Cap average over [theta - eps, theta + eps] (n = 2); identity on S^0.
inline SphereKernel mollify_kernel(const SphereKernel& k, double eps, int table_size = kDefaultTableSize) {
  detail::require(eps > 0.0 && eps <= kPi / 4, "mollify_kernel: eps must be in (0, pi/4]");
  if (k.dim() == 1) return k;
  detail::require(table_size >= 8, "mollify_kernel: table size must be >= 8");
  std::vector<double> values(static_cast<std::size_t>(table_size));
  for (int i = 0; i < table_size; ++i) {
    const double theta = kTwoPi * i / table_size;
    values[i] = (k.primitive(theta + eps) - k.primitive(theta - eps)) / (2.0 * eps);
  }
  return SphereKernel::table(std::move(values));
}

struct LipschitzEstimate {
  double value = 0.0;
  bool unbounded = false;
};

/// Largest difference quotient between adjacent sample points on the sphere,
/// under three grid doublings starting at 256 points.
inline LipschitzEstimate lipschitz_estimate(const SphereKernel& k) {
  if (k.dim() == 1) return {std::abs(k.at_side(1) - k.at_side(-1)) / 2.0, false};
  std::vector<double> ratios;
  for (int m = 256; m <= 2048; m *= 2) {
    const double chord = 2.0 * std::sin(kPi / m);
    double best = 0.0;
    double prev = k.at_angle(0.0);
    for (int i = 1; i <= m; ++i) {
      const double cur = k.at_angle(kTwoPi * (i % m) / m);
      best = std::max(best, std::abs(cur - prev) / chord);
      prev = cur;
    }
    ratios.push_back(best);
  }
  bool growing = ratios.front() > 0.0;
  for (std::size_t i = 1; i < ratios.size() && growing; ++i) growing = ratios[i] >= 1.8 * ratios[i - 1];
  return {ratios.back(), growing};
}

// ---------------------------------------------------------------------------
// Integral continuity modulus and the Dini integral.

struct DiniOptions {
  int directions = 16;  // perturbation directions (n = 2)
  int magnitudes = 8;   // perturbation magnitudes in (0, t]
  int nodes = 2048;     // midpoint nodes on S^1
  int levels = 12;      // dyadic levels t_k = 2^{-k}, k = 1..levels
};

namespace detail {

inline double perturbation_integral(const SphereKernel& k, double q, Point h, int nodes) {
  double sum = 0.0;
  if (k.dim() == 1) {
    for (double s : {-1.0, 1.0}) {
      const double base = k(Point{s, 0.0});
      sum += std::pow(std::abs(k(Point{s + h.x, 0.0}) - base), q);
    }
    return sum;
  }
  const double dtheta = kTwoPi / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double th = (i + 0.5) * dtheta;
    const Point xp{std::cos(th), std::sin(th)};
    sum += std::pow(std::abs(k(xp + h) - k(xp)), q);
  }
  return sum * dtheta;
}

}  // namespace detail

/// Grid estimate (a lower bound) of
/// ω_q(t) = (sup_{|h| <= t} ∫ |Omega(x' + h) - Omega(x')|^q dσ(x'))^{1/q}.
inline double dini_modulus(const SphereKernel& k, double q, double t, const DiniOptions& opts = {}) {
  detail::require(q >= 1.0, "dini_modulus: q must be >= 1");
  detail::require(t > 0.0, "dini_modulus: t must be > 0");
  detail::require(t < 1.0, "dini_modulus: t must be < 1 so that x' + h stays away from the origin");
  detail::require(opts.directions >= 1 && opts.magnitudes >= 1 && opts.nodes >= 8, "dini_modulus: grid too coarse");
  const int dirs = k.dim() == 1 ? 2 : opts.directions;
  auto h_of = [&](double phi, double mag) {
    return k.dim() == 1 ? Point{std::cos(phi) >= 0.0 ? mag : -mag, 0.0}
                        : Point{mag * std::cos(phi), mag * std::sin(phi)};
  };
  const double dphi = kTwoPi / dirs;
  const double dmag = t / opts.magnitudes;
  double best = -1.0, best_phi = 0.0, best_mag = t;
  for (int j = 0; j < dirs; ++j) {
    for (int i = 1; i <= opts.magnitudes; ++i) {
      const double phi = j * dphi, mag = i * dmag;
      const double v = detail::perturbation_integral(k, q, h_of(phi, mag), opts.nodes);
      if (v > best) best = v, best_phi = phi, best_mag = mag;
    }
  }
  if (k.dim() == 2) {
    const double phi0 = best_phi, mag0 = best_mag;
    for (double dp : {-0.5 * dphi, -0.25 * dphi, 0.0, 0.25 * dphi, 0.5 * dphi}) {
      for (double dm : {-0.5 * dmag, 0.0, 0.5 * dmag}) {
        const double mag = std::min(t, mag0 + dm);
        if (mag <= 0.0 || (dp == 0.0 && dm == 0.0)) continue;
        best = std::max(best, detail::perturbation_integral(k, q, h_of(phi0 + dp, mag), opts.nodes));
      }
    }
  }
  return std::pow(std::max(best, 0.0), 1.0 / q);
}

enum class DiniVerdict { satisfies, fails, inconclusive };

inline const char* to_string(DiniVerdict v) {
  switch (v) {
    case DiniVerdict::satisfies: return "satisfies";
    case DiniVerdict::fails: return "fails";
    default: return "inconclusive";
  }
}

struct DiniReport {
  double q = 1.0;
  double s = 0.0;
  std::vector<double> t_grid;   // 2^{-1}, 2^{-2}, ...
  std::vector<double> omega;    // grid estimate of ω_q at each level
  std::vector<double> partial;  // integral over [t_k, 1]
  double integral_estimate = 0.0;
  bool divergent = false;
  DiniVerdict verdict = DiniVerdict::inconclusive;
};

/// ∫_0^1 ω(t) / t^{1+s} dt from samples on the dyadic grid. Each panel
/// integrates the power-law interpolant of ω(t) t^{-s} exactly in log t; the
/// top panel up to 1 and the tail below the last level extrapolate the nearest
/// panel's exponent.
inline DiniReport dini_integral_from_samples(std::vector<double> t_grid, std::vector<double> omega, double q,
                                             double s) {
  detail::require(t_grid.size() >= 4 && t_grid.size() == omega.size(), "dini_integral: need at least 4 levels");
  DiniReport rep;
  rep.q = q;
  rep.s = s;
  const std::size_t m = t_grid.size();
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = omega[i] * std::pow(t_grid[i], -s);

  // Integral of g(t)/t over [lo, hi] for g a power law through (lo, glo), (hi, ghi).
  auto piece = [](double lo, double hi, double glo, double ghi) {
    const double len = std::log(hi / lo);
    if (glo <= 0.0 || ghi <= 0.0) return 0.5 * (glo + ghi) * len;
    const double p = std::log(ghi / glo) / len;
    if (std::abs(p) < 1e-12) return glo * len;
    return (ghi - glo) / p;
  };
  auto exponent = [](double lo, double hi, double glo, double ghi) {
    if (glo <= 0.0 || ghi <= 0.0) return 0.0;
    return std::log(ghi / glo) / std::log(hi / lo);
  };

  double top = 0.0;
  {
    const double p = exponent(t_grid[1], t_grid[0], g[1], g[0]);
    const double len = std::log(1.0 / t_grid[0]);
    top = std::abs(p) < 1e-12 ? g[0] * len : g[0] * (std::exp(p * len) - 1.0) / p;
  }
  rep.partial.resize(m);
  rep.partial[0] = top;
  for (std::size_t i = 1; i < m; ++i) rep.partial[i] = rep.partial[i - 1] + piece(t_grid[i], t_grid[i - 1], g[i], g[i - 1]);

  const double total_grid = rep.partial.back();
  const double g_last = g[m - 1];
  if (g_last == 0.0) {
    rep.integral_estimate = total_grid;
    rep.verdict = DiniVerdict::satisfies;
  } else if (g_last >= g[m - 4] * (1.0 - 1e-12)) {
    rep.divergent = true;
    rep.integral_estimate = std::numeric_limits<double>::infinity();
    rep.verdict = DiniVerdict::fails;
  } else {
    const double p = exponent(t_grid[m - 1], t_grid[m - 2], g[m - 1], g[m - 2]);
    const double tail = p > 0.0 ? g_last / p : std::numeric_limits<double>::infinity();
    rep.integral_estimate = total_grid + tail;
    rep.verdict = tail / rep.integral_estimate < 1e-3 ? DiniVerdict::satisfies : DiniVerdict::inconclusive;
  }
  rep.t_grid = std::move(t_grid);
  rep.omega = std::move(omega);
  return rep;
}

/// Dini integral for an externally supplied modulus (synthetic moduli in tests).
inline DiniReport dini_integral(const std::function<double(double)>& omega, int dim, double q, double s,
                                int levels = 12) {
  detail::require(s >= 0.0 && s < dim, "dini_integral: s must be in [0, n)");
  detail::require(levels >= 4, "dini_integral: need at least 4 levels");
  std::vector<double> t, w;
  for (int k = 1; k <= levels; ++k) {
    t.push_back(std::ldexp(1.0, -k));
    w.push_back(omega(t.back()));
  }
  return dini_integral_from_samples(std::move(t), std::move(w), q, s);
}

/// Dini integral of the kernel's own grid modulus. The sampled ω is made
/// nondecreasing in t: the sup at a larger t runs over a superset of perturbations.
inline DiniReport dini_integral(const SphereKernel& k, double q, double s, const DiniOptions& opts = {}) {
  detail::require(s >= 0.0 && s < k.dim(), "dini_integral: s must be in [0, n)");
  detail::require(opts.levels >= 4, "dini_integral: need at least 4 levels");
  std::vector<double> t(opts.levels), w(opts.levels);
  double running = 0.0;
  for (int k_level = opts.levels; k_level >= 1; --k_level) {
    const std::size_t i = static_cast<std::size_t>(k_level - 1);
    t[i] = std::ldexp(1.0, -k_level);
    running = std::max(running, dini_modulus(k, q, t[i], opts));
    w[i] = running;
  }
  return dini_integral_from_samples(std::move(t), std::move(w), q, s);
}

}  // namespace roughfrac
