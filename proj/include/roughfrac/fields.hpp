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

#include <cmath>
#include <string>

#include "roughfrac/errors.hpp"
#include "roughfrac/kernel.hpp"
#include "roughfrac/point.hpp"

namespace roughfrac {

/// Dimension n, order alpha in (0, n), and the coupled exponent q = n / (n - alpha).
class Exponents {
 public:
  static constexpr double kMargin = 1e-6;

  Exponents(int dim, double alpha) : dim_(dim), alpha_(alpha) {
    detail::require(dim == 1 || dim == 2, "exponents: dim must be 1 or 2");
    detail::require(alpha > kMargin && alpha < dim - kMargin, "exponents: alpha must lie in (0, n)");
  }

  int dim() const { return dim_; }
  double alpha() const { return alpha_; }
  /// n - alpha: the decay order of the limit field.
  double gap() const { return dim_ - alpha_; }
  double q() const { return dim_ / (dim_ - alpha_); }

 private:
  int dim_;
  double alpha_;
};

/// K(x) = Omega(x) / |x|^{n - alpha}, or |Omega(x)| / |x|^{n - alpha}.
struct HomogeneousField {
  SphereKernel kernel;
  Exponents exps;
  bool signed_kernel = false;

  double operator()(Point x) const {
    const double r = norm(x);
    if (r == 0.0) throw DomainError("homogeneous field evaluated at the origin");
    const double w = kernel(x);
    return (signed_kernel ? w : std::abs(w)) * std::pow(r, -exps.gap());
  }
};

inline double homog_field_eval(const HomogeneousField& field, Point x) { return field(x); }

/// ‖Omega(·)/|·|^{n-alpha}‖_{L^{q,∞}(R^n)} = (‖Omega‖_{L^q(S^{n-1})}^q / n)^{1/q}.
///
/// λ^q |{|Omega(x)|/|x|^{n-alpha} > λ}| does not depend on λ, so the sup is
/// attained at every level.
inline double homog_weak_norm_closed(const SphereKernel& k, const Exponents& e) {
  detail::require(k.dim() == e.dim(), "homog_weak_norm_closed: kernel and exponent dimensions differ");
  const double q = e.q();
  return std::pow(std::pow(sphere_norm(k, q), q) / e.dim(), 1.0 / q);
}

/// Overload that checks a caller-supplied q against n / (n - alpha).
inline double homog_weak_norm_closed(const SphereKernel& k, const Exponents& e, double q) {
  detail::require(std::abs(q - e.q()) <= 1e-12 * e.q(), "homog_weak_norm_closed: q must equal n/(n-alpha)");
  return homog_weak_norm_closed(k, e);
}

/// β_t = ρ^{n-α} ((ρ - t)^{-(n-α)} - (ρ + t)^{-(n-α)}), for 0 < t < ρ/2.
inline double beta_t(const Exponents& e, double rho, double t) {
  detail::require(rho > 0.0, "beta_t: rho must be > 0");
  detail::require(t > 0.0 && t < rho / 2.0, "beta_t: t must lie in (0, rho/2)");
  const double g = e.gap();
  return std::pow(rho, g) * (std::pow(rho - t, -g) - std::pow(rho + t, -g));
}

/// (1 + β_t) t + β_t.
inline double rate_bound(const Exponents& e, double rho, double t) {
  const double b = beta_t(e, rho, t);
  return (1.0 + b) * t + b;
}

/// |{x : |Omega(x)| / |x|^{n-α} > λ}| by direct counting on a fine polar mesh
/// covering the full space (hole included). Used to check λ-independence.
inline double superlevel_measure(const SphereKernel& k, const Exponents& e, double lambda, int radial = 200000,
                                 int angular = 2048) {
  detail::require(lambda > 0.0, "superlevel_measure: lambda must be > 0");
  const double reach = std::pow(k.sup_abs() / lambda, 1.0 / e.gap()) * 1.01 + 1e-300;
  const double dr = reach / radial;
  // The field decreases along each ray, so the counted cells form a prefix;
  // binary search for its length, then sum the midpoint cell measures.
  auto count_ray = [&](double w) {
    int lo = 0, hi = radial;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      const double r = (mid + 0.5) * dr;
      if (std::abs(w) * std::pow(r, -e.gap()) > lambda) lo = mid + 1;
      else hi = mid;
    }
    const double cells = lo;
    return e.dim() == 1 ? cells * dr : 0.5 * cells * cells * dr * dr;
  };
  if (e.dim() == 1) return count_ray(k.at_side(1)) + count_ray(k.at_side(-1));
  const double dth = kTwoPi / angular;
  double m = 0.0;
  for (int j = 0; j < angular; ++j) m += count_ray(k.at_angle((j + 0.5) * dth)) * dth;
  return m;
}

}  // namespace roughfrac
