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

// Distribution functions and weak-L^{q,∞} quasi-norms of sampled fields.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roughfrac/errors.hpp"
#include "roughfrac/grid.hpp"
#include "roughfrac/point.hpp"

namespace roughfrac {

/// Pointwise decay bound |g(x)| <= amplitude · |x|^{-gamma} beyond the grid.
struct DecayCertificate {
  double amplitude = 0.0;
  double gamma = 0.0;
};

struct WeakNormResult {
  double value = 0.0;
  double lambda_star = 0.0;       // level attaining the sup (0 for a zero field)
  double tail_certificate = 0.0;  // bound on the part beyond r_max; valid only if certified
  bool certified = false;
  std::string resolution_note;
};

/// Σ of cell measures where |value| > λ.
inline double distribution_measure(std::span<const double> values, std::span<const double> measures,
                                   double lambda) {
  detail::require(lambda > 0.0, "distribution_measure: lambda must be > 0");
  detail::require(values.size() == measures.size(), "distribution_measure: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::abs(values[i]) > lambda) m += measures[i];
  return m;
}

/// sup_λ λ |{|x| > r_max : C|x|^{-γ} > λ}|^{1/q}, in closed form.
inline double tail_bound_weak(double amplitude, double gamma, double q, double r_max, int dim) {
  detail::require(q > 1.0, "tail_bound_weak: q must be > 1");
  detail::require(gamma * q > dim, "tail_bound_weak: decay certificate needs gamma * q > n");
  detail::require(r_max > 0.0 && amplitude >= 0.0, "tail_bound_weak: need r_max > 0 and C >= 0");
  if (amplitude == 0.0) return 0.0;
  // With p = n / γ < q the objective is ω_n (C^p λ^{q-p} - r_max^n λ^q); its
  // maximizer solves λ^p = (q - p) C^p / (q r_max^n).
  const double p = dim / gamma;
  const double lambda = amplitude * std::pow(r_max, -gamma) * std::pow((q - p) / q, 1.0 / p);
  const double measure = unit_ball_volume(dim) * std::pow(r_max, dim) * p / (q - p);
  return lambda * std::pow(measure, 1.0 / q);
}

/// max over sampled levels v of v · |{|g| >= v}|^{1/q}: the exact weak norm of
/// the step function that is constant on each cell.
inline WeakNormResult weak_quasinorm(std::span<const double> values, std::span<const double> measures, double q) {
  detail::require(q > 1.0, "weak_quasinorm: q must be > 1");
  detail::require(values.size() == measures.size(), "weak_quasinorm: size mismatch");
  std::vector<std::pair<double, double>> cells;
  cells.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0.0) cells.emplace_back(std::abs(values[i]), measures[i]);
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  WeakNormResult res;
  double mu = 0.0;
  for (std::size_t i = 0; i < cells.size();) {
    const double v = cells[i].first;
    while (i < cells.size() && cells[i].first == v) mu += cells[i++].second;
    const double cand = v * std::pow(mu, 1.0 / q);
    if (cand > res.value) {
      res.value = cand;
      res.lambda_star = v;
    }
  }
  res.resolution_note = std::to_string(values.size()) + " cells";
  return res;
}

/// Weak norm over a grid, with an optional closed-form tail bound for |x| > r_max.
inline WeakNormResult weak_quasinorm(const Grid& grid, std::span<const double> values, double q,
                                     std::optional<DecayCertificate> cert = std::nullopt) {
  detail::require(values.size() == grid.size(), "weak_quasinorm: field does not match grid");
  if (cert) detail::require(cert->gamma * q > grid.dim(), "weak_quasinorm: decay certificate needs gamma * q > n");
  WeakNormResult res = weak_quasinorm(values, grid.measures(), q);
  res.resolution_note = grid.description();
  if (cert) {
    res.tail_certificate = tail_bound_weak(cert->amplitude, cert->gamma, q, grid.outer_radius(), grid.dim());
    res.certified = true;
  }
  return res;
}

/// (Σ |v_j|^r)^{1/r}; 0 for an empty list.
inline double lr_norm(std::span<const double> values, double r) {
  detail::require(r > 1.0 && std::isfinite(r), "lr_norm: r must be in (1, inf)");
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), r);
  return std::pow(s, 1.0 / r);
}

}  // namespace roughfrac
