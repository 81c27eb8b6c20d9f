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

// Fixed-order Gauss-Legendre panels and a piecewise adaptive integrator.
// Node values come from Boost.Math; this header only arranges them.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace roughfrac::quad {

inline constexpr int kGaussOrder = 8;

struct Rule {
  std::array<double, kGaussOrder> nodes{};    // on [-1, 1]
  std::array<double, kGaussOrder> weights{};
};

inline const Rule& gauss_rule() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, kGaussOrder>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    int k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.nodes[k] = -a[i];
      r.weights[k++] = w[i];
      r.nodes[k] = a[i];
      r.weights[k++] = w[i];
    }
    return r;
  }();
  return rule;
}

/// One Gauss-Legendre panel on [a, b].
template <class F>
double panel(double a, double b, F&& f) {
  const Rule& r = gauss_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return half * sum;
}

/// `panels` equal Gauss-Legendre panels on [a, b].
template <class F>
double composite(double a, double b, int panels, F&& f) {
  panels = std::max(panels, 1);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) sum += panel(a + p * h, a + (p + 1) * h, f);
  return sum;
}

/// Adaptive Gauss-Kronrod over [a, b], split at every interior breakpoint.
template <class F>
double piecewise_adaptive(double a, double b, std::vector<double> breaks, F&& f,
                          double tol = 1e-13) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(breaks[i], a);
    const double hi = std::min(breaks[i + 1], b);
    if (!(hi > lo)) continue;
    sum += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, 15, tol);
  }
  return sum;
}

}  // namespace roughfrac::quad
