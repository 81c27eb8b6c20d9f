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

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "roughfrac/errors.hpp"
#include "roughfrac/point.hpp"

namespace roughfrac {

/// Sample points with cell measures. Weak norms treat a sampled field as the
/// step function that is constant on each cell.
class Grid {
 public:
  /// Cells of {rho <= |x| <= r_max}: log-spaced radial edges, uniform angles
  /// for n = 2. Each cell is sampled at its outer radius (angular midpoint), so
  /// a radially decreasing field is sampled at its cell minimum.
  static Grid annulus(int dim, double rho, double r_max, int radial_cells, int angular_cells = 0) {
    detail::require(dim == 1 || dim == 2, "grid: dim must be 1 or 2");
    detail::require(rho > 0.0 && r_max > rho, "grid: need 0 < rho < r_max");
    detail::require(radial_cells >= 8, "grid: resolution must be >= 8");
    if (dim == 2 && angular_cells == 0) angular_cells = 2 * radial_cells;
    detail::require(dim == 1 || angular_cells >= 8, "grid: angular resolution must be >= 8");
    Grid g;
    g.dim_ = dim;
    g.inner_ = rho;
    g.outer_ = r_max;
    g.radial_ = radial_cells;
    g.angular_ = dim == 2 ? angular_cells : 2;
    std::vector<double> edges(static_cast<std::size_t>(radial_cells) + 1);
    const double ratio = std::log(r_max / rho);
    for (int k = 0; k <= radial_cells; ++k) edges[k] = rho * std::exp(ratio * k / radial_cells);
    edges.front() = rho;
    edges.back() = r_max;
    for (int k = 0; k < radial_cells; ++k) {
      const double lo = edges[k], hi = edges[k + 1];
      if (dim == 1) {
        g.add({-hi, 0.0}, hi - lo);
        g.add({hi, 0.0}, hi - lo);
      } else {
        const double dth = kTwoPi / angular_cells;
        const double m = 0.5 * dth * (hi - lo) * (hi + lo);
        for (int j = 0; j < angular_cells; ++j) {
          const double th = (j + 0.5) * dth;
          g.add({hi * std::cos(th), hi * std::sin(th)}, m);
        }
      }
    }
    std::ostringstream os;
    os << "annulus(n=" << dim << ",rho=" << rho << ",r_max=" << r_max << ",radial=" << radial_cells
       << ",angular=" << (dim == 2 ? angular_cells : 0) << ")";
    g.note_ = os.str();
    return g;
  }

  /// Uniform cells on [a, b] (n = 1), sampled at cell centers.
  static Grid interval(double a, double b, int cells) {
    detail::require(b > a && cells >= 8, "grid: need a < b and >= 8 cells");
    Grid g;
    g.dim_ = 1;
    g.inner_ = 0.0;
    g.outer_ = std::max(std::abs(a), std::abs(b));
    g.radial_ = cells;
    g.angular_ = 1;
    const double h = (b - a) / cells;
    for (int i = 0; i < cells; ++i) g.add({a + (i + 0.5) * h, 0.0}, h);
    std::ostringstream os;
    os << "interval(" << a << "," << b << ",cells=" << cells << ")";
    g.note_ = os.str();
    return g;
  }

  int dim() const { return dim_; }
  double inner_radius() const { return inner_; }
  double outer_radius() const { return outer_; }
  std::size_t size() const { return points_.size(); }
  std::span<const Point> points() const { return points_; }
  std::span<const double> measures() const { return measures_; }
  const std::string& description() const { return note_; }

  /// Indices of the cells in the outermost radial ring.
  std::vector<std::size_t> outer_ring() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = size() - static_cast<std::size_t>(angular_); i < size(); ++i) idx.push_back(i);
    return idx;
  }

  double total_measure() const {
    double s = 0.0;
    for (double m : measures_) s += m;
    return s;
  }

 private:
  void add(Point p, double m) {
    points_.push_back(p);
    measures_.push_back(m);
  }

  int dim_ = 1;
  double inner_ = 0.0;
  double outer_ = 0.0;
  int radial_ = 0;
  int angular_ = 0;
  std::vector<Point> points_;
  std::vector<double> measures_;
  std::string note_;
};

using AnnulusGrid = Grid;

}  // namespace roughfrac
