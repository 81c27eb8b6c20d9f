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

// Batch front end. One subcommand per experiment; each writes a CSV table to
// stdout, or to --out together with a "<out>.manifest" file. Exit codes: 0 ok,
// 1 numeric failure, 2 invalid configuration (nothing is written).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "roughfrac/errors.hpp"
#include "roughfrac/experiments.hpp"
#include "roughfrac/parse.hpp"

namespace roughfrac::cli {

inline constexpr const char* kVersion = "0.1.0";

/// %.9g, the fixed output precision of every table.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Options {
  int dim = 1;
  double alpha = 0.5;
  std::string kernel = "const:1";
  std::vector<std::string> f;
  double r = 2.0;
  double rho = 1.0;
  std::string t;
  int grid_res = 0;  // 0: command default
  double rmax_mult = 64.0;
  std::string out;
  int workers = 0;
  int angular_nodes = 256;
  int radial_panels = 64;
  std::string op = "M";
  double q = 0.0;  // 0: n / (n - alpha) where relevant, 1 for dini
  double s = 0.0;
  int levels = 12;
  std::string lambda = "0.5";
  std::string family = "translate";
  std::string eps = "0.4,0.2,0.1";
  double span = 65536.0;
  int random = 0;
  std::uint64_t seed = 1;
};

/// Resolved parameters in a fixed order; hashed and echoed into the manifest.
class Params {
 public:
  void add(const std::string& key, const std::string& value) { items_.emplace_back(key, value); }
  void add(const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    add(key, std::string(buf));
  }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }

  std::string canonical() const {
    std::string s;
    for (const auto& [k, v] : items_) s += k + "=" + v + "\n";
    return s;
  }
  std::string hash() const { return fnv1a_hex(canonical()); }
  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

struct Output {
  std::string header;
  std::vector<std::string> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> warnings;
};

namespace detail {

inline OpKind op_kind(const std::string& s) {
  if (s == "M") return OpKind::maximal;
  if (s == "T_abs") return OpKind::t_abs;
  if (s == "T_signed") return OpKind::t_signed;
  throw ParameterError("op: must be one of M, T_abs, T_signed");
}

inline void require_key(bool ok, const std::string& msg) {
  if (!ok) throw ParameterError(msg);
}

/// Everything shared by the grid-based commands, validated up front.
struct Setup {
  Exponents exps;
  SphereKernel kernel;
  QuadratureSpec quad;
};

inline Setup setup(const Options& o, Params& p) {
  require_key(o.dim == 1 || o.dim == 2, "dim: must be 1 or 2");
  require_key(o.alpha > Exponents::kMargin && o.alpha < o.dim - Exponents::kMargin, "alpha: must lie in (0, dim)");
  require_key(o.rho > 0.0, "rho: must be > 0");
  require_key(o.rmax_mult > 1.0, "rmax-mult: must be > 1");
  require_key(o.grid_res == 0 || o.grid_res >= 8, "grid-res: must be >= 8");
  require_key(o.angular_nodes >= 8, "angular-nodes: must be >= 8");
  require_key(o.radial_panels >= 8, "radial-panels: must be >= 8");
  require_key(o.workers >= 0, "workers: must be >= 0");
  Setup s{Exponents(o.dim, o.alpha), parse::kernel(o.kernel, o.dim), {}};
  s.quad.angular_nodes = o.angular_nodes;
  s.quad.radial_panels = o.radial_panels;
  p.add("dim", o.dim);
  p.add("alpha", o.alpha);
  p.add("q", s.exps.q());
  p.add("kernel", o.kernel);
  p.add("angular_nodes", o.angular_nodes);
  p.add("radial_panels", o.radial_panels);
  return s;
}

inline Grid limit_grid(const Options& o, Params& p) {
  const int radial = o.grid_res != 0 ? o.grid_res : (o.dim == 1 ? 256 : 48);
  p.add("rho", o.rho);
  p.add("rmax_mult", o.rmax_mult);
  p.add("grid_res", radial);
  return Grid::annulus(o.dim, o.rho, o.rho * o.rmax_mult, radial);
}

inline std::string t_spec(const Options& o) { return o.t.empty() ? std::string("geo:0.2,0.5,4") : o.t; }

inline std::vector<TestFunction> functions(const Options& o, const char* fallback) {
  std::vector<TestFunction> out;
  if (o.f.empty()) out.push_back(parse::function(fallback, o.dim));
  for (const auto& s : o.f) out.push_back(parse::function(s, o.dim));
  return out;
}

inline std::string joined(const std::vector<std::string>& v, const char* fallback) {
  if (v.empty()) return fallback;
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " | " : "") + v[i];
  return s;
}

inline void limit_rows(const LimitRun& run, const std::string& hash, Output& out) {
  out.header = "t,beta,D,bound,slope_so_far,tail_cert,config_hash";
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    const auto& tail = run.tails[i];
    out.rows.push_back(fmt(run.t[i]) + "," + fmt(run.betas[i]) + "," + fmt(run.metrics[i]) + "," +
                       fmt(run.bounds[i]) + "," + fmt(run.slope_so_far[i]) + "," +
                       (tail.certified ? fmt(tail.tail_certificate) : std::string("uncertified")) + "," + hash);
  }
  out.summary.emplace_back("slope", fmt(run.slope));
  out.summary.emplace_back("certified", run.certified ? "true" : "false");
  out.summary.emplace_back("note", run.note);
  out.summary.emplace_back("tail_gamma", fmt(run.certificates.front().gamma));
  const RateReport rate = rate_check(run, 2.0);
  out.summary.emplace_back("rate_min_constant", fmt(rate.min_constant));
  out.summary.emplace_back("rate_check_C2", rate.message);
}

}  // namespace detail

// Each command validates and resolves its parameters into `p`, then returns
// the work to run. Nothing is computed before every parameter is accepted.
using Job = std::function<Output(const std::string& hash)>;

inline Job cmd_norms(const Options& o, Params& p) {
  auto s = detail::setup(o, p);
  const double q = o.q != 0.0 ? o.q : s.exps.q();
  detail::require_key(q >= 1.0, "q: must be >= 1");
  p.add("q_norm", q);
  return [s, q](const std::string& hash) {
    Output out;
    out.header = "q,sphere_norm,weak_norm_closed,sup_abs,lipschitz,lipschitz_unbounded,config_hash";
    const LipschitzEstimate lip = lipschitz_estimate(s.kernel);
    out.rows.push_back(fmt(q) + "," + fmt(sphere_norm(s.kernel, q)) + "," +
                       fmt(homog_weak_norm_closed(s.kernel, s.exps)) + "," + fmt(s.kernel.sup_abs()) + "," +
                       fmt(lip.value) + "," + (lip.unbounded ? "true" : "false") + "," + hash);
    return out;
  };
}

inline Job cmd_dini(const Options& o, Params& p) {
  auto s = detail::setup(o, p);
  const double q = o.q != 0.0 ? o.q : 1.0;
  detail::require_key(q >= 1.0, "q: must be >= 1");
  detail::require_key(o.s >= 0.0 && o.s < o.dim, "s: must lie in [0, dim)");
  detail::require_key(o.levels >= 4 && o.levels <= 40, "levels: must be in [4, 40]");
  p.add("q_dini", q);
  p.add("s", o.s);
  p.add("levels", o.levels);
  DiniOptions opts;
  opts.levels = o.levels;
  return [s, q, sv = o.s, opts](const std::string& hash) {
    Output out;
    const DiniReport rep = dini_integral(s.kernel, q, sv, opts);
    out.header = "t,omega,partial_integral,verdict,config_hash";
    for (std::size_t i = 0; i < rep.t_grid.size(); ++i)
      out.rows.push_back(fmt(rep.t_grid[i]) + "," + fmt(rep.omega[i]) + "," + fmt(rep.partial[i]) + "," +
                         to_string(rep.verdict) + "," + hash);
    out.summary.emplace_back("integral_estimate", rep.divergent ? "divergent" : fmt(rep.integral_estimate));
    out.summary.emplace_back("verdict", to_string(rep.verdict));
    out.summary.emplace_back("omega_note", "grid estimate (lower bound of the sup over h)");
    return out;
  };
}

inline Job cmd_identity(const Options& o, Params& p) {
  auto s = detail::setup(o, p);
  detail::require_key(o.span > 4.0, "span: must be > 4");
  const int radial = o.grid_res != 0 ? o.grid_res : 2048;
  const int angular = o.dim == 2 ? std::max(8, radial / 8) : 0;
  const double half = std::sqrt(o.span);
  p.add("rho", o.rho);
  p.add("span", o.span);
  p.add("grid_res", radial);
  const Grid grid = Grid::annulus(o.dim, o.rho / half, o.rho * half, radial, angular);
  return [s, grid, w = o.workers](const std::string& hash) {
    Output out;
    const IdentityReport rep = identity_check(s.kernel, s.exps, grid, w);
    out.header = "closed_form,numeric,rel_err,config_hash";
    out.rows.push_back(fmt(rep.closed_form) + "," + fmt(rep.numeric) + "," + fmt(rep.rel_err) + "," + hash);
    for (std::size_t i = 0; i < rep.levels.size(); ++i)
      out.summary.emplace_back("level_" + fmt(rep.levels[i]), fmt(rep.level_values[i]));
    out.summary.emplace_back("level_max_rel_err", fmt(rep.level_max_rel_err));
    out.summary.emplace_back("lambda_independent", rep.lambda_independent ? "true" : "false");
    out.summary.emplace_back("tail", "uncertified: K decays at the critical rate, the grid spans the level sets");
    return out;
  };
}

inline Job cmd_limit(const Options& o, Params& p) {
  auto s = detail::setup(o, p);
  const OpKind kind = detail::op_kind(o.op);
  detail::require_key(o.f.size() <= 1, "f: limit takes a single function (use vector-limit for several)");
  const TestFunction f = detail::functions(o, "indicator:0.5").front();
  const auto ts = parse::schedule(detail::t_spec(o));
  roughfrac::detail::check_schedule(ts, o.rho, f.support_radius());
  p.add("op", o.op);
  p.add("f", detail::joined(o.f, "indicator:0.5"));
  p.add("t_schedule", detail::t_spec(o));
  const Grid grid = detail::limit_grid(o, p);
  return [s, kind, f, ts, grid, o](const std::string& hash) {
    Output out;
    const LimitRun run = limit_run(kind, s.kernel, s.exps, f, o.rho, ts, grid, s.quad, o.workers);
    detail::limit_rows(run, hash, out);
    return out;
  };
}

inline Job cmd_vector_limit(const Options& o, Params& p) {
  auto s = detail::setup(o, p);
  const OpKind kind = detail::op_kind(o.op);
  detail::require_key(!o.f.empty(), "f: vector-limit needs at least one --f");
  detail::require_key(o.r > 1.0 && std::isfinite(o.r), "r: must be in (1, inf)");
  VectorTestFunction vf{detail::functions(o, ""), o.r};
  double support = 0.0;
  for (const auto& f : vf.entries) support = std::max(support, f.support_radius());
  const auto ts = parse::schedule(detail::t_spec(o));
  roughfrac::detail::check_schedule(ts, o.rho, support);
  p.add("op", o.op);
  p.add("f", detail::joined(o.f, ""));
  p.add("r", o.r);
  p.add("t_schedule", detail::t_spec(o));
  const Grid grid = detail::limit_grid(o, p);
  return [s, kind, vf, ts, grid, o](const std::string& hash) {
    Output out;
    const LimitRun run = vector_limit_run(kind, s.kernel, s.exps, vf, o.rho, ts, grid, s.quad, o.workers);
    detail::limit_rows(run, hash, out);
    return out;
  };
}

inline Job cmd_opnorm(const Options& o, Params& p) {
  auto s = detail::setup(o, p);
  const OpKind kind = detail::op_kind(o.op);
  detail::require_key(o.f.size() <= 1, "f: opnorm takes a single profile, dilated by the t schedule");
  const TestFunction f = detail::functions(o, "indicator:0.5").front();
  const std::string tspec = o.t.empty() ? std::string("0.025") : o.t;
  const auto ts = parse::schedule(tspec);
  for (double t : ts)
    detail::require_key(t * f.support_radius() < o.rho, "t_schedule: t * support_radius must be < rho");
  p.add("op", o.op);
  p.add("f", detail::joined(o.f, "indicator:0.5"));
  p.add("t_schedule", tspec);
  const Grid grid = detail::limit_grid(o, p);
  return [s, kind, f, ts, grid, o](const std::string& hash) {
    Output out;
    std::vector<TestFunction> family;
    for (double t : ts) family.push_back(f.rescaled(t));
    const RatioReport rep = opnorm_lower_bound(kind, s.kernel, s.exps, family, grid, s.quad, o.workers);
    out.header = "t,ratio,max_so_far,config_hash";
    double best = 0.0;
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
      best = std::max(best, rep.ratios[i]);
      out.rows.push_back(fmt(ts[i]) + "," + fmt(rep.ratios[i]) + "," + fmt(best) + "," + hash);
    }
    out.summary.emplace_back("lower_bound", fmt(rep.value));
    out.summary.emplace_back("weak_norm_closed", fmt(homog_weak_norm_closed(s.kernel, s.exps)));
    out.warnings = rep.warnings;
    return out;
  };
}

/// Random signed bump mixtures supported in B(0, 0.9).
inline std::vector<TestFunction> random_mixtures(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TestFunction> out;
  for (int i = 0; i < count; ++i) {
    std::vector<Component> parts;
    const int m = 1 + static_cast<int>(unit(rng) * 3.0) % 3;
    for (int j = 0; j < m; ++j) {
      Component c;
      c.weight = -1.0 + 3.0 * unit(rng);
      const double radius = 0.1 + 0.4 * unit(rng);
      const double pick = unit(rng);
      if (pick < 1.0 / 3.0) c.profile = BallProfile{radius};
      else if (pick < 2.0 / 3.0) c.profile = ConeProfile{radius};
      else c.profile = GaussProfile{radius / 3.0, radius};
      const double room = 0.9 - radius;
      c.shift = {room * (2.0 * unit(rng) - 1.0) / (dim == 2 ? std::sqrt(2.0) : 1.0),
                 dim == 2 ? room * (2.0 * unit(rng) - 1.0) / std::sqrt(2.0) : 0.0};
      parts.push_back(c);
    }
    out.push_back(TestFunction::mixture(dim, std::move(parts)));
  }
  return out;
}

inline Job cmd_young(const Options& o, Params& p) {
  auto s = detail::setup(o, p);
  detail::require_key(o.random >= 0 && o.random <= 10000, "random: must be in [0, 10000]");
  std::vector<TestFunction> family;
  for (const auto& spec : o.f) family.push_back(parse::function(spec, o.dim));
  for (auto& g : random_mixtures(o.dim, o.random, o.seed)) family.push_back(std::move(g));
  if (family.empty()) family.push_back(parse::function("indicator:0.5", o.dim).rescaled(0.025));
  for (const auto& g : family)
    detail::require_key(g.support_radius() < o.rho, "f: support must lie inside B(0, rho)");
  p.add("f", detail::joined(o.f, o.random == 0 ? "indicator:0.5 at t=0.025" : ""));
  p.add("random", o.random);
  p.add("seed", std::to_string(o.seed));
  const Grid grid = detail::limit_grid(o, p);
  return [s, family, grid, o](const std::string& hash) {
    Output out;
    const RatioReport rep = young_monitor(s.kernel, s.exps, family, grid, s.quad, o.workers);
    out.header = "index,ratio,max_so_far,config_hash";
    double best = 0.0;
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
      best = std::max(best, rep.ratios[i]);
      out.rows.push_back(std::to_string(i) + "," + fmt(rep.ratios[i]) + "," + fmt(best) + "," + hash);
    }
    out.summary.emplace_back("max_ratio", fmt(rep.value));
    out.warnings = rep.warnings;
    return out;
  };
}

inline Job cmd_types(const Options& o, Params& p) {
  auto s = detail::setup(o, p);
  const auto lambdas = parse::numbers(o.lambda, "lambda");
  for (double l : lambdas) detail::require_key(l > 0.0, "lambda: levels must be > 0");
  const std::string tspec = detail::t_spec(o);
  const auto ts = parse::schedule(tspec);
  p.add("family", o.family);
  p.add("lambda", o.lambda);
  p.add("t_schedule", tspec);
  if (o.family == "translate" || o.family == "disjoint") {
    detail::require_key(o.dim == 1, "dim: translation families are sampled on a 1-d interval grid");
    detail::require_key(o.f.size() <= 1, "f: types takes a single function");
    const TestFunction f = detail::functions(o, "mix:1*indicator:0.5@0.5").front();
    const int cells = o.grid_res != 0 ? o.grid_res : 8000;
    const double reach = f.support_radius() + (o.family == "disjoint" ? 2.0 : ts.front()) + 1.0;
    p.add("f", detail::joined(o.f, "mix:1*indicator:0.5@0.5"));
    p.add("grid_res", cells);
    const Grid grid = Grid::interval(-reach, reach, cells);
    return [f, ts, lambdas, grid, q = s.exps.q(), disjoint = o.family == "disjoint"](const std::string& hash) {
      Output out;
      std::vector<double> target(grid.size());
      const auto pts = grid.points();
      for (std::size_t i = 0; i < grid.size(); ++i) target[i] = f(pts[i]);
      std::vector<std::pair<double, std::vector<double>>> family;
      for (double t : ts) {
        const double shift = disjoint ? 2.0 : t;
        std::vector<double> g(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) g[i] = f(pts[i] - Point{shift, 0.0});
        family.emplace_back(t, std::move(g));
      }
      out.header = "t,lambda,type1,type2,type3,config_hash";
      for (const auto& row : convergence_types(family, target, lambdas, grid, q))
        out.rows.push_back(fmt(row.t) + "," + fmt(row.lambda) + "," + fmt(row.type1) + "," + fmt(row.type2) + "," +
                           fmt(row.type3) + "," + hash);
      return out;
    };
  }
  detail::require_key(o.family == "limit", "family: must be one of translate, disjoint, limit");
  const OpKind kind = detail::op_kind(o.op);
  detail::require_key(o.f.size() <= 1, "f: types takes a single function");
  const TestFunction f = detail::functions(o, "indicator:0.5").front();
  roughfrac::detail::check_schedule(ts, o.rho, f.support_radius());
  p.add("op", o.op);
  p.add("f", detail::joined(o.f, "indicator:0.5"));
  const Grid grid = detail::limit_grid(o, p);
  return [s, kind, f, ts, lambdas, grid, o](const std::string& hash) {
    Output out;
    const double coef = limit_coefficient(kind, f);
    std::vector<double> target(grid.size());
    const auto pts = grid.points();
    for (std::size_t i = 0; i < grid.size(); ++i) target[i] = coef * limit_field_value(kind, s.kernel, s.exps, pts[i]);
    std::vector<std::pair<double, std::vector<double>>> family;
    for (double t : ts) family.emplace_back(t, grid_apply(kind, s.kernel, s.exps, f.rescaled(t), grid, s.quad, o.workers));
    out.header = "t,lambda,type1,type2,type3,config_hash";
    for (const auto& row : convergence_types(family, target, lambdas, grid, s.exps.q()))
      out.rows.push_back(fmt(row.t) + "," + fmt(row.lambda) + "," + fmt(row.type1) + "," + fmt(row.type2) + "," +
                         fmt(row.type3) + "," + hash);
    return out;
  };
}

inline Job cmd_reduce(const Options& o, Params& p) {
  auto s = detail::setup(o, p);
  const OpKind kind = detail::op_kind(o.op);
  detail::require_key(o.f.size() <= 1, "f: reduce takes a single function");
  const TestFunction f = detail::functions(o, "indicator:0.5").front();
  const auto eps = parse::schedule(o.eps, "eps_schedule");
  for (double e : eps) detail::require_key(e <= kPi / 4, "eps_schedule: values must be <= pi/4");
  const std::string tspec = o.t.empty() ? std::string("0.025") : o.t;
  const auto ts = parse::schedule(tspec);
  detail::require_key(ts.size() == 1, "t_schedule: reduce takes a single t");
  roughfrac::detail::check_schedule(ts, o.rho, f.support_radius());
  p.add("op", o.op);
  p.add("f", detail::joined(o.f, "indicator:0.5"));
  p.add("eps_schedule", o.eps);
  p.add("t", ts.front());
  const Grid grid = detail::limit_grid(o, p);
  return [s, kind, f, eps, t = ts.front(), grid, o](const std::string& hash) {
    Output out;
    const ReductionReport rep =
        reduction_decomposition(kind, s.kernel, eps, s.exps, f, o.rho, t, grid, s.quad, o.workers);
    out.header = "eps,lhs,d_eps,m_diff,field_diff,constant,kernel_gap,config_hash";
    for (const auto& r : rep.rows)
      out.rows.push_back(fmt(r.eps) + "," + fmt(r.lhs) + "," + fmt(r.d_eps) + "," + fmt(r.m_diff) + "," +
                         fmt(r.field_diff) + "," + fmt(r.constant) + "," + fmt(r.kernel_gap) + "," + hash);
    out.summary.emplace_back("inequality_holds", rep.all_hold ? "true" : "false");
    out.summary.emplace_back("kernel_gaps_decreasing", rep.gaps_decreasing ? "true" : "false");
    return out;
  };
}

namespace detail {

inline std::string csv(const Output& out) {
  std::string s = out.header + "\n";
  for (const auto& r : out.rows) s += r + "\n";
  return s;
}

inline std::string manifest(const std::string& command, const Params& p, const Output& out, double seconds) {
  std::ostringstream m;
  m << "# roughfrac run manifest\n";
  m << "tool = roughfrac\n";
  m << "version = " << kVersion << "\n";
  m << "command = " << command << "\n";
  m << "config_hash = " << p.hash() << "\n";
  m << "\n[" << command << "]\n";
  for (const auto& [k, v] : p.items()) m << k << " = " << v << "\n";
  m << "\n[result]\n";
  m << "rows = " << out.rows.size() << "\n";
  for (const auto& [k, v] : out.summary) m << k << " = " << v << "\n";
  for (const auto& w : out.warnings) m << "warning = " << w << "\n";
  m << "\n[timing]\n";
  m << "wall_clock_seconds = " << fmt(seconds) << "\n";
  return m.str();
}

}  // namespace detail

inline void add_options(CLI::App* sub, Options& o) {
  sub->add_option("--dim", o.dim, "Dimension n (1 or 2)");
  sub->add_option("--alpha", o.alpha, "Order alpha in (0, n)");
  sub->add_option("--kernel", o.kernel, "const:<c> | cos:<a>,<b>,<k> | sign-cos | pair:<b->,<b+> | table:<path>");
  sub->add_option("--f", o.f, "indicator:<R> | cone:<R> | gauss:<s>,<Rcut> | mix:<w>*<shape>@<shift>;...");
  sub->add_option("--r", o.r, "l^r exponent for vector runs");
  sub->add_option("--rho", o.rho, "Excluded radius");
  sub->add_option("--t", o.t, "t schedule: list or geo:<t0>,<ratio>,<count>");
  sub->add_option("--grid-res,--grid_res", o.grid_res, "Grid resolution (radial cells; 0 = command default)");
  sub->add_option("--rmax-mult,--rmax_mult", o.rmax_mult, "Outer radius as a multiple of rho");
  sub->add_option("--out", o.out, "Write CSV here and a manifest next to it");
  sub->add_option("--workers", o.workers, "Worker threads (0 = hardware concurrency)");
  sub->add_option("--angular-nodes,--angular_nodes", o.angular_nodes, "Quadrature nodes per circle (n = 2)");
  sub->add_option("--radial-panels,--radial_panels", o.radial_panels, "Radial Gauss panels per point");
}

/// Entry point used by the binary and by the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Rough-kernel fractional operators: limits, weak norms and monitors", "roughfrac"};
  app.set_config("--config", "", "INI config file; [<command>] sections, flags override");
  app.allow_config_extras(CLI::config_extras_mode::error);
  // Specs contain commas, so config lists must be bracketed: f = [a | b].
  auto ini = std::make_shared<CLI::ConfigBase>();
  ini->arrayDelimiter('|');
  app.config_formatter(ini);
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  using Builder = Job (*)(const Options&, Params&);
  const std::vector<std::tuple<const char*, const char*, Builder>> commands = {
      {"norms", "Sphere norm, closed-form weak norm and Lipschitz estimate of a kernel", cmd_norms},
      {"dini", "Integral continuity modulus on the dyadic grid and the Dini integral", cmd_dini},
      {"identity", "Sampled weak norm of the homogeneous field against its closed form", cmd_identity},
      {"limit", "D(t) = weak norm of A f_t - K ||f||_1 outside B(0, rho)", cmd_limit},
      {"vector-limit", "l^r-valued limiting run over several functions", cmd_vector_limit},
      {"opnorm", "Lower bound for the L1 -> weak-L^q operator norm over a dilated family", cmd_opnorm},
      {"young", "Weak Young ratio ||T_|Omega| f|| / (||K|| ||f||_1) over a family", cmd_young},
      {"types", "Type-1/2/3 convergence metrics of a family", cmd_types},
      {"reduce", "Rough-kernel reduction through mollified kernels", cmd_reduce},
  };
  std::map<CLI::App*, std::pair<std::string, Builder>> by_app;
  for (const auto& [name, desc, build] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->configurable();
    add_options(sub, o);
    if (std::string(name) == "limit" || std::string(name) == "vector-limit" || std::string(name) == "opnorm" ||
        std::string(name) == "types" || std::string(name) == "reduce")
      sub->add_option("--op", o.op, "Operator: M, T_abs or T_signed");
    if (std::string(name) == "norms" || std::string(name) == "dini")
      sub->add_option("--q", o.q, "Integrability exponent (default n/(n-alpha) for norms, 1 for dini)");
    if (std::string(name) == "dini") {
      sub->add_option("--s", o.s, "Regularity order in [0, n)");
      sub->add_option("--levels", o.levels, "Dyadic levels t = 2^-k, k = 1..levels");
    }
    if (std::string(name) == "identity") sub->add_option("--span", o.span, "Ratio of outer to inner grid radius");
    if (std::string(name) == "types") {
      sub->add_option("--lambda", o.lambda, "Comma-separated levels");
      sub->add_option("--family", o.family, "translate | disjoint | limit");
    }
    if (std::string(name) == "reduce") sub->add_option("--eps", o.eps, "Decreasing mollification radii");
    if (std::string(name) == "young") {
      sub->add_option("--random", o.random, "Number of random signed bump mixtures");
      sub->add_option("--seed", o.seed, "Seed for the random mixtures");
    }
    by_app[sub] = {name, build};
  }

  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config") {
      ++i;
      continue;
    }
    if (a.empty() || a.front() == '-') continue;
    bool known = false;
    for (const auto& c : commands) known = known || a == std::get<0>(c);
    if (!known) {
      err << "error: unknown subcommand '" << a << "'\n\n" << app.help();
      return 2;
    }
    break;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const auto& [command, build] = by_app.at(chosen);
  Params params;
  params.add("command", command);
  Job job;
  try {
    job = build(o, params);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  Output result;
  try {
    result = job(params.hash());
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 1;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";

  const std::string table = detail::csv(result);
  if (o.out.empty()) {
    out << table;
    return 0;
  }
  std::ofstream csv_file(o.out, std::ios::trunc);
  std::ofstream manifest_file(o.out + ".manifest", std::ios::trunc);
  csv_file << table;
  manifest_file << detail::manifest(command, params, result, seconds);
  if (!csv_file || !manifest_file) {
    err << "error: failed writing '" << o.out << "'\n";
    return 1;
  }
  return 0;
}

}  // namespace roughfrac::cli
