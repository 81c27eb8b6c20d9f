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

// Text grammars for kernels, test functions and t schedules:
//
//   kernel    const:<c> | cos:<a>,<b>,<k> | sign-cos | pair:<b->,<b+> | table:<path>
//   function  indicator:<R> | cone:<R> | gauss:<sigma>,<Rcut>
//             | mix:<w>*<shape>[@<shift>];...   (shift is x for n = 1, x,y for n = 2)
//   schedule  <t1>,<t2>,... | geo:<t0>,<ratio>,<count>
//
// Every error is a ParameterError prefixed with the offending key.

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "roughfrac/errors.hpp"
#include "roughfrac/functions.hpp"
#include "roughfrac/kernel.hpp"

namespace roughfrac::parse {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline double number(std::string_view s, const std::string& key) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParameterError(key + ": '" + std::string(s) + "' is not a finite number");
  return v;
}

inline std::vector<double> numbers(std::string_view s, const std::string& key, std::size_t expected = 0) {
  std::vector<double> out;
  for (auto part : split(s, ',')) out.push_back(number(part, key));
  if (expected != 0 && out.size() != expected)
    throw ParameterError(key + ": expected " + std::to_string(expected) + " comma-separated values");
  return out;
}

namespace detail {

inline std::pair<std::string_view, std::string_view> head(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return {trim(spec), {}};
  return {trim(spec.substr(0, colon)), trim(spec.substr(colon + 1))};
}

inline std::vector<double> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("kernel: cannot open table file '" + path + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    values.push_back(number(t, "kernel"));
  }
  return values;
}

}  // namespace detail

inline SphereKernel kernel(std::string_view spec, int dim) {
  const std::string key = "kernel";
  if (dim != 1 && dim != 2) throw ParameterError("dim: must be 1 or 2");
  const auto [name, args] = detail::head(spec);
  try {
    if (name == "const") return SphereKernel::constant(dim, number(args, key));
    if (name == "pair") {
      if (dim != 1) throw ParameterError(key + ": pair kernels need dim = 1");
      const auto v = numbers(args, key, 2);
      return SphereKernel::pair(v[0], v[1]);
    }
    if (dim != 2) throw ParameterError(key + ": '" + std::string(name) + "' kernels need dim = 2");
    if (name == "cos") {
      const auto v = numbers(args, key, 3);
      if (v[2] != std::floor(v[2]) || v[2] < 0.0 || v[2] > 1e6)
        throw ParameterError(key + ": cos frequency k must be a nonnegative integer");
      return SphereKernel::cosine(v[0], v[1], static_cast<int>(v[2]));
    }
    if (name == "sign-cos") {
      if (!args.empty()) throw ParameterError(key + ": sign-cos takes no arguments");
      return SphereKernel::sign_cos();
    }
    if (name == "table") {
      if (args.empty()) throw ParameterError(key + ": table needs a file path");
      return SphereKernel::table(detail::read_table(std::string(args)));
    }
  } catch (const ParameterError& e) {
    const std::string what = e.what();
    if (what.rfind(key + ":", 0) == 0 || what.rfind("dim:", 0) == 0) throw;
    throw ParameterError(key + ": " + what);
  }
  throw ParameterError(key + ": unknown kernel '" + std::string(spec) + "'");
}

namespace detail {

inline Profile profile(std::string_view spec, const std::string& key) {
  const auto [name, args] = head(spec);
  if (name == "indicator") return BallProfile{number(args, key)};
  if (name == "cone") return ConeProfile{number(args, key)};
  if (name == "gauss") {
    const auto v = numbers(args, key, 2);
    if (!(v[0] > 0.0)) throw ParameterError(key + ": gauss sigma must be > 0");
    return GaussProfile{v[0], v[1]};
  }
  throw ParameterError(key + ": unknown shape '" + std::string(spec) + "'");
}

}  // namespace detail

inline TestFunction function(std::string_view spec, int dim, const std::string& key = "f") {
  if (dim != 1 && dim != 2) throw ParameterError("dim: must be 1 or 2");
  const auto [name, args] = detail::head(spec);
  std::vector<Component> parts;
  if (name == "mix") {
    if (args.empty()) throw ParameterError(key + ": mix needs at least one component");
    for (auto item : split(args, ';')) {
      const auto star = item.find('*');
      if (star == std::string_view::npos) throw ParameterError(key + ": mix component needs <w>*<shape>");
      Component c;
      c.weight = number(item.substr(0, star), key);
      auto rest = item.substr(star + 1);
      const auto at = rest.rfind('@');
      if (at != std::string_view::npos) {
        const auto shift = numbers(rest.substr(at + 1), key, static_cast<std::size_t>(dim));
        c.shift = {shift[0], dim == 2 ? shift[1] : 0.0};
        rest = rest.substr(0, at);
      }
      c.profile = detail::profile(rest, key);
      parts.push_back(c);
    }
  } else {
    parts.push_back(Component{1.0, detail::profile(spec, key), Point{}});
  }
  for (const auto& c : parts)
    if (!(profile_radius(c.profile) > 0.0)) throw ParameterError(key + ": radius must be > 0");
  return TestFunction::mixture(dim, std::move(parts));
}

/// Explicit list or geometric schedule; values must be positive and strictly decreasing.
inline std::vector<double> schedule(std::string_view spec, const std::string& key = "t_schedule") {
  std::vector<double> out;
  const auto [name, args] = detail::head(spec);
  if (name == "geo") {
    const auto v = numbers(args, key, 3);
    if (!(v[0] > 0.0)) throw ParameterError(key + ": geo start must be > 0");
    if (!(v[1] > 0.0 && v[1] < 1.0)) throw ParameterError(key + ": geo ratio must be in (0, 1)");
    if (v[2] != std::floor(v[2]) || v[2] < 1.0 || v[2] > 64.0)
      throw ParameterError(key + ": geo count must be an integer in [1, 64]");
    double t = v[0];
    for (int i = 0; i < static_cast<int>(v[2]); ++i, t *= v[1]) out.push_back(t);
  } else {
    out = numbers(spec, key);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0)) throw ParameterError(key + ": values must be > 0");
    if (i > 0 && !(out[i] < out[i - 1])) throw ParameterError(key + ": values must be strictly decreasing");
  }
  return out;
}

}  // namespace roughfrac::parse
