// Copyright 2026 The onestep Authors
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
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "onestep/error.hpp"

namespace onestep {

using Point = std::vector<double>;
using Objective = std::function<double(const Point&)>;

struct Box {
  Point lower;
  Point upper;

  std::size_t dim() const { return lower.size(); }

  Point clamp(Point x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    return x;
  }
};

inline void validate(const Box& box) {
  if (box.lower.size() != box.upper.size() || box.lower.empty())
    fail(ErrorKind::kInvalidParameter, "bounds must be non-empty and of equal length");
  for (std::size_t i = 0; i < box.dim(); ++i)
    if (!std::isfinite(box.lower[i]) || !std::isfinite(box.upper[i]) ||
        box.lower[i] > box.upper[i])
      fail(ErrorKind::kInvalidParameter, "bounds must be finite and ordered");
}

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform
/// (std::uniform_real_distribution is not).
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

/// Halton points in the box, randomized by a seeded Cranley-Patterson shift.
inline std::vector<Point> halton_points(const Box& box, std::size_t count, std::uint64_t seed) {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (box.dim() > std::size(kPrimes))
    fail(ErrorKind::kInvalidParameter, "too many free parameters for the Halton sequence");
  std::mt19937_64 rng(seed);
  Point shift(box.dim());
  for (double& s : shift) s = unit_double(rng);
  std::vector<Point> out;
  for (std::size_t k = 0; k < count; ++k) {
    Point x(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      double u = radical_inverse(k + 1, kPrimes[i]) + shift[i];
      u -= std::floor(u);
      x[i] = box.lower[i] + u * (box.upper[i] - box.lower[i]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

struct NelderMeadOptions {
  int max_evaluations = 4000;
  /// Initial simplex edge as a fraction of each box width.
  double initial_step = 0.1;
  double f_tol = 1e-16;
  double x_tol = 1e-12;
  /// Re-seed the simplex at the current best this many times after
  /// convergence, to escape premature collapse.
  int polish_restarts = 2;
  /// Stop as soon as f falls below this value.
  double f_target = -std::numeric_limits<double>::infinity();
};

struct NelderMeadResult {
  Point x;
  double f = 0.0;
  int evaluations = 0;
};

/// Nelder-Mead simplex search; trial points are clamped into the box.
inline NelderMeadResult nelder_mead(const Objective& f, Point x0, const Box& box,
                                    const NelderMeadOptions& opt = {}) {
  validate(box);
  const std::size_t n = box.dim();
  if (x0.size() != n) fail(ErrorKind::kInvalidParameter, "start point has wrong dimension");
  NelderMeadResult best{box.clamp(std::move(x0)), 0.0, 0};

  auto eval = [&](const Point& x) {
    ++best.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  best.f = eval(best.x);

  for (int round = 0; round <= opt.polish_restarts; ++round) {
    std::vector<Point> s{best.x};
    std::vector<double> fs{best.f};
    for (std::size_t i = 0; i < n; ++i) {
      Point x = best.x;
      const double width = box.upper[i] - box.lower[i];
      double step = opt.initial_step * (width > 0 ? width : 1.0);
      if (x[i] + step > box.upper[i]) step = -step;
      x[i] = std::clamp(x[i] + step, box.lower[i], box.upper[i]);
      fs.push_back(eval(x));
      s.push_back(std::move(x));
    }
    std::vector<std::size_t> order(n + 1);
    while (best.evaluations < opt.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
      const std::size_t lo = order.front(), hi = order.back(), nh = order[n - 1];
      if (fs[lo] < opt.f_target) break;
      double spread = 0.0;
      for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          spread = std::max(spread, std::abs(s[k][i] - s[lo][i]));
      if (std::abs(fs[hi] - fs[lo]) <= opt.f_tol && spread <= opt.x_tol) break;
      if (spread <= opt.x_tol * 1e-3) break;

      Point centroid(n, 0.0);
      for (std::size_t k = 0; k <= n; ++k)
        if (k != hi)
          for (std::size_t i = 0; i < n; ++i) centroid[i] += s[k][i] / static_cast<double>(n);
      auto along = [&](double c) {
        Point x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + c * (s[hi][i] - centroid[i]);
        return box.clamp(std::move(x));
      };
      const Point xr = along(-1.0);
      const double fr = eval(xr);
      if (fr < fs[lo]) {
        const Point xe = along(-2.0);
        const double fe = eval(xe);
        if (fe < fr) { s[hi] = xe; fs[hi] = fe; } else { s[hi] = xr; fs[hi] = fr; }
      } else if (fr < fs[nh]) {
        s[hi] = xr; fs[hi] = fr;
      } else {
        const bool outside = fr < fs[hi];
        const Point xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fs[hi])) {
          s[hi] = xc; fs[hi] = fc;
        } else {
          for (std::size_t k = 0; k <= n; ++k) {
            if (k == lo) continue;
            for (std::size_t i = 0; i < n; ++i) s[k][i] = s[lo][i] + 0.5 * (s[k][i] - s[lo][i]);
            fs[k] = eval(s[k]);
          }
        }
      }
    }
    const auto it = std::min_element(fs.begin(), fs.end());
    const std::size_t k = static_cast<std::size_t>(it - fs.begin());
    const bool improved = fs[k] < best.f;
    if (fs[k] <= best.f) { best.x = s[k]; best.f = fs[k]; }
    if (best.f < opt.f_target || best.evaluations >= opt.max_evaluations) break;
    if (round > 0 && !improved) break;
  }
  return best;
}

}  // namespace onestep
