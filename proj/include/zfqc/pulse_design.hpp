// Copyright 2026 The zfqc Authors
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

// Selective pi pulses from a single DC field pulse. A pulse of amplitude B and
// duration t rotates spin k by gamma_k B t about the field axis; it acts as a
// pi pulse on a target set S when every target turns by an odd multiple of pi
// and every other spin by an even multiple.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "zfqc/errors.hpp"
#include "zfqc/linalg.hpp"
#include "zfqc/spin_system.hpp"

namespace zfqc {

/// Fidelity of a z-field pulse against the ideal pi rotation of `targets`,
/// with J ignored:
///   prod_{i in S} |sin(gamma_i B t / 2)| * prod_{j not in S} |cos(gamma_j B t / 2)|
inline double product_fidelity(const SpinSystem& sys, const SpinSet& targets,
                               double field_tesla, double t) {
  if (!(t >= 0.0)) throw ValidationError("pulse duration must be >= 0");
  if (!(field_tesla > 0.0)) throw ValidationError("field amplitude must be > 0");
  double f = 1.0;
  for (int k = 0; k < sys.size(); ++k) {
    const double half_angle = 0.5 * sys.gamma(k) * field_tesla * t;
    f *= targets.contains(k) ? std::abs(std::sin(half_angle))
                             : std::abs(std::cos(half_angle));
  }
  return f;
}

/// Integers with (2 m_target + 1) / (2 m_spectator) close to a gamma ratio.
struct CommensurabilitySolution {
  long target_m = 0;
  long spectator_m = 1;
  double ratio_error = 0.0;  // |gamma_t/gamma_s - (2 m_t + 1)/(2 m_s)|

  double ratio() const {
    return static_cast<double>(2 * target_m + 1) /
           static_cast<double>(2 * spectator_m);
  }
};

/// Best (2m1+1)/(2m2) approximation of gamma_target/gamma_spectator with
/// 1 <= m2 <= max_m. Ties go to the smaller m2, i.e. the shorter pulse.
inline CommensurabilitySolution rational_approx(double gamma_target,
                                                double gamma_spectator,
                                                int max_m) {
  if (gamma_target == 0.0 || gamma_spectator == 0.0 ||
      !std::isfinite(gamma_target) || !std::isfinite(gamma_spectator)) {
    throw ValidationError("gyromagnetic ratios must be finite and nonzero");
  }
  if (max_m < 1) throw ValidationError("max_m must be >= 1");
  const double r = gamma_target / gamma_spectator;
  CommensurabilitySolution best;
  best.ratio_error = std::numeric_limits<double>::infinity();
  for (long m2 = 1; m2 <= max_m; ++m2) {
    const double centre = (2.0 * static_cast<double>(m2) * r - 1.0) / 2.0;
    for (long m1 : {static_cast<long>(std::floor(centre)),
                    static_cast<long>(std::ceil(centre))}) {
      const double err = std::abs(
          r - static_cast<double>(2 * m1 + 1) / static_cast<double>(2 * m2));
      if (err < best.ratio_error) best = {m1, m2, err};
    }
  }
  return best;
}

/// A designed DC pulse. `field` carries the amplitude along +z; the compiler
/// re-orients it to whatever axis it needs.
struct DesignSolution {
  double duration = 0.0;
  FieldVector field;
  SpinSet targets;
  double predicted_fidelity = 0.0;

  double amplitude() const { return field.norm(); }
};

struct PulseSearchOptions {
  int grid_points = 0;           // 0: choose from points_per_period
  int points_per_period = 40;    // per period of the fastest |cos| factor
  double resolution = 1e-9;      // golden-section stopping width, seconds
  int refine_candidates = 8;     // grid local maxima refined
};

namespace detail {

/// Worker threads for grid scans; ZFQC_THREADS overrides.
inline unsigned worker_count() {
  if (const char* env = std::getenv("ZFQC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Evaluates f on every grid node; each node is written by exactly one
/// worker, so the result does not depend on the thread count.
template <class F>
std::vector<double> parallel_grid(const std::vector<double>& ts, F&& f) {
  std::vector<double> out(ts.size());
  const unsigned workers = std::min<std::size_t>(
      worker_count(), std::max<std::size_t>(1, ts.size() / 4096));
  if (workers <= 1) {
    for (std::size_t i = 0; i < ts.size(); ++i) out[i] = f(ts[i]);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (ts.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(ts.size(), lo + chunk);
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = f(ts[i]);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

/// Golden-section maximization on [a, b]; returns (t, f(t)) of the best
/// point evaluated.
template <class F>
std::pair<double, double> golden_maximize(F&& f, double a, double b,
                                          double resolution) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > resolution) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Better fidelity wins; equal fidelity goes to the shorter pulse.
inline bool better(double f_a, double t_a, double f_b, double t_b) {
  return f_a > f_b || (f_a == f_b && t_a < t_b);
}

}  // namespace detail

/// Grid spacing that samples the fastest oscillating factor at
/// `points_per_period` points per period 2 pi / (gamma_max B).
inline double default_grid_spacing(const SpinSystem& sys, double field_tesla,
                                   int points_per_period = 40) {
  double gmax = 0.0;
  for (double g : sys.gammas()) gmax = std::max(gmax, std::abs(g));
  return 2.0 * kPi / (points_per_period * gmax * field_tesla);
}

/// Uniform grid over [t_lo, t_hi].
inline std::vector<double> duration_grid(double t_lo, double t_hi, int points) {
  std::vector<double> ts(points);
  const double step = (t_hi - t_lo) / (points - 1);
  for (int i = 0; i < points; ++i) ts[i] = t_lo + step * i;
  ts.back() = t_hi;
  return ts;
}

/// (t, fidelity) samples of the product formula, t strictly increasing.
inline std::vector<std::pair<double, double>> fidelity_curve(
    const SpinSystem& sys, const SpinSet& targets, double field_tesla,
    double t_lo, double t_hi, int points) {
  if (!(t_lo >= 0.0) || !(t_hi > t_lo)) {
    throw ValidationError("duration range must satisfy 0 <= t_lo < t_hi");
  }
  if (points < 2) throw ValidationError("need at least 2 grid points");
  const auto ts = duration_grid(t_lo, t_hi, points);
  const auto fs = detail::parallel_grid(
      ts, [&](double t) { return product_fidelity(sys, targets, field_tesla, t); });
  std::vector<std::pair<double, double>> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) out[i] = {ts[i], fs[i]};
  return out;
}

/// Grid scan of the product formula over [t_lo, t_hi] followed by
/// golden-section refinement of the best grid local maxima.
inline DesignSolution find_pi_duration(const SpinSystem& sys,
                                       const SpinSet& targets,
                                       double field_tesla, double t_lo,
                                       double t_hi,
                                       const PulseSearchOptions& opts = {}) {
  if (!(t_lo >= 0.0) || !(t_hi > t_lo)) {
    throw ValidationError("duration range must satisfy 0 <= t_lo < t_hi");
  }
  if (!(field_tesla > 0.0)) throw ValidationError("field amplitude must be > 0");
  for (int s : targets.indices()) sys.check_index(s);

  int points = opts.grid_points;
  if (points == 0) {
    const double h = default_grid_spacing(sys, field_tesla, opts.points_per_period);
    points = static_cast<int>(std::ceil((t_hi - t_lo) / h)) + 1;
  }
  if (points < 2) throw ValidationError("need at least 2 grid points");

  auto fid = [&](double t) {
    return product_fidelity(sys, targets, field_tesla, t);
  };
  const auto ts = duration_grid(t_lo, t_hi, points);
  const auto fs = detail::parallel_grid(ts, fid);

  std::vector<int> peaks;
  for (int i = 0; i < points; ++i) {
    const bool left_ok = i == 0 || fs[i] >= fs[i - 1];
    const bool right_ok = i == points - 1 || fs[i] >= fs[i + 1];
    if (left_ok && right_ok) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) {
    return detail::better(fs[a], ts[a], fs[b], ts[b]);
  });
  if (static_cast<int>(peaks.size()) > opts.refine_candidates) {
    peaks.resize(opts.refine_candidates);
  }

  double best_t = ts[peaks.front()];
  double best_f = fs[peaks.front()];
  for (int i : peaks) {
    const double a = ts[std::max(0, i - 1)];
    const double b = ts[std::min(points - 1, i + 1)];
    auto [t, f] = detail::golden_maximize(fid, a, b, opts.resolution);
    if (detail::better(f, t, best_f, best_t)) {
      best_t = t;
      best_f = f;
    }
  }
  return DesignSolution{best_t, FieldVector{0.0, 0.0, field_tesla}, targets,
                        best_f};
}

}  // namespace zfqc
