#pragma once

#include "errors.hpp"
#include "spectrum.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace instant {

struct ComplexityReading {
  double t = 0.0;
  double mean_abs_phase = 0.0;
  double value = 0.0;
};

/// sum_k w_k |lambda_k|; the flat measure on [0, 2pi) averages to pi.
inline double mean_abs_phase(const OrbitSpectrum& spec) {
  if (spec.is_aperiodic()) return pi;
  double s = 0.0;
  for (std::size_t k = 0; k < spec.phases.size(); ++k) s += spec.weights[k] * std::abs(spec.phases[k]);
  return s;
}

/// Physical complexity C(t) = t <|H|> in units T = hbar = 1.
inline ComplexityReading complexity(const OrbitSpectrum& spec, double t) {
  if (t < 0.0) throw PreconditionError("complexity: t must be >= 0");
  ComplexityReading r;
  r.t = t;
  r.mean_abs_phase = mean_abs_phase(spec);
  r.value = t * r.mean_abs_phase;
  return r;
}

struct LowerBoundReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0; ///< min over the grid of 2C(t) - |q_t - q_0|^2
  double worst_t = 0.0;
  bool ok() const noexcept { return violations == 0; }
};

inline constexpr double lower_bound_slack = 1e-12;

/// Checks |q_t - q_0|^2 = 2 - 2 Re overlap(t) <= 2 C(t) on a grid.
inline LowerBoundReport check_lower_bound(const OrbitSpectrum& spec, const std::vector<double>& grid) {
  LowerBoundReport rep;
  const double mean = mean_abs_phase(spec);
  bool first = true;
  for (double t : grid) {
    const double lhs = 2.0 - 2.0 * overlap_at(spec, t).real();
    const double margin = 2.0 * t * mean - lhs;
    if (margin < -lower_bound_slack) ++rep.violations;
    if (first || margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_t = t;
      first = false;
    }
    ++rep.points;
  }
  return rep;
}

/// n + 1 points evenly spaced over [a, b].
inline std::vector<double> linear_grid(double a, double b, std::size_t n) {
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  return g;
}

struct ZeroCount {
  std::size_t zeros = 0;
  std::size_t re_sign_changes = 0;
  std::size_t im_sign_changes = 0;
  std::size_t resolution = 0;
};

inline constexpr double zero_threshold = 1e-9;
inline constexpr double sign_threshold = 1e-12;

/// Zeros of the overlap on [0, 1], sampled at `resolution` steps. A zero is a
/// sample with |f| < 1e-9 or a jump of more than pi/2 in arg f between
/// neighbours. Tangential zeros of Re/Im alone are not zeros of f; the sign
/// change counts of both parts are reported next to it.
inline ZeroCount zero_count(const OrbitSpectrum& spec, std::size_t resolution) {
  if (resolution < 256) throw PreconditionError("zero_count: resolution must be >= 256");
  ZeroCount zc;
  zc.resolution = resolution;
  auto sign = [](double x) { return x > sign_threshold ? 1 : (x < -sign_threshold ? -1 : 0); };

  complex prev = overlap_at(spec, 0.0);
  bool have_prev = std::abs(prev) >= zero_threshold;
  int re_sign = sign(prev.real()), im_sign = sign(prev.imag());
  for (std::size_t i = 1; i <= resolution; ++i) {
    const complex f = overlap_at(spec, static_cast<double>(i) / static_cast<double>(resolution));
    if (std::abs(f) < zero_threshold) {
      ++zc.zeros;
      have_prev = false;
    } else {
      if (have_prev && std::abs(std::arg(f / prev)) > pi / 2) ++zc.zeros;
      prev = f;
      have_prev = true;
    }
    const int rs = sign(f.real()), is = sign(f.imag());
    if (rs != 0) {
      if (re_sign != 0 && rs != re_sign) ++zc.re_sign_changes;
      re_sign = rs;
    }
    if (is != 0) {
      if (im_sign != 0 && is != im_sign) ++zc.im_sign_changes;
      im_sign = is;
    }
  }
  return zc;
}

} // namespace instant
