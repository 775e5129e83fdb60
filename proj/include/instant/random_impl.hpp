#pragma once

#include "cycle.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace instant {

/// Even density on [-1, 1] with its second and fourth moments.
struct DensitySpec {
  std::string name;
  double m2 = 0.0;
  double m4 = 0.0;

  static DensitySpec uniform() { return {"uniform", 1.0 / 3.0, 1.0 / 5.0}; }
  static DensitySpec two_point() { return {"two-point", 1.0, 1.0}; }
  /// f(z) = (1 + cos(pi z)) / 2
  static DensitySpec raised_cosine() {
    return {"raised-cosine", 1.0 / 3.0 - 2.0 / (pi * pi),
            1.0 / 5.0 - 4.0 / (pi * pi) + 24.0 / (pi * pi * pi * pi)};
  }

  static DensitySpec by_name(const std::string& name) {
    if (name == "uniform") return uniform();
    if (name == "two-point") return two_point();
    if (name == "raised-cosine") return raised_cosine();
    throw PreconditionError("unknown density '" + name +
                            "' (expected uniform, two-point or raised-cosine)");
  }

  /// One draw on [-1, 1].
  double draw(Rng& rng) const {
    if (name == "uniform") return rng.uniform(-1.0, 1.0);
    if (name == "two-point") return rng.coin() ? 1.0 : -1.0;
    for (;;) {
      const double z = rng.uniform(-1.0, 1.0);
      if (rng.uniform() < 0.5 * (1.0 + std::cos(pi * z))) return z;
    }
  }
};

/// Parity imbalances y_k of the spectral weight, |y_k| <= 1/p.
struct YSample {
  std::uint64_t p = 0;
  std::vector<double> y;
};

inline YSample sample_y(std::uint64_t p, const DensitySpec& density, Rng& rng) {
  if (p < 2) throw PreconditionError("sample_y: p must be >= 2");
  YSample s;
  s.p = p;
  s.y.resize(p);
  const double scale = 1.0 / static_cast<double>(p);
  for (auto& v : s.y) v = scale * density.draw(rng);
  return s;
}

/// y_k = (-1)^k / p, the allocation of the minimal spectrum.
inline YSample alternating_y(std::uint64_t p) {
  YSample s;
  s.p = p;
  s.y.resize(p);
  for (std::uint64_t k = 0; k < p; ++k) s.y[k] = (k % 2 ? -1.0 : 1.0) / static_cast<double>(p);
  return s;
}

/// Half-cycle amplitude at index j: sum_k y_k exp(-2 pi i k (j - 1/2) / p).
inline complex amplitude_from_y(const YSample& s, std::int64_t j) {
  const double pd = static_cast<double>(s.p);
  const double u = static_cast<double>(j) - 0.5;
  complex a{0.0, 0.0};
  for (std::uint64_t k = 0; k < s.p; ++k) {
    const double kjp = std::fmod(static_cast<double>(k) * u, 2.0 * pd);
    a += s.y[k] * std::polar(1.0, -two_pi * kjp / pd);
  }
  return a;
}

/// Window yield by direct summation.
inline double nu_from_y(const YSample& s, IndexRange window) {
  const auto p = static_cast<std::int64_t>(s.p);
  if (window.begin < 0 || window.end > p)
    throw PreconditionError("nu_from_y: window must lie inside [0, p)");
  double nu = 0.0;
  for (std::int64_t j = window.begin; j < window.end; ++j) nu += std::norm(amplitude_from_y(s, j));
  return nu;
}

/// The same amplitudes for all j at once: a_j is the forward DFT of
/// y_k exp(i pi k / p).
class YieldTransform {
public:
  explicit YieldTransform(std::uint64_t p) : p_(p), twist_(p), in_(p), out_(p) {
    for (std::uint64_t k = 0; k < p; ++k)
      twist_[k] = std::polar(1.0, pi * static_cast<double>(k) / static_cast<double>(p));
  }

  const std::vector<complex>& amplitudes(const YSample& s) {
    if (s.p != p_) throw PreconditionError("YieldTransform: period mismatch");
    for (std::uint64_t k = 0; k < p_; ++k) in_[k] = s.y[k] * twist_[k];
    fft_.fwd(out_, in_);
    return out_;
  }

  double nu(const YSample& s, IndexRange window) {
    const auto& a = amplitudes(s);
    double v = 0.0;
    for (std::int64_t j = window.begin; j < window.end; ++j) v += std::norm(a[static_cast<std::size_t>(j)]);
    return v;
  }

private:
  std::uint64_t p_;
  std::vector<complex> twist_, in_, out_;
  Eigen::FFT<double> fft_;
};

/// Result window of the alpha-waiting cycle with alpha = 1 - p^{-1/2}.
inline IndexRange sqrt_window(std::uint64_t p) {
  return centered_cycle(p, alpha_for_period(p)).window;
}

struct StatsRow {
  std::uint64_t p = 0;
  std::string density;
  std::uint64_t trials = 0;
  double alpha = 0.0;
  std::int64_t window_length = 0;
  double expected = 0.0; ///< |W| / p * m2
  double mean = 0.0;
  double stderr_ = 0.0;
  double var = std::numeric_limits<double>::quiet_NaN();
  double var_p = std::numeric_limits<double>::quiet_NaN();
  double chebyshev_fraction = std::numeric_limits<double>::quiet_NaN();
  bool mean_ok = false;
  std::vector<double> samples;
};

struct StatsReport {
  std::uint64_t seed = 0;
  std::string density;
  double m2 = 0.0;
  double m4 = 0.0;
  double delta = 2.0;
  double c = std::numeric_limits<double>::quiet_NaN();
  double var_p_ratio = std::numeric_limits<double>::quiet_NaN(); ///< max / min of var * p
  bool variance_defined = false;
  bool chebyshev_ok = false;
  std::vector<StatsRow> rows;

  bool means_ok() const {
    for (const auto& r : rows)
      if (!r.mean_ok) return false;
    return !rows.empty();
  }
};

/// Samples nu on the alpha-waiting window for each p, `trials` times, trial t
/// of period p drawing from stream (p, t) of `rng`.
inline StatsReport yield_experiment(const std::vector<std::uint64_t>& periods,
                                       const DensitySpec& density, std::uint64_t trials,
                                       const Rng& rng, bool keep_samples = false) {
  if (trials < 1) throw PreconditionError("yield_experiment: trials must be >= 1");
  StatsReport rep;
  rep.seed = rng.seed();
  rep.density = density.name;
  rep.m2 = density.m2;
  rep.m4 = density.m4;
  rep.variance_defined = trials >= 2;

  for (std::uint64_t p : periods) {
    if (p < 4 || p % 2 != 0) throw PreconditionError("yield_experiment: p must be even and >= 4");
    StatsRow row;
    row.p = p;
    row.density = density.name;
    row.trials = trials;
    row.alpha = alpha_for_period(p);
    const IndexRange window = sqrt_window(p);
    row.window_length = window.size();
    row.expected = static_cast<double>(window.size()) / static_cast<double>(p) * density.m2;

    YieldTransform transform(p);
    const Rng stream = rng.split(p);
    std::vector<double> nus(trials);
    double sum = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng r = stream.split(t);
      nus[t] = transform.nu(sample_y(p, density, r), window);
      sum += nus[t];
    }
    row.mean = sum / static_cast<double>(trials);
    if (trials >= 2) {
      double ss = 0.0;
      for (double v : nus) ss += (v - row.mean) * (v - row.mean);
      row.var = ss / static_cast<double>(trials - 1);
      row.var_p = row.var * static_cast<double>(p);
      row.stderr_ = std::sqrt(row.var / static_cast<double>(trials));
      row.mean_ok = std::abs(row.mean - row.expected) < 3.0 * row.stderr_;
    }
    row.samples = std::move(nus); // kept for the Chebyshev fraction
    rep.rows.push_back(std::move(row));
  }

  if (rep.variance_defined) {
    double max_sd = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : rep.rows) {
      max_sd = std::max(max_sd, std::sqrt(r.var_p));
      lo = std::min(lo, r.var_p);
      hi = std::max(hi, r.var_p);
    }
    rep.var_p_ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    rep.c = 1.0 / (max_sd + density.m2);
    rep.chebyshev_ok = true;
    for (auto& r : rep.rows) {
      const double threshold =
          density.m2 - rep.delta / (rep.c * std::sqrt(static_cast<double>(r.p)));
      std::uint64_t below = 0;
      for (double v : r.samples)
        if (v < threshold) ++below;
      r.chebyshev_fraction = static_cast<double>(below) / static_cast<double>(r.samples.size());
      if (!(r.chebyshev_fraction < 1.0 / (rep.delta * rep.delta))) rep.chebyshev_ok = false;
    }
  }
  if (!keep_samples)
    for (auto& r : rep.rows) r.samples.clear();
  return rep;
}

struct ContinuousNu {
  double direct = 0.0;
  double closed_form = 0.0;
  std::uint64_t cells = 0;
};

/// nu for a piecewise-constant y on N equal cells of [0, 2pi). Amplitudes
/// (1/2pi) int exp(-i lambda (j - 1/2)) y(lambda) d lambda are integrated
/// exactly per cell and summed over -N < j <= N. The closed form
/// (1/2pi) int (y^2 + y(lambda) y(lambda + pi)) is returned alongside.
inline ContinuousNu continuous_nu(const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 2 || n % 2 != 0) throw PreconditionError("continuous_nu: cell count must be even and >= 2");
  const double nd = static_cast<double>(n);
  std::vector<complex> in(n), out;
  for (std::size_t c = 0; c < n; ++c)
    in[c] = y[c] * std::polar(1.0, pi * static_cast<double>(c) / nd);
  Eigen::FFT<double> fft;
  fft.fwd(out, in);

  ContinuousNu r;
  r.cells = n;
  const auto N = static_cast<std::int64_t>(n);
  for (std::int64_t j = -N + 1; j <= N; ++j) {
    const double u = static_cast<double>(j) - 0.5;
    // cell integral of exp(-i lambda u) over [0, 2pi / N), divided by 2pi
    const complex cell = (1.0 - std::polar(1.0, -two_pi * u / nd)) / (complex(0.0, 1.0) * u * two_pi);
    const complex a = cell * out[static_cast<std::size_t>(((j % N) + N) % N)];
    r.direct += std::norm(a);
  }
  for (std::size_t c = 0; c < n; ++c) r.closed_form += y[c] * y[c] + y[c] * y[(c + n / 2) % n];
  r.closed_form /= nd;
  return r;
}

inline ContinuousNu continuous_nu(std::uint64_t cells, const DensitySpec& density, Rng& rng) {
  if (cells < 2 || cells % 2 != 0) throw PreconditionError("continuous_nu: cell count must be even and >= 2");
  std::vector<double> y(cells);
  for (auto& v : y) v = density.draw(rng);
  return continuous_nu(y);
}

struct ContinuousStats {
  std::uint64_t cells = 0;
  std::uint64_t samples = 0;
  std::string density;
  double m2 = 0.0;
  double mean_direct = 0.0;
  double stderr_direct = 0.0;
  double mean_closed_form = 0.0;
};

inline ContinuousStats continuous_experiment(std::uint64_t cells, const DensitySpec& density,
                                             std::uint64_t samples, const Rng& rng) {
  if (samples < 1) throw PreconditionError("continuous_experiment: samples must be >= 1");
  ContinuousStats st;
  st.cells = cells;
  st.samples = samples;
  st.density = density.name;
  st.m2 = density.m2;
  std::vector<double> d(samples);
  double sum_c = 0.0;
  for (std::uint64_t t = 0; t < samples; ++t) {
    Rng r = rng.split(t);
    const ContinuousNu v = continuous_nu(cells, density, r);
    d[t] = v.direct;
    st.mean_direct += v.direct;
    sum_c += v.closed_form;
  }
  st.mean_direct /= static_cast<double>(samples);
  st.mean_closed_form = sum_c / static_cast<double>(samples);
  if (samples >= 2) {
    double ss = 0.0;
    for (double v : d) ss += (v - st.mean_direct) * (v - st.mean_direct);
    st.stderr_direct = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
  }
  return st;
}

} // namespace instant
