#pragma once

#include "cycle.hpp"
#include "errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace instant {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Spectral data of the Hamiltonian restricted to one orbit, in the gauge
/// T = hbar = 1: eigenphases in radians per machine cycle with their spectral
/// weights. An aperiodic orbit carries no point list; its measure is
/// d(lambda)/2pi on [0, 2pi).
struct OrbitSpectrum {
  std::vector<double> phases;
  std::vector<double> weights;
  std::optional<std::uint64_t> period;

  static OrbitSpectrum aperiodic() { return {}; }

  bool is_aperiodic() const noexcept { return !period.has_value() && phases.empty(); }

  double total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

/// Eigenphases lambda_k = 2pi (k/p + (k mod 2)), all of weight 1/p. Odd
/// eigenvalue indices sit one full turn higher, which makes the half-cycle
/// amplitudes alternate in sign and concentrate around j = p/2.
inline OrbitSpectrum minimal_periodic_spectrum(std::uint64_t p) {
  if (p < 2 || p % 2 != 0)
    throw PreconditionError("minimal_periodic_spectrum: period must be even and >= 2, got " +
                            std::to_string(p));
  OrbitSpectrum spec;
  spec.period = p;
  spec.phases.resize(p);
  spec.weights.assign(p, 1.0 / static_cast<double>(p));
  for (std::uint64_t k = 0; k < p; ++k)
    spec.phases[k] = two_pi * (static_cast<double>(k) / static_cast<double>(p) +
                               static_cast<double>(k % 2));
  return spec;
}

/// The overlap function (q_0, q_u) = sum_k w_k exp(-i lambda_k u).
inline complex overlap_at(const OrbitSpectrum& spec, double u) {
  if (spec.is_aperiodic())
    throw UnsupportedError("overlap_at: aperiodic spectrum, use halfstep_profile_aperiodic");
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < spec.phases.size(); ++k) {
    const double arg = spec.phases[k] * u;
    re += spec.weights[k] * std::cos(arg);
    im -= spec.weights[k] * std::sin(arg);
  }
  return {re, im};
}

/// Overlaps a_j of the state after half a machine cycle with the computational
/// states. Index j runs over first_index .. first_index + size - 1.
struct AmplitudeProfile {
  std::vector<complex> amplitudes;
  std::int64_t first_index = 0;
  double captured = 0.0;
  double tau = 0.5;
  std::optional<std::uint64_t> period;

  std::int64_t last_index() const noexcept {
    return first_index + static_cast<std::int64_t>(amplitudes.size());
  }
  IndexRange range() const noexcept { return {first_index, last_index()}; }
  const complex& at(std::int64_t j) const {
    return amplitudes.at(static_cast<std::size_t>(j - first_index));
  }
  double probability(std::int64_t j) const { return std::norm(at(j)); }
};

inline double sum_probabilities(const std::vector<complex>& a) {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return s;
}

inline constexpr double closed_form_tolerance = 1e-10;

/// a_j = exp(i pi (j - 1/2) / p) / (p cos(pi (j - 1/2) / p)), j = 0 .. p-1,
/// verified term by term against the direct spectral sum.
inline AmplitudeProfile halfstep_profile_periodic(std::uint64_t p) {
  const OrbitSpectrum spec = minimal_periodic_spectrum(p);
  const double pd = static_cast<double>(p);
  AmplitudeProfile profile;
  profile.period = p;
  profile.amplitudes.resize(p);
  for (std::uint64_t j = 0; j < p; ++j) {
    const double x = pi * (static_cast<double>(j) - 0.5) / pd;
    const complex closed = std::polar(1.0, x) / (pd * std::cos(x));
    const complex direct = overlap_at(spec, static_cast<double>(j) - 0.5);
    if (std::abs(closed - direct) > closed_form_tolerance)
      throw ConsistencyError("halfstep_profile_periodic: closed form and spectral sum disagree at j = " +
                             std::to_string(j) + " for p = " + std::to_string(p));
    profile.amplitudes[j] = closed;
  }
  profile.captured = sum_probabilities(profile.amplitudes);
  return profile;
}

/// Aperiodic orbit with flat spectral measure: a_k = -1 / (pi i (k - 1/2)) for
/// -K < k <= K. The discarded tail is about 2 / (pi^2 K).
inline AmplitudeProfile halfstep_profile_aperiodic(std::uint64_t K) {
  if (K < 1) throw PreconditionError("halfstep_profile_aperiodic: K must be >= 1");
  AmplitudeProfile profile;
  const auto k0 = -static_cast<std::int64_t>(K) + 1;
  profile.first_index = k0;
  profile.amplitudes.resize(2 * K);
  for (std::size_t i = 0; i < profile.amplitudes.size(); ++i) {
    const double k = static_cast<double>(k0 + static_cast<std::int64_t>(i));
    profile.amplitudes[i] = complex(0.0, 1.0 / (pi * (k - 0.5)));
  }
  // outermost (smallest) terms first
  double captured = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    captured += std::norm(profile.amplitudes[i]);
    captured += std::norm(profile.amplitudes[2 * K - 1 - i]);
  }
  profile.captured = captured;
  return profile;
}

/// Probability sum_{j in window} |a_j|^2.
inline double nu_of(const AmplitudeProfile& profile, IndexRange window) {
  if (window.size() == 0) return 0.0;
  if (window.begin < profile.first_index || window.end > profile.last_index())
    throw PreconditionError("nu_of: window [" + std::to_string(window.begin) + ", " +
                            std::to_string(window.end) + ") outside profile range");
  double s = 0.0;
  for (std::int64_t j = window.begin; j < window.end; ++j) s += profile.probability(j);
  return s;
}

/// Peak magnitude |a_{p/2}| = 1 / (p sin(pi / (2p))) of the minimal profile.
inline double minimal_peak(std::uint64_t p) {
  const double pd = static_cast<double>(p);
  return 1.0 / (pd * std::sin(pi / (2.0 * pd)));
}

/// Discrete Fourier eigenbasis: entry (j, k) = p^{-1/2} exp(2 pi i j k / p).
inline Eigen::MatrixXcd eigenbasis(std::uint64_t p) {
  if (p < 1) throw PreconditionError("eigenbasis: p must be >= 1");
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXcd f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::uint64_t jk = (static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(k)) % p;
      f(j, k) = std::polar(scale, two_pi * static_cast<double>(jk) / static_cast<double>(p));
    }
  return f;
}

inline double unitarity_residual(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return (m * m.adjoint() - eye).cwiseAbs().maxCoeff();
}

} // namespace instant
