#pragma once

#include "cycle.hpp"
#include "errors.hpp"
#include "machine.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace instant {

/// Outcome of measuring O (projector onto the computational span) at half a
/// cycle, followed by the index of the computational state found.
struct MeasurementOutcome {
  int o_value = 0;
  std::optional<std::int64_t> index;
  bool result_valid = false;
};

/// Draws j with probability |a_j|^2 by inverse CDF; the remaining mass
/// 1 - captured is the o = 0 outcome.
class OutcomeSampler {
public:
  OutcomeSampler(const AmplitudeProfile& profile, IndexRange window)
      : first_(profile.first_index), window_(window) {
    if (profile.captured > 1.0 + 1e-12)
      throw PreconditionError("sample_outcome: captured probability exceeds 1");
    cdf_.reserve(profile.amplitudes.size());
    double acc = 0.0;
    for (const auto& a : profile.amplitudes) cdf_.push_back(acc += std::norm(a));
  }

  double captured() const noexcept { return cdf_.empty() ? 0.0 : cdf_.back(); }

  double window_mass() const {
    double s = 0.0;
    for (std::int64_t j = std::max(window_.begin, first_);
         j < std::min<std::int64_t>(window_.end, first_ + static_cast<std::int64_t>(cdf_.size())); ++j) {
      const auto i = static_cast<std::size_t>(j - first_);
      s += cdf_[i] - (i ? cdf_[i - 1] : 0.0);
    }
    return s;
  }

  MeasurementOutcome operator()(Rng& rng) const {
    const double u = rng.uniform();
    MeasurementOutcome out;
    if (cdf_.empty() || u >= cdf_.back()) return out;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::int64_t j = first_ + (it - cdf_.begin());
    out.o_value = 1;
    out.index = j;
    out.result_valid = window_.contains(j);
    return out;
  }

  const IndexRange& window() const noexcept { return window_; }

private:
  std::int64_t first_;
  IndexRange window_;
  std::vector<double> cdf_;
};

inline MeasurementOutcome sample_outcome(const AmplitudeProfile& profile, IndexRange window, Rng& rng) {
  return OutcomeSampler(profile, window)(rng);
}

/// What the result register reads after the state collapsed onto index j.
using Readout = std::function<Result(std::int64_t)>;

/// Register content of the cycle state at position j (mod p). Synthetic
/// cycles report a placeholder result inside the window.
inline Readout cycle_readout(const LabeledCycle& cycle) {
  return [&cycle](std::int64_t j) -> Result {
    const auto p = static_cast<std::int64_t>(cycle.period);
    const auto i = static_cast<std::size_t>(((j % p) + p) % p);
    if (!cycle.states.empty()) return cycle.states[i].result;
    return cycle.labels[i] ? Result{true, "r"} : Result{false, ""};
  };
}

/// Every computational state of an aperiodic orbit is a non-result state.
inline Readout aperiodic_readout() {
  return [](std::int64_t) { return Result{false, ""}; };
}

struct RunReport {
  std::uint64_t seed = 0;
  std::uint64_t trials = 0; ///< preparations of q_0
  std::uint64_t o_ones = 0;
  std::uint64_t valid_draws = 0;
  std::uint64_t prepares = 0;
  std::uint64_t evolves = 0;
  std::uint64_t o_measurements = 0;
  std::uint64_t r_measurements = 0;
  std::uint64_t validations = 0;
  std::optional<Result> result;
  bool valid = false;
  bool inconclusive = false;
  bool no_majority = false;
  std::uint64_t majority = 1;
  std::vector<MeasurementOutcome> outcomes;

  /// Fraction of trials ending in a result-valid state.
  double nu_hat() const { return trials ? static_cast<double>(valid_draws) / static_cast<double>(trials) : 0.0; }
  /// Validity rate conditional on O = 1.
  double pi_hat() const { return o_ones ? static_cast<double>(valid_draws) / static_cast<double>(o_ones) : 0.0; }
  /// Computational-state rate conditional on O = 1; O projects on that span.
  double nu_c_hat() const { return o_ones ? 1.0 : 0.0; }
};

inline constexpr std::uint64_t default_max_trials = 1000000;

namespace detail {

// Steps 1-4: prepare, evolve, measure O until it reads 1.
inline std::optional<MeasurementOutcome> draw_computational(const OutcomeSampler& sampler, Rng& rng,
                                                            RunReport& rep, std::uint64_t max_trials,
                                                            bool record) {
  while (rep.trials < max_trials) {
    ++rep.trials;
    ++rep.prepares;
    ++rep.evolves;
    ++rep.o_measurements;
    const MeasurementOutcome out = sampler(rng);
    if (record) rep.outcomes.push_back(out);
    if (out.o_value == 1) {
      ++rep.o_ones;
      if (out.result_valid) ++rep.valid_draws;
      return out;
    }
  }
  return std::nullopt;
}

} // namespace detail

/// Error-free procedure: retry until O = 1 and the read result validates.
inline RunReport run_error_free(const OutcomeSampler& sampler, const Readout& readout,
                                const std::function<bool(const Result&)>& validate, Rng& rng,
                                std::uint64_t max_trials = default_max_trials, bool record = true) {
  if (max_trials < 1) throw PreconditionError("run_error_free: max_trials must be >= 1");
  RunReport rep;
  rep.seed = rng.seed();
  for (;;) {
    const auto out = detail::draw_computational(sampler, rng, rep, max_trials, record);
    if (!out) {
      rep.inconclusive = true;
      return rep;
    }
    ++rep.r_measurements;
    Result r = readout(*out->index);
    ++rep.validations;
    if (validate(r)) {
      rep.result = std::move(r);
      rep.valid = true;
      return rep;
    }
  }
}

inline RunReport run_error_free(const LabeledCycle& cycle, const AmplitudeProfile& profile,
                                const std::function<bool(const Result&)>& validate, Rng& rng,
                                std::uint64_t max_trials = default_max_trials) {
  return run_error_free(OutcomeSampler(profile, cycle.window), cycle_readout(cycle), validate, rng,
                        max_trials);
}

/// P(majority vote of m draws is wrong) when each draw is valid with
/// probability eps: sum_{k >= (m+1)/2} C(m, k) (1 - eps)^k eps^(m - k).
inline double binomial_error_bound(std::uint64_t m, double eps) {
  if (m < 1 || m % 2 == 0) throw PreconditionError("binomial_error_bound: m must be odd");
  if (!(eps > 0.5 && eps <= 1.0)) throw PreconditionError("binomial_error_bound: eps must be in (1/2, 1]");
  if (eps == 1.0) return 0.0;
  const double md = static_cast<double>(m);
  double sum = 0.0;
  for (std::uint64_t k = (m + 1) / 2; k <= m; ++k) {
    const double kd = static_cast<double>(k);
    const double log_term = std::lgamma(md + 1) - std::lgamma(kd + 1) - std::lgamma(md - kd + 1) +
                            kd * std::log1p(-eps) + (md - kd) * std::log(eps);
    sum += std::exp(log_term);
  }
  return sum;
}

/// Error-bounded procedure repeated m times with a strict majority vote.
/// Without a strict majority the run reports `no_majority` and no result.
inline RunReport run_error_bounded(const OutcomeSampler& sampler, const Readout& readout,
                                   std::uint64_t m, Rng& rng,
                                   std::uint64_t max_trials = default_max_trials, bool record = true) {
  if (m < 1 || m % 2 == 0) throw PreconditionError("run_error_bounded: majority m must be odd");
  RunReport rep;
  rep.seed = rng.seed();
  rep.majority = m;
  std::map<Result, std::uint64_t> votes;
  for (std::uint64_t i = 0; i < m; ++i) {
    const auto out = detail::draw_computational(sampler, rng, rep, max_trials, record);
    if (!out) {
      rep.inconclusive = true;
      return rep;
    }
    ++rep.r_measurements;
    ++votes[readout(*out->index)];
  }
  for (const auto& [r, n] : votes)
    if (2 * n > m) rep.result = r;
  rep.no_majority = !rep.result.has_value();
  return rep;
}

/// Per-draw validity eps = window mass / captured; must exceed 1/2.
inline double validity_level(const OutcomeSampler& sampler) {
  const double c = sampler.captured();
  return c > 0.0 ? sampler.window_mass() / c : 0.0;
}

struct HaltingVerdict {
  bool halts = false;
  std::string value;
  std::size_t budget = 0;
  std::size_t transitions = 0;
  std::uint64_t period = 0;
  double validity = 0.0;
  double error_bound = 0.0;
  RunReport report;
};

/// Runs the machine classically for at most `budget` transitions. A halting
/// run is made periodic with waiting fraction `alpha` and read out by the
/// error-bounded procedure; otherwise the state is treated as lying on an
/// aperiodic orbit (truncated at K) whose draws all read z != 0.
inline HaltingVerdict halting_demo(const TMSpec& spec, const Configuration& input, std::size_t budget,
                                   std::uint64_t K, Fraction alpha, std::uint64_t m, Rng& rng,
                                   std::uint64_t max_trials = default_max_trials) {
  HaltingVerdict v;
  v.budget = budget;
  const Trace trace = run(spec, input, budget);
  v.transitions = trace.transitions();
  if (trace.halted) {
    const LabeledCycle cycle = build_alpha_cycle(trace, alpha, spec.name());
    const AmplitudeProfile profile = halfstep_profile_periodic(cycle.period);
    const OutcomeSampler sampler(profile, cycle.window);
    v.period = cycle.period;
    v.validity = validity_level(sampler);
    if (!(v.validity > 0.5))
      throw PreconditionError("halting_demo: validity " + std::to_string(v.validity) + " <= 1/2");
    v.error_bound = binomial_error_bound(m, v.validity);
    v.report = run_error_bounded(sampler, cycle_readout(cycle), m, rng, max_trials, false);
  } else {
    const AmplitudeProfile profile = halfstep_profile_aperiodic(K);
    const OutcomeSampler sampler(profile, profile.range());
    v.validity = 1.0;
    v.error_bound = 0.0;
    v.report = run_error_bounded(sampler, aperiodic_readout(), m, rng, max_trials, false);
  }
  if (v.report.result && v.report.result->halted) {
    v.halts = true;
    v.value = v.report.result->value;
  }
  v.report.valid = v.report.result.has_value() &&
                   (trace.halted ? *v.report.result == *trace.result : !v.report.result->halted);
  return v;
}

/// Profile with p equal amplitudes 1/sqrt(p) (captured = 1); with a window
/// of w indices the per-draw validity is exactly w/p.
inline AmplitudeProfile flat_profile(std::uint64_t p) {
  if (p < 1) throw PreconditionError("flat_profile: p must be >= 1");
  AmplitudeProfile prof;
  prof.period = p;
  prof.amplitudes.assign(p, complex(1.0 / std::sqrt(static_cast<double>(p)), 0.0));
  prof.captured = 1.0;
  return prof;
}

struct BatchSummary {
  std::uint64_t runs = 0;
  std::uint64_t successes = 0;
  std::uint64_t invalid = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t no_majority = 0;
  std::uint64_t total_trials = 0;
  std::vector<std::uint64_t> trial_counts;

  double mean_trials() const {
    return runs ? static_cast<double>(total_trials) / static_cast<double>(runs) : 0.0;
  }
  double error_rate() const {
    return runs ? static_cast<double>(invalid + no_majority + inconclusive) / static_cast<double>(runs) : 0.0;
  }
};

/// `runs` independent error-free runs, run i drawing from stream i.
inline BatchSummary error_free_batch(const OutcomeSampler& sampler, const Readout& readout,
                                     const std::function<bool(const Result&)>& validate,
                                     const Rng& root, std::uint64_t runs,
                                     std::uint64_t max_trials = default_max_trials) {
  BatchSummary s;
  s.runs = runs;
  s.trial_counts.reserve(runs);
  for (std::uint64_t i = 0; i < runs; ++i) {
    Rng rng = root.split(i);
    const RunReport rep = run_error_free(sampler, readout, validate, rng, max_trials, false);
    s.total_trials += rep.trials;
    s.trial_counts.push_back(rep.trials);
    if (rep.inconclusive) ++s.inconclusive;
    else if (rep.result && validate(*rep.result)) ++s.successes;
    else ++s.invalid;
  }
  return s;
}

/// `runs` independent majority votes; a run errs when the majority result is
/// not `truth` or no strict majority exists.
inline BatchSummary error_bounded_batch(const OutcomeSampler& sampler, const Readout& readout,
                                        const Result& truth, std::uint64_t m, const Rng& root,
                                        std::uint64_t runs,
                                        std::uint64_t max_trials = default_max_trials) {
  BatchSummary s;
  s.runs = runs;
  for (std::uint64_t i = 0; i < runs; ++i) {
    Rng rng = root.split(i);
    const RunReport rep = run_error_bounded(sampler, readout, m, rng, max_trials, false);
    s.total_trials += rep.trials;
    if (rep.inconclusive) ++s.inconclusive;
    else if (rep.no_majority) ++s.no_majority;
    else if (*rep.result == truth) ++s.successes;
    else ++s.invalid;
  }
  return s;
}

} // namespace instant
