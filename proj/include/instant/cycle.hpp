#pragma once

#include "errors.hpp"
#include "machine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace instant {

/// Positive rational num/den in lowest terms.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw PreconditionError("fraction with zero denominator");
    if (d < 0) n = -n, d = -d;
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    return {n / (g ? g : 1), d / (g ? g : 1)};
  }

  /// Accepts "3/4", "0.75" or "1".
  static Fraction parse(const std::string& text) {
    try {
      if (auto slash = text.find('/'); slash != std::string::npos)
        return make(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
      auto dot = text.find('.');
      if (dot == std::string::npos) return make(std::stoll(text), 1);
      const std::string frac = text.substr(dot + 1);
      if (frac.size() > 17 || frac.find_first_not_of("0123456789") != std::string::npos)
        throw PreconditionError("bad decimal");
      std::int64_t den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const std::string whole = text.substr(0, dot);
      const std::int64_t w = whole.empty() ? 0 : std::stoll(whole);
      const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
      return make(w * den + (text[0] == '-' ? -f : f), den);
    } catch (const std::logic_error&) {
      throw PreconditionError("cannot parse '" + text + "' as a rational number");
    }
  }

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Half-open index interval [begin, end).
struct IndexRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t size() const noexcept { return end > begin ? end - begin : 0; }
  bool contains(std::int64_t i) const noexcept { return i >= begin && i < end; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

enum class CyclePhase : std::uint8_t { forward, waiting, unwinding, reverse };

inline const char* phase_name(CyclePhase p) {
  switch (p) {
  case CyclePhase::forward: return "forward";
  case CyclePhase::waiting: return "waiting";
  case CyclePhase::unwinding: return "unwinding";
  default: return "reverse";
  }
}

/// One computational state of the periodic machine: the original machine's
/// configuration plus the control registers (phase marker and step counter)
/// that keep the p states of a period pairwise distinct.
struct CycleState {
  Configuration config;
  CyclePhase phase = CyclePhase::forward;
  std::uint64_t counter = 0;
  Result result;

  friend bool operator==(const CycleState& a, const CycleState& b) {
    return a.config == b.config && a.phase == b.phase && a.counter == b.counter;
  }
};

/// A period-p cycle of mutually orthogonal computational states with the
/// result-valid labels. `states` is empty for synthetic cycles.
struct LabeledCycle {
  std::uint64_t period = 0;
  std::vector<bool> labels;
  IndexRange window;
  double alpha_actual = 0.0;
  Fraction alpha_requested;
  std::uint64_t forward_steps = 0;
  std::uint64_t waiting_steps = 0;
  std::string source;
  std::vector<CycleState> states;
};

inline constexpr std::uint64_t default_period_cap = std::uint64_t{1} << 26;

/// Makes a halted trace periodic: run forward (s steps), wait w steps holding
/// the result, unwind the w waiting steps, then retrace the s steps back to
/// the input. Returns p = 2s + 2w with the 2w waiting/unwinding positions
/// labeled valid, where w = max(1, ceil(alpha / (1 - alpha) * s)).
inline LabeledCycle build_alpha_cycle(const Trace& trace, Fraction alpha,
                                      const std::string& source = "trace",
                                      std::uint64_t period_cap = default_period_cap) {
  if (!trace.halted || trace.steps.empty())
    throw PreconditionError("build_alpha_cycle: trace did not halt");
  if (alpha.num <= 0 || alpha.num >= alpha.den)
    throw PreconditionError("build_alpha_cycle: alpha must lie in (0, 1), got " + alpha.str());

  const auto s = static_cast<std::uint64_t>(trace.transitions());
  // w = ceil(num * s / (den - num)) in exact integer arithmetic
  const auto a = static_cast<unsigned __int128>(alpha.num) * s;
  const auto b = static_cast<unsigned __int128>(alpha.den - alpha.num);
  unsigned __int128 w128 = (a + b - 1) / b;
  if (w128 < 1) w128 = 1;
  if (w128 > period_cap || 2 * (w128 + s) > period_cap)
    throw CapacityError("build_alpha_cycle: period exceeds cap of " + std::to_string(period_cap));
  const auto w = static_cast<std::uint64_t>(w128);
  const std::uint64_t p = 2 * s + 2 * w;

  LabeledCycle cycle;
  cycle.period = p;
  cycle.forward_steps = s;
  cycle.waiting_steps = w;
  cycle.window = {static_cast<std::int64_t>(s), static_cast<std::int64_t>(s + 2 * w)};
  cycle.labels.assign(p, false);
  for (std::uint64_t j = s; j < s + 2 * w; ++j) cycle.labels[j] = true;
  cycle.alpha_actual = static_cast<double>(2 * w) / static_cast<double>(p);
  cycle.alpha_requested = alpha;
  cycle.source = source;

  const Result& halted = *trace.result;
  auto idle = [](const Configuration& c) { return Result{false, c.content()}; };
  cycle.states.reserve(p);
  for (std::uint64_t i = 0; i < s; ++i)
    cycle.states.push_back({trace.steps[i], CyclePhase::forward, i, idle(trace.steps[i])});
  for (std::uint64_t k = 0; k < w; ++k)
    cycle.states.push_back({trace.steps[s], CyclePhase::waiting, k, halted});
  for (std::uint64_t k = 0; k < w; ++k)
    cycle.states.push_back({trace.steps[s], CyclePhase::unwinding, w - k, halted});
  for (std::uint64_t i = 0; i < s; ++i) {
    const auto& c = trace.steps[s - 1 - i];
    cycle.states.push_back({c, CyclePhase::reverse, s - 1 - i, idle(c)});
  }
  return cycle;
}

/// Target waiting fraction 1 - p^{-1/2} for period p.
inline double alpha_for_period(std::uint64_t p) {
  if (p < 4) throw PreconditionError("alpha_for_period: p must be >= 4");
  return 1.0 - 1.0 / std::sqrt(static_cast<double>(p));
}

/// Label pattern of an alpha-waiting cycle of the given even period without an
/// underlying machine: a centered window of even length >= alpha * p.
inline LabeledCycle centered_cycle(std::uint64_t p, double alpha) {
  if (p < 2 || p % 2 != 0) throw PreconditionError("centered_cycle: p must be even and >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("centered_cycle: alpha in (0, 1]");
  const double target = alpha * static_cast<double>(p);
  auto half = static_cast<std::uint64_t>(std::ceil(target / 2.0 - 1e-9));
  half = std::clamp<std::uint64_t>(half, 1, p / 2);
  const std::uint64_t s = p / 2 - half;

  LabeledCycle cycle;
  cycle.period = p;
  cycle.forward_steps = s;
  cycle.waiting_steps = half;
  cycle.window = {static_cast<std::int64_t>(s), static_cast<std::int64_t>(s + 2 * half)};
  cycle.labels.assign(p, false);
  for (std::uint64_t j = s; j < s + 2 * half; ++j) cycle.labels[j] = true;
  cycle.alpha_actual = static_cast<double>(2 * half) / static_cast<double>(p);
  cycle.alpha_requested = Fraction::make(static_cast<std::int64_t>(std::floor(alpha * 1e9)), 1000000000);
  cycle.source = "synthetic";
  return cycle;
}

struct CycleReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Structural checks on a cycle. When states are retained, also checks that
/// they are pairwise distinct, that the configuration walk is a palindrome
/// returning to the input, and (given the machine) that the forward segment
/// follows the transition map.
inline CycleReport verify_cycle(const LabeledCycle& cycle, const TMSpec* spec = nullptr) {
  CycleReport report;
  auto flag = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  const std::uint64_t p = cycle.period;

  if (p == 0 || p % 2 != 0) flag("evenness: period " + std::to_string(p) + " is not even");
  if (cycle.labels.size() != p) {
    flag("labels: " + std::to_string(cycle.labels.size()) + " labels for period " +
         std::to_string(p));
    return report;
  }

  std::int64_t first = -1, last = -1, count = 0;
  for (std::uint64_t j = 0; j < p; ++j)
    if (cycle.labels[j]) {
      if (first < 0) first = static_cast<std::int64_t>(j);
      last = static_cast<std::int64_t>(j);
      ++count;
    }
  if (count == 0) {
    flag("coverage: no result-valid index");
  } else {
    if (last - first + 1 != count) flag("contiguity: result window is not a single block");
    if (cycle.window != IndexRange{first, last + 1}) flag("window: recorded window disagrees with labels");
  }

  // |window| >= alpha * p, exactly
  const auto lhs = static_cast<__int128>(count) * cycle.alpha_requested.den;
  const auto rhs = static_cast<__int128>(cycle.alpha_requested.num) * static_cast<__int128>(p);
  if (lhs < rhs)
    flag("coverage: window length " + std::to_string(count) + " < alpha * p with alpha = " +
         cycle.alpha_requested.str());

  if (count > 0 && 2 * count >= static_cast<std::int64_t>(p) &&
      !cycle.window.contains(static_cast<std::int64_t>(p / 2)))
    flag("centering: index p/2 lies outside the result window");

  if (cycle.states.empty()) return report;
  if (cycle.states.size() != p) {
    flag("states: " + std::to_string(cycle.states.size()) + " states for period " + std::to_string(p));
    return report;
  }
  for (std::uint64_t i = 0; i < p; ++i)
    for (std::uint64_t j = i + 1; j < p; ++j)
      if (cycle.states[i] == cycle.states[j])
        flag("orthogonality: states " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  for (std::uint64_t i = 0; i < p; ++i)
    if (!(cycle.states[i].config == cycle.states[p - 1 - i].config)) {
      flag("reversibility: configuration walk is not a palindrome at " + std::to_string(i));
      break;
    }
  if (!(cycle.states.front().config == cycle.states.back().config))
    flag("closure: cycle does not return to the initial configuration");
  for (std::uint64_t j = 0; j < p; ++j)
    if (cycle.labels[j] != cycle.states[j].result.halted) {
      flag("labels: label at " + std::to_string(j) + " disagrees with the result register");
      break;
    }
  if (spec) {
    for (std::uint64_t i = 0; i < cycle.forward_steps; ++i)
      if (!(step(*spec, cycle.states[i].config) == cycle.states[i + 1].config)) {
        flag("forward: step " + std::to_string(i) + " does not follow the transition map");
        break;
      }
  }
  return report;
}

} // namespace instant
