#pragma once

#include "errors.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace instant {

/// How integer lifts (the interval index I with lambda / 2pi = f + I) are
/// chosen once the fractional parts are fixed.
enum class LiftPolicy : std::uint8_t {
  energy_bounded, ///< parity-first stacking, then descent under the 4pi cap
  parity_strict,  ///< every eigenvalue in an interval of its own parity
};

inline const char* policy_name(LiftPolicy p) {
  return p == LiftPolicy::parity_strict ? "parity-strict" : "energy-bounded";
}

inline LiftPolicy parse_policy(const std::string& name) {
  if (name == "energy-bounded") return LiftPolicy::energy_bounded;
  if (name == "parity-strict") return LiftPolicy::parity_strict;
  throw PreconditionError("unknown lift policy '" + name + "'");
}

/// Eigenvalue k of instance m at size n. Its phase is
/// 2pi (frac / 2^R + interval) with R the packing resolution.
struct PackedEigenvalue {
  int n = 0;
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::uint64_t frac = 0;
  std::uint64_t interval = 0;

  bool parity_ok() const noexcept { return interval % 2 == k % 2; }
};

struct PackedInstance {
  int n = 0;
  std::uint64_t m = 0;
  std::vector<std::size_t> eigenvalues;
  /// sum over eigenvalues of (frac + interval * 2^R); mean phase is
  /// 2pi * energy_units / (2^R * 2^{nu_n}).
  std::uint64_t energy_units = 0;
  double energy = 0.0; // radians
};

struct PackPass {
  int n = 0;
  std::uint64_t added = 0;
  bool disjoint = true;
  bool on_lattice = true;
  bool count_ok = true;
  double max_energy = 0.0;
};

struct PackedSpectrum {
  int n_max = 0;
  std::vector<int> nu;
  int resolution = 0;
  LiftPolicy policy = LiftPolicy::energy_bounded;
  std::vector<PackedEigenvalue> eigenvalues;
  std::vector<PackedInstance> instances;
  std::vector<PackPass> passes;

  double phase(std::size_t i) const {
    const auto& e = eigenvalues[i];
    return two_pi * (std::ldexp(static_cast<double>(e.frac), -resolution) +
                     static_cast<double>(e.interval));
  }

  const PackedInstance& instance(int n, std::uint64_t m) const {
    if (n < 0 || n > n_max || m >= (std::uint64_t{1} << n))
      throw PreconditionError("instance (" + std::to_string(n) + ", " + std::to_string(m) +
                              ") out of range");
    return instances[((std::size_t{1} << n) - 1) + m];
  }

  OrbitSpectrum spectrum(const PackedInstance& inst) const {
    OrbitSpectrum s;
    s.period = std::uint64_t{1} << nu[static_cast<std::size_t>(inst.n)];
    const double w = 1.0 / static_cast<double>(inst.eigenvalues.size());
    for (std::size_t i : inst.eigenvalues) {
      s.phases.push_back(phase(i));
      s.weights.push_back(w);
    }
    return s;
  }

  /// Energy bound 4pi, checked in exact integer arithmetic.
  bool within_energy_bound(const PackedInstance& inst) const {
    const auto width = static_cast<unsigned __int128>(inst.eigenvalues.size());
    return static_cast<unsigned __int128>(inst.energy_units) <=
           2 * (static_cast<unsigned __int128>(1) << resolution) * width;
  }

  double max_energy() const {
    double e = 0.0;
    for (const auto& inst : instances) e = std::max(e, inst.energy);
    return e;
  }

  std::size_t parity_violations() const {
    return static_cast<std::size_t>(std::count_if(
        eigenvalues.begin(), eigenvalues.end(), [](const auto& e) { return !e.parity_ok(); }));
  }

  bool all_disjoint() const {
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (const auto& e : eigenvalues)
      if (!seen.emplace(e.frac, e.interval).second) return false;
    return true;
  }
};

inline constexpr std::uint64_t pack_capacity = std::uint64_t{1} << 22;

namespace detail {

class Packer {
public:
  Packer(PackedSpectrum& out) : s_(out) {}

  void add_size(int n) {
    const int nu = s_.nu[static_cast<std::size_t>(n)];
    const int shift = s_.resolution - (n + nu);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      PackedInstance inst;
      inst.n = n;
      inst.m = m;
      for (std::uint64_t k = 0; k < (std::uint64_t{1} << nu); ++k) {
        const std::uint64_t frac = (m + (k << n)) << shift;
        auto& group = groups_[frac];
        std::uint64_t interval = k % 2;
        while (std::any_of(group.begin(), group.end(),
                           [&](std::size_t i) { return s_.eigenvalues[i].interval == interval; }))
          interval += 2;
        group.push_back(s_.eigenvalues.size());
        inst.eigenvalues.push_back(s_.eigenvalues.size());
        s_.eigenvalues.push_back({n, m, k, frac, interval});
        inst.energy_units += frac + (interval << s_.resolution);
      }
      s_.instances.push_back(std::move(inst));
    }
  }

  // Lower sum of E^8 by moves and swaps inside each fractional group.
  void descend() {
    while (sweep([](const Change& c) {
      double before = 0.0, after = 0.0;
      for (int i = 0; i < c.count; ++i) {
        before += std::pow(c.old_e[i], 8);
        after += std::pow(c.new_e[i], 8);
      }
      return after < before * (1.0 - 1e-12);
    })) {
    }
  }

  // Restore parity where this keeps every touched instance within 4pi.
  void repair() {
    while (sweep([](const Change& c) {
      if (c.parity_delta >= 0) return false;
      for (int i = 0; i < c.count; ++i)
        if (c.new_e[i] > 2.0) return false;
      return true;
    })) {
    }
  }

private:
  struct Change {
    int count = 0;
    double old_e[2]{};
    double new_e[2]{};
    int parity_delta = 0;
  };

  std::size_t owner(const PackedEigenvalue& e) const {
    return ((std::size_t{1} << e.n) - 1) + e.m;
  }

  // mean phase / 2pi
  double mean(std::size_t inst, std::int64_t units_delta = 0) const {
    const auto& i = s_.instances[inst];
    const double units = static_cast<double>(static_cast<std::int64_t>(i.energy_units) + units_delta);
    return std::ldexp(units / static_cast<double>(i.eigenvalues.size()), -s_.resolution);
  }

  static int off(std::uint64_t interval, std::uint64_t k) { return interval % 2 != k % 2 ? 1 : 0; }

  template <class Accept>
  bool sweep(Accept accept) {
    bool changed = false;
    const std::int64_t unit = std::int64_t{1} << s_.resolution;
    for (auto& [frac, group] : groups_) {
      std::map<std::uint64_t, std::size_t> occupied;
      for (std::size_t i : group) occupied[s_.eigenvalues[i].interval] = i;
      const std::uint64_t top = group.size() + 1;
      for (std::size_t a : group) {
        auto& pa = s_.eigenvalues[a];
        const std::size_t ia = owner(pa);
        for (std::uint64_t target = 0; target < top; ++target) {
          const std::uint64_t from = pa.interval;
          if (target == from) continue;
          const std::int64_t step = (static_cast<std::int64_t>(target) - static_cast<std::int64_t>(from)) * unit;
          Change c;
          auto hit = occupied.find(target);
          if (hit == occupied.end()) {
            c.count = 1;
            c.old_e[0] = mean(ia);
            c.new_e[0] = mean(ia, step);
            c.parity_delta = off(target, pa.k) - off(from, pa.k);
            if (!accept(c)) continue;
            pa.interval = target;
            s_.instances[ia].energy_units = static_cast<std::uint64_t>(
                static_cast<std::int64_t>(s_.instances[ia].energy_units) + step);
            occupied.erase(from);
            occupied[target] = a;
          } else {
            const std::size_t b = hit->second;
            auto& pb = s_.eigenvalues[b];
            const std::size_t ib = owner(pb);
            if (ib == ia) continue;
            c.count = 2;
            c.old_e[0] = mean(ia);
            c.new_e[0] = mean(ia, step);
            c.old_e[1] = mean(ib);
            c.new_e[1] = mean(ib, -step);
            c.parity_delta = off(target, pa.k) + off(from, pb.k) - off(from, pa.k) - off(target, pb.k);
            if (!accept(c)) continue;
            pa.interval = target;
            pb.interval = from;
            s_.instances[ia].energy_units = static_cast<std::uint64_t>(
                static_cast<std::int64_t>(s_.instances[ia].energy_units) + step);
            s_.instances[ib].energy_units = static_cast<std::uint64_t>(
                static_cast<std::int64_t>(s_.instances[ib].energy_units) - step);
            occupied[target] = a;
            occupied[from] = b;
          }
          changed = true;
        }
      }
    }
    return changed;
  }

  PackedSpectrum& s_;
  std::map<std::uint64_t, std::vector<std::size_t>> groups_;
};

} // namespace detail

/// Disjoint per-instance spectra for all problem sizes n <= n_max. Instance m
/// of size n gets 2^{nu_n} eigenvalues with fractional parts
/// (m + k 2^n) / 2^{n + nu_n}; the integer lifts follow `policy`.
inline PackedSpectrum pack_spectrum(int n_max, std::vector<int> nu = {},
                                    LiftPolicy policy = LiftPolicy::energy_bounded) {
  if (n_max < 0) throw PreconditionError("pack_spectrum: n_max must be >= 0");
  if (nu.empty())
    for (int n = 0; n <= n_max; ++n) nu.push_back(n);
  if (nu.size() < static_cast<std::size_t>(n_max) + 1)
    throw PreconditionError("pack_spectrum: need nu_n for every n <= n_max");
  nu.resize(static_cast<std::size_t>(n_max) + 1);
  if (nu[0] != 0) throw PreconditionError("pack_spectrum: nu_0 must be 0");
  for (std::size_t n = 1; n < nu.size(); ++n)
    if (nu[n] <= nu[n - 1]) throw PreconditionError("pack_spectrum: nu_n must be strictly increasing");

  const int resolution = n_max + nu.back();
  std::uint64_t total = 0;
  for (int n = 0; n <= n_max; ++n) {
    if (n + nu[static_cast<std::size_t>(n)] > 40) throw CapacityError("pack_spectrum: size overflow");
    total += std::uint64_t{1} << (n + nu[static_cast<std::size_t>(n)]);
  }
  if (total > pack_capacity || resolution > 52)
    throw CapacityError("pack_spectrum: " + std::to_string(total) + " eigenvalues exceed capacity " +
                        std::to_string(pack_capacity));

  PackedSpectrum out;
  out.n_max = n_max;
  out.nu = nu;
  out.resolution = resolution;
  out.policy = policy;
  out.eigenvalues.reserve(total);

  detail::Packer packer(out);
  for (int n = 0; n <= n_max; ++n) {
    const std::size_t before = out.eigenvalues.size();
    packer.add_size(n);
    if (policy == LiftPolicy::energy_bounded) {
      packer.descend();
      packer.repair();
    }

    PackPass pass;
    pass.n = n;
    pass.added = out.eigenvalues.size() - before;
    pass.count_ok = pass.added == (std::uint64_t{1} << (n + nu[static_cast<std::size_t>(n)]));
    pass.disjoint = out.all_disjoint();
    for (std::size_t i = before; i < out.eigenvalues.size(); ++i) {
      const auto& e = out.eigenvalues[i];
      const int lattice = resolution - (n + nu[static_cast<std::size_t>(n)]);
      if (e.frac % (std::uint64_t{1} << lattice) != 0) pass.on_lattice = false;
    }
    for (auto& inst : out.instances) {
      inst.energy = two_pi * std::ldexp(static_cast<double>(inst.energy_units) /
                                            static_cast<double>(inst.eigenvalues.size()),
                                        -resolution);
      pass.max_energy = std::max(pass.max_energy, inst.energy);
    }
    if (!pass.disjoint || !pass.on_lattice || !pass.count_ok)
      throw ConsistencyError("pack_spectrum: pass " + std::to_string(n) + " broke an invariant");
    out.passes.push_back(pass);
  }
  return out;
}

/// Yield of an instance on the centered half of its cycle of 2^{nu_n} states,
/// with the lift parities optionally overridden.
inline double packed_halfwindow_yield(const std::vector<std::uint64_t>& intervals,
                                      std::uint64_t period) {
  if (period == 1) return 1.0;
  const double w = 1.0 / static_cast<double>(intervals.size());
  const auto p = static_cast<std::int64_t>(period);
  const IndexRange window = p >= 4 ? IndexRange{p / 4, 3 * p / 4} : IndexRange{0, p};
  double nu = 0.0;
  for (std::int64_t j = window.begin; j < window.end; ++j) {
    complex a{0.0, 0.0};
    const double u = static_cast<double>(j) - 0.5;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      // the common fractional offset only contributes an overall phase
      const double lambda = two_pi * (static_cast<double>(k) / static_cast<double>(intervals.size()) +
                                      static_cast<double>(intervals[k] % 2));
      a += w * std::polar(1.0, -lambda * u);
    }
    nu += std::norm(a);
  }
  return nu;
}

inline double packed_halfwindow_yield(const PackedSpectrum& s, const PackedInstance& inst) {
  std::vector<std::uint64_t> intervals;
  for (std::size_t i : inst.eigenvalues) intervals.push_back(s.eigenvalues[i].interval);
  return packed_halfwindow_yield(intervals, inst.eigenvalues.size());
}

struct ZetaEstimate {
  int n = 0;
  std::uint64_t draws = 0;
  double mean_yield = 0.0;
  double minimal_yield = 0.0;
  double fraction_above = 0.0; ///< draws with yield >= 3/4 of the minimal yield
  double reference = 3.0 / (pi * pi);
};

/// Monte-Carlo over integer offsets 2 zeta_k on the lifts. Only the parity of
/// each lift enters the half-cycle amplitudes, so a draw flips each parity
/// with probability 1/2.
inline ZetaEstimate estimate_zeta_yield(int n, int nu_n, std::uint64_t draws, Rng rng) {
  if (nu_n < 1 || nu_n > 12) throw PreconditionError("estimate_zeta_yield: nu_n in [1, 12]");
  if (draws < 1) throw PreconditionError("estimate_zeta_yield: draws >= 1");
  const std::uint64_t p = std::uint64_t{1} << nu_n;
  std::vector<std::uint64_t> parity(p);
  for (std::uint64_t k = 0; k < p; ++k) parity[k] = k % 2;

  ZetaEstimate est;
  est.n = n;
  est.draws = draws;
  est.minimal_yield = packed_halfwindow_yield(parity, p);
  std::uint64_t above = 0;
  double sum = 0.0;
  for (std::uint64_t d = 0; d < draws; ++d) {
    std::vector<std::uint64_t> flipped(p);
    for (std::uint64_t k = 0; k < p; ++k) flipped[k] = parity[k] ^ (rng.coin() ? 1u : 0u);
    const double y = packed_halfwindow_yield(flipped, p);
    sum += y;
    if (y >= 0.75 * est.minimal_yield) ++above;
  }
  est.mean_yield = sum / static_cast<double>(draws);
  est.fraction_above = static_cast<double>(above) / static_cast<double>(draws);
  return est;
}

} // namespace instant
