// Command-line front end: every experiment is a subcommand that writes one
// CSV or JSON report. Exit status 0 = ok, 1 = invariant violated, 2 = bad
// usage or input.

#include <instant/instant.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace instant;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_usage = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out;

  std::uint64_t resolve_seed() {
    if (!seed) {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      std::cerr << "seed: " << *seed << "\n";
    }
    return *seed;
  }
};

void add_common(CLI::App* cmd, Common& c, bool seeded) {
  if (seeded) cmd->add_option("--seed", c.seed, "RNG seed (drawn from system entropy if unset)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw PreconditionError("cannot write '" + c.out + "'");
  f << text;
}

std::string dump(const json& doc) {
  std::ostringstream s;
  write_json(s, doc);
  return s.str();
}

std::string dump(const CsvTable& t) {
  std::ostringstream s;
  t.write(s);
  return s.str();
}

json result_json(const std::optional<Result>& r) {
  if (!r) return nullptr;
  return {{"z", r->halted ? 0 : 1}, {"v", r->value}};
}

// ---------------------------------------------------------------- profile

struct ProfileArgs {
  Common c;
  std::optional<std::uint64_t> period;
  bool aperiodic = false;
  std::uint64_t K = 1000;
  bool spectrum = false;
};

int cmd_profile(ProfileArgs& a) {
  if (a.aperiodic == a.period.has_value())
    throw CLI::ValidationError("profile", "give exactly one of --period or --aperiodic");
  if (a.period && *a.period % 2 != 0)
    throw PreconditionError("profile: period " + std::to_string(*a.period) +
                            " is odd; the half-cycle cancellation needs an even period");

  if (a.spectrum) {
    if (!a.period) throw CLI::ValidationError("profile", "--spectrum needs --period");
    const OrbitSpectrum s = minimal_periodic_spectrum(*a.period);
    const ComplexityReading reading = complexity(s, 0.5);
    if (a.c.format == "csv") {
      CsvTable t({"index", "phase", "weight"});
      t.note("period", std::to_string(*a.period));
      t.note("mean_abs_phase", reading.mean_abs_phase);
      t.note("complexity_half_cycle", reading.value);
      for (std::size_t k = 0; k < s.phases.size(); ++k) t.row() << k << s.phases[k] << s.weights[k];
      emit(a.c, dump(t));
    } else {
      json rows = json::array();
      for (std::size_t k = 0; k < s.phases.size(); ++k)
        rows.push_back({{"index", k}, {"phase", s.phases[k]}, {"weight", s.weights[k]}});
      emit(a.c, dump({{"period", *a.period},
                      {"mean_abs_phase", reading.mean_abs_phase},
                      {"complexity_half_cycle", reading.value},
                      {"eigenphases", rows}}));
    }
    return exit_ok;
  }

  const AmplitudeProfile prof = a.period ? halfstep_profile_periodic(*a.period) : halfstep_profile_aperiodic(a.K);
  std::int64_t peak = prof.first_index;
  for (std::int64_t j = prof.first_index; j < prof.last_index(); ++j)
    if (prof.probability(j) > prof.probability(peak) * (1.0 + 1e-12)) peak = j;
  const bool ok = prof.captured <= 1.0 + 1e-12 && (!a.period || std::abs(prof.captured - 1.0) < 1e-10);

  if (a.c.format == "csv") {
    CsvTable t({"index", "amplitude_re", "amplitude_im", "probability"});
    t.note("kind", a.period ? "periodic" : "aperiodic");
    if (a.period) t.note("period", std::to_string(*a.period));
    else t.note("K", std::to_string(a.K));
    t.note("captured", prof.captured);
    t.note("peak_index", std::to_string(peak));
    t.note("peak_abs", std::abs(prof.at(peak)));
    for (std::int64_t j = prof.first_index; j < prof.last_index(); ++j)
      t.row() << j << prof.at(j).real() << prof.at(j).imag() << prof.probability(j);
    emit(a.c, dump(t));
  } else {
    json rows = json::array();
    for (std::int64_t j = prof.first_index; j < prof.last_index(); ++j)
      rows.push_back({{"index", j},
                      {"amplitude_re", prof.at(j).real()},
                      {"amplitude_im", prof.at(j).imag()},
                      {"probability", prof.probability(j)}});
    json doc{{"kind", a.period ? "periodic" : "aperiodic"},
             {"captured", prof.captured},
             {"peak_index", peak},
             {"peak_abs", std::abs(prof.at(peak))},
             {"rows", rows}};
    if (a.period) doc["period"] = *a.period;
    else doc["K"] = a.K;
    emit(a.c, dump(doc));
  }
  return ok ? exit_ok : exit_violation;
}

// ---------------------------------------------------------------- cycle

struct CycleArgs {
  Common c;
  std::string machine;
  std::string input;
  std::string alpha = "3/4";
  std::size_t budget = 10000;
};

int cmd_cycle(CycleArgs& a) {
  const TMSpec spec = load_machine(a.machine);
  const Trace trace = run(spec, spec.start(a.input), a.budget);
  if (!trace.halted)
    throw PreconditionError("cycle: machine did not halt within " + std::to_string(a.budget) +
                            " transitions");
  const LabeledCycle cycle = build_alpha_cycle(trace, Fraction::parse(a.alpha), spec.name());
  const CycleReport check = verify_cycle(cycle, &spec);

  if (a.c.format == "csv") {
    CsvTable t({"index", "phase", "counter", "head", "state", "tape", "label"});
    t.note("machine", spec.name());
    t.note("input", a.input);
    t.note("period", std::to_string(cycle.period));
    t.note("forward_steps", std::to_string(cycle.forward_steps));
    t.note("waiting_steps", std::to_string(cycle.waiting_steps));
    t.note("window", std::to_string(cycle.window.begin) + ":" + std::to_string(cycle.window.end));
    t.note("alpha_requested", cycle.alpha_requested.str());
    t.note("alpha_actual", cycle.alpha_actual);
    t.note("violations", std::to_string(check.violations.size()));
    for (std::size_t j = 0; j < cycle.states.size(); ++j) {
      const auto& s = cycle.states[j];
      t.row() << j << phase_name(s.phase) << s.counter << s.config.head << spec.states()[s.config.state]
              << s.config.content() << (cycle.labels[j] ? 1 : 0);
    }
    emit(a.c, dump(t));
  } else {
    json states = json::array();
    for (std::size_t j = 0; j < cycle.states.size(); ++j) {
      const auto& s = cycle.states[j];
      states.push_back({{"index", j},
                        {"phase", phase_name(s.phase)},
                        {"counter", s.counter},
                        {"head", s.config.head},
                        {"state", spec.states()[s.config.state]},
                        {"tape", s.config.content()},
                        {"label", static_cast<bool>(cycle.labels[j])}});
    }
    emit(a.c, dump({{"machine", spec.name()},
                    {"input", a.input},
                    {"result", result_json(trace.result)},
                    {"period", cycle.period},
                    {"forward_steps", cycle.forward_steps},
                    {"waiting_steps", cycle.waiting_steps},
                    {"window", {cycle.window.begin, cycle.window.end}},
                    {"alpha_requested", cycle.alpha_requested.str()},
                    {"alpha_actual", cycle.alpha_actual},
                    {"violations", check.violations},
                    {"states", states}}));
  }
  return check.ok() ? exit_ok : exit_violation;
}

// ---------------------------------------------------------------- instant

struct InstantArgs {
  Common c;
  std::string machine;
  std::string input;
  std::string alpha = "3/4";
  std::size_t budget = 10000;
  std::uint64_t K = 1000;
  std::uint64_t majority = 15;
  std::uint64_t trials = 1;
  std::uint64_t max_trials = default_max_trials;
  std::string mode = "demo";
};

int cmd_instant(InstantArgs& a) {
  const TMSpec spec = load_machine(a.machine);
  const Rng root = Rng(a.c.resolve_seed()).split("instant");
  const Fraction alpha = Fraction::parse(a.alpha);
  const Trace trace = run(spec, spec.start(a.input), a.budget);

  json doc{{"seed", root.seed()},
           {"machine", spec.name()},
           {"input", a.input},
           {"mode", a.mode},
           {"budget", a.budget},
           {"runs", a.trials},
           {"classical_transitions", trace.transitions()},
           {"classical_halted", trace.halted},
           {"observable", "projector onto the computational span"}};
  int status = exit_ok;

  if (a.mode == "demo") {
    std::uint64_t halts = 0, valid = 0, total_trials = 0;
    HaltingVerdict first;
    for (std::uint64_t i = 0; i < a.trials; ++i) {
      Rng rng = root.split(i);
      HaltingVerdict v = halting_demo(spec, spec.start(a.input), a.budget, a.K, alpha, a.majority, rng,
                                      a.max_trials);
      halts += v.halts;
      valid += v.report.valid;
      total_trials += v.report.trials;
      if (i == 0) first = std::move(v);
    }
    doc["verdict"] = first.halts ? "halts" : "does not halt";
    doc["value"] = first.halts ? json(first.value) : json(nullptr);
    doc["period"] = first.period;
    doc["majority"] = a.majority;
    doc["validity"] = first.validity;
    doc["error_bound"] = first.error_bound;
    doc["runs_halting"] = halts;
    doc["runs_valid"] = valid;
    doc["mean_trials"] = static_cast<double>(total_trials) / static_cast<double>(a.trials);
    if (!trace.halted) doc["K"] = a.K;
  } else {
    if (!trace.halted)
      throw PreconditionError("instant: --mode " + a.mode + " needs an input that halts within the budget");
    const LabeledCycle cycle = build_alpha_cycle(trace, alpha, spec.name());
    const AmplitudeProfile profile = halfstep_profile_periodic(cycle.period);
    const OutcomeSampler sampler(profile, cycle.window);
    const Result truth = *trace.result;
    const double nu = nu_of(profile, cycle.window);
    doc["period"] = cycle.period;
    doc["window"] = {cycle.window.begin, cycle.window.end};
    doc["nu"] = nu;
    doc["result"] = result_json(truth);
    if (a.mode == "error-free") {
      const auto validate = [&truth](const Result& r) { return r == truth; };
      const BatchSummary s = error_free_batch(sampler, cycle_readout(cycle), validate, root, a.trials, a.max_trials);
      doc["successes"] = s.successes;
      doc["invalid"] = s.invalid;
      doc["inconclusive"] = s.inconclusive;
      doc["mean_trials"] = s.mean_trials();
      doc["expected_trials"] = 1.0 / nu;
      if (s.invalid) status = exit_violation;
    } else if (a.mode == "error-bounded") {
      const double eps = validity_level(sampler);
      if (!(eps > 0.5)) throw PreconditionError("instant: validity " + std::to_string(eps) + " <= 1/2");
      const BatchSummary s = error_bounded_batch(sampler, cycle_readout(cycle), truth, a.majority, root,
                                                 a.trials, a.max_trials);
      doc["majority"] = a.majority;
      doc["validity"] = eps;
      doc["error_bound"] = binomial_error_bound(a.majority, eps);
      doc["successes"] = s.successes;
      doc["errors"] = s.invalid + s.no_majority + s.inconclusive;
      doc["error_rate"] = s.error_rate();
      doc["mean_trials"] = s.mean_trials();
    } else {
      throw CLI::ValidationError("--mode", "expected demo, error-free or error-bounded");
    }
  }

  if (a.c.format == "csv") {
    CsvTable t({"key", "value"});
    for (const auto& [k, v] : doc.items()) t.row() << k << (v.is_string() ? v.get<std::string>() : v.dump());
    emit(a.c, dump(t));
  } else {
    emit(a.c, dump(doc));
  }
  return status;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  Common c;
  std::vector<std::uint64_t> periods{64, 256, 1024};
  std::string density = "uniform";
  std::uint64_t trials = 10000;
  std::optional<std::uint64_t> continuous;
};

int cmd_stats(StatsArgs& a) {
  const DensitySpec density = DensitySpec::by_name(a.density);
  const Rng root = Rng(a.c.resolve_seed()).split("stats").split(a.density);

  if (a.continuous) {
    const ContinuousStats st = continuous_experiment(*a.continuous, density, a.trials, root);
    if (a.c.format == "csv") {
      CsvTable t({"cells", "density", "samples", "mean_direct", "stderr_direct", "mean_closed_form", "m2"});
      t.note("seed", std::to_string(root.seed()));
      t.row() << st.cells << st.density << st.samples << st.mean_direct << st.stderr_direct
              << st.mean_closed_form << st.m2;
      emit(a.c, dump(t));
    } else {
      emit(a.c, dump({{"seed", root.seed()},
                      {"cells", st.cells},
                      {"density", st.density},
                      {"samples", st.samples},
                      {"mean_direct", st.mean_direct},
                      {"stderr_direct", num(st.samples >= 2 ? st.stderr_direct : NAN)},
                      {"mean_closed_form", st.mean_closed_form},
                      {"m2", st.m2}}));
    }
    return exit_ok;
  }

  const StatsReport rep = yield_experiment(a.periods, density, a.trials, root);
  if (a.c.format == "csv") {
    CsvTable t({"p", "density", "trials", "mean", "stderr", "var", "var_p", "chebyshev_fraction", "expected",
                "window", "mean_within_3se"});
    t.note("seed", std::to_string(rep.seed));
    t.note("m2", rep.m2);
    t.note("m4", rep.m4);
    t.note("delta", rep.delta);
    t.note("c", rep.c);
    t.note("var_p_ratio", rep.var_p_ratio);
    t.note("variance", rep.variance_defined ? "defined" : "undefined (trials < 2)");
    for (const auto& r : rep.rows)
      t.row() << r.p << r.density << r.trials << r.mean << (rep.variance_defined ? r.stderr_ : NAN) << r.var
              << r.var_p << r.chebyshev_fraction << r.expected << r.window_length << (r.mean_ok ? 1 : 0);
    emit(a.c, dump(t));
  } else {
    json rows = json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"p", r.p},
                      {"density", r.density},
                      {"trials", r.trials},
                      {"alpha", r.alpha},
                      {"window", r.window_length},
                      {"expected", r.expected},
                      {"mean", r.mean},
                      {"stderr", num(rep.variance_defined ? r.stderr_ : NAN)},
                      {"var", num(r.var)},
                      {"var_p", num(r.var_p)},
                      {"chebyshev_fraction", num(r.chebyshev_fraction)},
                      {"mean_within_3se", r.mean_ok}});
    emit(a.c, dump({{"seed", rep.seed},
                    {"density", rep.density},
                    {"m2", rep.m2},
                    {"m4", rep.m4},
                    {"delta", rep.delta},
                    {"c", num(rep.c)},
                    {"var_p_ratio", num(rep.var_p_ratio)},
                    {"variance_defined", rep.variance_defined},
                    {"chebyshev_ok", rep.chebyshev_ok},
                    {"rows", rows}}));
  }
  return exit_ok;
}

// ---------------------------------------------------------------- pack

struct PackArgs {
  Common c;
  int n = 4;
  std::string policy = "energy-bounded";
  std::uint64_t zeta_draws = 0;
};

int cmd_pack(PackArgs& a) {
  const PackedSpectrum s = pack_spectrum(a.n, {}, parse_policy(a.policy));
  bool energy_ok = true;
  for (const auto& inst : s.instances) energy_ok = energy_ok && s.within_energy_bound(inst);
  const bool disjoint = s.all_disjoint();

  std::vector<ZetaEstimate> zeta;
  if (a.zeta_draws > 0) {
    const Rng root = Rng(a.c.resolve_seed()).split("pack");
    for (int n = 1; n <= a.n; ++n)
      zeta.push_back(estimate_zeta_yield(n, s.nu[static_cast<std::size_t>(n)], a.zeta_draws, root.split(n)));
  }

  if (a.c.format == "csv") {
    CsvTable t({"n", "m", "eigenvalues", "energy_over_pi", "within_4pi", "halfwindow_yield"});
    t.note("policy", policy_name(s.policy));
    t.note("n_max", std::to_string(s.n_max));
    t.note("disjoint", disjoint ? "true" : "false");
    t.note("max_energy_over_pi", s.max_energy() / pi);
    t.note("energy_bound_ok", energy_ok ? "true" : "false");
    t.note("parity_violations", std::to_string(s.parity_violations()));
    for (const auto& z : zeta)
      t.note("zeta_n" + std::to_string(z.n), fmt(z.mean_yield) + " (minimal " + fmt(z.minimal_yield) +
                                                ", fraction >= 3/4 minimal " + fmt(z.fraction_above) + ")");
    for (const auto& inst : s.instances)
      t.row() << inst.n << inst.m << inst.eigenvalues.size() << inst.energy / pi
              << (s.within_energy_bound(inst) ? 1 : 0) << packed_halfwindow_yield(s, inst);
    emit(a.c, dump(t));
  } else {
    json instances = json::array();
    for (const auto& inst : s.instances)
      instances.push_back({{"n", inst.n},
                           {"m", inst.m},
                           {"eigenvalues", inst.eigenvalues.size()},
                           {"energy_over_pi", inst.energy / pi},
                           {"within_4pi", s.within_energy_bound(inst)},
                           {"halfwindow_yield", packed_halfwindow_yield(s, inst)}});
    json passes = json::array();
    for (const auto& p : s.passes)
      passes.push_back({{"n", p.n},
                        {"added", p.added},
                        {"disjoint", p.disjoint},
                        {"on_lattice", p.on_lattice},
                        {"count_ok", p.count_ok},
                        {"max_energy_over_pi", p.max_energy / pi}});
    json doc{{"policy", policy_name(s.policy)},
             {"n_max", s.n_max},
             {"nu", s.nu},
             {"eigenvalue_count", s.eigenvalues.size()},
             {"disjoint", disjoint},
             {"max_energy_over_pi", s.max_energy() / pi},
             {"energy_bound_ok", energy_ok},
             {"parity_violations", s.parity_violations()},
             {"passes", passes},
             {"instances", instances}};
    if (!zeta.empty()) {
      json z = json::array();
      for (const auto& e : zeta)
        z.push_back({{"n", e.n},
                     {"draws", e.draws},
                     {"mean_yield", e.mean_yield},
                     {"minimal_yield", e.minimal_yield},
                     {"fraction_above_three_quarters", e.fraction_above},
                     {"reference", e.reference}});
      doc["zeta"] = z;
      doc["seed"] = *a.c.seed;
    }
    emit(a.c, dump(doc));
  }
  return disjoint && energy_ok ? exit_ok : exit_violation;
}

// ---------------------------------------------------------------- schrodinger

struct SchrodingerArgs {
  Common c;
  std::string input;
  std::string pair = "chirped";
  std::size_t cells = 1024;
  double L = 8.0;
  double sigma = 1.0;
  double tolerance = -1.0;
  std::string emit_path;
};

GridFunctionSet make_pair(const std::string& kind, const Grid& g, double sigma) {
  if (kind == "chirped") return chirped_pair(g, sigma);
  if (kind == "identical") return identical_pair(g, sigma);
  if (kind == "widths") return width_pair(g, sigma, 2.0 * sigma);
  throw CLI::ValidationError("--pair", "expected chirped, identical or widths");
}

int cmd_schrodinger(SchrodingerArgs& a) {
  const bool generated = a.input.empty();
  const GridFunctionSet set = generated ? make_pair(a.pair, Grid(a.cells, a.L), a.sigma) : load_grid_csv(a.input);
  if (!a.emit_path.empty()) {
    std::ofstream f(a.emit_path, std::ios::binary);
    if (!f) throw PreconditionError("cannot write '" + a.emit_path + "'");
    write_grid_csv(f, set);
  }
  const ObstructionResult r = obstruction_certificate(set, a.tolerance);
  std::optional<double> refined;
  if (generated && r.certificate)
    refined = obstruction_certificate(make_pair(a.pair, set.grid.refined(), a.sigma), a.tolerance).K;

  std::vector<double> coeffs(r.coefficients.data(), r.coefficients.data() + r.coefficients.size());
  std::vector<double> kin(r.kinetic.data(), r.kinetic.data() + r.kinetic.size());
  const char* verdict = r.certificate ? "certificate" : "absence";
  if (a.c.format == "csv") {
    CsvTable t({"k", "coefficient", "kinetic"});
    t.note("verdict", verdict);
    t.note("K", r.K);
    t.note("tolerance", r.tolerance);
    t.note("nullity", std::to_string(r.nullity));
    t.note("cells", std::to_string(set.grid.cells));
    t.note("half_width", set.grid.half_width);
    if (refined) t.note("K_refined", *refined);
    for (std::size_t k = 0; k < kin.size(); ++k) t.row() << k << coeffs[k] << kin[k];
    emit(a.c, dump(t));
  } else {
    json doc{{"verdict", verdict},
             {"K", r.K},
             {"tolerance", r.tolerance},
             {"nullity", r.nullity},
             {"coefficients", coeffs},
             {"kinetic", kin},
             {"constraint_residual", r.constraint_residual},
             {"reason", r.reason},
             {"cells", set.grid.cells},
             {"half_width", set.grid.half_width}};
    if (refined) doc["K_refined"] = *refined;
    emit(a.c, dump(doc));
  }
  return exit_ok;
}

// ---------------------------------------------------------------- complexity

struct ComplexityArgs {
  Common c;
  std::optional<std::uint64_t> period;
  std::optional<int> packed;
  double t = 0.5;
  std::size_t points = 10000;
  std::size_t resolution = 4096;
};

int cmd_complexity(ComplexityArgs& a) {
  if (a.period.has_value() == a.packed.has_value())
    throw CLI::ValidationError("complexity", "give exactly one of --period or --packed");
  std::vector<std::pair<std::string, OrbitSpectrum>> spectra;
  if (a.period) {
    spectra.emplace_back("minimal p=" + std::to_string(*a.period), minimal_periodic_spectrum(*a.period));
  } else {
    const PackedSpectrum s = pack_spectrum(*a.packed);
    for (const auto& inst : s.instances)
      spectra.emplace_back("packed n=" + std::to_string(inst.n) + " m=" + std::to_string(inst.m), s.spectrum(inst));
  }
  const auto grid = linear_grid(0.0, 1.0, a.points - 1);

  bool ok = true;
  CsvTable t({"spectrum", "t", "mean_abs_phase", "complexity", "grid_points", "violations", "worst_margin",
              "zeros", "re_sign_changes", "im_sign_changes"});
  json rows = json::array();
  for (const auto& [name, spec] : spectra) {
    const ComplexityReading c = complexity(spec, a.t);
    const LowerBoundReport lb = check_lower_bound(spec, grid);
    const ZeroCount zc = zero_count(spec, a.resolution);
    ok = ok && lb.ok();
    t.row() << name << c.t << c.mean_abs_phase << c.value << lb.points << lb.violations << lb.worst_margin
            << zc.zeros << zc.re_sign_changes << zc.im_sign_changes;
    rows.push_back({{"spectrum", name},
                    {"t", c.t},
                    {"mean_abs_phase", c.mean_abs_phase},
                    {"complexity", c.value},
                    {"grid_points", lb.points},
                    {"violations", lb.violations},
                    {"worst_margin", lb.worst_margin},
                    {"zeros", zc.zeros},
                    {"re_sign_changes", zc.re_sign_changes},
                    {"im_sign_changes", zc.im_sign_changes}});
  }
  if (a.c.format == "csv") {
    t.note("resolution", std::to_string(a.resolution));
    emit(a.c, dump(t));
  } else {
    emit(a.c, dump({{"resolution", a.resolution}, {"lower_bound_ok", ok}, {"readings", rows}}));
  }
  return ok ? exit_ok : exit_violation;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"instant: half-cycle measurement experiments on periodic machine orbits"};
  app.require_subcommand(1);

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "half-cycle amplitude table");
  add_common(profile, pa.c, false);
  profile->add_option("--period", pa.period, "even cycle period p");
  profile->add_flag("--aperiodic", pa.aperiodic, "aperiodic orbit, truncated at --K");
  profile->add_option("--K", pa.K, "truncation for the aperiodic profile")->check(CLI::PositiveNumber);
  profile->add_flag("--spectrum", pa.spectrum, "emit the eigenphases instead of amplitudes");

  CycleArgs ca;
  auto* cycle = app.add_subcommand("cycle", "build and verify an alpha-waiting cycle");
  add_common(cycle, ca.c, false);
  cycle->add_option("--machine", ca.machine, "machine JSON file")->required();
  cycle->add_option("--input", ca.input, "input word");
  cycle->add_option("--alpha", ca.alpha, "waiting fraction, e.g. 3/4");
  cycle->add_option("--budget", ca.budget, "maximum transitions")->check(CLI::PositiveNumber);

  InstantArgs ia;
  auto* instant = app.add_subcommand("instant", "run the instant-computation procedures");
  add_common(instant, ia.c, true);
  instant->add_option("--machine", ia.machine, "machine JSON file")->required();
  instant->add_option("--input", ia.input, "input word");
  instant->add_option("--alpha", ia.alpha, "waiting fraction");
  instant->add_option("--budget", ia.budget, "classical step budget")->check(CLI::PositiveNumber);
  instant->add_option("--K", ia.K, "aperiodic truncation")->check(CLI::PositiveNumber);
  instant->add_option("--majority", ia.majority, "odd number of votes");
  instant->add_option("--trials", ia.trials, "independent runs")->check(CLI::PositiveNumber);
  instant->add_option("--max-trials", ia.max_trials, "preparation cap per run")->check(CLI::PositiveNumber);
  instant->add_option("--mode", ia.mode, "demo, error-free or error-bounded");

  StatsArgs sa;
  auto* stats = app.add_subcommand("stats", "random implementation yield statistics");
  add_common(stats, sa.c, true);
  stats->add_option("--p", sa.periods, "even periods")->delimiter(',');
  stats->add_option("--density", sa.density, "uniform, two-point or raised-cosine");
  stats->add_option("--trials", sa.trials, "samples per period")->check(CLI::PositiveNumber);
  stats->add_option("--continuous", sa.continuous, "cell count for the aperiodic variant");

  PackArgs ka;
  auto* pack = app.add_subcommand("pack", "disjoint bounded-energy instance spectra");
  add_common(pack, ka.c, true);
  pack->add_option("--n", ka.n, "largest problem size")->check(CLI::Range(0, 10));
  pack->add_option("--policy", ka.policy, "energy-bounded or parity-strict");
  pack->add_option("--zeta-draws", ka.zeta_draws, "Monte-Carlo draws of the lift offsets");

  SchrodingerArgs ra;
  auto* schr = app.add_subcommand("schrodinger", "orbit obstruction certificate");
  add_common(schr, ra.c, false);
  schr->add_option("--input", ra.input, "CSV with columns x, re0, im0, re1, im1, ...");
  schr->add_option("--pair", ra.pair, "generated pair: chirped, identical or widths");
  schr->add_option("--cells", ra.cells, "grid cells for generated pairs");
  schr->add_option("--L", ra.L, "half-width of the domain");
  schr->add_option("--sigma", ra.sigma, "Gaussian width");
  schr->add_option("--tolerance", ra.tolerance, "absolute tolerance on K (default scales with eps)");
  schr->add_option("--emit", ra.emit_path, "also write the grid functions as CSV");

  ComplexityArgs xa;
  auto* cx = app.add_subcommand("complexity", "physical complexity and its lower bound");
  add_common(cx, xa.c, false);
  cx->add_option("--period", xa.period, "minimal spectrum of this even period");
  cx->add_option("--packed", xa.packed, "all instance spectra of the packing up to size n");
  cx->add_option("--t", xa.t, "time in machine cycles");
  cx->add_option("--points", xa.points, "lower-bound grid points on [0, 1]")->check(CLI::Range(2, 10000000));
  cx->add_option("--resolution", xa.resolution, "zero-count samples per cycle")->check(CLI::Range(256, 10000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*profile) return cmd_profile(pa);
    if (*cycle) return cmd_cycle(ca);
    if (*instant) return cmd_instant(ia);
    if (*stats) return cmd_stats(sa);
    if (*pack) return cmd_pack(ka);
    if (*schr) return cmd_schrodinger(ra);
    if (*cx) return cmd_complexity(xa);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ConsistencyError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return exit_violation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
