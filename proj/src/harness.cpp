#include "diracsea/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>

#include <fftw3.h>

#include "diracsea/kernel3p1.hpp"
#include "diracsea/lattice.hpp"
#include "diracsea/observables.hpp"
#include "diracsea/polarization.hpp"
#include "diracsea/wedge.hpp"
#include "json.hpp"

namespace diracsea::harness {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// JSON has no NaN; those values become null.
ordered_json jnum(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json jvec(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

struct ScalarRow {
  std::vector<std::pair<std::string, double>> values;
  void add(std::string name, double v) { values.emplace_back(std::move(name), v); }
};

Table table_from(const ScalarRow& row, const std::vector<std::string>& integer_columns = {}) {
  Table t;
  std::vector<std::string> cells;
  for (const auto& [name, v] : row.values) {
    t.columns.push_back(name);
    bool is_int = false;
    for (const auto& c : integer_columns) is_int = is_int || c == name;
    cells.push_back(is_int ? format_integer(std::llround(v)) : format_number(v));
  }
  t.rows.push_back(std::move(cells));
  return t;
}

ordered_json json_from(const ScalarRow& row, const std::vector<std::string>& integer_columns = {}) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, v] : row.values) {
    bool is_int = false;
    for (const auto& c : integer_columns) is_int = is_int || c == name;
    j[name] = is_int ? ordered_json(std::llround(v)) : jnum(v);
  }
  return j;
}

wedge::LiftedEvolution lift_free(const config::RunConfig& cfg, const CMatrix& u) {
  const wedge::Polarization pol = observables::free_polarization(cfg.lattice);
  return wedge::lift(u, pol, pol, cfg.tolerances.max_condition);
}

ExperimentResult run_evolve(const config::RunConfig& cfg) {
  const lattice::Potential1p1 pot = cfg.potential();
  const UnitaryMap u = lattice::evolve(cfg.lattice, pot, cfg.lattice.t0, cfg.lattice.t1);
  const lattice::SpectralSplit free = lattice::free_projectors(cfg.lattice);
  const polarization::BlockDecomposition b = polarization::blocks(
      u.matrix, free.minus.matrix, free.plus.matrix, free.minus.matrix, free.plus.matrix);
  const wedge::LiftedEvolution lifted = lift_free(cfg, u.matrix);

  ScalarRow row;
  row.add("N", cfg.lattice.n);
  row.add("nsteps", cfg.lattice.nsteps);
  row.add("unitarity_defect", u.unitarity_defect);
  row.add("pair_number", b.report.hs_plus_minus * b.report.hs_plus_minus);
  row.add("vacuum_persistence", observables::vacuum_persistence(lifted));
  row.add("persistence_from_blocks", observables::persistence_from_blocks(lifted));
  row.add("hs_plus_minus", b.report.hs_plus_minus);
  row.add("hs_minus_plus", b.report.hs_minus_plus);
  row.add("block_identity_defect", wedge::block_identity_defect(lifted));
  row.add("condition_U--", lifted.condition);

  ExperimentResult r;
  r.name = "evolve";
  r.table = table_from(row, {"N", "nsteps"});
  r.summary_json = json_from(row, {"N", "nsteps"}).dump(2);
  r.scalars = row.values;
  r.primary = "pair_number";
  return r;
}

ExperimentResult run_shale(const config::RunConfig& cfg) {
  const lattice::Potential1p1 pot = cfg.potential();
  const UnitaryMap u = lattice::evolve(cfg.lattice, pot, cfg.lattice.t0, cfg.lattice.t1);
  const lattice::SpectralSplit free = lattice::free_projectors(cfg.lattice);
  const lattice::SpectralSplit furry =
      lattice::spectral_projectors(lattice::hamiltonian(cfg.lattice, pot, cfg.lattice.t1));
  const CMatrix interp_minus = u.matrix * free.minus.matrix * u.matrix.adjoint();
  const CMatrix id = CMatrix::Identity(cfg.lattice.dim(), cfg.lattice.dim());

  struct Out {
    const char* name;
    CMatrix minus, plus;
  };
  const std::vector<Out> outs{{"free", free.minus.matrix, free.plus.matrix},
                              {"furry", furry.minus.matrix, furry.plus.matrix},
                              {"interpolation", interp_minus, id - interp_minus}};
  Table t;
  t.columns = {"out_polarization", "hs_plus_minus", "hs_minus_plus", "pair_number",
               "block_identity_defect", "reassembly_defect"};
  ordered_json rows = ordered_json::array();
  ExperimentResult r;
  for (const Out& o : outs) {
    const polarization::BlockDecomposition b =
        polarization::blocks(u.matrix, free.minus.matrix, free.plus.matrix, o.minus, o.plus);
    const double bid = polarization::block_identity_defect(b, free.minus.matrix);
    const double pn = b.report.hs_plus_minus * b.report.hs_plus_minus;
    t.rows.push_back({o.name, format_number(b.report.hs_plus_minus),
                      format_number(b.report.hs_minus_plus), format_number(pn), format_number(bid),
                      format_number(b.reassembly_defect)});
    rows.push_back({{"out_polarization", o.name},
                    {"hs_plus_minus", jnum(b.report.hs_plus_minus)},
                    {"hs_minus_plus", jnum(b.report.hs_minus_plus)},
                    {"pair_number", jnum(pn)},
                    {"block_identity_defect", jnum(bid)}});
    r.scalars.emplace_back(std::string("hs_plus_minus_") + o.name, b.report.hs_plus_minus);
  }
  r.name = "shale";
  r.table = std::move(t);
  ordered_json j;
  j["unitarity_defect"] = jnum(u.unitarity_defect);
  j["rank_minus_furry"] = furry.rank_minus;
  j["polarizations"] = rows;
  r.summary_json = j.dump(2);
  r.primary = "hs_plus_minus_free";
  return r;
}

ExperimentResult run_class_probe(const config::RunConfig& cfg) {
  std::vector<int> ns = cfg.probe_n.empty() ? std::vector<int>{cfg.lattice.n} : cfg.probe_n;
  const double tb = cfg.probe_time.value_or(cfg.lattice.t1);
  Table t;
  t.columns = {"N",        "nsteps",      "delta1", "delta2", "hermiticity_defect", "q_antihermiticity",
               "representative_distance", "free_distance", "ratio"};
  std::vector<double> d1s, d2s, reps;
  ordered_json rows = ordered_json::array();
  for (int n : ns) {
    config::RunConfig sub = n == cfg.lattice.n ? cfg : config::with_axis_value(cfg, "N", n);
    const lattice::Potential1p1 pot = sub.potential();
    const UnitaryMap u = lattice::evolve(sub.lattice, pot, sub.lattice.t0, tb);
    const lattice::SpectralSplit free = lattice::free_projectors(sub.lattice);
    const Projector pa =
        polarization::local_gauge_projector(sub.lattice, pot, tb, free.minus.matrix, cfg.lambda_sign);
    const polarization::GaugeProjectorDefects d = polarization::gauge_projector_defects(u.matrix, free.minus.matrix, pa);
    const CMatrix q = polarization::build_q(free.plus.matrix, free.minus.matrix, pa.matrix);
    const Projector rep = polarization::representative_projector(q, free.minus.matrix);
    const CMatrix interp = u.matrix * free.minus.matrix * u.matrix.adjoint();
    const double rep_dist = polarization::class_distance(rep.matrix, interp);
    const double free_dist = polarization::class_distance(free.minus.matrix, interp);
    const double qa = hs_norm(q + q.adjoint());
    const double ratio = reps.empty() ? kNaN : rep_dist / reps.back();
    d1s.push_back(d.delta1);
    d2s.push_back(d.delta2);
    reps.push_back(rep_dist);
    t.rows.push_back({format_integer(n), format_integer(sub.lattice.nsteps), format_number(d.delta1),
                      format_number(d.delta2), format_number(d.hermiticity), format_number(qa),
                      format_number(rep_dist), format_number(free_dist), format_number(ratio)});
    rows.push_back({{"N", n},
                    {"nsteps", sub.lattice.nsteps},
                    {"delta1", jnum(d.delta1)},
                    {"delta2", jnum(d.delta2)},
                    {"hermiticity_defect", jnum(d.hermiticity)},
                    {"representative_idempotency_defect", jnum(rep.idempotency_defect)},
                    {"representative_distance", jnum(rep_dist)},
                    {"free_distance", jnum(free_dist)}});
  }
  ordered_json j;
  j["probe_time"] = tb;
  j["lambda_sign"] = cfg.lambda_sign;
  j["rows"] = rows;
  j["ratios"] = {{"delta1", jvec(polarization::doubling_ratios(d1s))},
                 {"delta2", jvec(polarization::doubling_ratios(d2s))},
                 {"representative_distance", jvec(polarization::doubling_ratios(reps))}};
  if (ns.size() >= 2)
    j["bounded"] = {{"max_ratio", cfg.tolerances.doubling_ratio},
                    {"delta1", polarization::bounded_under_doubling(d1s, cfg.tolerances.doubling_ratio)},
                    {"delta2", polarization::bounded_under_doubling(d2s, cfg.tolerances.doubling_ratio)},
                    {"representative_distance",
                     polarization::bounded_under_doubling(reps, cfg.tolerances.doubling_ratio)}};
  ExperimentResult r;
  r.name = "class-probe";
  r.table = std::move(t);
  r.summary_json = j.dump(2);
  r.scalars = {{"delta1", d1s.back()}, {"delta2", d2s.back()}, {"representative_distance", reps.back()}};
  r.primary = "representative_distance";
  return r;
}

ExperimentResult run_kernel_probe(const config::RunConfig& cfg, bool tangential, int threads) {
  if (tangential && !cfg.kernel_b)
    throw InvalidInput("kernel3p1.components_b", "required for the tangential probe");
  kernel3p1::SamplerSpec spec = cfg.sampler;
  spec.threads = threads;
  ExperimentResult r;
  r.name = tangential ? "tangential-probe" : "cutoff-probe";
  r.table.columns = {"cutoff", "value", "stderr"};
  r.primary = "value";
  ordered_json j;
  j["samples"] = spec.samples;
  j["seed"] = spec.seed;
  j["stderr_budget"] = spec.stderr_budget;
  j["surface_time"] = std::isinf(cfg.kernel.surface_time) ? ordered_json("inf")
                                                          : ordered_json(cfg.kernel.surface_time);

  if (cfg.cutoffs.size() == 1) {
    // single-cutoff estimate, used by sweeps over the cutoff
    const double c = cfg.cutoffs.front();
    const kernel3p1::HsEstimate e =
        tangential ? kernel3p1::hs_norm_squared_difference(cfg.kernel, *cfg.kernel_b, c, spec)
                   : kernel3p1::hs_norm_squared(cfg.kernel, c, spec);
    r.table.rows.push_back({format_number(c), format_number(e.value), format_number(e.stderr)});
    j["cutoff"] = c;
    j["value"] = jnum(e.value);
    j["stderr"] = jnum(e.stderr);
    j["over_budget"] = e.over_budget;
    r.scalars = {{"cutoff", c}, {"value", e.value}, {"stderr", e.stderr}};
    r.summary_json = j.dump(2);
    return r;
  }
  const kernel3p1::CutoffProbeResult p =
      tangential ? kernel3p1::tangential_probe(cfg.kernel, *cfg.kernel_b, cfg.cutoffs, spec, cfg.thresholds)
                 : kernel3p1::cutoff_probe(cfg.kernel, cfg.cutoffs, spec, cfg.thresholds);
  for (std::size_t i = 0; i < p.cutoffs.size(); ++i)
    r.table.rows.push_back(
        {format_number(p.cutoffs[i]), format_number(p.hs2[i]), format_number(p.stderr[i])});
  j["cutoffs"] = jvec(p.cutoffs);
  j["hs2"] = jvec(p.hs2);
  j["stderr"] = jvec(p.stderr);
  j["slope"] = jnum(p.slope);
  j["last_doubling_growth"] = jnum(p.last_doubling_growth);
  j["monotone"] = p.monotone;
  j["any_over_budget"] = p.any_over_budget;
  j["verdict"] = kernel3p1::to_string(p.verdict);
  j["thresholds"] = {{"divergent_slope", p.thresholds.divergent_slope},
                     {"convergent_growth", p.thresholds.convergent_growth}};
  r.summary_json = j.dump(2);
  r.scalars = {{"cutoff", p.cutoffs.back()}, {"value", p.hs2.back()}, {"stderr", p.stderr.back()},
               {"slope", p.slope}, {"last_doubling_growth", p.last_doubling_growth}};
  return r;
}

ExperimentResult run_spectrum(const config::RunConfig& cfg) {
  const lattice::Potential1p1 pot = cfg.potential();
  const UnitaryMap u = lattice::evolve(cfg.lattice, pot, cfg.lattice.t0, cfg.lattice.t1);
  const wedge::LiftedEvolution lifted = lift_free(cfg, u.matrix);
  const observables::PairSpectrum s = observables::pair_spectrum(lifted, cfg.max_pairs, cfg.channel_cap);
  const lattice::FreeModes fm = lattice::free_modes(cfg.lattice);

  ExperimentResult r;
  r.name = "spectrum";
  r.table.columns = {"mode_i", "mode_j", "p_electron", "p_sea", "amplitude_re", "amplitude_im",
                     "probability"};
  for (const auto& c : s.one_pair)
    r.table.rows.push_back({format_integer(c.electron), format_integer(c.hole),
                            format_number(fm.momenta[c.electron]), format_number(fm.momenta[c.hole]),
                            format_number(c.amplitude.real()), format_number(c.amplitude.imag()),
                            format_number(c.probability)});
  if (cfg.max_pairs == 2) {
    Table two;
    two.columns = {"mode_i1", "mode_i2", "mode_j1", "mode_j2", "amplitude_re", "amplitude_im",
                   "probability"};
    for (const auto& c : s.two_pair)
      two.rows.push_back({format_integer(c.electron1), format_integer(c.electron2),
                          format_integer(c.hole1), format_integer(c.hole2),
                          format_number(c.amplitude.real()), format_number(c.amplitude.imag()),
                          format_number(c.probability)});
    r.extra_tables.emplace_back("two_pair", std::move(two));
  }
  const double total = observables::total_probability(s);
  const lattice::SpectralSplit free = lattice::free_projectors(cfg.lattice);
  const double pn = observables::pair_number(u.matrix, free.minus.matrix, free.plus.matrix);
  ordered_json j;
  j["persistence"] = jnum(s.persistence);
  j["pair_number"] = jnum(pn);
  j["one_pair_total"] = jnum(s.one_pair_total);
  j["two_pair_total"] = jnum(s.two_pair_total);
  j["total_probability"] = jnum(total);
  j["max_pairs"] = s.max_pairs;
  j["channel_cap"] = cfg.channel_cap;
  j["channels_used"] = s.channel_cap;
  j["truncated"] = s.truncated;
  r.summary_json = j.dump(2);
  r.scalars = {{"persistence", s.persistence}, {"pair_number", pn},
               {"one_pair_total", s.one_pair_total}, {"two_pair_total", s.two_pair_total},
               {"total_probability", total}};
  r.primary = "one_pair_total";
  return r;
}

ExperimentResult run_current(const config::RunConfig& cfg) {
  const lattice::Potential1p1 pot = cfg.potential();
  observables::CurrentOptions opt;
  opt.epsilon = cfg.current_epsilon;
  opt.rel_tol = cfg.tolerances.current_rel;
  opt.abs_floor = cfg.tolerances.current_abs;
  ExperimentResult r;
  r.name = "current";
  r.table.columns = {"t", "x", "mu", "value", "value_eps", "value_half", "residual", "resolved",
                     "phase_summand", "imag"};
  ordered_json rows = ordered_json::array();
  int unresolved = 0;
  double last = kNaN;
  for (const auto& p : cfg.current_points) {
    const observables::CurrentSample s =
        observables::bogolyubov_current(cfg.lattice, pot, p.t, p.x, cfg.current_mu, cfg.phase, opt);
    const double summand = cfg.phase.summand(cfg.current_mu, p.t, p.x);
    unresolved += s.resolved ? 0 : 1;
    last = s.value;
    r.table.rows.push_back({format_number(s.t), format_number(s.x), format_integer(s.mu),
                            format_number(s.value), format_number(s.value_eps),
                            format_number(s.value_half), format_number(s.residual),
                            format_integer(s.resolved ? 1 : 0), format_number(summand),
                            format_number(s.imag)});
    rows.push_back({{"t", s.t}, {"x", s.x}, {"value", jnum(s.value)}, {"residual", jnum(s.residual)},
                    {"resolved", s.resolved}, {"phase_summand", jnum(summand)}});
  }
  ordered_json j;
  j["mu"] = cfg.current_mu;
  j["epsilon"] = cfg.current_epsilon;
  j["bump_widths"] = {{"sigma_t", 3.0 * cfg.lattice.dt()}, {"sigma_x", 3.0 * cfg.lattice.dx()}};
  j["phase_convention"] = "exp(-i theta(A)) times the construction's phase";
  j["phase_functional_c"] = cfg.phase.c;
  j["unresolved"] = unresolved;
  j["samples"] = rows;
  r.summary_json = j.dump(2);
  r.scalars = {{"value", last}};
  r.primary = "value";
  return r;
}

ExperimentResult run_gauge_probe(const config::RunConfig& cfg) {
  const lattice::Potential1p1 pot = cfg.potential();
  const observables::GaugeProbeReport g = observables::gauge_covariance_probe(cfg.lattice, pot);
  ScalarRow row;
  row.add("fixed_pair_number", g.fixed_pair_number);
  row.add("transformed_pair_number", g.transformed_pair_number);
  row.add("gamma_t1_max", g.gamma_t1_max);
  row.add("unitarity_defect", g.unitarity_defect);
  ExperimentResult r;
  r.name = "gauge-probe";
  r.table = table_from(row);
  r.summary_json = json_from(row).dump(2);
  r.scalars = row.values;
  r.primary = "fixed_pair_number";
  return r;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const fs::path& path, const std::string& text, std::vector<std::string>& outputs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("out", "cannot write " + path.string());
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  outputs.push_back(path.string());
}

ordered_json calibration(const config::RunConfig& cfg) {
  return {{"divergent_slope", cfg.thresholds.divergent_slope},
          {"convergent_growth", cfg.thresholds.convergent_growth},
          {"stderr_budget", cfg.sampler.stderr_budget},
          {"doubling_ratio", cfg.tolerances.doubling_ratio},
          {"tol_unitarity", cfg.tolerances.unitarity},
          {"max_condition", cfg.tolerances.max_condition},
          {"current_rel", cfg.tolerances.current_rel},
          {"current_abs", cfg.tolerances.current_abs},
          {"two_pair_channel_cap", cfg.channel_cap},
          {"lambda_sign", cfg.lambda_sign},
          {"support_threshold", lattice::kSupportThreshold},
          {"current_bump_widths", "3 dt, 3 dx"}};
}

RunOutcome finish(const config::RunConfig& cfg, const RunOptions& options, const ExperimentResult& r,
                  double wall, const std::string& started, ordered_json extra = {}) {
  const fs::path dir(options.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("out", "cannot create " + dir.string());
  RunOutcome o;
  o.experiment = r.name;
  o.summary_json = r.summary_json;
  write_file(dir / (r.name + ".csv"), r.table.to_csv(), o.outputs);
  for (const auto& [suffix, table] : r.extra_tables)
    write_file(dir / (r.name + "_" + suffix + ".csv"), table.to_csv(), o.outputs);
  write_file(dir / (r.name + ".json"), r.summary_json, o.outputs);

  ordered_json m;
  m["experiment"] = r.name;
  m["config_hash"] = "fnv1a64:" + hex64(config::fnv1a(cfg.canonical_json()));
  m["seed"] = cfg.sampler.seed;
  m["threads"] = options.threads;
  m["versions"] = {{"diracsea", std::string(DIRACSEA_VERSION)},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"fftw", std::string(fftw_version)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                   {"compiler", std::string(__VERSION__)}};
  m["started_utc"] = started;
  m["wall_time_seconds"] = wall;
  m["calibration"] = calibration(cfg);
  if (!extra.is_null()) m["sweep"] = extra;
  const fs::path mpath = dir / "manifest.json";
  ordered_json outs = ordered_json::array();
  for (const auto& p : o.outputs) outs.push_back(p);
  outs.push_back(mpath.string());
  m["outputs"] = outs;
  write_file(mpath, m.dump(2), o.outputs);
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string format_integer(long long v) { return std::to_string(v); }

std::string Table::to_csv() const {
  std::string s;
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
  s += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
    s += '\n';
  }
  return s;
}

ExperimentResult run_experiment(const config::RunConfig& cfg, int threads) {
  const std::string& e = cfg.experiment;
  if (e == "evolve") return run_evolve(cfg);
  if (e == "shale") return run_shale(cfg);
  if (e == "class-probe") return run_class_probe(cfg);
  if (e == "cutoff-probe") return run_kernel_probe(cfg, false, threads);
  if (e == "tangential-probe") return run_kernel_probe(cfg, true, threads);
  if (e == "spectrum") return run_spectrum(cfg);
  if (e == "current") return run_current(cfg);
  if (e == "gauge-probe") return run_gauge_probe(cfg);
  throw InvalidInput("experiment", "'" + e + "' cannot run as a single experiment");
}

RunOutcome run(config::RunConfig cfg, const RunOptions& options) {
  if (options.seed) cfg.sampler.seed = *options.seed;
  if (options.threads < 1) throw InvalidInput("threads", "must be >= 1");
  if (cfg.experiment == "sweep") {
    if (!cfg.sweep) throw InvalidInput("sweep", "required for a sweep");
    return sweep(cfg, cfg.sweep->axis, cfg.sweep->values, options);
  }
  const std::string started = utc_now();
  const auto t = std::chrono::steady_clock::now();
  const ExperimentResult r = run_experiment(cfg, options.threads);
  return finish(cfg, options, r, seconds_since(t), started);
}

RunOutcome run_file(const std::string& path, const RunOptions& options) {
  return run(config::load(path), options);
}

RunOutcome sweep(config::RunConfig cfg, const std::string& axis, const std::vector<double>& values,
                 const RunOptions& options) {
  if (options.seed) cfg.sampler.seed = *options.seed;
  if (options.threads < 1) throw InvalidInput("threads", "must be >= 1");
  if (values.empty()) throw InvalidInput("values", "sweep needs at least one value");
  if (axis.empty()) throw InvalidInput("axis", "sweep needs an axis");
  std::string inner = cfg.experiment;
  if (inner == "sweep") inner = cfg.sweep ? cfg.sweep->experiment : "";
  if (inner.empty() || inner == "sweep")
    throw InvalidInput("sweep.experiment", "name the experiment to sweep");
  const bool cutoff_axis = axis == "Lambda" || axis == "Λ";
  if (cutoff_axis && inner != "cutoff-probe" && inner != "tangential-probe")
    throw InvalidInput("axis", "the cutoff axis needs a cutoff-probe or tangential-probe");

  // validate every point before running any
  std::vector<config::RunConfig> subs;
  for (double v : values) {
    config::RunConfig sub = config::with_axis_value(cfg, axis, v);
    sub.experiment = inner;
    sub.sweep.reset();
    subs.push_back(std::move(sub));
  }

  const std::string started = utc_now();
  const auto t = std::chrono::steady_clock::now();
  ExperimentResult agg;
  agg.name = "sweep";
  std::vector<double> primary;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const ExperimentResult r = run_experiment(subs[i], options.threads);
    if (i == 0) {
      agg.table.columns.push_back(axis == "Λ" ? "Lambda" : axis);
      for (const auto& [name, v] : r.scalars) agg.table.columns.push_back(name);
      agg.table.columns.push_back("ratio");
      agg.primary = r.primary;
    }
    double p = kNaN;
    std::vector<std::string> row{format_number(values[i])};
    for (const auto& [name, v] : r.scalars) {
      row.push_back(format_number(v));
      if (name == r.primary) p = v;
    }
    row.push_back(format_number(primary.empty() ? kNaN : p / primary.back()));
    primary.push_back(p);
    agg.table.rows.push_back(std::move(row));
  }

  ordered_json j;
  j["experiment"] = inner;
  j["axis"] = axis;
  j["values"] = jvec(values);
  j["metric"] = agg.primary;
  j["metric_values"] = jvec(primary);
  j["ratios"] = jvec(polarization::doubling_ratios(primary));
  bool positive = values.size() >= 2;
  for (std::size_t i = 0; i < values.size(); ++i)
    positive = positive && values[i] > 0.0 && primary[i] > 0.0;
  j["loglog_slope"] = positive ? jnum(kernel3p1::loglog_slope(values, primary)) : ordered_json(nullptr);
  agg.summary_json = j.dump(2);

  ordered_json extra = {{"experiment", inner}, {"axis", axis}, {"values", jvec(values)}};
  config::RunConfig base = cfg;
  base.experiment = "sweep";
  base.sweep = config::SweepSettings{inner, axis, values};
  return finish(base, options, agg, seconds_since(t), started, extra);
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const InvalidInput*>(&e)) return 2;
  if (dynamic_cast<const NumericalFailure*>(&e)) return 3;
  return 1;
}

}  // namespace diracsea::harness
