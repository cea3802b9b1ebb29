#include "diracsea/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace diracsea::config {
namespace {

using nlohmann::json;

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw InvalidInput(path, "must be an object");
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(obj, path);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!ok.count(item.key()))
      throw InvalidInput(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw InvalidInput(path, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidInput(path, "must be finite");
  return v;
}

void read(const json& obj, const char* key, double& out, const std::string& path) {
  if (const json* v = find(obj, key)) out = get_number(*v, path + "." + key);
}

void read_int(const json& obj, const char* key, int& out, const std::string& path) {
  if (const json* v = find(obj, key)) {
    if (!v->is_number_integer()) throw InvalidInput(path + "." + key, "must be an integer");
    const auto x = v->get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
      throw InvalidInput(path + "." + key, "out of range");
    out = static_cast<int>(x);
  }
}

std::vector<double> read_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw InvalidInput(path, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

lattice::GaussianPulse read_pulse(const json& j, const std::string& path) {
  check_keys(j, path, {"amplitude", "t_center", "x_center", "sigma_t", "sigma_x"});
  if (!find(j, "amplitude")) throw InvalidInput(path + ".amplitude", "required");
  lattice::GaussianPulse p;
  read(j, "amplitude", p.amplitude, path);
  read(j, "t_center", p.t_center, path);
  read(j, "x_center", p.x_center, path);
  read(j, "sigma_t", p.sigma_t, path);
  read(j, "sigma_x", p.sigma_x, path);
  if (!(p.sigma_t > 0.0)) throw InvalidInput(path + ".sigma_t", "must be positive");
  if (!(p.sigma_x > 0.0)) throw InvalidInput(path + ".sigma_x", "must be positive");
  return p;
}

std::vector<lattice::GaussianPulse> read_pulses(const json& obj, const char* key,
                                                const std::string& path) {
  std::vector<lattice::GaussianPulse> out;
  const json* arr = find(obj, key);
  if (!arr) return out;
  const std::string p = path + "." + key;
  if (!arr->is_array()) throw InvalidInput(p, "must be an array of pulses");
  for (std::size_t i = 0; i < arr->size(); ++i)
    out.push_back(read_pulse((*arr)[i], p + "[" + std::to_string(i) + "]"));
  return out;
}

json pulse_json(const lattice::GaussianPulse& p) {
  return {{"amplitude", p.amplitude}, {"t_center", p.t_center}, {"x_center", p.x_center},
          {"sigma_t", p.sigma_t}, {"sigma_x", p.sigma_x}};
}

std::array<kernel3p1::Pulse4, 4> read_components(const json& arr, const std::string& path,
                                                 double sigma_t, double sigma_x) {
  if (!arr.is_array()) throw InvalidInput(path, "must be an array of components");
  std::array<kernel3p1::Pulse4, 4> out{};
  for (auto& c : out) {
    c.sigma_t = sigma_t;
    c.sigma_x = sigma_x;
  }
  std::set<int> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const json& j = arr[i];
    check_keys(j, p, {"mu", "amplitude", "t_center", "x_center", "sigma_t", "sigma_x"});
    int mu = -1;
    read_int(j, "mu", mu, p);
    if (mu < 0 || mu > 3) throw InvalidInput(p + ".mu", "must be 0, 1, 2 or 3");
    if (!seen.insert(mu).second) throw InvalidInput(p + ".mu", "component given twice");
    kernel3p1::Pulse4& c = out[mu];
    if (!find(j, "amplitude")) throw InvalidInput(p + ".amplitude", "required");
    read(j, "amplitude", c.amplitude, p);
    read(j, "t_center", c.t_center, p);
    read(j, "sigma_t", c.sigma_t, p);
    read(j, "sigma_x", c.sigma_x, p);
    if (const json* xc = find(j, "x_center")) {
      const std::vector<double> v = read_numbers(*xc, p + ".x_center");
      if (v.size() != 3) throw InvalidInput(p + ".x_center", "needs three entries");
      c.x_center = {v[0], v[1], v[2]};
    }
    if (!(c.sigma_t > 0.0)) throw InvalidInput(p + ".sigma_t", "must be positive");
    if (!(c.sigma_x > 0.0)) throw InvalidInput(p + ".sigma_x", "must be positive");
  }
  return out;
}

json components_json(const kernel3p1::Potential3p1& pot) {
  json arr = json::array();
  for (int mu = 0; mu < 4; ++mu) {
    const auto& c = pot.components[mu];
    if (c.amplitude == 0.0) continue;
    arr.push_back({{"mu", mu}, {"amplitude", c.amplitude}, {"t_center", c.t_center},
                   {"x_center", {c.x_center[0], c.x_center[1], c.x_center[2]}},
                   {"sigma_t", c.sigma_t}, {"sigma_x", c.sigma_x}});
  }
  return arr;
}

json surface_json(double t) {
  if (std::isinf(t)) return t > 0 ? "inf" : "-inf";
  return t;
}

void parse_lattice(const json& j, RunConfig& cfg) {
  const std::string p = "lattice";
  check_keys(j, p, {"N", "L", "m", "e", "t0", "t1", "nsteps"});
  read_int(j, "N", cfg.lattice.n, p);
  read(j, "L", cfg.lattice.length, p);
  read(j, "m", cfg.lattice.mass, p);
  read(j, "e", cfg.lattice.coupling, p);
  read(j, "t0", cfg.lattice.t0, p);
  read(j, "t1", cfg.lattice.t1, p);
  read_int(j, "nsteps", cfg.lattice.nsteps, p);
}

void parse_kernel(const json& j, RunConfig& cfg) {
  const std::string p = "kernel3p1";
  check_keys(j, p, {"mass", "coupling", "surface_time", "widths", "components", "components_b",
                    "cutoffs", "samples", "seed", "stderr_budget", "thresholds"});
  auto& k = cfg.kernel;
  read(j, "mass", k.mass, p);
  read(j, "coupling", k.coupling, p);
  if (const json* st = find(j, "surface_time")) {
    if (st->is_string() && st->get<std::string>() == "inf")
      k.surface_time = std::numeric_limits<double>::infinity();
    else
      k.surface_time = get_number(*st, p + ".surface_time");
  }
  double sigma_t = 1.0, sigma_x = 1.0;
  if (const json* w = find(j, "widths")) {
    check_keys(*w, p + ".widths", {"sigma_t", "sigma_x"});
    read(*w, "sigma_t", sigma_t, p + ".widths");
    read(*w, "sigma_x", sigma_x, p + ".widths");
    if (!(sigma_t > 0.0)) throw InvalidInput(p + ".widths.sigma_t", "must be positive");
    if (!(sigma_x > 0.0)) throw InvalidInput(p + ".widths.sigma_x", "must be positive");
  }
  if (const json* c = find(j, "components"))
    k.components = read_components(*c, p + ".components", sigma_t, sigma_x);
  if (const json* c = find(j, "components_b")) {
    kernel3p1::Potential3p1 b = k;
    b.components = read_components(*c, p + ".components_b", sigma_t, sigma_x);
    cfg.kernel_b = b;
  }
  if (const json* c = find(j, "cutoffs")) cfg.cutoffs = read_numbers(*c, p + ".cutoffs");
  if (const json* s = find(j, "samples")) {
    if (!s->is_number_integer() || s->get<long long>() < 2)
      throw InvalidInput(p + ".samples", "must be an integer >= 2");
    cfg.sampler.samples = s->get<std::uint64_t>();
  }
  if (const json* s = find(j, "seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
      throw InvalidInput(p + ".seed", "must be a non-negative integer");
    cfg.sampler.seed = s->get<std::uint64_t>();
  }
  read(j, "stderr_budget", cfg.sampler.stderr_budget, p);
  if (const json* t = find(j, "thresholds")) {
    check_keys(*t, p + ".thresholds", {"divergent_slope", "convergent_growth"});
    read(*t, "divergent_slope", cfg.thresholds.divergent_slope, p + ".thresholds");
    read(*t, "convergent_growth", cfg.thresholds.convergent_growth, p + ".thresholds");
  }
  // mass and coupling are shared by both potentials
  if (cfg.kernel_b) {
    cfg.kernel_b->mass = k.mass;
    cfg.kernel_b->coupling = k.coupling;
    cfg.kernel_b->surface_time = k.surface_time;
  }
}

void parse_observables(const json& j, RunConfig& cfg) {
  const std::string p = "observables";
  check_keys(j, p, {"max_pairs", "channel_cap", "phase_functional", "current"});
  read_int(j, "max_pairs", cfg.max_pairs, p);
  if (cfg.max_pairs != 1 && cfg.max_pairs != 2)
    throw InvalidInput(p + ".max_pairs", "must be 1 or 2");
  read_int(j, "channel_cap", cfg.channel_cap, p);
  if (cfg.channel_cap < 2) throw InvalidInput(p + ".channel_cap", "must be at least 2");
  if (const json* f = find(j, "phase_functional")) {
    const std::string fp = p + ".phase_functional";
    check_keys(*f, fp, {"c", "j0", "j1"});
    read(*f, "c", cfg.phase.c, fp);
    if (const json* j0 = find(*f, "j0")) cfg.phase.profile[0] = read_pulse(*j0, fp + ".j0");
    if (const json* j1 = find(*f, "j1")) cfg.phase.profile[1] = read_pulse(*j1, fp + ".j1");
  }
  if (const json* c = find(j, "current")) {
    const std::string cp = p + ".current";
    check_keys(*c, cp, {"points", "mu", "epsilon"});
    if (const json* pts = find(*c, "points")) {
      if (!pts->is_array() || pts->empty()) throw InvalidInput(cp + ".points", "must be a non-empty array");
      cfg.current_points.clear();
      for (std::size_t i = 0; i < pts->size(); ++i) {
        const std::vector<double> v = read_numbers((*pts)[i], cp + ".points[" + std::to_string(i) + "]");
        if (v.size() != 2) throw InvalidInput(cp + ".points[" + std::to_string(i) + "]", "needs [t, x]");
        cfg.current_points.push_back({v[0], v[1]});
      }
    }
    read_int(*c, "mu", cfg.current_mu, cp);
    if (cfg.current_mu != 0 && cfg.current_mu != 1) throw InvalidInput(cp + ".mu", "must be 0 or 1");
    read(*c, "epsilon", cfg.current_epsilon, cp);
    if (!(cfg.current_epsilon > 0.0)) throw InvalidInput(cp + ".epsilon", "must be positive");
  }
}

void parse_polarization(const json& j, RunConfig& cfg) {
  const std::string p = "polarization";
  check_keys(j, p, {"lambda_sign", "probe_time", "N_values"});
  read_int(j, "lambda_sign", cfg.lambda_sign, p);
  if (cfg.lambda_sign != 1 && cfg.lambda_sign != -1)
    throw InvalidInput(p + ".lambda_sign", "must be +1 or -1");
  if (const json* t = find(j, "probe_time")) cfg.probe_time = get_number(*t, p + ".probe_time");
  if (const json* ns = find(j, "N_values")) {
    if (!ns->is_array() || ns->empty()) throw InvalidInput(p + ".N_values", "must be a non-empty array");
    for (std::size_t i = 0; i < ns->size(); ++i) {
      if (!(*ns)[i].is_number_integer()) throw InvalidInput("N", "N_values entries must be integers");
      cfg.probe_n.push_back((*ns)[i].get<int>());
    }
  }
}

void parse_tolerances(const json& j, RunConfig& cfg) {
  const std::string p = "tolerances";
  check_keys(j, p, {"unitarity", "max_condition", "doubling_ratio", "current_rel", "current_abs"});
  auto& t = cfg.tolerances;
  read(j, "unitarity", t.unitarity, p);
  read(j, "max_condition", t.max_condition, p);
  read(j, "doubling_ratio", t.doubling_ratio, p);
  read(j, "current_rel", t.current_rel, p);
  read(j, "current_abs", t.current_abs, p);
  if (!(t.unitarity > 0.0)) throw InvalidInput("tol_unitarity", "must be positive");
  if (!(t.max_condition >= 1.0)) throw InvalidInput(p + ".max_condition", "must be >= 1");
  if (!(t.doubling_ratio >= 1.0)) throw InvalidInput(p + ".doubling_ratio", "must be >= 1");
}

void parse_sweep(const json& j, RunConfig& cfg) {
  const std::string p = "sweep";
  check_keys(j, p, {"experiment", "axis", "values"});
  SweepSettings s;
  if (const json* e = find(j, "experiment")) {
    if (!e->is_string()) throw InvalidInput(p + ".experiment", "must be a string");
    s.experiment = e->get<std::string>();
  }
  if (const json* a = find(j, "axis")) {
    if (!a->is_string()) throw InvalidInput(p + ".axis", "must be a string");
    s.axis = a->get<std::string>();
  }
  if (const json* v = find(j, "values")) s.values = read_numbers(*v, p + ".values");
  cfg.sweep = s;
}

void validate_all(const RunConfig& cfg) {
  cfg.lattice.validate();
  (void)cfg.potential();
  cfg.kernel.validate();
  if (cfg.kernel_b) cfg.kernel_b->validate();
  for (int n : cfg.probe_n) {
    lattice::LatticeConfig l = cfg.lattice;
    l.n = n;
    l.validate();
  }
  if (!(cfg.sampler.stderr_budget > 0.0)) throw InvalidInput("kernel3p1.stderr_budget", "must be positive");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "evolve",   "shale", "class-probe", "cutoff-probe", "tangential-probe",
      "spectrum", "current", "gauge-probe", "sweep"};
  return names;
}

lattice::Potential1p1 RunConfig::potential() const {
  return lattice::Potential1p1(lattice, a0_pulses, a1_pulses, gamma_pulses);
}

RunConfig parse(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInput("config", std::string("not valid JSON: ") + e.what());
  }
  check_keys(root, "", {"schema", "experiment", "lattice", "potential", "kernel3p1", "observables",
                        "polarization", "tolerances", "sweep"});
  RunConfig cfg;
  const json* schema = find(root, "schema");
  if (!schema) throw InvalidInput("schema", "required");
  if (!schema->is_number_integer() || schema->get<int>() != kSchemaVersion)
    throw InvalidInput("schema", "unsupported schema version (expected 1)");
  const json* exp = find(root, "experiment");
  if (!exp || !exp->is_string()) throw InvalidInput("experiment", "required string");
  cfg.experiment = exp->get<std::string>();
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    throw InvalidInput("experiment", "unknown experiment '" + cfg.experiment + "'");

  if (const json* j = find(root, "lattice")) parse_lattice(*j, cfg);
  if (const json* j = find(root, "potential")) {
    check_keys(*j, "potential", {"a0_pulses", "a1_pulses", "gamma_pulses"});
    cfg.a0_pulses = read_pulses(*j, "a0_pulses", "potential");
    cfg.a1_pulses = read_pulses(*j, "a1_pulses", "potential");
    cfg.gamma_pulses = read_pulses(*j, "gamma_pulses", "potential");
  }
  if (const json* j = find(root, "kernel3p1")) parse_kernel(*j, cfg);
  if (const json* j = find(root, "observables")) parse_observables(*j, cfg);
  if (const json* j = find(root, "polarization")) parse_polarization(*j, cfg);
  if (const json* j = find(root, "tolerances")) parse_tolerances(*j, cfg);
  cfg.lattice.tol_unitarity = cfg.tolerances.unitarity;
  if (const json* j = find(root, "sweep")) parse_sweep(*j, cfg);
  if (cfg.experiment == "sweep" && !cfg.sweep) throw InvalidInput("sweep", "required for a sweep");
  validate_all(cfg);
  return cfg;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::canonical_json() const {
  json j;
  j["schema"] = schema;
  j["experiment"] = experiment;
  j["lattice"] = {{"N", lattice.n},   {"L", lattice.length}, {"m", lattice.mass},
                  {"e", lattice.coupling}, {"t0", lattice.t0}, {"t1", lattice.t1},
                  {"nsteps", lattice.nsteps}};
  json a0 = json::array(), a1 = json::array(), g = json::array();
  for (const auto& p : a0_pulses) a0.push_back(pulse_json(p));
  for (const auto& p : a1_pulses) a1.push_back(pulse_json(p));
  for (const auto& p : gamma_pulses) g.push_back(pulse_json(p));
  j["potential"] = {{"a0_pulses", a0}, {"a1_pulses", a1}, {"gamma_pulses", g}};
  json k = {{"mass", kernel.mass},
            {"coupling", kernel.coupling},
            {"surface_time", surface_json(kernel.surface_time)},
            {"components", components_json(kernel)},
            {"cutoffs", cutoffs},
            {"samples", sampler.samples},
            {"seed", sampler.seed},
            {"stderr_budget", sampler.stderr_budget},
            {"thresholds",
             {{"divergent_slope", thresholds.divergent_slope},
              {"convergent_growth", thresholds.convergent_growth}}}};
  if (kernel_b) k["components_b"] = components_json(*kernel_b);
  j["kernel3p1"] = k;
  json pts = json::array();
  for (const auto& p : current_points) pts.push_back({p.t, p.x});
  j["observables"] = {{"max_pairs", max_pairs},
                      {"channel_cap", channel_cap},
                      {"phase_functional",
                       {{"c", phase.c},
                        {"j0", pulse_json(phase.profile[0])},
                        {"j1", pulse_json(phase.profile[1])}}},
                      {"current", {{"points", pts}, {"mu", current_mu}, {"epsilon", current_epsilon}}}};
  json pol = {{"lambda_sign", lambda_sign}};
  if (!probe_n.empty()) pol["N_values"] = probe_n;
  if (probe_time) pol["probe_time"] = *probe_time;
  j["polarization"] = pol;
  j["tolerances"] = {{"unitarity", tolerances.unitarity},
                     {"max_condition", tolerances.max_condition},
                     {"doubling_ratio", tolerances.doubling_ratio},
                     {"current_rel", tolerances.current_rel},
                     {"current_abs", tolerances.current_abs}};
  if (sweep)
    j["sweep"] = {{"experiment", sweep->experiment}, {"axis", sweep->axis}, {"values", sweep->values}};
  return j.dump();
}

RunConfig with_axis_value(const RunConfig& cfg, const std::string& axis, double value) {
  RunConfig out = cfg;
  if (!std::isfinite(value)) throw InvalidInput("values", "sweep values must be finite");
  if (axis == "N") {
    if (value != std::floor(value) || value < 1 || value > 1 << 20)
      throw InvalidInput("N", "sweep value must be an integer grid size");
    const int n = static_cast<int>(value);
    // keep dt / dx fixed so that the time step resolves the new cutoff
    out.lattice.nsteps = std::max(1, static_cast<int>(std::lround(
                                         static_cast<double>(cfg.lattice.nsteps) * n / cfg.lattice.n)));
    out.lattice.n = n;
    out.probe_n.clear();
  } else if (axis == "e") {
    out.lattice.coupling = value;
    out.kernel.coupling = value;
    if (out.kernel_b) out.kernel_b->coupling = value;
  } else if (axis == "amplitude") {
    for (auto* v : {&out.a0_pulses, &out.a1_pulses, &out.gamma_pulses})
      for (auto& p : *v) p.amplitude *= value;
    for (auto& c : out.kernel.components) c.amplitude *= value;
    if (out.kernel_b)
      for (auto& c : out.kernel_b->components) c.amplitude *= value;
  } else if (axis == "Lambda" || axis == "Λ") {
    if (!(value > 0.0)) throw InvalidInput("Lambda", "cutoff must be positive");
    out.cutoffs = {value};
  } else {
    throw InvalidInput("axis", "unknown sweep axis '" + axis + "' (N, e, amplitude, Lambda)");
  }
  out.lattice.validate();
  (void)out.potential();
  return out;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace diracsea::config
