#pragma once

// Config ingestion, mode dispatch and structured output for the fqc tool.
//
// Config documents are JSON objects tagged "schema": "fqc-config/1":
//
//   {
//     "schema": "fqc-config/1",
//     "mode": "analytic" | "simulate" | "oracle" | "phases" | "sweep",
//     "state": {"alpha": [re, im], "beta": [re, im], "gamma": [re, im], "delta": [re, im]},
//     "density_matrix": [[[re, im] x 4] x 4],          (oracle mode only)
//     "simulation": {"trials": 100000, "seed": 0, "workers": 0},
//     "imperfections": {"eta_a": 1, "sigma": 0, "leak_model": "single" | "compounded"},
//     "cavity": {"omega_c": .., "omega_p": .., "omega_0": .., "kappa": .., "gamma": .., "lambda": ..},
//     "sweep": {"axis": "sigma" | "eta_a" | "trials" | "theta", "start": .., "stop": .., "steps": ..},
//     "output": "path"
//   }
//
// Records are JSON objects tagged "schema": "fqc-record/1" whose "input"
// member is the canonical form of the config that produced them.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fqc/errors.hpp"
#include "fqc/estimator.hpp"
#include "fqc/faraday.hpp"
#include "fqc/imperfect.hpp"
#include "fqc/oracle.hpp"
#include "fqc/protocol.hpp"

namespace fqc {

inline constexpr std::string_view tool_version = "1.0.0";
inline constexpr std::string_view config_schema = "fqc-config/1";
inline constexpr std::string_view record_schema = "fqc-record/1";

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_failure = 3;
inline constexpr int exit_inconsistent_observation = 4;

enum class Mode { analytic, simulate, oracle, phases, sweep };
enum class SweepAxis { sigma, eta_a, trials, theta };

NLOHMANN_JSON_SERIALIZE_ENUM(Mode, {{Mode::analytic, "analytic"},
                                    {Mode::simulate, "simulate"},
                                    {Mode::oracle, "oracle"},
                                    {Mode::phases, "phases"},
                                    {Mode::sweep, "sweep"}})
NLOHMANN_JSON_SERIALIZE_ENUM(SweepAxis, {{SweepAxis::sigma, "sigma"},
                                         {SweepAxis::eta_a, "eta_a"},
                                         {SweepAxis::trials, "trials"},
                                         {SweepAxis::theta, "theta"}})
NLOHMANN_JSON_SERIALIZE_ENUM(LeakModel, {{LeakModel::single, "single"},
                                         {LeakModel::compounded, "compounded"}})

struct SweepSpec {
  SweepAxis axis = SweepAxis::sigma;
  double start = 0.0;
  double stop = 0.0;
  unsigned steps = 2;

  double value(unsigned k) const {
    return start + (stop - start) * static_cast<double>(k) / static_cast<double>(steps - 1);
  }
};

struct RunConfig {
  Mode mode = Mode::analytic;
  std::optional<TwoPhotonState> state;
  std::optional<Matrix4> density_matrix;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  ImperfectionParams imperfections;
  std::optional<CavityParams> cavity;
  std::optional<SweepSpec> sweep;
  std::string output;
  // Non-fatal remarks collected during ingestion (auto-normalization etc.).
  std::vector<std::string> notices;
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json &obj, std::string_view where,
                         std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object())
    throw ConfigError("'" + std::string(where) + "' must be an object");
  for (const auto &[key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed)
      ok = ok || key == a;
    if (!ok)
      throw ConfigError("unknown key '" + std::string(where) + "." + key + "'");
  }
}

inline double get_number(const json &obj, std::string_view key, std::string_view where) {
  const json &v = obj.at(std::string(key));
  if (!v.is_number())
    throw ConfigError("'" + std::string(where) + "." + std::string(key) + "' must be a number");
  return v.get<double>();
}

inline std::uint64_t get_count(const json &obj, std::string_view key, std::string_view where) {
  const json &v = obj.at(std::string(key));
  if (v.is_number_unsigned())
    return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  // Accept 1e5 and friends when they are exact integers.
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d <= 9007199254740992.0 && std::floor(d) == d)
      return static_cast<std::uint64_t>(d);
  }
  throw ConfigError("'" + std::string(where) + "." + std::string(key) +
                    "' must be a non-negative integer");
}

inline Complex get_complex(const json &v, const std::string &where) {
  if (v.is_number())
    return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("'" + where + "' must be a number or a [re, im] pair");
}

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

} // namespace detail

// Normalizes a user-supplied state: silently within 1e-6 of unit norm,
// with a notice within 1e-3, rejected beyond.
inline TwoPhotonState ingest_state(const TwoPhotonState &raw, std::vector<std::string> &notices) {
  const double norm = std::sqrt(raw.norm_squared());
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-3)
    throw ConfigError("state amplitudes have norm " + std::to_string(norm) +
                      "; expected 1 within 1e-3");
  if (std::abs(norm - 1.0) > 1e-6)
    notices.push_back("state amplitudes had norm " + std::to_string(norm) +
                      "; renormalized");
  return raw.normalized();
}

inline void validate(RunConfig &cfg) {
  if (cfg.state)
    cfg.state = ingest_state(*cfg.state, cfg.notices);
  if (cfg.trials < 1)
    throw ConfigError("'simulation.trials' must be at least 1");
  cfg.imperfections.validate();
  for (auto &w : cfg.imperfections.warnings())
    cfg.notices.push_back(w);
  if (cfg.cavity)
    cfg.cavity->validate();
  if (cfg.density_matrix)
    DensityMatrix check(*cfg.density_matrix);

  const bool theta_sweep = cfg.sweep && cfg.sweep->axis == SweepAxis::theta;
  switch (cfg.mode) {
  case Mode::analytic:
  case Mode::simulate:
    if (!cfg.state)
      throw ConfigError("missing key 'state' (required in this mode)");
    break;
  case Mode::oracle:
    if (!cfg.state && !cfg.density_matrix)
      throw ConfigError("oracle mode needs 'state' or 'density_matrix'");
    break;
  case Mode::phases:
    break;
  case Mode::sweep:
    if (!cfg.sweep)
      throw ConfigError("missing key 'sweep' (required in sweep mode)");
    if (cfg.sweep->steps < 2)
      throw ConfigError("'sweep.steps' must be at least 2");
    if (!theta_sweep && !cfg.state)
      throw ConfigError("missing key 'state' (required unless sweeping theta)");
    for (unsigned k = 0; k < cfg.sweep->steps; ++k) {
      const double v = cfg.sweep->value(k);
      if (cfg.sweep->axis == SweepAxis::eta_a && !(v >= 0.0 && v <= 1.0))
        throw ConfigError("'sweep' range for eta_a must lie in [0, 1]");
      if (cfg.sweep->axis == SweepAxis::trials && !(v >= 1.0))
        throw ConfigError("'sweep' range for trials must be >= 1");
    }
    break;
  }
}

inline RunConfig parse_config(const nlohmann::json &doc) {
  using detail::json;
  RunConfig cfg;
  try {
    detail::require_keys(doc, "config",
                         {"schema", "mode", "state", "density_matrix", "simulation",
                          "imperfections", "cavity", "sweep", "output"});
    if (doc.contains("schema") && doc.at("schema") != config_schema)
      throw ConfigError("'schema' must be \"" + std::string(config_schema) + "\"");
    if (!doc.contains("mode"))
      throw ConfigError("missing key 'mode'");
    if (!doc.at("mode").is_string())
      throw ConfigError("'mode' must be a string");
    cfg.mode = doc.at("mode").get<Mode>();
    if (doc.at("mode") != json(cfg.mode))
      throw ConfigError("unknown mode '" + doc.at("mode").get<std::string>() + "'");

    if (doc.contains("state")) {
      const json &s = doc.at("state");
      detail::require_keys(s, "state", {"alpha", "beta", "gamma", "delta"});
      auto amp = [&](const char *k) {
        return s.contains(k) ? detail::get_complex(s.at(k), std::string("state.") + k) : Complex{};
      };
      cfg.state = TwoPhotonState{amp("alpha"), amp("beta"), amp("gamma"), amp("delta")};
    }

    if (doc.contains("density_matrix")) {
      const json &m = doc.at("density_matrix");
      if (!m.is_array() || m.size() != 4)
        throw ConfigError("'density_matrix' must be a 4x4 array");
      Matrix4 rho;
      for (int r = 0; r < 4; ++r) {
        const json &row = m.at(static_cast<std::size_t>(r));
        if (!row.is_array() || row.size() != 4)
          throw ConfigError("'density_matrix' must be a 4x4 array");
        for (int c = 0; c < 4; ++c)
          rho(r, c) = detail::get_complex(row.at(static_cast<std::size_t>(c)),
                                          "density_matrix[" + std::to_string(r) + "][" +
                                              std::to_string(c) + "]");
      }
      cfg.density_matrix = rho;
    }

    if (doc.contains("simulation")) {
      const json &s = doc.at("simulation");
      detail::require_keys(s, "simulation", {"trials", "seed", "workers"});
      if (s.contains("trials"))
        cfg.trials = detail::get_count(s, "trials", "simulation");
      if (s.contains("seed"))
        cfg.seed = detail::get_count(s, "seed", "simulation");
      if (s.contains("workers"))
        cfg.workers = static_cast<unsigned>(detail::get_count(s, "workers", "simulation"));
    }

    if (doc.contains("imperfections")) {
      const json &s = doc.at("imperfections");
      detail::require_keys(s, "imperfections", {"eta_a", "sigma", "leak_model"});
      if (s.contains("eta_a"))
        cfg.imperfections.eta_a = detail::get_number(s, "eta_a", "imperfections");
      if (s.contains("sigma"))
        cfg.imperfections.sigma = detail::get_number(s, "sigma", "imperfections");
      if (s.contains("leak_model")) {
        const json &lm = s.at("leak_model");
        cfg.imperfections.leak_model = lm.get<LeakModel>();
        if (!lm.is_string() || lm != json(cfg.imperfections.leak_model))
          throw ConfigError("'imperfections.leak_model' must be \"single\" or \"compounded\"");
      }
    }

    if (doc.contains("cavity")) {
      const json &s = doc.at("cavity");
      detail::require_keys(s, "cavity",
                           {"omega_c", "omega_p", "omega_0", "kappa", "gamma", "lambda"});
      CavityParams p = CavityParams::rubidium87();
      auto set = [&](const char *k, double &field) {
        if (s.contains(k))
          field = detail::get_number(s, k, "cavity");
      };
      set("omega_c", p.omega_c);
      set("omega_p", p.omega_p);
      set("omega_0", p.omega_0);
      set("kappa", p.kappa);
      set("gamma", p.gamma);
      set("lambda", p.lambda);
      cfg.cavity = p;
    }

    if (doc.contains("sweep")) {
      const json &s = doc.at("sweep");
      detail::require_keys(s, "sweep", {"axis", "start", "stop", "steps"});
      for (auto k : {"axis", "start", "stop", "steps"})
        if (!s.contains(k))
          throw ConfigError(std::string("missing key 'sweep.") + k + "'");
      SweepSpec sw;
      sw.axis = s.at("axis").get<SweepAxis>();
      if (!s.at("axis").is_string() || s.at("axis") != json(sw.axis))
        throw ConfigError("'sweep.axis' must be one of sigma, eta_a, trials, theta");
      sw.start = detail::get_number(s, "start", "sweep");
      sw.stop = detail::get_number(s, "stop", "sweep");
      sw.steps = static_cast<unsigned>(detail::get_count(s, "steps", "sweep"));
      cfg.sweep = sw;
    }

    if (doc.contains("output")) {
      if (!doc.at("output").is_string())
        throw ConfigError("'output' must be a string");
      cfg.output = doc.at("output").get<std::string>();
    }
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

inline RunConfig parse_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline RunConfig parse_config(const char *text) { return parse_config(std::string_view(text)); }

// Canonical config document; parse_config(to_json(c)) reproduces c.
inline nlohmann::json to_json(const RunConfig &cfg) {
  using detail::json;
  json doc = json::object();
  doc["schema"] = config_schema;
  doc["mode"] = cfg.mode;
  if (cfg.state)
    doc["state"] = {{"alpha", detail::complex_json(cfg.state->alpha)},
                    {"beta", detail::complex_json(cfg.state->beta)},
                    {"gamma", detail::complex_json(cfg.state->gamma)},
                    {"delta", detail::complex_json(cfg.state->delta)}};
  if (cfg.density_matrix) {
    json m = json::array();
    for (int r = 0; r < 4; ++r) {
      json row = json::array();
      for (int c = 0; c < 4; ++c)
        row.push_back(detail::complex_json((*cfg.density_matrix)(r, c)));
      m.push_back(row);
    }
    doc["density_matrix"] = m;
  }
  doc["simulation"] = {{"trials", cfg.trials}, {"seed", cfg.seed}, {"workers", cfg.workers}};
  doc["imperfections"] = {{"eta_a", cfg.imperfections.eta_a},
                          {"sigma", cfg.imperfections.sigma},
                          {"leak_model", cfg.imperfections.leak_model}};
  if (cfg.cavity)
    doc["cavity"] = {{"omega_c", cfg.cavity->omega_c}, {"omega_p", cfg.cavity->omega_p},
                     {"omega_0", cfg.cavity->omega_0}, {"kappa", cfg.cavity->kappa},
                     {"gamma", cfg.cavity->gamma},     {"lambda", cfg.cavity->lambda}};
  if (cfg.sweep)
    doc["sweep"] = {{"axis", cfg.sweep->axis},
                    {"start", cfg.sweep->start},
                    {"stop", cfg.sweep->stop},
                    {"steps", cfg.sweep->steps}};
  if (!cfg.output.empty())
    doc["output"] = cfg.output;
  return doc;
}

namespace detail {

inline TrialConfig trial_config(const RunConfig &cfg, const TwoPhotonState &state) {
  TrialConfig t;
  t.n_trials = cfg.trials;
  t.master_seed = cfg.seed;
  t.state = state;
  t.phases = perturbed_phases(cfg.imperfections.sigma);
  t.imperfections = cfg.imperfections;
  t.workers = cfg.workers;
  return t;
}

inline json estimate_json(const EstimateReport &r) {
  return {{"trials", r.trials},
          {"stage1_successes", r.stage1_successes},
          {"stage2_successes", r.stage2_successes},
          {"p1_hat", r.p1_hat},
          {"p2_hat", r.p2_hat},
          {"p_total_hat", r.p_total_hat},
          {"c_hat", r.c_hat},
          {"c_low", r.c_low},
          {"c_high", r.c_high},
          {"corrected_c_hat", r.corrected_c_hat}};
}

inline json analytic_result(const RunConfig &cfg) {
  const TwoPhotonState &s = *cfg.state;
  const ImperfectionParams &imp = cfg.imperfections;
  const ProtocolOutcome o = run_analytic(s, perturbed_phases(imp.sigma));
  const ProtocolOutcome ideal = closed_form_outcome(s);
  const double p1_obs = imp.eta_a * imp.eta_a * o.p1;
  const double p2_obs = imp.eta_a * o.p2;
  json result = {
      {"p1", o.p1},
      {"p2", o.p2},
      {"p_total", o.p_total},
      {"c_estimate", o.c_estimate},
      {"p1_observed", p1_obs},
      {"p2_observed", p2_obs},
      {"p_total_observed", detection_scaled_ptotal(o.p_total, imp.eta_a)},
      {"c_corrected", recover_concurrence(p1_obs, p2_obs, imp)},
      {"oracle_c", concurrence_pure(s)},
      {"closed_form", {{"p1", ideal.p1}, {"p2", ideal.p2}, {"p_total", ideal.p_total}}},
  };
  result["final_state_fidelity"] =
      o.final_state ? json(fidelity(odd_parity_target(), *o.final_state)) : json(nullptr);
  return result;
}

inline json simulate_result(const RunConfig &cfg) {
  const TwoPhotonState &s = *cfg.state;
  json result = estimate_json(estimate(trial_config(cfg, s)));
  const ProtocolOutcome o = run_analytic(s, perturbed_phases(cfg.imperfections.sigma));
  result["expected_p_total_observed"] = detection_scaled_ptotal(o.p_total, cfg.imperfections.eta_a);
  result["oracle_c"] = concurrence_pure(s);
  return result;
}

inline json oracle_result(const RunConfig &cfg) {
  json result = json::object();
  if (cfg.state) {
    const Ket4 psi = as_ket(*cfg.state);
    result["concurrence_pure"] = concurrence_pure(*cfg.state);
    result["concurrence_pure_general"] = concurrence_pure_general(psi);
    result["concurrence_mixed_projector"] = concurrence_mixed(DensityMatrix::pure(psi));
  }
  if (cfg.density_matrix)
    result["concurrence_mixed"] = concurrence_mixed(DensityMatrix(*cfg.density_matrix));
  return result;
}

inline json phases_result(const RunConfig &cfg) {
  const CavityParams p = cfg.cavity.value_or(CavityParams::rubidium87());
  const Complex r = reflection_coefficient(p);
  const Complex r0 = empty_cavity_coefficient(p);
  const FaradayPhases ph = phases_from_params(p);
  return {{"cavity",
           {{"omega_c", p.omega_c}, {"omega_p", p.omega_p}, {"omega_0", p.omega_0},
            {"kappa", p.kappa}, {"gamma", p.gamma}, {"lambda", p.lambda}}},
          {"r", complex_json(r)},
          {"r0", complex_json(r0)},
          {"phi", ph.phi},
          {"phi0", ph.phi0},
          {"rotation", ph.rotation()},
          {"r_modulus", ph.r_modulus},
          {"r0_modulus", ph.r0_modulus}};
}

inline std::string format_number(double v) {
  if (!std::isfinite(v))
    throw NumericalFailure("non-finite value in sweep table");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline void write_sweep(const RunConfig &cfg, std::ostream &out) {
  const SweepSpec &sw = *cfg.sweep;
  out << "axis_value,p1,p2,p_total,c_est,c_corrected,oracle_c,ci_low,ci_high\n";
  for (unsigned k = 0; k < sw.steps; ++k) {
    const double v = sw.value(k);
    RunConfig point = cfg;
    TwoPhotonState state = cfg.state.value_or(TwoPhotonState::bell());
    switch (sw.axis) {
    case SweepAxis::sigma: point.imperfections.sigma = v; break;
    case SweepAxis::eta_a: point.imperfections.eta_a = v; break;
    case SweepAxis::trials: point.trials = static_cast<std::uint64_t>(std::llround(v)); break;
    case SweepAxis::theta: state = TwoPhotonState::mixing_angle(v); break;
    }
    const EstimateReport r = estimate(trial_config(point, state));
    const double row[] = {v,       r.p1_hat,          r.p2_hat,
                          r.p_total_hat, r.c_hat, r.corrected_c_hat,
                          concurrence_pure(state), r.c_low, r.c_high};
    for (std::size_t i = 0; i < std::size(row); ++i)
      out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

inline void emit(const RunConfig &cfg, std::ostream &out) {
  if (cfg.mode == Mode::sweep) {
    write_sweep(cfg, out);
    return;
  }
  json result;
  switch (cfg.mode) {
  case Mode::analytic: result = analytic_result(cfg); break;
  case Mode::simulate: result = simulate_result(cfg); break;
  case Mode::oracle: result = oracle_result(cfg); break;
  case Mode::phases: result = phases_result(cfg); break;
  case Mode::sweep: break;
  }
  json record = {{"schema", record_schema},
                 {"mode", cfg.mode},
                 {"metadata",
                  {{"tool_version", tool_version}, {"seed", cfg.seed}, {"trials", cfg.trials}}},
                 {"input", to_json(cfg)},
                 {"result", result}};
  out << record.dump(2) << '\n';
}

} // namespace detail

// Runs one configuration, writing the record (or sweep table) to `out`, or
// to cfg.output when set. Returns the process exit status.
inline int run(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  for (const auto &n : cfg.notices)
    err << "notice: " << n << '\n';
  try {
    if (cfg.output.empty()) {
      detail::emit(cfg, out);
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file)
        throw ConfigError("cannot open output file '" + cfg.output + "'");
      detail::emit(cfg, file);
    }
    return exit_ok;
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const NumericalFailure &e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return exit_numerical_failure;
  } catch (const InconsistentObservation &e) {
    err << "error: inconsistent observation: " << e.what() << '\n';
    return exit_inconsistent_observation;
  }
}

} // namespace fqc
