// fqc: concurrence measurement by Faraday-rotation parity checks.
//
//   fqc analytic --alpha 0.8 --delta 0.6
//   fqc simulate --config run.json --trials 1000000 --seed 7 --eta 0.66
//   fqc phases --omega-c 1e9 --omega-p 9.5e8 --omega-0 1e9 --kappa 1e8 --lambda 5e7
//
// Flags override the corresponding config-file values.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fqc/cli.hpp"

namespace {

using nlohmann::json;

// "re", "re,im" or "re:im"
json complex_flag(const std::string &text) {
  std::string s = text;
  for (char &c : s)
    if (c == ',' || c == ':')
      c = ' ';
  std::istringstream in(s);
  double re = 0.0, im = 0.0;
  if (!(in >> re))
    throw fqc::ConfigError("cannot parse complex amplitude '" + text + "'");
  if (!(in >> im))
    im = 0.0;
  std::string rest;
  if (in >> rest)
    throw fqc::ConfigError("cannot parse complex amplitude '" + text + "'");
  return json::array({re, im});
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Concurrence measurement by photonic Faraday rotation"};
  app.set_version_flag("--version", std::string(fqc::tool_version));

  std::optional<std::string> config_path, mode, out_path, leak_model;
  std::optional<std::string> alpha, beta, gamma, delta;
  std::optional<std::uint64_t> trials, seed;
  std::optional<unsigned> workers;
  std::optional<double> eta, sigma;
  std::optional<double> omega_c, omega_p, omega_0, kappa, atom_gamma, lambda;

  app.add_option("mode,--mode", mode, "analytic | simulate | oracle | phases | sweep");
  app.add_option("--config", config_path, "JSON config document")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "write the record or sweep table to this file");
  app.add_option("--trials", trials, "Monte Carlo trials");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--workers", workers, "worker threads (0 = all cores)");
  app.add_option("--eta", eta, "atom detection efficiency");
  app.add_option("--sigma", sigma, "Faraday rotation angle error (rad)");
  app.add_option("--leak-model", leak_model, "single | compounded");
  app.add_option("--alpha", alpha, "amplitude of |RR> as re,im");
  app.add_option("--beta", beta, "amplitude of |RL> as re,im");
  app.add_option("--gamma", gamma, "amplitude of |LR> as re,im");
  app.add_option("--delta", delta, "amplitude of |LL> as re,im");
  app.add_option("--omega-c", omega_c, "cavity frequency (rad/s)");
  app.add_option("--omega-p", omega_p, "photon frequency (rad/s)");
  app.add_option("--omega-0", omega_0, "atomic frequency (rad/s)");
  app.add_option("--kappa", kappa, "cavity damping rate (rad/s)");
  app.add_option("--atom-gamma", atom_gamma, "atomic decay rate (rad/s)");
  app.add_option("--lambda", lambda, "atom-field coupling (rad/s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fqc::exit_config_error;
  }

  fqc::RunConfig cfg;
  try {
    json doc = json::object();
    if (config_path) {
      std::ifstream in(*config_path);
      try {
        doc = json::parse(in);
      } catch (const json::parse_error &e) {
        throw fqc::ConfigError("config is not valid JSON: " + std::string(e.what()));
      }
    }
    if (mode)
      doc["mode"] = *mode;
    if (out_path)
      doc["output"] = *out_path;
    if (trials)
      doc["simulation"]["trials"] = *trials;
    if (seed)
      doc["simulation"]["seed"] = *seed;
    if (workers)
      doc["simulation"]["workers"] = *workers;
    if (eta)
      doc["imperfections"]["eta_a"] = *eta;
    if (sigma)
      doc["imperfections"]["sigma"] = *sigma;
    if (leak_model)
      doc["imperfections"]["leak_model"] = *leak_model;

    // Amplitude flags replace the whole state; unspecified amplitudes are 0.
    if (alpha || beta || gamma || delta) {
      json state = json::object();
      for (auto [key, flag] : {std::pair{"alpha", &alpha}, std::pair{"beta", &beta},
                               std::pair{"gamma", &gamma}, std::pair{"delta", &delta}})
        if (*flag)
          state[key] = complex_flag(**flag);
      doc["state"] = state;
    }

    for (auto [key, flag] : {std::pair{"omega_c", &omega_c}, std::pair{"omega_p", &omega_p},
                             std::pair{"omega_0", &omega_0}, std::pair{"kappa", &kappa},
                             std::pair{"gamma", &atom_gamma}, std::pair{"lambda", &lambda}})
      if (*flag)
        doc["cavity"][key] = **flag;

    cfg = fqc::parse_config(doc);
  } catch (const fqc::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return fqc::exit_config_error;
  }

  return fqc::run(cfg, std::cout, std::cerr);
}
