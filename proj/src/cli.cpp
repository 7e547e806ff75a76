#include "prospect_pricing/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace pricing::cli {

namespace {

using nlohmann::json;

struct Key {
  std::function<void(Config&, const json&)> read;
  std::function<json(const Config&)> write;
};

Key number_key(double Config::*field) {
  return {[field](Config& c, const json& v) {
            if (!v.is_number()) throw ConfigError("expected a number");
            c.*field = v.get<double>();
          },
          [field](const Config& c) { return json(c.*field); }};
}

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table = [] {
    std::map<std::string, Key> k;
    k["tx_power_dbm"] = number_key(&Config::tx_power_dbm);
    k["antenna_constant_db"] = number_key(&Config::antenna_constant_db);
    k["noise_psd_dbm_per_hz"] = number_key(&Config::noise_psd_dbm_per_hz);
    k["reference_distance_m"] = number_key(&Config::reference_distance_m);
    k["pathloss_exponent"] = number_key(&Config::pathloss_exponent);
    k["shadowing_sigma_db"] = number_key(&Config::shadowing_sigma_db);
    k["cell_radius_m"] = number_key(&Config::cell_radius_m);
    k["pricing_coefficient"] = number_key(&Config::pricing_coefficient);
    k["pricing_exponent"] = number_key(&Config::pricing_exponent);
    k["benefit_coefficient"] = number_key(&Config::benefit_coefficient);
    k["benefit_exponent"] = number_key(&Config::benefit_exponent);
    k["c1"] = number_key(&Config::c1);
    k["c3"] = number_key(&Config::c3);
    k["bandwidth_margin"] = number_key(&Config::bandwidth_margin);
    k["total_bandwidth_hz"] = number_key(&Config::total_bandwidth_hz);
    k["user_count"] = {[](Config& c, const json& v) {
                         if (!v.is_number_unsigned()) throw ConfigError("expected a positive integer");
                         c.user_count = v.get<std::size_t>();
                       },
                       [](const Config& c) { return json(c.user_count); }};
    k["seed"] = {[](Config& c, const json& v) {
                   if (!v.is_number_unsigned()) throw ConfigError("expected an unsigned integer");
                   c.seed = v.get<std::uint64_t>();
                 },
                 [](const Config& c) { return json(c.seed); }};
    k["bandwidth_rule"] = {[](Config& c, const json& v) {
                             const std::string s = v.is_string() ? v.get<std::string>() : "";
                             if (s == "margin") {
                               c.bandwidth_rule = experiments::BandwidthRule::Margin;
                             } else if (s == "absolute") {
                               c.bandwidth_rule = experiments::BandwidthRule::Absolute;
                             } else {
                               throw ConfigError("expected \"margin\" or \"absolute\"");
                             }
                           },
                           [](const Config& c) {
                             return json(c.bandwidth_rule == experiments::BandwidthRule::Margin
                                             ? "margin"
                                             : "absolute");
                           }};
    return k;
  }();
  return table;
}

struct Options {
  std::string config = "default";
  std::uint64_t seed = 0;
  double alpha_min = 0.80;
  double alpha_max = 1.00;
  double alpha_step = 0.01;
  std::string out;
  std::size_t max_drops = 3;
  std::string data;
};

// Writes the table to --out or to `out`.
int emit(const experiments::Table& table, const Options& o, std::ostream& out,
         std::ostream& err, int code) {
  if (o.out.empty()) {
    experiments::write_csv(out, table);
    return code;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) {
    err << "cannot write " << o.out << "\n";
    return kExitFailure;
  }
  experiments::write_csv(file, table);
  return code;
}

}  // namespace

Config parse_config_text(const std::string& text) {
  Config config;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return config;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [name, value] : doc.items()) {
    const auto it = keys().find(name);
    if (it == keys().end()) throw ConfigError("unknown config key '" + name + "'");
    try {
      it->second.read(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config key '" + name + "': " + e.what());
    }
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key '") + e.what() + "' has an invalid value");
  }
  return config;
}

Config parse_config(const std::string& path) {
  if (path == "default") return Config{};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string serialize_config(const Config& config) {
  json doc = json::object();
  for (const auto& [name, key] : keys()) doc[name] = key.write(config);
  return doc.dump(2) + "\n";
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probability-weighting studies for a wireless pricing game", "prospect_pricing"};
  app.require_subcommand(1);
  Options o;

  const auto scenario_options = [&](CLI::App* sc) {
    sc->add_option("--config", o.config, "JSON scenario file, or 'default'");
    sc->add_option("--seed", o.seed, "Placement seed (overrides the config)");
    sc->add_option("--out", o.out, "Output CSV (default: stdout)");
  };
  const auto sweep_options = [&](CLI::App* sc) {
    scenario_options(sc);
    sc->add_option("--alpha-min", o.alpha_min, "Smallest alpha");
    sc->add_option("--alpha-max", o.alpha_max, "Largest alpha");
    sc->add_option("--alpha-step", o.alpha_step, "Alpha increment");
  };

  CLI::App* ne = app.add_subcommand("ne-solve", "Solve the expected-utility equilibrium");
  scenario_options(ne);
  const std::vector<std::pair<std::string, experiments::Sweep>> sweeps{
      {"sweep-loss", experiments::Sweep::RevenueLoss},
      {"sweep-price", experiments::Sweep::Price},
      {"sweep-expansion", experiments::Sweep::Expansion},
      {"sweep-admission", experiments::Sweep::Admission},
      {"sweep-compare", experiments::Sweep::Comparison},
  };
  std::vector<CLI::App*> sweep_apps;
  for (const auto& [name, kind] : sweeps) {
    CLI::App* sc = app.add_subcommand(name, "Alpha sweep");
    sweep_options(sc);
    if (kind == experiments::Sweep::Admission)
      sc->add_option("--max-drops", o.max_drops, "Largest number of users to drop");
    sweep_apps.push_back(sc);
  }
  CLI::App* fit = app.add_subcommand("fit-pwf", "Fit a Prelec curve to psychophysics data");
  fit->add_option("--data", o.data, "Psychophysics CSV")->required();
  fit->add_option("--out", o.out, "Output CSV (default: stdout)");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit->parsed()) {
      const auto records = experiments::read_psychophysics_file(o.data);
      try {
        const experiments::PsychFit f = experiments::fit_psychophysics(records);
        return emit(experiments::psychophysics_table(records, f), o, out, err, kExitOk);
      } catch (const weighting::InsufficientData& e) {
        err << e.what() << "\n";
        return emit({experiments::psychophysics_header(), {}}, o, out, err, kExitInfeasible);
      }
    }

    Config config;
    try {
      config = parse_config(o.config);
    } catch (const ConfigError& e) {
      err << e.what() << "\n";
      return kExitConfig;
    }
    CLI::App* active = app.get_subcommands().front();
    if (active->count("--seed") > 0) config.seed = o.seed;

    if (ne->parsed()) {
      game::NashResult result;
      try {
        result = game::solve_nash(experiments::build_scenario(config));
      } catch (const experiments::NoEquilibrium& e) {
        err << e.what() << "\n";
      }
      return emit(experiments::ne_summary(result), o, out, err,
                  result.has_equilibrium ? kExitOk : kExitInfeasible);
    }

    for (std::size_t k = 0; k < sweeps.size(); ++k) {
      if (!sweep_apps[k]->parsed()) continue;
      const experiments::Sweep kind = sweeps[k].second;
      experiments::SweepSpec spec{o.alpha_min, o.alpha_max, o.alpha_step, config, o.max_drops};
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        err << e.what() << "\n" << sweep_apps[k]->help();
        return kExitUsage;
      }
      experiments::Study study;
      try {
        study = experiments::prepare_study(config);
      } catch (const experiments::NoEquilibrium& e) {
        err << e.what() << "\n";
        return emit({experiments::sweep_header(kind), {}}, o, out, err, kExitInfeasible);
      }
      if (kind == experiments::Sweep::Admission && spec.max_drops >= study.ne.served.size()) {
        err << "--max-drops must be smaller than the " << study.ne.served.size()
            << " served users\n";
        return kExitUsage;
      }
      return emit(experiments::run_sweep(kind, study, spec), o, out, err, kExitOk);
    }
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace pricing::cli
