#include "ristrain/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace ristrain {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void schema_error(const std::string& what) {
  throw ConfigError(ConfigError::Kind::schema, what);
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    schema_error("key '" + key + "': '" + raw + "' is not a valid number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) schema_error("key '" + key + "' must be finite");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  schema_error("key '" + key + "': '" + raw + "' is not a boolean");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(trim(item));
  return out;
}

using Setter = std::function<void(CliConfig&, const std::string& key, const std::string& value)>;

Setter dbl(double ScenarioConfig::*field) {
  return [field](CliConfig& c, const std::string& k, const std::string& v) {
    c.plan.scenario.*field = parse_number<double>(k, v);
  };
}

Setter deg(double ScenarioConfig::*field) {
  return [field](CliConfig& c, const std::string& k, const std::string& v) {
    c.plan.scenario.*field = deg_to_rad(parse_number<double>(k, v));
  };
}

Setter count(int ScenarioConfig::*field) {
  return [field](CliConfig& c, const std::string& k, const std::string& v) {
    const int n = parse_number<int>(k, v);
    if (n < 1) schema_error("key '" + k + "' must be >= 1");
    c.plan.scenario.*field = n;
  };
}

Setter search_m(SearchConfig ExperimentPlan::*node) {
  return [node](CliConfig& c, const std::string& k, const std::string& v) {
    (c.plan.*node).beams_per_sweep = parse_number<int>(k, v);
  };
}

Setter search_t(SearchConfig ExperimentPlan::*node) {
  return [node](CliConfig& c, const std::string& k, const std::string& v) {
    const int t = parse_number<int>(k, v);
    if (t < 0) schema_error("key '" + k + "' must be >= 0 (0 selects T = L)");
    (c.plan.*node).refine_bins = t;
  };
}

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> table = {
      {"scenario.carrier_freq_hz", dbl(&ScenarioConfig::carrier_freq_hz)},
      {"scenario.d_ui", dbl(&ScenarioConfig::d_ui)},
      {"scenario.d_ia", dbl(&ScenarioConfig::d_ia)},
      {"scenario.zeta0_db", dbl(&ScenarioConfig::zeta0_db)},
      {"scenario.delta_ui", dbl(&ScenarioConfig::delta_ui)},
      {"scenario.delta_ia", dbl(&ScenarioConfig::delta_ia)},
      {"scenario.kappa_ui_db", dbl(&ScenarioConfig::kappa_ui_db)},
      {"scenario.kappa_ia_db", dbl(&ScenarioConfig::kappa_ia_db)},
      {"scenario.noise_power_dbm", dbl(&ScenarioConfig::noise_power_dbm)},
      {"scenario.p_per_w", dbl(&ScenarioConfig::p_per_w)},
      {"scenario.n_t", count(&ScenarioConfig::n_t)},
      {"scenario.n_r", count(&ScenarioConfig::n_r)},
      {"scenario.n_h", count(&ScenarioConfig::n_h)},
      {"scenario.n_v", count(&ScenarioConfig::n_v)},
      {"scenario.n_tact", count(&ScenarioConfig::n_tact)},
      {"scenario.theta_u_deg", deg(&ScenarioConfig::theta_u)},
      {"scenario.theta_i_deg", deg(&ScenarioConfig::theta_i)},
      {"scenario.vartheta_i_deg", deg(&ScenarioConfig::vartheta_i)},
      {"scenario.theta_r_deg", deg(&ScenarioConfig::theta_r)},
      {"scenario.vartheta_r_deg", deg(&ScenarioConfig::vartheta_r)},
      {"scenario.theta_a_deg", deg(&ScenarioConfig::theta_a)},
      {"ris.m", search_m(&ExperimentPlan::ris_search)},
      {"ris.t", search_t(&ExperimentPlan::ris_search)},
      {"user.m", search_m(&ExperimentPlan::user_search)},
      {"user.t", search_t(&ExperimentPlan::user_search)},
      {"experiment.trials",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         c.plan.trials = parse_number<int>(k, v);
         if (c.plan.trials < 1) schema_error("key '" + k + "' must be >= 1");
       }},
      {"experiment.seed",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         c.plan.master_seed = parse_number<std::uint64_t>(k, v);
       }},
      {"experiment.snr_db",
       [](CliConfig& c, const std::string&, const std::string& v) {
         c.plan.snr_db = parse_snr_points(v);
       }},
      {"experiment.schemes",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         c.plan.schemes.clear();
         for (const auto& name : split(v, ',')) {
           if (name.empty()) continue;
           try {
             c.plan.schemes.push_back(parse_scheme(name));
           } catch (const std::invalid_argument& e) {
             schema_error("key '" + k + "': " + e.what());
           }
         }
       }},
      {"experiment.truth",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "continuous") {
           c.plan.truth = TruthModel::continuous;
         } else if (t == "grid") {
           c.plan.truth = TruthModel::grid;
         } else {
           schema_error("key '" + k + "' must be 'continuous' or 'grid'");
         }
       }},
      {"experiment.noise",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         c.plan.noise_enabled = parse_bool(k, v);
       }},
      {"experiment.workers",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         c.workers = parse_number<unsigned>(k, v);
       }},
      {"output.path",
       [](CliConfig& c, const std::string&, const std::string& v) { c.output = trim(v); }},
      {"output.format",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         const std::string f = trim(v);
         if (f == "csv") {
           c.format = ReportFormat::csv;
         } else if (f == "json") {
           c.format = ReportFormat::json;
         } else {
           schema_error("key '" + k + "' must be 'csv' or 'json'");
         }
       }},
      {"output.verbose",
       [](CliConfig& c, const std::string& k, const std::string& v) {
         c.verbose = parse_bool(k, v);
       }},
  };
  return table;
}

CliConfig defaults() {
  CliConfig c;
  c.plan.ris_search.beams_per_sweep = 8;
  c.plan.user_search.beams_per_sweep = 8;
  c.plan.trials = 7500;
  c.plan.snr_db = parse_snr_points("-20:2.5:40");
  return c;
}

void check_codebook(int n, const SearchConfig& s, const char* node) {
  try {
    s.validate(n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ConfigError::Kind::codebook, std::string("[") + node + "] " + e.what());
  }
}

}  // namespace

std::vector<double> parse_snr_points(const std::string& spec) {
  std::vector<double> out;
  const std::string s = trim(spec);
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) schema_error("snr_db range must be start:step:stop");
    const double start = parse_number<double>("snr_db", parts[0]);
    const double step = parse_number<double>("snr_db", parts[1]);
    const double stop = parse_number<double>("snr_db", parts[2]);
    if (!(step > 0) || stop < start) schema_error("snr_db range needs step > 0 and stop >= start");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(start + i * step);
  } else {
    for (const auto& item : split(s, ',')) {
      if (!item.empty()) out.push_back(parse_number<double>("snr_db", item));
    }
  }
  if (out.empty()) schema_error("snr_db must list at least one point");
  return out;
}

CliConfig parse_config_text(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(ConfigError::Kind::syntax, std::string("config syntax: ") + e.what());
  }

  CliConfig cfg = defaults();
  const auto& table = schema();
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      schema_error("key '" + section + "' must appear inside a [section]");
    }
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      if (it == table.end()) schema_error("unknown key '" + key + "' in [" + section + "]");
      it->second(cfg, full, node.data());
    }
  }

  try {
    cfg.plan.scenario.validate();
  } catch (const std::invalid_argument& e) {
    schema_error(e.what());
  }
  check_codebook(cfg.plan.scenario.n_h, cfg.plan.ris_search, "ris");
  if (cfg.plan.scenario.n_t > 1) check_codebook(cfg.plan.scenario.n_t, cfg.plan.user_search, "user");
  try {
    cfg.plan.validate();
  } catch (const std::invalid_argument& e) {
    schema_error(e.what());
  }
  return cfg;
}

CliConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(ConfigError::Kind::missing_file, "config file not found: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace ristrain
