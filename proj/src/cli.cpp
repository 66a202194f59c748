#include "xbell/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace xbell::cli {

namespace {

using nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected a number, got '" + value + "'");
  }
}

long parse_integer(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected an integer, got '" + value + "'");
  }
}

Miller parse_miller(const std::string& value) {
  std::vector<int> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(int(parse_integer("miller", trim(item))));
  if (parts.size() != 3) throw UsageError("--miller: expected h,k,l, got '" + value + "'");
  return {parts[0], parts[1], parts[2]};
}

// Number as it appears in CSV, so that JSON and CSV carry equal values.
double rounded(double v) { return std::stod(format_number(v)); }

ordered_json config_json(const RunConfig& c) {
  const auto& s = c.source;
  ordered_json j;
  j["pump_kev"] = rounded(s.pump_energy);
  j["fraction"] = rounded(s.signal_fraction);
  j["lattice_a"] = rounded(s.lattice_constant);
  j["miller"] = {s.miller.h, s.miller.k, s.miller.l};
  j["theta_min"] = rounded(s.theta_min);
  j["theta_max"] = rounded(s.theta_max);
  j["samples"] = s.samples;
  if (c.theta_p) j["theta_p"] = rounded(*c.theta_p);
  return j;
}

void emit_json(std::ostream& out, const RunConfig& c, ordered_json rows) {
  ordered_json doc;
  doc["config"] = config_json(c);
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void validate_run(const RunConfig& c) {
  try {
    validate(c.source);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
}

// Options shared by every subcommand, collected as raw strings so that the
// config file and the command line go through the same apply_setting path.
struct FlagSet {
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> values;
  std::string config_path;
  CLI::Option* config_option = nullptr;

  void add(CLI::App* app, const std::string& name, const std::string& help) {
    options.emplace_back(name, app->add_option("--" + name, values[name], help));
  }

  void attach(CLI::App* app, bool with_theta_p) {
    add(app, "pump-kev", "pump photon energy, keV");
    add(app, "fraction", "signal energy / pump energy, in (0,1)");
    add(app, "lattice-a", "cubic lattice constant, Angstrom");
    add(app, "miller", "reflection as h,k,l");
    add(app, "theta-min", "lower pump angle of the scan, rad");
    add(app, "theta-max", "upper pump angle of the scan, rad");
    add(app, "samples", "scan grid size");
    add(app, "format", "csv or json");
    add(app, "out", "output path (default: standard output)");
    if (with_theta_p) add(app, "theta-p", "pump angle, rad");
    config_option = app->add_option("--config", config_path, "file of key=value settings");
  }

  RunConfig resolve() const {
    RunConfig config;
    if (config_option && config_option->count() > 0)
      for (const auto& [k, v] : read_config_file(config_path)) apply_setting(config, k, v);
    for (const auto& [name, opt] : options)
      if (opt->count() > 0) apply_setting(config, name, values.at(name));
    return config;
  }
};

template <class Writer>
int write_output(const RunConfig& config, std::ostream& out, std::ostream& err, Writer&& writer) {
  if (config.output_path.empty()) {
    writer(out);
    out.flush();
    return out ? kSuccess : kIo;
  }
  std::ofstream file(config.output_path);
  if (!file) {
    err << "error: cannot open '" << config.output_path << "' for writing\n";
    return kIo;
  }
  writer(file);
  file.flush();
  if (!file) {
    err << "error: failed writing '" << config.output_path << "'\n";
    return kIo;
  }
  return kSuccess;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  for (auto& ch : key)
    if (ch == '_') ch = '-';
  const std::string value = trim(raw_value);

  if (key == "pump-kev") {
    c.source.pump_energy = parse_double(key, value);
  } else if (key == "fraction") {
    c.source.signal_fraction = parse_double(key, value);
  } else if (key == "lattice-a") {
    c.source.lattice_constant = parse_double(key, value);
  } else if (key == "miller") {
    c.source.miller = parse_miller(value);
  } else if (key == "theta-min") {
    c.source.theta_min = parse_double(key, value);
  } else if (key == "theta-max") {
    c.source.theta_max = parse_double(key, value);
  } else if (key == "samples") {
    const long n = parse_integer(key, value);
    if (n < 2) throw UsageError("--samples must be at least 2");
    c.source.samples = std::size_t(n);
  } else if (key == "format") {
    if (value == "csv")
      c.format = OutputFormat::Csv;
    else if (value == "json")
      c.format = OutputFormat::Json;
    else
      throw UsageError("--format must be csv or json, got '" + value + "'");
  } else if (key == "out") {
    c.output_path = value;
  } else if (key == "theta-p") {
    c.theta_p = parse_double(key, value);
  } else {
    throw UsageError("unknown setting '" + raw_key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

void write_pm(std::ostream& out, const RunConfig& config,
              const std::vector<PhaseMatchSolution>& solutions) {
  if (config.format == OutputFormat::Csv) {
    out << "theta_p,branch,theta_s,theta_i,residual\n";
    for (const auto& s : solutions)
      out << format_number(s.theta_p) << ',' << to_string(s.branch) << ','
          << format_number(s.theta_s) << ',' << format_number(s.theta_i) << ','
          << format_number(s.residual) << '\n';
    return;
  }
  ordered_json rows = ordered_json::array();
  for (const auto& s : solutions)
    rows.push_back({{"theta_p", rounded(s.theta_p)},
                    {"branch", to_string(s.branch)},
                    {"theta_s", rounded(s.theta_s)},
                    {"theta_i", rounded(s.theta_i)},
                    {"residual", rounded(s.residual)}});
  emit_json(out, config, std::move(rows));
}

void write_scan(std::ostream& out, const RunConfig& config, const std::array<ScanCurve, 2>& curves) {
  if (config.format == OutputFormat::Csv) {
    out << "theta_p,branch,feasible,a2,b2,c2,d2\n";
    for (const auto& curve : curves)
      for (const auto& s : curve.samples) {
        out << format_number(s.theta_p) << ',' << to_string(curve.branch) << ','
            << (s.feasible ? "true" : "false");
        if (s.feasible)
          out << ',' << format_number(s.a2) << ',' << format_number(s.b2) << ','
              << format_number(s.c2) << ',' << format_number(s.d2) << '\n';
        else
          out << ",,,,\n";
      }
    return;
  }
  ordered_json rows = ordered_json::array();
  for (const auto& curve : curves)
    for (const auto& s : curve.samples) {
      ordered_json row;
      row["theta_p"] = rounded(s.theta_p);
      row["branch"] = to_string(curve.branch);
      row["feasible"] = s.feasible;
      for (auto [name, v] : {std::pair{"a2", s.a2}, {"b2", s.b2}, {"c2", s.c2}, {"d2", s.d2}})
        row[name] = s.feasible ? ordered_json(rounded(v)) : ordered_json(nullptr);
      rows.push_back(std::move(row));
    }
  emit_json(out, config, std::move(rows));
}

void write_bell(std::ostream& out, const RunConfig& config, const std::vector<BellPoint>& points) {
  if (config.format == OutputFormat::Csv) {
    out << "state,theta_p,theta_s,theta_i,branch,amplitude\n";
    for (const auto& p : points)
      out << to_string(p.state) << ',' << format_number(p.theta_p) << ','
          << format_number(p.theta_s) << ',' << format_number(p.theta_i) << ','
          << to_string(p.branch) << ',' << format_number(p.amplitude) << '\n';
    return;
  }
  ordered_json rows = ordered_json::array();
  for (const auto& p : points)
    rows.push_back({{"state", to_string(p.state)},
                    {"theta_p", rounded(p.theta_p)},
                    {"theta_s", rounded(p.theta_s)},
                    {"theta_i", rounded(p.theta_i)},
                    {"branch", to_string(p.branch)},
                    {"amplitude", rounded(p.amplitude)}});
  emit_json(out, config, std::move(rows));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polarization-entangled x-ray photon pair source designer"};
  app.name("xbell");
  app.require_subcommand(1);

  FlagSet pm_flags, scan_flags, bell_flags;
  auto* pm = app.add_subcommand("pm", "phase-matched signal/idler angles for one pump angle");
  auto* scan_cmd = app.add_subcommand("scan", "squared channel amplitudes over the pump angle");
  auto* bell = app.add_subcommand("bell", "pump angles producing maximally entangled states");
  pm_flags.attach(pm, true);
  scan_flags.attach(scan_cmd, false);
  bell_flags.attach(bell, false);

  std::vector<const char*> argv;
  argv.push_back("xbell");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (pm->parsed()) {
      const RunConfig config = pm_flags.resolve();
      validate_run(config);
      if (!config.theta_p) throw UsageError("pm requires --theta-p");
      const SourceModel model = make_model(config.source);
      std::vector<PhaseMatchSolution> solutions;
      try {
        solutions = phase_match(*config.theta_p, model.kin);
      } catch (const DegenerateGeometry& e) {
        err << "no solution: " << e.what() << '\n';
        return kNoSolution;
      }
      const int status = write_output(config, out, err, [&](std::ostream& o) {
        write_pm(o, config, solutions);
      });
      if (status != kSuccess) return status;
      if (solutions.empty()) {
        err << "no solution: the momentum triangle does not close at theta_p = "
            << format_number(*config.theta_p) << '\n';
        return kNoSolution;
      }
      return kSuccess;
    }
    if (scan_cmd->parsed()) {
      const RunConfig config = scan_flags.resolve();
      validate_run(config);
      const auto curves = scan(config.source);
      return write_output(config, out, err, [&](std::ostream& o) { write_scan(o, config, curves); });
    }
    const RunConfig config = bell_flags.resolve();
    validate_run(config);
    const auto points = bell_table(config.source);
    return write_output(config, out, err, [&](std::ostream& o) { write_bell(o, config, points); });
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FeasibilityError& e) {
    err << "error: " << e.what() << '\n';
    return kNoSolution;
  }
}

}  // namespace xbell::cli
