#include "lhzmf/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <system_error>

#include "lhzmf/meanfield.hpp"
#include "lhzmf/model.hpp"
#include "lhzmf/phasediag.hpp"
#include "lhzmf/spectrum.hpp"
#include "lhzmf/tridiag.hpp"

namespace lhz::cli {

using nlohmann::json;

namespace {

enum class Kind { Real, Integer, Beta, IntList, Text };

struct Param {
  const char* name;
  Kind kind;
  bool required;
  json fallback;
};

struct CommandSpec {
  Command command;
  const char* name;
  Format default_format;
  std::vector<Param> params;
};

std::vector<Param> coupling_params() {
  return {{"J", Kind::Real, false, 0.5}, {"epsilon", Kind::Real, false, nullptr}, {"beta", Kind::Beta, false, "inf"}};
}

std::vector<Param> line_params() {
  auto p = coupling_params();
  p.insert(p.end(), {{"s-start", Kind::Real, false, 0.01},
                     {"s-stop", Kind::Real, false, 0.99},
                     {"s-step", Kind::Real, false, 0.002},
                     {"tau-min", Kind::Real, false, 0.0},
                     {"tau-max", Kind::Real, false, 1.0},
                     {"tau-points", Kind::Integer, false, 201}});
  return p;
}

std::vector<Param> with(std::vector<Param> base, std::initializer_list<Param> extra) {
  base.insert(base.end(), extra);
  return base;
}

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {Command::FreeEnergy, "free-energy", Format::Csv,
       with(coupling_params(), {{"s", Kind::Real, true, nullptr},
                                {"tau", Kind::Real, true, nullptr},
                                {"points", Kind::Integer, false, 2001}})},
      {Command::SolveM, "solve-m", Format::Json,
       with(coupling_params(), {{"s", Kind::Real, true, nullptr}, {"tau", Kind::Real, true, nullptr}})},
      {Command::PhaseLine, "phase-line", Format::Csv, line_params()},
      {Command::CriticalPoint, "critical-point", Format::Json, {{"J", Kind::Real, false, 0.5}}},
      {Command::JumpProfile, "jump-profile", Format::Csv, line_params()},
      {Command::ScheduleCheck, "schedule-check", Format::Json, with(line_params(), {{"r", Kind::Real, true, nullptr}})},
      {Command::Gap, "gap", Format::Csv,
       {{"N", Kind::Integer, true, nullptr},
        {"s", Kind::Real, true, nullptr},
        {"tau", Kind::Real, true, nullptr},
        {"J", Kind::Real, false, 0.5}}},
      {Command::GapScaling, "gap-scaling", Format::Csv,
       {{"N", Kind::IntList, true, nullptr}, {"r", Kind::Real, true, nullptr}, {"J", Kind::Real, false, 0.5}}},
      {Command::LhzCounts, "lhz-counts", Format::Json, {{"Nl", Kind::Integer, true, nullptr}}},
  };
  return specs;
}

const CommandSpec& spec_for(Command c) {
  for (const auto& s : command_specs())
    if (s.command == c) return s;
  throw UsageError("unknown command");
}

std::optional<double> parse_real(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_integer(std::string_view text) {
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

json convert_text(const Param& p, const std::string& text) {
  const std::string flag = std::string("--") + p.name;
  switch (p.kind) {
    case Kind::Real:
      if (auto v = parse_real(text)) return *v;
      throw UsageError(flag + ": expected a number, got '" + text + "'");
    case Kind::Integer:
      if (auto v = parse_integer(text)) return *v;
      throw UsageError(flag + ": expected an integer, got '" + text + "'");
    case Kind::Beta:
      if (text == "inf") return "inf";
      if (auto v = parse_real(text)) return *v;
      throw UsageError(flag + ": expected a number or 'inf', got '" + text + "'");
    case Kind::IntList: {
      json list = json::array();
      std::string_view rest = text;
      while (true) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        auto v = parse_integer(item);
        if (!v) throw UsageError(flag + ": expected a comma-separated integer list, got '" + text + "'");
        list.push_back(*v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      return list;
    }
    case Kind::Text:
      return text;
  }
  throw UsageError(flag + ": unsupported value");
}

json convert_json(const Param& p, const json& value) {
  const std::string key = std::string("config key '") + p.name + "'";
  if (value.is_string()) return convert_text(p, value.get<std::string>());
  switch (p.kind) {
    case Kind::Real:
    case Kind::Beta:
      if (value.is_number()) {
        const double v = value.get<double>();
        if (std::isfinite(v)) return v;
      }
      break;
    case Kind::Integer:
      if (value.is_number_integer()) return value.get<long long>();
      break;
    case Kind::IntList:
      if (value.is_array()) {
        json list = json::array();
        for (const auto& item : value) {
          if (!item.is_number_integer()) throw UsageError(key + ": expected a list of integers");
          list.push_back(item.get<long long>());
        }
        return list;
      }
      break;
    case Kind::Text:
      break;
  }
  throw UsageError(key + ": value has the wrong type");
}

std::optional<Command> find_command(const std::string& name) {
  for (const auto& s : command_specs())
    if (name == s.name) return s.command;
  return std::nullopt;
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw UsageError("--format: expected 'csv' or 'json', got '" + text + "'");
}

unsigned parse_threads(const json& value) {
  long long v = 0;
  if (value.is_number_integer())
    v = value.get<long long>();
  else if (value.is_string()) {
    auto parsed = parse_integer(value.get<std::string>());
    if (!parsed) throw UsageError("--threads: expected a non-negative integer");
    v = *parsed;
  } else {
    throw UsageError("--threads: expected a non-negative integer");
  }
  if (v < 0 || v > 4096) throw DomainError("threads must be in [0, 4096]");
  return static_cast<unsigned>(v);
}

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc = json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded()) throw UsageError("config file '" + path + "' is not valid JSON");
  if (!doc.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
  return doc;
}

Temperature temperature_of(const json& params) {
  const json& b = params.at("beta");
  if (b.is_string()) return Temperature::zero();
  return Temperature::inverse(b.get<double>());
}

CouplingModel couplings_of(const json& params) {
  const double J = params.at("J").get<double>();
  if (params.contains("epsilon") && !params.at("epsilon").is_null())
    return CouplingModel::bimodal(params.at("epsilon").get<double>(), J);
  return CouplingModel::uniform(J);
}

SGrid grid_of(const json& p) {
  return {p.at("s-start").get<double>(), p.at("s-stop").get<double>(), p.at("s-step").get<double>()};
}

TauSearch tau_search_of(const json& p) {
  TauSearch t;
  t.tau_lo = p.at("tau-min").get<double>();
  t.tau_hi = p.at("tau-max").get<double>();
  const long long points = p.at("tau-points").get<long long>();
  if (points < 2 || points > 100000) throw DomainError("tau-points must be in [2, 100000]");
  t.coarse_points = static_cast<std::size_t>(points);
  return t;
}

std::vector<int> sizes_of(const json& p) {
  std::vector<int> Ns;
  for (const auto& v : p.at("N")) {
    const long long n = v.get<long long>();
    if (n < 2 || n > 100000) throw DomainError("every N must be in [2, 100000]");
    Ns.push_back(static_cast<int>(n));
  }
  return Ns;
}

// Constructs the domain objects of a command so that every precondition is
// checked before anything is computed.
void validate(const RunConfig& c) {
  const json& p = c.params;
  switch (c.command) {
    case Command::FreeEnergy: {
      couplings_of(p);
      temperature_of(p);
      ControlPoint(p.at("s").get<double>(), p.at("tau").get<double>());
      const long long points = p.at("points").get<long long>();
      if (points < 2 || points > 10'000'000) throw DomainError("points must be in [2, 10000000]");
      break;
    }
    case Command::SolveM:
      couplings_of(p);
      temperature_of(p);
      ControlPoint(p.at("s").get<double>(), p.at("tau").get<double>());
      break;
    case Command::ScheduleCheck:
      ScheduleFamily(p.at("r").get<double>());
      [[fallthrough]];
    case Command::PhaseLine:
    case Command::JumpProfile: {
      couplings_of(p);
      temperature_of(p);
      grid_of(p).values();
      const TauSearch t = tau_search_of(p);
      if (!(t.tau_lo >= 0.0 && t.tau_hi <= 1.0 && t.tau_lo < t.tau_hi))
        throw DomainError("tau range must satisfy 0 <= tau-min < tau-max <= 1");
      break;
    }
    case Command::CriticalPoint:
      critical_point_closed_form(p.at("J").get<double>());
      break;
    case Command::Gap: {
      const long long N = p.at("N").get<long long>();
      if (N < 1 || N > 1'000'000) throw DomainError("N must be in [1, 1000000]");
      ControlPoint(p.at("s").get<double>(), p.at("tau").get<double>());
      CouplingModel::uniform(p.at("J").get<double>());
      break;
    }
    case Command::GapScaling: {
      const auto Ns = sizes_of(p);
      if (Ns.size() < 4) throw DomainError("gap-scaling needs at least 4 values of N");
      for (std::size_t i = 1; i < Ns.size(); ++i)
        if (Ns[i] <= Ns[i - 1]) throw DomainError("N values must be strictly ascending");
      ScheduleFamily(p.at("r").get<double>());
      CouplingModel::uniform(p.at("J").get<double>());
      break;
    }
    case Command::LhzCounts:
      lhz_counts(p.at("Nl").get<long long>());
      break;
  }
}

// ---------------------------------------------------------------- output

struct Output {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json summary = json::object();
  /// Single-row result whose JSON form lists the columns at top level.
  bool scalar = false;
};

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_null()) return "";
  std::string text = v.is_string() ? v.get<std::string>() : v.dump();
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

std::string render_csv(const Output& o) {
  std::string s;
  for (std::size_t i = 0; i < o.columns.size(); ++i) s += (i ? "," : "") + o.columns[i];
  s += '\n';
  for (const auto& row : o.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_cell(row[i]);
    s += '\n';
  }
  return s;
}

void write_json(std::string& s, const json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      s += "{}";
      return;
    }
    s += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) s += ",\n";
      first = false;
      s += inner + json(it.key()).dump() + ": ";
      write_json(s, it.value(), indent + 1);
    }
    s += "\n" + pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      s += "[]";
      return;
    }
    s += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",\n";
      s += inner;
      write_json(s, v[i], indent + 1);
    }
    s += "\n" + pad + "]";
  } else if (v.is_number_float()) {
    const double x = v.get<double>();
    s += std::isfinite(x) ? format_number(x) : "null";
  } else {
    s += v.dump();
  }
}

std::string render_json(const json& doc) {
  std::string s;
  write_json(s, doc, 0);
  return s + "\n";
}

json json_document(const Output& o, const json& meta) {
  json doc = o.summary;
  if (o.scalar && o.rows.size() == 1) {
    for (std::size_t i = 0; i < o.columns.size(); ++i) doc[o.columns[i]] = o.rows[0][i];
  } else {
    json rows = json::array();
    for (const auto& row : o.rows) {
      json r = json::object();
      for (std::size_t i = 0; i < o.columns.size(); ++i) r[o.columns[i]] = row[i];
      rows.push_back(std::move(r));
    }
    doc["columns"] = o.columns;
    doc["rows"] = std::move(rows);
  }
  doc["meta"] = meta;
  return doc;
}

json critical_json(const std::optional<CriticalPoint>& cp) {
  if (!cp) return nullptr;
  return json{{"s_c", cp->s_c}, {"tau_c", cp->tau_c}, {"method", to_string(cp->method)}};
}

TransitionLine line_for(const RunConfig& c) {
  TraceOptions options;
  options.search = tau_search_of(c.params);
  options.threads = c.threads;
  return trace_line(temperature_of(c.params), couplings_of(c.params), grid_of(c.params), options);
}

Output compute(const RunConfig& c) {
  const json& p = c.params;
  Output o;
  switch (c.command) {
    case Command::FreeEnergy: {
      const FreeEnergy fe(ControlPoint(p.at("s").get<double>(), p.at("tau").get<double>()), temperature_of(p),
                          couplings_of(p));
      o.columns = {"m", "f"};
      for (const auto& pt : sample_landscape(fe, static_cast<std::size_t>(p.at("points").get<long long>())))
        o.rows.push_back({pt.m, pt.f});
      break;
    }
    case Command::SolveM: {
      const auto report = find_stationary_points(ControlPoint(p.at("s").get<double>(), p.at("tau").get<double>()),
                                                 temperature_of(p), couplings_of(p));
      o.columns = {"m", "f", "kind", "degenerate", "global"};
      for (std::size_t i = 0; i < report.stationary.size(); ++i) {
        const auto& sp = report.stationary[i];
        o.rows.push_back({sp.m, sp.f, sp.kind == StationaryKind::Minimum ? "minimum" : "maximum", sp.degenerate,
                          i == report.global});
      }
      o.summary["global"] = {{"m", report.global_minimum().m}, {"f", report.global_minimum().f}};
      break;
    }
    case Command::PhaseLine: {
      const auto line = line_for(c);
      o.columns = {"s", "tau_star", "m_low", "m_high", "jump", "segment_id"};
      for (std::size_t k = 0; k < line.segments.size(); ++k)
        for (std::size_t i = line.segments[k].begin; i < line.segments[k].end; ++i) {
          const auto& pt = line.points[i];
          o.rows.push_back({pt.s, pt.tau_star, pt.m_low, pt.m_high, pt.jump, static_cast<long long>(k)});
        }
      o.summary["segments"] = line.segments.size();
      o.summary["critical_point"] = critical_json(line.critical_point);
      break;
    }
    case Command::CriticalPoint: {
      const double J = p.at("J").get<double>();
      const auto cp = critical_point_closed_form(J);
      o.scalar = true;
      o.columns = {"s_c", "tau_c", "r_star"};
      o.rows.push_back({cp.s_c, cp.tau_c, tangent_exponent(J)});
      break;
    }
    case Command::JumpProfile: {
      const auto line = line_for(c);
      o.columns = {"s", "jump"};
      for (const auto& js : jump_profile(line)) o.rows.push_back({js.s, js.jump});
      break;
    }
    case Command::ScheduleCheck: {
      const auto line = line_for(c);
      const auto res = schedule_crossing(ScheduleFamily(p.at("r").get<double>()), line);
      o.scalar = true;
      o.columns = {"result", "s", "tau", "min_distance", "through_break"};
      o.rows.push_back({to_string(res.kind), res.s, res.tau, res.min_distance, res.through_break});
      o.summary["critical_point"] = critical_json(line.critical_point);
      break;
    }
    case Command::Gap: {
      const auto g = gap_at(static_cast<int>(p.at("N").get<long long>()),
                            ControlPoint(p.at("s").get<double>(), p.at("tau").get<double>()), p.at("J").get<double>());
      o.scalar = true;
      o.columns = {"N", "s", "tau", "E0", "E1", "gap"};
      o.rows.push_back({static_cast<long long>(g.N), g.s, g.tau, g.E0, g.E1, g.gap});
      break;
    }
    case Command::GapScaling: {
      const auto Ns = sizes_of(p);
      const auto fit = gap_scaling(Ns, ScheduleFamily(p.at("r").get<double>()), p.at("J").get<double>(), c.threads);
      o.columns = {"N", "s_min", "gap_min"};
      for (std::size_t i = 0; i < fit.Ns.size(); ++i)
        o.rows.push_back({static_cast<long long>(fit.Ns[i]), fit.s_min[i], fit.gaps[i]});
      auto line_json = [](const LineFit& f) { return json{{"a", f.a}, {"b", f.b}, {"rss", f.rss}}; };
      o.summary["exp_fit"] = line_json(fit.exp_fit);
      o.summary["poly_fit"] = line_json(fit.poly_fit);
      o.summary["classification"] = to_string(fit.classification);
      o.summary["warnings"] = fit.warnings;
      break;
    }
    case Command::LhzCounts: {
      const auto counts = lhz_counts(p.at("Nl").get<long long>());
      o.scalar = true;
      o.columns = {"N", "N_c"};
      o.rows.push_back({static_cast<long long>(counts.physical), static_cast<long long>(counts.constraints)});
      break;
    }
  }
  return o;
}

std::string sidecar_path(const std::string& out) {
  std::filesystem::path path(out);
  path.replace_extension(".fit.json");
  return path.string();
}

void write_atomically(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> temps;
  try {
    for (const auto& [path, content] : files) {
      const std::string tmp = path + ".tmp";
      temps.push_back(tmp);
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
      f << content;
      f.close();
      if (!f) throw std::runtime_error("failed writing '" + tmp + "'");
    }
    for (std::size_t i = 0; i < files.size(); ++i) std::filesystem::rename(temps[i], files[i].first);
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
    throw;
  }
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string command_name(Command c) { return spec_for(c).name; }

std::string usage() {
  std::string s =
      "usage: lhzmf <command> [--flag value ...] [--config file.json] [--out path] [--format csv|json] "
      "[--threads n]\n\ncommands:\n";
  for (const auto& spec : command_specs()) {
    s += "  " + std::string(spec.name);
    for (const auto& p : spec.params) {
      s += p.required ? " --" : " [--";
      s += p.name;
      s += p.required ? "" : "]";
    }
    s += "\n";
  }
  return s;
}

RunConfig parse_args(const std::vector<std::string>& argv) {
  if (argv.empty()) throw UsageError("missing command");
  const auto command = find_command(argv[0]);
  if (!command) throw UsageError("unknown command '" + argv[0] + "'");
  const CommandSpec& spec = spec_for(*command);

  auto find_param = [&](const std::string& name) -> const Param* {
    for (const auto& p : spec.params)
      if (name == p.name) return &p;
    return nullptr;
  };

  json from_flags = json::object();
  std::optional<std::string> config_path;
  for (std::size_t i = 1; i < argv.size(); ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0 || arg.size() == 2) throw UsageError("unexpected argument '" + arg + "'");
    std::string name = arg.substr(2);
    std::string value;
    if (const auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else {
      if (i + 1 >= argv.size()) throw UsageError("--" + name + ": missing value");
      value = argv[++i];
    }
    if (name != "config" && name != "out" && name != "format" && name != "threads" && !find_param(name))
      throw UsageError("unknown flag --" + name + " for command " + spec.name);
    if (from_flags.contains(name) || (name == "config" && config_path))
      throw UsageError("--" + name + " given more than once");
    if (name == "config")
      config_path = value;
    else
      from_flags[name] = value;
  }

  json merged = json::object();
  if (config_path) {
    const json doc = load_config(*config_path);
    for (const auto& [key, value] : doc.items()) {
      if (key != "out" && key != "format" && key != "threads" && !find_param(key))
        throw UsageError("unknown config key '" + key + "' for command " + spec.name);
      merged[key] = value;
    }
  }
  for (const auto& [key, value] : from_flags.items()) merged[key] = value;

  RunConfig config{*command, json::object(), spec.default_format, "", 0};
  if (merged.contains("out")) {
    if (!merged["out"].is_string() || merged["out"].get<std::string>().empty())
      throw UsageError("--out: expected a file path");
    config.out = merged["out"].get<std::string>();
  }
  if (merged.contains("format")) {
    if (!merged["format"].is_string()) throw UsageError("--format: expected 'csv' or 'json'");
    config.format = parse_format(merged["format"].get<std::string>());
  }
  if (merged.contains("threads")) config.threads = parse_threads(merged["threads"]);

  for (const auto& p : spec.params) {
    if (merged.contains(p.name)) {
      const json& raw = merged[p.name];
      config.params[p.name] = from_flags.contains(p.name) ? convert_text(p, raw.get<std::string>()) : convert_json(p, raw);
    } else if (p.required) {
      throw UsageError(std::string("missing required flag --") + p.name + " for command " + spec.name);
    } else {
      config.params[p.name] = p.fallback;
    }
  }
  validate(config);
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Output o = compute(config);
    json meta = config.params;
    meta["command"] = command_name(config.command);

    std::vector<std::pair<std::string, std::string>> files;
    std::string primary;
    if (config.format == Format::Csv) {
      primary = render_csv(o);
      if (config.command == Command::GapScaling && !config.out.empty()) {
        json side = o.summary;
        side["meta"] = meta;
        files.emplace_back(sidecar_path(config.out), render_json(side));
      }
    } else {
      primary = render_json(json_document(o, meta));
    }
    if (config.out.empty()) {
      out << primary;
      out.flush();
    } else {
      files.insert(files.begin(), {config.out, primary});
      write_atomically(files);
    }
    return 0;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const EigensolverError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

int main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  if (!argv.empty() && (argv[0] == "--help" || argv[0] == "-h" || argv[0] == "help")) {
    out << usage();
    return 0;
  }
  RunConfig config;
  try {
    config = parse_args(argv);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << usage();
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return run(config, out, err);
}

}  // namespace lhz::cli
