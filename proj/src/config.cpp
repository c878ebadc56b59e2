#include "r13fem/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "r13fem/error.hpp"

namespace r13 {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) return std::nullopt;
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in) {
  ConfigFile cfg;
  std::string line, current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw ConfigError("empty section name", line_no);
      if (cfg.sections_.count(current)) throw ConfigError("duplicate section", line_no, current);
      cfg.sections_[current];
      cfg.section_lines_[current] = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no, current);
    if (current.empty()) throw ConfigError("entry outside of any section", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line_no, current);
    auto& sec = cfg.sections_[current];
    if (sec.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no, current);
    sec[key] = {value, line_no};
  }
  return cfg;
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

std::vector<std::string> ConfigFile::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : sections_) out.push_back(name);
  return out;
}

const std::map<std::string, ConfigEntry>& ConfigFile::section(const std::string& name) const {
  static const std::map<std::string, ConfigEntry> empty;
  auto it = sections_.find(name);
  return it == sections_.end() ? empty : it->second;
}

const ConfigEntry* ConfigFile::find(const std::string& sec, const std::string& key) const {
  auto it = sections_.find(sec);
  if (it == sections_.end()) return nullptr;
  auto k = it->second.find(key);
  return k == it->second.end() ? nullptr : &k->second;
}

int ConfigFile::section_line(const std::string& sec) const {
  auto it = section_lines_.find(sec);
  return it == section_lines_.end() ? 0 : it->second;
}

std::optional<std::string> ConfigFile::get_string(const std::string& sec, const std::string& key) const {
  const ConfigEntry* e = find(sec, key);
  if (!e) return std::nullopt;
  return e->value;
}

std::optional<double> ConfigFile::get_double(const std::string& sec, const std::string& key) const {
  const ConfigEntry* e = find(sec, key);
  if (!e) return std::nullopt;
  if (auto v = to_double(e->value)) return v;
  // Allow constant expressions such as 1/32.
  try {
    const Expr ex = Expr::parse(e->value);
    if (ex.is_constant()) return ex.eval(0.0, 0.0);
  } catch (const Error&) {
  }
  throw ConfigError("'" + key + "' expects a number, got '" + e->value + "'", e->line, sec);
}

std::optional<int> ConfigFile::get_int(const std::string& sec, const std::string& key) const {
  const ConfigEntry* e = find(sec, key);
  if (!e) return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
  if (ec != std::errc() || ptr != e->value.data() + e->value.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + e->value + "'", e->line, sec);
  }
  return v;
}

std::optional<bool> ConfigFile::get_bool(const std::string& sec, const std::string& key) const {
  const ConfigEntry* e = find(sec, key);
  if (!e) return std::nullopt;
  const std::string v = lower(e->value);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + e->value + "'", e->line, sec);
}

std::optional<std::vector<double>> ConfigFile::get_list(const std::string& sec, const std::string& key) const {
  const ConfigEntry* e = find(sec, key);
  if (!e) return std::nullopt;
  std::vector<double> out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::optional<double> v = to_double(item);
    if (!v) {
      try {
        const Expr ex = Expr::parse(item);
        if (ex.is_constant()) v = ex.eval(0.0, 0.0);
      } catch (const Error&) {
      }
    }
    if (!v) throw ConfigError("'" + key + "' expects a comma separated list of numbers", e->line, sec);
    out.push_back(*v);
  }
  return out;
}

Component component_from_name(const std::string& name) {
  for (int c = 0; c < kNumComponents; ++c) {
    if (name == component_name(static_cast<Component>(c))) return static_cast<Component>(c);
  }
  throw Error("unknown component '" + name + "'");
}

namespace {

void check_keys(const ConfigFile& f, const std::string& sec, const std::set<std::string>& allowed) {
  for (const auto& [key, entry] : f.section(sec)) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "'", entry.line, sec);
  }
}

ScalarField field_value(const ConfigFile& f, const std::string& sec, const std::string& key) {
  const ConfigEntry* e = f.find(sec, key);
  try {
    return ScalarField(Expr::parse(e->value));
  } catch (const ParseError& err) {
    throw ConfigError("'" + key + "': " + err.what(), e->line, sec);
  }
}

}  // namespace

RunConfig parse_run_config(const ConfigFile& f) {
  RunConfig rc;
  ProblemSpec& spec = rc.spec;

  static const std::set<std::string> known_static = {"case", "mesh", "elements", "physics", "stabilization",
                                                     "sources", "output", "convergence", "sweep", "sample"};
  for (const auto& sec : f.sections()) {
    if (!known_static.count(sec) && sec.rfind("bc.", 0) != 0) {
      throw ConfigError("unknown section", f.section_line(sec), sec);
    }
  }

  if (f.has_section("case")) {
    check_keys(f, "case", {"name", "h", "kn", "level", "mesh"});
    const ConfigEntry* name = f.find("case", "name");
    if (!name) throw ConfigError("missing 'name'", f.section_line("case"), "case");
    const std::string n = name->value;
    if (n == "ring") {
      spec = case_ring_flow(f.get_double("case", "h").value_or(0.1));
    } else if (n == "channel") {
      spec = case_channel(f.get_double("case", "kn").value_or(0.25), f.get_double("case", "h").value_or(0.0274));
    } else if (n == "knudsen_pump") {
      spec = case_knudsen_pump(f.get_string("case", "mesh").value_or("pump_h0.125.msh"));
    } else if (n == "thermal_edge") {
      spec = case_thermal_edge(f.get_int("case", "level").value_or(0));
    } else {
      throw ConfigError("unknown case '" + n + "'", name->line, "case");
    }
  }

  if (f.has_section("mesh")) {
    check_keys(f, "mesh", {"builtin", "path", "width", "height", "r_inner", "r_outer", "half_length", "chamber",
                           "beam", "offset", "grading", "h"});
    auto& m = spec.mesh;
    const auto builtin = f.get_string("mesh", "builtin");
    const auto path = f.get_string("mesh", "path");
    if (builtin && path) throw ConfigError("give either 'builtin' or 'path'", f.section_line("mesh"), "mesh");
    if (builtin) {
      const std::string b = *builtin;
      if (b == "rectangle") m.kind = MeshSource::Kind::rectangle;
      else if (b == "annulus") m.kind = MeshSource::Kind::annulus;
      else if (b == "racetrack") m.kind = MeshSource::Kind::racetrack;
      else if (b == "beam_chamber") m.kind = MeshSource::Kind::beam_chamber;
      else throw ConfigError("unknown builtin mesh '" + b + "'", f.find("mesh", "builtin")->line, "mesh");
    }
    if (path) {
      m.kind = MeshSource::Kind::file;
      m.path = fixture_path(*path);
    }
    m.width = f.get_double("mesh", "width").value_or(m.width);
    m.height = f.get_double("mesh", "height").value_or(m.height);
    m.r_inner = f.get_double("mesh", "r_inner").value_or(m.r_inner);
    m.r_outer = f.get_double("mesh", "r_outer").value_or(m.r_outer);
    m.half_length = f.get_double("mesh", "half_length").value_or(m.half_length);
    m.chamber = f.get_double("mesh", "chamber").value_or(m.chamber);
    m.beam = f.get_double("mesh", "beam").value_or(m.beam);
    m.offset = f.get_double("mesh", "offset").value_or(m.offset);
    m.grading = f.get_double("mesh", "grading").value_or(m.grading);
    m.h = f.get_double("mesh", "h").value_or(m.h);
    if (m.kind != MeshSource::Kind::file && !(m.h > 0.0)) {
      throw ConfigError("mesh size h must be positive", f.section_line("mesh"), "mesh");
    }
  } else if (!f.has_section("case")) {
    throw ConfigError("a [mesh] or [case] section is required");
  }

  if (f.has_section("elements")) {
    check_keys(f, "elements", {"degree_high", "degree_low"});
    spec.degree_high = f.get_int("elements", "degree_high").value_or(spec.degree_high);
    spec.degree_low = f.get_int("elements", "degree_low").value_or(spec.degree_low);
  }

  if (f.has_section("physics")) {
    check_keys(f, "physics", {"kn", "chi_tilde"});
    spec.data.physics.kn = f.get_double("physics", "kn").value_or(spec.data.physics.kn);
    spec.data.physics.chi_tilde = f.get_double("physics", "chi_tilde").value_or(spec.data.physics.chi_tilde);
  }

  if (f.has_section("stabilization")) {
    check_keys(f, "stabilization", {"enabled", "delta_theta", "delta_u", "delta_p"});
    auto& st = spec.data.stabilization;
    st.enabled = f.get_bool("stabilization", "enabled").value_or(st.enabled);
    st.delta_theta = f.get_double("stabilization", "delta_theta").value_or(st.delta_theta);
    st.delta_u = f.get_double("stabilization", "delta_u").value_or(st.delta_u);
    st.delta_p = f.get_double("stabilization", "delta_p").value_or(st.delta_p);
  }

  if (f.has_section("sources")) {
    check_keys(f, "sources", {"m_dot", "r", "b_x", "b_y"});
    auto& src = spec.data.sources;
    if (f.find("sources", "m_dot")) src.m_dot = field_value(f, "sources", "m_dot");
    if (f.find("sources", "r")) src.r = field_value(f, "sources", "r");
    if (f.find("sources", "b_x")) src.b_x = field_value(f, "sources", "b_x");
    if (f.find("sources", "b_y")) src.b_y = field_value(f, "sources", "b_y");
  }

  for (const auto& sec : f.sections()) {
    if (sec.rfind("bc.", 0) != 0) continue;
    int tag = 0;
    const std::string t = sec.substr(3);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), tag);
    if (ec != std::errc() || ptr != t.data() + t.size() || tag <= 0) {
      throw ConfigError("boundary sections are named [bc.<positive tag>]", f.section_line(sec), sec);
    }
    check_keys(f, sec, {"theta_w", "u_t_w", "u_n_w", "p_w", "epsilon_w", "chi_tilde"});
    BoundaryData& bc = spec.data.boundary[tag];
    if (f.find(sec, "theta_w")) bc.theta_w = field_value(f, sec, "theta_w");
    if (f.find(sec, "u_t_w")) bc.u_t_w = field_value(f, sec, "u_t_w");
    if (f.find(sec, "u_n_w")) bc.u_n_w = field_value(f, sec, "u_n_w");
    if (f.find(sec, "p_w")) bc.p_w = field_value(f, sec, "p_w");
    bc.epsilon_w = f.get_double(sec, "epsilon_w").value_or(bc.epsilon_w);
    if (auto chi = f.get_double(sec, "chi_tilde")) bc.chi_tilde = *chi;
  }

  if (f.has_section("output")) {
    check_keys(f, "output", {"vtk", "csv"});
    rc.output.vtk = f.get_string("output", "vtk").value_or(rc.output.vtk);
    rc.output.csv = f.get_string("output", "csv").value_or(rc.output.csv);
  }

  if (f.has_section("convergence")) {
    check_keys(f, "convergence", {"h", "reference_h", "meshes", "reference_mesh"});
    rc.convergence.h = f.get_list("convergence", "h").value_or(std::vector<double>{});
    rc.convergence.reference_h = f.get_double("convergence", "reference_h");
    if (auto meshes = f.get_string("convergence", "meshes")) {
      std::stringstream ss(*meshes);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) rc.convergence.meshes.push_back(fixture_path(item));
      }
    }
    if (auto ref = f.get_string("convergence", "reference_mesh")) rc.convergence.reference_mesh = fixture_path(*ref);
  }

  if (f.has_section("sweep")) {
    check_keys(f, "sweep", {"kn", "tag"});
    rc.sweep.kn = f.get_list("sweep", "kn").value_or(std::vector<double>{});
    rc.sweep.tag = f.get_int("sweep", "tag").value_or(rc.sweep.tag);
  }

  if (f.has_section("sample")) {
    check_keys(f, "sample", {"from", "to", "n", "components"});
    const auto from = f.get_list("sample", "from");
    const auto to = f.get_list("sample", "to");
    if (!from || !to || from->size() != to->size() || from->size() % 2 != 0 || from->empty()) {
      throw ConfigError("'from' and 'to' need matching x, y pairs", f.section_line("sample"), "sample");
    }
    for (std::size_t i = 0; i < from->size(); i += 2) {
      rc.sample.segments.push_back({{(*from)[i], (*from)[i + 1]}, {(*to)[i], (*to)[i + 1]}});
    }
    rc.sample.n = f.get_int("sample", "n").value_or(rc.sample.n);
    if (rc.sample.n < 2) throw ConfigError("'n' must be at least 2", f.find("sample", "n")->line, "sample");
    const std::string comps = f.get_string("sample", "components").value_or("u_x,u_y,theta,p");
    std::stringstream ss(comps);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        rc.sample.components.push_back(component_from_name(item));
      } catch (const Error& e) {
        const ConfigEntry* entry = f.find("sample", "components");
        throw ConfigError(e.what(), entry ? entry->line : f.section_line("sample"), "sample");
      }
    }
  }

  const ValidationReport report = validate(spec);
  if (!report.ok()) throw ConfigError("invalid problem:\n" + report.message());
  return rc;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(ConfigFile::load(path)); }

}  // namespace r13
