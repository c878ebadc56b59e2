#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "r13fem/cases.hpp"
#include "r13fem/fespace.hpp"

namespace r13 {

/// One `key = value` entry with the line it came from.
struct ConfigEntry {
  std::string value;
  int line = 0;
};

/// INI-style file: `[section]` headers, `key = value` lines, `#` or `;` comments.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in);
  static ConfigFile parse_string(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool has_section(const std::string& section) const { return sections_.count(section) > 0; }
  std::vector<std::string> sections() const;
  const std::map<std::string, ConfigEntry>& section(const std::string& section) const;
  const ConfigEntry* find(const std::string& section, const std::string& key) const;
  int section_line(const std::string& section) const;

  std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
  std::optional<double> get_double(const std::string& section, const std::string& key) const;
  std::optional<int> get_int(const std::string& section, const std::string& key) const;
  std::optional<bool> get_bool(const std::string& section, const std::string& key) const;
  std::optional<std::vector<double>> get_list(const std::string& section, const std::string& key) const;

 private:
  std::map<std::string, std::map<std::string, ConfigEntry>> sections_;
  std::map<std::string, int> section_lines_;
};

struct ConvergenceSettings {
  std::vector<double> h;            // generator sizes, coarse to fine
  std::optional<double> reference_h;
  std::vector<std::string> meshes;  // alternatively explicit mesh files, coarse to fine
  std::string reference_mesh;
};

struct SweepSettings {
  std::vector<double> kn;
  int tag = 2;
};

struct SampleSettings {
  struct Segment {
    Point from, to;
  };
  std::vector<Segment> segments;
  int n = 400;
  std::vector<Component> components;
};

struct OutputSettings {
  std::string vtk = "solution.vtk";
  std::string csv;
};

struct RunConfig {
  ProblemSpec spec;
  ConvergenceSettings convergence;
  SweepSettings sweep;
  SampleSettings sample;
  OutputSettings output;
};

/// Builds a run configuration. A `[case] name = ...` section starts from a built-in
/// case; the remaining sections override it. Throws ConfigError with line and section.
RunConfig parse_run_config(const ConfigFile& file);
RunConfig load_run_config(const std::string& path);

Component component_from_name(const std::string& name);  // throws Error

}  // namespace r13
