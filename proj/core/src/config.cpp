#include "akreg/errors.hpp"
#include "akreg/io.hpp"
#include "akreg/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>

namespace akreg {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

template <class T>
T parse_value(const std::string& text, const std::string& key)
{
  T v{};
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw config_error("invalid value '" + text + "' for '" + key + "'");
  return v;
}

bool parse_bool(const std::string& text, const std::string& key)
{
  const std::string t = lower(trim(text));
  if (t == "true" || t == "yes" || t == "1" || t == "on")
    return true;
  if (t == "false" || t == "no" || t == "0" || t == "off")
    return false;
  throw config_error("invalid boolean '" + text + "' for '" + key + "'");
}

std::vector<std::string> split_list(const std::string& text)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!trim(cur).empty())
        out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

void set_axis_key(AxisGrid& axis, const std::string& key, const std::string& value)
{
  if (key == "lo")
    axis.lo = parse_value<double>(value, key);
  else if (key == "hi")
    axis.hi = parse_value<double>(value, key);
  else if (key == "count")
    axis.count = parse_value<std::size_t>(value, key);
  else if (key == "spacing") {
    const std::string s = lower(trim(value));
    if (s == "linear" || s == "lin")
      axis.spacing = Spacing::linear;
    else if (s == "geometric" || s == "geom" || s == "log")
      axis.spacing = Spacing::geometric;
    else
      throw config_error("unknown spacing '" + value + "'");
  } else
    throw config_error("unknown grid key '" + key + "'");
}

// Shared reader for full configuration files and grid-only files.
void read_config(std::istream& in, RunConfig& config, bool grid_only)
{
  std::string line;
  std::size_t lineno = 0;
  std::string section; // "" (top level), "h12", or a column name
  bool in_grid = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const std::string where = " (line " + std::to_string(lineno) + ")";
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("unterminated section header" + where);
      const std::string inner = trim(line.substr(1, line.size() - 2));
      if (lower(inner.substr(0, 4)) != "grid" || trim(inner.substr(4)).empty())
        throw config_error("unknown section '" + inner + "'" + where);
      section = trim(inner.substr(4));
      in_grid = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("expected key = value" + where);
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (in_grid) {
        if (section == "h12") {
          if (key == "count")
            config.grid.h12_count = parse_value<std::size_t>(value, key);
          else if (key == "include_zero")
            config.grid.h12_include_zero = parse_bool(value, key);
          else
            throw config_error("unknown h12 grid key '" + key + "'");
        } else {
          auto [it, inserted] = config.grid.axes.try_emplace(section, AxisGrid{});
          set_axis_key(it->second, key, value);
        }
        continue;
      }
      if (key == "grid_count")
        config.grid.count = parse_value<std::size_t>(value, key);
      else if (key == "h12_count")
        config.grid.h12_count = parse_value<std::size_t>(value, key);
      else if (key == "h12_include_zero")
        config.grid.h12_include_zero = parse_bool(value, key);
      else if (grid_only)
        continue;
      else if (key == "input")
        config.input = value;
      else if (key == "fixture")
        config.fixture = value;
      else if (key == "schema") {
        config.schema = Schema::parse(value);
        config.schema_set = true;
      } else if (key == "kernels")
        config.kernels = parse_kernel_list(value);
      else if (key == "algorithm")
        config.algorithm = parse_algorithm(value);
      else if (key == "out")
        config.out = value;
      else if (key == "format")
        config.format = parse_format(value);
      else if (key == "seed")
        config.seed = parse_value<std::uint64_t>(value, key);
      else if (key == "threads")
        config.threads = parse_value<unsigned>(value, key);
      else if (key == "derive")
        config.preprocess.derive = split_list(value);
      else if (key == "append_head")
        config.preprocess.append_head = parse_value<std::size_t>(value, key);
      else
        throw config_error("unknown key '" + key + "'");
    } catch (const config_error& e) {
      throw config_error(std::string(e.what()) + where);
    }
  }
  for (const auto& [name, axis] : config.grid.axes)
    axis.validate();
}

} // namespace

std::vector<KernelSpec> parse_kernel_list(const std::string& text)
{
  const KernelConfig cfg = KernelConfig::parse(text);
  if (cfg.sarmanov)
    throw config_error("use algorithm = A1 for the beta-Sarmanov kernel");
  for (bool a : cfg.auto_categories)
    if (a)
      throw config_error("DiracDU kernels in a fit need an explicit category count (dirdu:<c>)");
  return cfg.axes;
}

Algorithm parse_algorithm(const std::string& text)
{
  const std::string t = lower(trim(text));
  if (t == "a2" || t == "diagonal")
    return Algorithm::diagonal;
  if (t == "a1" || t == "full" || t == "sarmanov")
    return Algorithm::full2x2;
  throw config_error("unknown algorithm '" + text + "' (expected A1 or A2)");
}

ReportFormat parse_format(const std::string& text)
{
  const std::string t = lower(trim(text));
  if (t == "json")
    return ReportFormat::json;
  if (t == "csv")
    return ReportFormat::csv;
  throw config_error("unknown format '" + text + "' (expected json or csv)");
}

void parse_config(std::istream& in, RunConfig& config)
{
  read_config(in, config, false);
}

void parse_config_file(const std::string& path, RunConfig& config)
{
  std::ifstream in(path);
  if (!in)
    throw config_error("cannot open configuration '" + path + "'");
  parse_config(in, config);
}

GridConfig parse_grid_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw config_error("cannot open grid file '" + path + "'");
  RunConfig tmp;
  read_config(in, tmp, true);
  return tmp.grid;
}

GridSpec resolve_grid(const GridConfig& config, const ProductKernel& kernel, const Dataset& data,
                      Algorithm algorithm)
{
  const std::size_t count = config.count.value_or(20);
  GridSpec g = algorithm == Algorithm::full2x2
                 ? default_sarmanov_grid(data, count, config.h12_count.value_or(5))
                 : default_grid(kernel, data, count);
  if (config.h12_count)
    g.h12_count = *config.h12_count;
  if (config.h12_include_zero)
    g.h12_include_zero = *config.h12_include_zero;
  for (const auto& [name, axis] : config.axes) {
    const auto& names = data.names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
      throw config_error("grid block for unknown regressor '" + name + "'");
    g.axes[static_cast<std::size_t>(it - names.begin())] = axis;
  }
  return g;
}

} // namespace akreg
