#include "akreg/errors.hpp"
#include "akreg/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

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

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string unquote(std::string s)
{
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    s = s.substr(1, s.size() - 2);
  return s;
}

std::optional<double> parse_number(const std::string& text)
{
  const std::string t = trim(text);
  if (t.empty())
    return std::nullopt;
  double v = 0.0;
  const char* first = t.data();
  if (*first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

} // namespace

KernelSpec ColumnSchema::effective_kernel() const
{
  if (kernel)
    return *kernel;
  switch (kind.type()) {
    case VariableKind::Type::continuous_unit:
      return KernelSpec::beta();
    case VariableKind::Type::continuous_nonneg:
      return KernelSpec::gamma();
    case VariableKind::Type::count:
      return KernelSpec::discrete_triangular(2);
    case VariableKind::Type::categorical:
      return KernelSpec::dirac_du(kind.categories());
    case VariableKind::Type::continuous_unbounded:
      return KernelSpec::epanechnikov();
  }
  return KernelSpec::epanechnikov();
}

Schema::Schema(std::vector<ColumnSchema> columns)
  : columns_(std::move(columns))
{
  std::set<std::string> names;
  std::size_t responses = 0;
  for (const auto& c : columns_) {
    if (c.name.empty())
      throw config_error("schema column without a name");
    if (!names.insert(c.name).second)
      throw config_error("duplicate schema column '" + c.name + "'");
    if (c.role == ColumnSchema::Role::response) {
      ++responses;
    } else if (!c.effective_kernel().accepts(c.kind)) {
      throw config_error("kernel " + c.effective_kernel().label() + " is not compatible with column '" +
                         c.name + "' of kind " + c.kind.name());
    }
  }
  if (responses != 1)
    throw config_error("schema needs exactly one response column");
  if (columns_.size() < 2)
    throw config_error("schema needs at least one regressor");
}

Schema Schema::parse(const std::string& text)
{
  std::vector<ColumnSchema> cols;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), '\n', ',');
  std::replace(normalized.begin(), normalized.end(), ';', ',');
  for (const auto& raw : split(normalized, ',')) {
    const std::string entry = trim(raw);
    if (entry.empty())
      continue;
    auto parts = split(entry, ':');
    for (auto& p : parts)
      p = trim(p);
    if (parts.size() < 2)
      throw config_error("schema entry '" + entry + "' needs name:role");
    ColumnSchema c;
    c.name = parts[0];
    const std::string role = lower(parts[1]);
    if (role == "response" || role == "y") {
      c.role = ColumnSchema::Role::response;
      if (parts.size() > 2)
        throw config_error("response entry '" + entry + "' takes no kind or kernel");
    } else if (role == "regressor" || role == "x") {
      c.role = ColumnSchema::Role::regressor;
      if (parts.size() < 3)
        throw config_error("regressor entry '" + entry + "' needs a kind");
      std::size_t next = 3;
      if (lower(parts[2]) == "categorical") {
        if (parts.size() < 4)
          throw config_error("categorical kind needs a category count in '" + entry + "'");
        c.kind = VariableKind::parse("categorical:" + parts[3]);
        next = 4;
      } else {
        c.kind = VariableKind::parse(parts[2]);
      }
      if (parts.size() > next) {
        std::string k = parts[next];
        for (std::size_t p = next + 1; p < parts.size(); ++p)
          k += ":" + parts[p];
        c.kernel = KernelSpec::parse(k);
      }
    } else {
      throw config_error("unknown role '" + parts[1] + "' in schema entry '" + entry + "'");
    }
    cols.push_back(std::move(c));
  }
  return Schema(std::move(cols));
}

const ColumnSchema& Schema::response() const
{
  for (const auto& c : columns_)
    if (c.role == ColumnSchema::Role::response)
      return c;
  throw config_error("schema has no response column");
}

std::vector<ColumnSchema> Schema::regressors() const
{
  std::vector<ColumnSchema> out;
  for (const auto& c : columns_)
    if (c.role == ColumnSchema::Role::regressor)
      out.push_back(c);
  return out;
}

ProductKernel Schema::product_kernel() const
{
  ProductKernel pk;
  for (const auto& c : regressors())
    pk.specs.push_back(c.effective_kernel());
  return pk;
}

void Schema::set_kernels(const std::vector<KernelSpec>& kernels)
{
  std::size_t r = 0;
  for (const auto& c : columns_)
    r += c.role == ColumnSchema::Role::regressor;
  if (kernels.size() != r)
    throw config_error("got " + std::to_string(kernels.size()) + " kernels for " +
                       std::to_string(r) + " regressors");
  auto cols = columns_;
  std::size_t k = 0;
  for (auto& c : cols)
    if (c.role == ColumnSchema::Role::regressor)
      c.kernel = kernels[k++];
  *this = Schema(std::move(cols));
}

std::string Schema::str() const
{
  std::string out;
  for (const auto& c : columns_) {
    if (!out.empty())
      out += ", ";
    if (c.role == ColumnSchema::Role::response)
      out += c.name + ":response";
    else
      out += c.name + ":regressor:" + c.kind.name() + ":" + c.effective_kernel().token();
  }
  return out;
}

CsvTable read_csv(std::istream& in)
{
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0)
      line.erase(0, 3);
    if (trim(line).empty())
      continue;
    auto cells = split(line, ',');
    for (auto& c : cells)
      c = unquote(c);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size())
      throw data_error("line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                         " fields, header has " + std::to_string(table.header.size()),
                       lineno);
    table.rows.push_back(std::move(cells));
    table.lines.push_back(lineno);
  }
  if (!have_header)
    throw data_error("empty CSV input");
  return table;
}

CsvTable read_csv_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw data_error("cannot open '" + path + "'");
  return read_csv(in);
}

void apply_preprocess(CsvTable& table, const Preprocess& prep)
{
  auto index_of = [&](const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end())
      throw data_error("column '" + name + "' not found", 1, name);
    return static_cast<std::size_t>(it - table.header.begin());
  };
  for (const auto& rule : prep.derive) {
    const auto eq = rule.find('=');
    const auto slash = rule.find('/');
    if (eq == std::string::npos || slash == std::string::npos || slash < eq)
      throw config_error("derive rule '" + rule + "' must look like new=num/den");
    const std::string name = trim(rule.substr(0, eq));
    const std::size_t num = index_of(trim(rule.substr(eq + 1, slash - eq - 1)));
    const std::size_t den = index_of(trim(rule.substr(slash + 1)));
    table.header.push_back(name);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto a = parse_number(table.rows[r][num]);
      const auto b = parse_number(table.rows[r][den]);
      if (!a || !b || *b == 0.0)
        throw data_error("cannot derive '" + name + "' on line " + std::to_string(table.lines[r]),
                         table.lines[r], name);
      table.rows[r].push_back(format_double(*a / *b));
    }
  }
  if (prep.append_head > table.rows.size())
    throw data_error("cannot append " + std::to_string(prep.append_head) + " rows from a table of " +
                     std::to_string(table.rows.size()));
  for (std::size_t r = 0; r < prep.append_head; ++r) {
    table.rows.push_back(table.rows[r]);
    table.lines.push_back(table.lines[r]);
  }
}

Dataset to_dataset(const CsvTable& table, const Schema& schema)
{
  if (table.rows.empty())
    throw data_error("CSV input has no data rows");
  auto index_of = [&](const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end())
      throw data_error("missing column '" + name + "' in CSV header", 1, name);
    return static_cast<std::size_t>(it - table.header.begin());
  };
  const auto regs = schema.regressors();
  const auto& resp = schema.response();
  std::vector<std::size_t> cols;
  std::vector<VariableKind> kinds;
  std::vector<std::string> names;
  for (const auto& c : regs) {
    cols.push_back(index_of(c.name));
    kinds.push_back(c.kind);
    names.push_back(c.name);
  }
  const std::size_t ycol = index_of(resp.name);

  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.lines[r];
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto v = parse_number(row[cols[j]]);
      if (!v)
        throw data_error("line " + std::to_string(line) + ", column '" + names[j] +
                           "': cannot parse '" + row[cols[j]] + "' as a number",
                         line, names[j]);
      if (!kinds[j].contains(*v))
        throw data_error("line " + std::to_string(line) + ", column '" + names[j] + "': value " +
                           row[cols[j]] + " violates kind " + kinds[j].name(),
                         line, names[j]);
      x.push_back(*v);
    }
    const auto v = parse_number(row[ycol]);
    if (!v)
      throw data_error("line " + std::to_string(line) + ", column '" + resp.name +
                         "': cannot parse '" + row[ycol] + "' as a number",
                       line, resp.name);
    y.push_back(*v);
  }
  return Dataset(std::move(kinds), std::move(x), std::move(y), std::move(names), resp.name);
}

Dataset load_csv(std::istream& in, const Schema& schema, const Preprocess& prep)
{
  CsvTable table = read_csv(in);
  apply_preprocess(table, prep);
  return to_dataset(table, schema);
}

Dataset load_csv(const std::string& path, const Schema& schema, const Preprocess& prep)
{
  CsvTable table = read_csv_file(path);
  apply_preprocess(table, prep);
  return to_dataset(table, schema);
}

std::string format_double(double v)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc())
    throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Dataset& data)
{
  for (const auto& name : data.names())
    out << name << ',';
  out << data.response_name() << '\n';
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (double v : data.row(i))
      out << format_double(v) << ',';
    out << format_double(data.y()[i]) << '\n';
  }
}

} // namespace akreg
