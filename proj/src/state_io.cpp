#include "sepcheck/state_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sepcheck/errors.hpp"

namespace sepcheck {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorKind::ParseError, "state file: " + what);
}

std::size_t positive_dim(const json& value) {
  if (!value.is_number_unsigned() || value.get<std::size_t>() == 0) {
    schema_error("dims must be positive integers");
  }
  return value.get<std::size_t>();
}

double number(const json& value) {
  if (!value.is_number()) schema_error("matrix entries must be [re, im] numbers");
  return value.get<double>();
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

RawState parse_state_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object()) schema_error("top level must be an object");
  if (!doc.contains("dims") || !doc.contains("matrix")) {
    schema_error("missing \"dims\" or \"matrix\"");
  }
  const json& dims = doc["dims"];
  if (!dims.is_array() || dims.size() != 2) schema_error("dims must be [dA, dB]");

  RawState raw;
  raw.dim_a = positive_dim(dims[0]);
  raw.dim_b = positive_dim(dims[1]);
  const std::size_t n = raw.dim_a * raw.dim_b;

  const json& rows = doc["matrix"];
  if (!rows.is_array() || rows.size() != n) {
    schema_error("matrix must have dA*dB = " + std::to_string(n) + " rows");
  }
  std::vector<Complex> entries;
  entries.reserve(n * n);
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != n) {
      schema_error("every row must have " + std::to_string(n) + " entries");
    }
    for (const json& z : row) {
      if (!z.is_array() || z.size() != 2) schema_error("entries must be [re, im]");
      entries.emplace_back(number(z[0]), number(z[1]));
    }
  }
  raw.matrix = ComplexMatrix(n, std::move(entries));
  return raw;
}

RawState read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

BipartiteDensityMatrix load_state(const std::filesystem::path& path) {
  RawState raw = read_state_file(path);
  return validate(raw.dim_a, raw.dim_b, std::move(raw.matrix));
}

std::string format_state_json(std::size_t da, std::size_t db,
                              const ComplexMatrix& matrix) {
  std::string out = "{\n  \"dims\": [" + std::to_string(da) + ", " +
                    std::to_string(db) + "],\n  \"matrix\": [\n";
  const std::size_t n = matrix.dim();
  for (std::size_t i = 0; i < n; ++i) {
    out += "    [";
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) out += ", ";
      out += "[" + format_double(matrix(i, j).real()) + ", " +
             format_double(matrix(i, j).imag()) + "]";
    }
    out += (i + 1 < n) ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string format_state_json(const BipartiteDensityMatrix& rho) {
  return format_state_json(rho.dim_a(), rho.dim_b(), rho.matrix());
}

void write_state_file(const std::filesystem::path& path,
                      const BipartiteDensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  out << format_state_json(rho);
}

}  // namespace sepcheck
