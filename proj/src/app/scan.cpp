#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <string>

#include <json.hpp>

#include "sepcheck/app.hpp"
#include "sepcheck/errors.hpp"
#include "sepcheck/state_io.hpp"

namespace sepcheck::app {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  // std::from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  if (first < last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorKind::ParseError,
                "bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = text.find(sep, begin);
    parts.push_back(text.substr(begin, end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return parts;
}

}  // namespace

GridSpec parse_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw Error(ErrorKind::ParseError,
                "grid must be start:stop:step, got '" + std::string(text) + "'");
  }
  GridSpec grid{parse_number(parts[0], "grid start"),
                parse_number(parts[1], "grid stop"),
                parse_number(parts[2], "grid step")};
  if (grid.start > grid.stop) throw Error(ErrorKind::ParseError, "grid start > stop");
  if (!(grid.step > 0.0)) throw Error(ErrorKind::ParseError, "grid step must be > 0");
  return grid;
}

std::vector<double> grid_points(const GridSpec& grid) {
  const double span = grid.stop - grid.start;
  // Points that would pass stop by half a step or more are not emitted.
  const auto intervals =
      static_cast<std::size_t>(std::max(0.0, std::ceil(span / grid.step - 0.5)));
  std::vector<double> xs;
  xs.reserve(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    xs.push_back(grid.start + static_cast<double>(i) * grid.step);
  }
  if (std::abs(xs.back() - grid.stop) < 0.5 * grid.step) xs.back() = grid.stop;
  return xs;
}

Complex parse_complex(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_number(parts[0], "complex value"), 0.0};
  if (parts.size() == 2) {
    return {parse_number(parts[0], "real part"), parse_number(parts[1], "imaginary part")};
  }
  throw Error(ErrorKind::ParseError, "complex value must be re or re,im");
}

std::vector<Criterion> parse_criteria(std::string_view text) {
  std::vector<Criterion> out;
  for (std::string_view name : split(text, ',')) {
    if (name.empty()) continue;
    out.push_back(parse_criterion(name));
  }
  if (out.empty()) throw Error(ErrorKind::ParseError, "empty criteria list");
  return out;
}

std::vector<ScanRow> scan_family(const FamilySpec& family,
                                 const std::vector<double>& xs,
                                 const std::vector<Criterion>& criteria,
                                 unsigned threads) {
  std::vector<ScanRow> rows(xs.size());
  auto evaluate_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const BipartiteDensityMatrix rho = make_state(family, xs[i]);
      rows[i].x = xs[i];
      for (Criterion c : criteria) rows[i].reports.push_back(evaluate(c, rho));
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(xs.size())));
  if (threads <= 1) {
    evaluate_range(0, xs.size());
    return rows;
  }
  std::vector<std::future<void>> workers;
  const std::size_t chunk = (xs.size() + threads - 1) / threads;
  for (std::size_t begin = 0; begin < xs.size(); begin += chunk) {
    workers.push_back(std::async(std::launch::async, evaluate_range, begin,
                                 std::min(xs.size(), begin + chunk)));
  }
  for (auto& w : workers) w.get();
  return rows;
}

std::string format_scan_csv(const std::vector<ScanRow>& rows,
                            const std::vector<Criterion>& criteria) {
  std::string out = "x";
  for (Criterion c : criteria) {
    const std::string name(to_string(c));
    out += "," + name + "_witness," + name + "_detected";
  }
  out += "\n";
  for (const ScanRow& row : rows) {
    out += format_double(row.x);
    for (const CriterionReport& r : row.reports) {
      out += "," + format_double(r.witness) + (r.inseparable_detected ? ",true" : ",false");
    }
    out += "\n";
  }
  return out;
}

std::string format_scan_json(const FamilySpec& family,
                             const std::vector<ScanRow>& rows,
                             const std::vector<Criterion>& criteria) {
  nlohmann::ordered_json doc;
  doc["family"] = to_string(family.family);
  if (family.family == Family::Gisin) {
    doc["a"] = {family.a.real(), family.a.imag()};
    doc["b"] = {family.b.real(), family.b.imag()};
  }
  doc["criteria"] = nlohmann::json::array();
  for (Criterion c : criteria) doc["criteria"].push_back(to_string(c));
  doc["rows"] = nlohmann::json::array();
  for (const ScanRow& row : rows) {
    nlohmann::ordered_json j;
    j["x"] = row.x;
    for (const CriterionReport& r : row.reports) {
      const std::string name(to_string(r.criterion));
      j[name + "_witness"] = r.witness;
      j[name + "_detected"] = r.inseparable_detected;
    }
    doc["rows"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

ThresholdResult find_threshold(const FamilySpec& family, Criterion criterion,
                               double tol) {
  auto detected = [&](double x) {
    return evaluate(criterion, make_state(family, x)).inseparable_detected;
  };
  ThresholdResult result;
  result.family = family;
  result.criterion = criterion;
  result.x_lo = 0.0;
  result.x_hi = 1.0;

  const bool at_lo = detected(result.x_lo);
  const bool at_hi = detected(result.x_hi);
  if (at_lo == at_hi) {
    throw Error(ErrorKind::NoSignChange,
                std::string(to_string(criterion)) + " verdict is " +
                    (at_lo ? "detected" : "not detected") +
                    " at both x = 0 and x = 1");
  }
  while (result.x_hi - result.x_lo > tol) {
    const double mid = 0.5 * (result.x_lo + result.x_hi);
    if (detected(mid) == at_lo) {
      result.x_lo = mid;
    } else {
      result.x_hi = mid;
    }
    ++result.iterations;
  }
  result.x_star = 0.5 * (result.x_lo + result.x_hi);
  if (result.x_hi < kBoundaryBand) {
    throw Error(ErrorKind::NoSignChange,
                std::string(to_string(criterion)) +
                    " detects inseparability for every resolvable x > 0 (already at x = " +
                    format_double(result.x_hi) +
                    "); the crossing sits on the x_lo = 0 boundary",
                result.x_hi);
  }
  return result;
}

}  // namespace sepcheck::app
