#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sepcheck/criteria.hpp"
#include "sepcheck/states.hpp"

namespace sepcheck::app {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNotFound = 3;

inline constexpr double kBisectionTolerance = 1e-6;
/// A crossing that bisection pins below this x is reported as sitting on the
/// x = 0 boundary (NoSignChange) rather than as a threshold.
inline constexpr double kBoundaryBand = 1e-3;

/// `start:stop:step`. The first point is start; further points are
/// start + i*step while they do not pass stop by half a step or more, and a
/// last point that lands within half a step of stop is snapped to stop.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

/// Throws Error{ParseError} on bad syntax, start > stop or step <= 0.
GridSpec parse_grid(std::string_view text);
std::vector<double> grid_points(const GridSpec& grid);

/// "re" or "re,im".
Complex parse_complex(std::string_view text);
/// Comma separated criterion names.
std::vector<Criterion> parse_criteria(std::string_view text);

struct ScanRow {
  double x = 0.0;
  std::vector<CriterionReport> reports;  // one per requested criterion, in order
};

/// Evaluates the family on each grid point. Points are split across
/// `threads` workers but the rows always come back in grid order.
std::vector<ScanRow> scan_family(const FamilySpec& family,
                                 const std::vector<double>& xs,
                                 const std::vector<Criterion>& criteria,
                                 unsigned threads = 1);

/// Header `x,<criterion>_witness,<criterion>_detected,...`; 17 significant
/// digits, booleans as true/false.
std::string format_scan_csv(const std::vector<ScanRow>& rows,
                            const std::vector<Criterion>& criteria);
std::string format_scan_json(const FamilySpec& family,
                             const std::vector<ScanRow>& rows,
                             const std::vector<Criterion>& criteria);

struct ThresholdResult {
  FamilySpec family;
  Criterion criterion = Criterion::Ppt;
  double x_lo = 0.0;
  double x_hi = 1.0;
  double x_star = 0.5;
  int iterations = 0;
};

/// Bisects the detection verdict of `criterion` along the family on [0, 1]
/// until x_hi - x_lo <= tol.
///
/// Throws Error{NoSignChange} if the verdict agrees at x = 0 and x = 1, or if
/// the crossing collapses onto the x = 0 boundary (x_hi < kBoundaryBand).
ThresholdResult find_threshold(const FamilySpec& family, Criterion criterion,
                               double tol = kBisectionTolerance);

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace sepcheck::app
