#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sepcheck/app.hpp"
#include "sepcheck/errors.hpp"
#include "sepcheck/oracle.hpp"
#include "sepcheck/state_io.hpp"

namespace sepcheck::app {

namespace {

using nlohmann::ordered_json;

ordered_json matrix_json(const ComplexMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json report_json(const CriterionReport& r) {
  ordered_json j;
  j["criterion"] = to_string(r.criterion);
  j["witness"] = r.witness;
  j["inseparable_detected"] = r.inseparable_detected;
  if (r.spectrum) j["spectrum"] = *r.spectrum;
  return j;
}

ordered_json complex_json(Complex z) { return {z.real(), z.imag()}; }

struct FamilyFlags {
  std::string name;
  std::string a;
  std::string b;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", name, "werner | gisin | singlet_polarized")->required();
    cmd->add_option("--a", a, "gisin amplitude of |01>, re[,im] (default 1/sqrt(2))");
    cmd->add_option("--b", b, "gisin amplitude of |10>, re[,im] (default 1/sqrt(2))");
  }

  FamilySpec spec() const {
    FamilySpec f;
    f.family = parse_family(name);
    if (!a.empty()) f.a = parse_complex(a);
    if (!b.empty()) f.b = parse_complex(b);
    if (f.family == Family::Gisin) {
      // Rejects unnormalized (a, b) before any scan or bisection starts.
      gisin(0.0, f.a, f.b);
    }
    return f;
  }
};

int cmd_analyze(const std::string& path, const std::string& criteria_text,
                std::ostream& out) {
  const std::vector<Criterion> criteria = parse_criteria(criteria_text);
  const BipartiteDensityMatrix rho = load_state(path);
  ordered_json doc;
  doc["dims"] = {rho.dim_a(), rho.dim_b()};
  doc["reports"] = ordered_json::array();
  for (Criterion c : criteria) doc["reports"].push_back(report_json(evaluate(c, rho)));
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_scan(const FamilyFlags& family_flags, const std::string& grid_text,
             const std::string& criteria_text, const std::string& format,
             unsigned threads, std::ostream& out) {
  const FamilySpec family = family_flags.spec();
  const std::vector<double> xs = grid_points(parse_grid(grid_text));
  const std::vector<Criterion> criteria = parse_criteria(criteria_text);
  const auto rows = scan_family(family, xs, criteria, threads);
  out << (format == "json" ? format_scan_json(family, rows, criteria)
                           : format_scan_csv(rows, criteria));
  return kExitOk;
}

int cmd_threshold(const FamilyFlags& family_flags, const std::string& criterion,
                  std::ostream& out) {
  const FamilySpec family = family_flags.spec();
  const ThresholdResult r = find_threshold(family, parse_criterion(criterion));
  ordered_json doc;
  doc["family"] = to_string(family.family);
  if (family.family == Family::Gisin) {
    doc["a"] = complex_json(family.a);
    doc["b"] = complex_json(family.b);
  }
  doc["criterion"] = to_string(r.criterion);
  doc["x_lo"] = r.x_lo;
  doc["x_hi"] = r.x_hi;
  doc["x_star"] = r.x_star;
  doc["iterations"] = r.iterations;
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_decompose(const std::string& path, const SearchConfig& cfg,
                  std::ostream& out, std::ostream& err) {
  const BipartiteDensityMatrix rho = load_state(path);
  const auto found = search_decomposition(rho, cfg);
  ordered_json doc;
  doc["found"] = found.has_value();
  if (!found) {
    out << doc.dump(2) << "\n";
    err << "not found: no separable decomposition within the search budget "
           "(this does not prove inseparability)\n";
    return kExitNotFound;
  }
  doc["residual"] = found->residual;
  doc["terms"] = found->weights.size();
  doc["weights"] = found->weights;
  doc["factors_a"] = ordered_json::array();
  doc["factors_b"] = ordered_json::array();
  for (const auto& m : found->factors_a) doc["factors_a"].push_back(matrix_json(m));
  for (const auto& m : found->factors_b) doc["factors_b"].push_back(matrix_json(m));
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  const RawState raw = read_state_file(path);
  const ValidationReport report = inspect(raw.dim_a, raw.dim_b, raw.matrix);
  ordered_json doc;
  doc["dims"] = {raw.dim_a, raw.dim_b};
  doc["hermiticity_defect"] = report.hermiticity_defect;
  doc["trace_defect"] = report.trace_defect;
  doc["min_eigenvalue"] = report.min_eigenvalue;
  doc["valid"] = report.valid;
  if (!report.valid) doc["error"] = report.failure;
  out << doc.dump(2) << "\n";
  if (!report.valid) {
    err << report.failure << " (min eigenvalue " << format_double(report.min_eigenvalue)
        << ", trace defect " << format_double(report.trace_defect)
        << ", hermiticity defect " << format_double(report.hermiticity_defect) << ")\n";
    return kExitInputError;
  }
  return kExitOk;
}

int cmd_state(const FamilyFlags& family_flags, double x, const std::string& path,
              std::ostream& out) {
  const BipartiteDensityMatrix rho = make_state(family_flags.spec(), x);
  if (path.empty()) {
    out << format_state_json(rho);
  } else {
    write_state_file(path, rho);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Bipartite separability tests: partial transpose, CHSH, purity"};
  app.require_subcommand(1);

  std::string state_path;
  std::string criteria_text = "ppt,chsh,renyi2";
  auto* analyze = app.add_subcommand("analyze", "Run criteria on a state file");
  analyze->add_option("--state", state_path, "state JSON file")->required();
  analyze->add_option("--criteria", criteria_text, "comma list of ppt, chsh, renyi2");

  FamilyFlags family;
  std::string grid_text;
  std::string format = "csv";
  unsigned threads = 1;
  auto* scan = app.add_subcommand("scan", "Tabulate criteria along a state family");
  family.attach(scan);
  scan->add_option("--x", grid_text, "grid start:stop:step")->required();
  scan->add_option("--criteria", criteria_text, "comma list of ppt, chsh, renyi2");
  scan->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--threads", threads, "worker threads for grid points");

  std::string criterion;
  auto* threshold = app.add_subcommand("threshold", "Bisect the detection threshold in x");
  family.attach(threshold);
  threshold->add_option("--criterion", criterion, "ppt | chsh | renyi2")->required();

  SearchConfig cfg;
  std::size_t max_terms = 0;
  auto* decompose = app.add_subcommand("decompose", "Search a separable decomposition");
  decompose->add_option("--state", state_path, "state JSON file")->required();
  decompose->add_option("--restarts", cfg.restarts, "restarts (default 32)");
  decompose->add_option("--iterations", cfg.iterations, "iterations per restart (default 5000)");
  decompose->add_option("--tol", cfg.residual_tol, "Frobenius residual tolerance (default 1e-6)");
  decompose->add_option("--seed", cfg.seed, "seed (default 0)");
  decompose->add_option("--max-terms", max_terms, "product terms (default (dA dB)^2)");

  auto* validate_cmd = app.add_subcommand("validate", "Check density-matrix invariants");
  validate_cmd->add_option("--state", state_path, "state JSON file")->required();

  double x = 0.0;
  std::string out_path;
  auto* state = app.add_subcommand("state", "Write a family member as a state file");
  family.attach(state);
  state->add_option("--x", x, "family parameter in [0, 1]")->required();
  state->add_option("--out", out_path, "output file (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (max_terms != 0) cfg.max_terms = max_terms;
    if (analyze->parsed()) return cmd_analyze(state_path, criteria_text, out);
    if (scan->parsed()) return cmd_scan(family, grid_text, criteria_text, format, threads, out);
    if (threshold->parsed()) return cmd_threshold(family, criterion, out);
    if (decompose->parsed()) return cmd_decompose(state_path, cfg, out, err);
    if (validate_cmd->parsed()) return cmd_validate(state_path, out, err);
    if (state->parsed()) return cmd_state(family, x, out_path, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace sepcheck::app
