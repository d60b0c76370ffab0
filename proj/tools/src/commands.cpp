#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "moment_file.hpp"
#include "report.hpp"
#include "scan.hpp"
#include "validate.hpp"

namespace spinmoment::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << contents;
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string title_for(const MomentFile& f, const std::string& path) {
  std::string t = f.label.empty() ? path : f.label + " (" + path + ")";
  return t + ", 2j = " + std::to_string(f.spin.two_j());
}

std::pair<double, double> parse_range(const std::vector<double>& r, const char* name) {
  if (r.size() != 2 || !(r[0] < r[1])) {
    throw CLI::ValidationError(name, "expected lo,hi with lo < hi");
  }
  return {r[0], r[1]};
}

int cmd_check(const std::string& input, double tol, const std::string& json_path, std::ostream& out) {
  const MomentFile f = load_moment_file(input);
  ClassifyOptions opts;
  opts.psd_tolerance = tol;
  const Verdict v = classify(f.moments(), opts);
  print_verdict(v, title_for(f, input), out);
  const std::string report = verdict_json(v).dump(2) + "\n";
  if (json_path == "-") {
    out << report;
  } else if (!json_path.empty()) {
    write_file(json_path, report);
  }
  return exit_code(v.status);
}

int cmd_witness(const std::string& input, const std::string& json_path, std::ostream& out) {
  const MomentFile f = load_moment_file(input);
  const WitnessReport w = witness_search(f.moments());
  out << "input:  " << title_for(f, input) << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", w.optimal_value);
  nlohmann::json j;
  j["optimal_value"] = w.optimal_value;
  j["t_star"] = w.t_star;
  if (!w.witness) {
    out << "no witness exists: the best hyperplane has z.t = " << buf << " >= -1e-7\n";
    j["witness"] = nullptr;
  } else {
    print_witness(*w.witness, out);
    j["witness"] = witness_json(*w.witness);
  }
  if (json_path == "-") {
    out << j.dump(2) << "\n";
  } else if (!json_path.empty()) {
    write_file(json_path, j.dump(2) + "\n");
  }
  return w.witness ? 0 : 1;
}

int cmd_scan(ScanSpec spec, const std::string& sets, const std::string& csv_path,
             const std::string& svg_path, std::ostream& out, std::ostream& err) {
  spec.want_inner = sets.find('R') != std::string::npos;
  spec.want_exact = sets.find('S') != std::string::npos;
  spec.want_outer = sets.find('T') != std::string::npos;
  for (char c : sets) {
    if (c != 'R' && c != 'S' && c != 'T' && c != ',') {
      throw CLI::ValidationError("--sets", "expected a list drawn from R,S,T");
    }
  }
  if (spec.u.norm() > 1.0) {
    err << "warning: |u| = " << spec.u.norm() << " > 1; no state has these first moments, all regions are empty\n";
  }
  const ScanResult r = run_scan(spec);
  std::ostringstream csv;
  write_csv(r, csv);
  write_file(csv_path, csv.str());
  if (!svg_path.empty()) {
    std::ostringstream svg;
    write_svg(r, svg);
    write_file(svg_path, svg.str());
  }
  const double cell = r.cell_area();
  char buf[256];
  std::snprintf(buf, sizeof buf, "grid %dx%d, 2j = %d, u = (%g, %g, %g), %u worker(s), %.2f s\n", spec.grid,
                spec.grid, spec.spin.two_j(), spec.u(0), spec.u(1), spec.u(2), scan_threads(spec), r.seconds);
  out << buf;
  std::snprintf(buf, sizeof buf, "  R:   %zu points, area %.6f\n", r.count_r(), r.count_r() * cell);
  out << buf;
  if (spec.want_exact) {
    std::snprintf(buf, sizeof buf, "  S_j: %zu points, area %.6f (%zu SDP solves)\n", r.count_s(),
                  r.count_s() * cell, r.count_sdp());
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "  T_j: %zu points, area %.6f\n", r.count_t(), r.count_t() * cell);
  out << buf;
  const std::size_t bad = r.nesting_violations();
  out << "  nesting violations: " << bad << "\n";
  return bad == 0 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide whether first and second spin moments come from a quantum state", "spinmoment"};
  app.require_subcommand(1);

  std::string input, json_path;
  double tol = kDefaultPsdTolerance;
  auto* check = app.add_subcommand("check", "classify a moment file (exit 0 quantum, 1 non-quantum, 2 boundary)");
  check->add_option("--input,-i", input, "JSON moment file")->required();
  check->add_option("--tol", tol, "PSD tolerance of the cheap stages")->check(CLI::PositiveNumber);
  check->add_option("--json", json_path, "write the machine-readable report here ('-' for stdout)");

  auto* witness = app.add_subcommand("witness", "print a separating hyperplane for non-quantum moments");
  witness->add_option("--input,-i", input, "JSON moment file")->required();
  witness->add_option("--json", json_path, "write the witness as JSON here ('-' for stdout)");

  ScanSpec spec;
  std::string j_text, sets = "R,S,T", csv_path, svg_path;
  int two_j = 0;
  std::vector<double> u, v1_range{-0.2, 1.0}, v2_range{-0.2, 1.0};
  auto* scan = app.add_subcommand("scan", "membership scan over the (v1, v2) plane");
  auto* j_opt = scan->add_option("--j", j_text, "spin j, e.g. 5, 5/2 or 2.5");
  auto* tj_opt = scan->add_option("--two-j", two_j, "twice the spin")->check(CLI::Range(2, 100000));
  j_opt->excludes(tj_opt);
  scan->add_option("--u", u, "first moments u1,u2,u3")->delimiter(',')->required()->expected(3);
  scan->add_option("--grid", spec.grid, "points per axis")->check(CLI::Range(1, kMaxGrid));
  scan->add_option("--sets", sets, "subset of R,S,T to evaluate and draw");
  scan->add_option("--out", csv_path, "CSV output")->required();
  scan->add_option("--svg", svg_path, "SVG output");
  scan->add_option("--v1-range", v1_range, "lo,hi")->delimiter(',')->expected(2);
  scan->add_option("--v2-range", v2_range, "lo,hi")->delimiter(',')->expected(2);
  scan->add_flag("--exact-all", spec.exact_everywhere, "run the SDP at every point with a PSD marginal");
  scan->add_option("--threads", spec.threads, "worker threads (capped by SPINMOMENT_THREADS)");
  scan->add_option("--tol", spec.tol, "PSD tolerance")->check(CLI::PositiveNumber);

  ValidateOptions vopts;
  auto* validate = app.add_subcommand("validate", "self-test: algebra, SDP oracle, sandwich and duality checks");
  validate->add_option("--j-max", vopts.two_j_max, "largest 2j for the algebra checks")->check(CLI::Range(1, 400));
  validate->add_option("--tol", vopts.tol, "residual threshold for the algebra checks");
  validate->add_option("--seed", vopts.seed, "seed for all sampling");
  validate->add_option("--samples", vopts.samples, "samples per randomized check")->check(CLI::Range(1, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*check) return cmd_check(input, tol, json_path, out);
    if (*witness) return cmd_witness(input, json_path, out);
    if (*scan) {
      if (j_opt->count() == 0 && tj_opt->count() == 0) throw CLI::RequiredError("--j or --two-j");
      spec.spin = SpinNumber(j_opt->count() ? parse_spin(j_text) : two_j);
      if (u.size() != 3) throw CLI::ValidationError("--u", "expected three numbers");
      spec.u = Vector3(u[0], u[1], u[2]);
      std::tie(spec.v1_min, spec.v1_max) = parse_range(v1_range, "--v1-range");
      std::tie(spec.v2_min, spec.v2_max) = parse_range(v2_range, "--v2-range");
      return cmd_scan(spec, sets, csv_path, svg_path, out, err);
    }
    if (*validate) {
      const auto results = run_validation(vopts, &out);
      std::size_t failed = 0;
      for (const auto& r : results) failed += !r.passed;
      out << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << "\n";
      return failed == 0 ? 0 : 1;
    }
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ConstraintViolation& e) {
    err << "invalid moments: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolverError;
  } catch (const CapacityExceeded& e) {
    err << "capacity exceeded: " << e.what() << "\n";
    return kExitSolverError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace spinmoment::cli
