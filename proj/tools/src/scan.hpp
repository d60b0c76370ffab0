#pragma once

// Membership scans over the (v1, v2) plane at fixed first moments u, with
// v3 = 1 - v1 - v2.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <spinmoment/feasibility.hpp>

namespace spinmoment::cli {

inline constexpr int kMaxGrid = 1024;

struct ScanSpec {
  SpinNumber spin{10};
  Vector3 u = Vector3::Zero();
  int grid = 101;
  double v1_min = -0.2, v1_max = 1.0;
  double v2_min = -0.2, v2_max = 1.0;
  bool want_inner = true;
  bool want_exact = true;
  bool want_outer = true;
  bool exact_everywhere = false;  // SDP at every point with a PSD rho_j
  double tol = kDefaultPsdTolerance;
  unsigned threads = 0;           // 0: hardware concurrency, capped by SPINMOMENT_THREADS
};

struct ScanPoint {
  double v1 = 0.0, v2 = 0.0;
  bool in_r = false;
  std::optional<bool> in_s;  // empty when S_j was not requested
  bool in_t = false;
  bool sdp_run = false;
  double seconds = 0.0;
};

/// Points in row-major order: row i is v2 = v2_min + i h2, column k is
/// v1 = v1_min + k h1.
struct ScanResult {
  ScanSpec spec;
  std::vector<ScanPoint> points;
  double seconds = 0.0;

  std::size_t count_r() const;
  std::size_t count_s() const;
  std::size_t count_t() const;
  std::size_t count_sdp() const;
  /// Points where R => S_j => T_j fails.
  std::size_t nesting_violations() const;
  double cell_area() const;
};

double grid_value(double lo, double hi, int n, int index);

/// Flags for a single point (used by the scan and by round-trip checks).
ScanPoint scan_point(const ScanSpec& spec, double v1, double v2);

ScanResult run_scan(const ScanSpec& spec);

/// Worker count: spec.threads (or hardware concurrency) capped by
/// SPINMOMENT_THREADS.
unsigned scan_threads(const ScanSpec& spec);

void write_csv(const ScanResult& r, std::ostream& out);
void write_svg(const ScanResult& r, std::ostream& out);

/// Reads back a CSV produced by write_csv.
std::vector<ScanPoint> read_csv(std::istream& in);

}  // namespace spinmoment::cli
