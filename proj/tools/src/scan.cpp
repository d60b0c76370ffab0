#include "scan.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace spinmoment::cli {

double grid_value(double lo, double hi, int n, int index) {
  if (n <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(index) / static_cast<double>(n - 1);
}

std::size_t ScanResult::count_r() const {
  return std::count_if(points.begin(), points.end(), [](const ScanPoint& p) { return p.in_r; });
}
std::size_t ScanResult::count_s() const {
  return std::count_if(points.begin(), points.end(), [](const ScanPoint& p) { return p.in_s.value_or(false); });
}
std::size_t ScanResult::count_t() const {
  return std::count_if(points.begin(), points.end(), [](const ScanPoint& p) { return p.in_t; });
}
std::size_t ScanResult::count_sdp() const {
  return std::count_if(points.begin(), points.end(), [](const ScanPoint& p) { return p.sdp_run; });
}

std::size_t ScanResult::nesting_violations() const {
  return std::count_if(points.begin(), points.end(), [](const ScanPoint& p) {
    if (p.in_s) return (p.in_r && !*p.in_s) || (*p.in_s && !p.in_t);
    return p.in_r && !p.in_t;
  });
}

double ScanResult::cell_area() const {
  const int n = spec.grid;
  if (n <= 1) return 0.0;
  return (spec.v1_max - spec.v1_min) / (n - 1) * (spec.v2_max - spec.v2_min) / (n - 1);
}

ScanPoint scan_point(const ScanSpec& spec, double v1, double v2) {
  const auto t0 = std::chrono::steady_clock::now();
  ScanPoint p;
  p.v1 = v1;
  p.v2 = v2;
  const Vector3 v(v1, v2, 1.0 - v1 - v2);
  const HermitianMatrix rho = rho_from_coords(spec.u, v).rho();
  const bool psd = is_psd(rho, spec.tol);
  p.in_r = psd && ppt_min_eigenvalue(rho) >= -spec.tol;
  p.in_t = psd && is_psd(tau(rho, spec.spin).tau, spec.tol);
  if (spec.want_exact) {
    const bool decided = !spec.exact_everywhere && (p.in_r || !p.in_t);
    if (!psd) {
      p.in_s = false;
    } else if (decided) {
      p.in_s = p.in_r;
    } else {
      RenormalizedCoords c;
      c.u = spec.u;
      c.v = v;
      c.spin = spec.spin;
      p.in_s = exact_test_direct(moments_from_coords(c)).status != VerdictStatus::non_quantum;
      p.sdp_run = true;
    }
  }
  p.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return p;
}

unsigned scan_threads(const ScanSpec& spec) {
  unsigned n = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPINMOMENT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

ScanResult run_scan(const ScanSpec& spec) {
  if (spec.grid < 1 || spec.grid > kMaxGrid) {
    throw std::invalid_argument("scan: grid must be in [1, " + std::to_string(kMaxGrid) + "]");
  }
  if (spec.spin.two_j() < 2) throw std::invalid_argument("scan: requires j >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  ScanResult r;
  r.spec = spec;
  const int n = spec.grid;
  r.points.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  // Build the shared operator table before the workers start.
  (void)cached_reduction_operators(spec.spin);

  const unsigned workers = std::min<unsigned>(scan_threads(spec), static_cast<unsigned>(n));
  auto rows = [&](int first, int last) {
    for (int i = first; i < last; ++i) {
      const double v2 = grid_value(spec.v2_min, spec.v2_max, n, i);
      for (int k = 0; k < n; ++k) {
        r.points[static_cast<std::size_t>(i) * n + k] =
            scan_point(spec, grid_value(spec.v1_min, spec.v1_max, n, k), v2);
      }
    }
  };
  if (workers <= 1) {
    rows(0, n);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        const int first = static_cast<int>(static_cast<long>(n) * w / workers);
        const int last = static_cast<int>(static_cast<long>(n) * (w + 1) / workers);
        pool.emplace_back([&, w, first, last] {
          try {
            rows(first, last);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void write_csv(const ScanResult& r, std::ostream& out) {
  out << "v1,v2,in_R,in_Sj,in_Tj\n";
  char buf[128];
  for (const auto& p : r.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%s,%d\n", p.v1, p.v2, p.in_r ? 1 : 0,
                  p.in_s ? (*p.in_s ? "1" : "0") : "NA", p.in_t ? 1 : 0);
    out << buf;
  }
}

std::vector<ScanPoint> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "v1,v2,in_R,in_Sj,in_Tj") {
    throw std::runtime_error("read_csv: unexpected header '" + line + "'");
  }
  auto flag = [](const std::string& s, std::size_t row) {
    if (s == "1") return true;
    if (s == "0") return false;
    throw std::runtime_error("read_csv: bad flag '" + s + "' on row " + std::to_string(row));
  };
  std::vector<ScanPoint> points;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw std::runtime_error("read_csv: row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " fields");
    ScanPoint p;
    p.v1 = std::stod(cells[0]);
    p.v2 = std::stod(cells[1]);
    p.in_r = flag(cells[2], row);
    if (cells[3] != "NA") p.in_s = flag(cells[3], row);
    p.in_t = flag(cells[4], row);
    points.push_back(p);
  }
  return points;
}

namespace {

// Innermost requested set containing the point.
const char* cell_class(const ScanSpec& spec, const ScanPoint& p) {
  if (spec.want_inner && p.in_r) return "R";
  if (spec.want_exact && p.in_s.value_or(false)) return "S";
  if (spec.want_outer && p.in_t) return "T";
  return nullptr;
}

const char* fill_for(const std::string& cls) {
  if (cls == "R") return "#1f4e79";
  if (cls == "S") return "#4f94cd";
  return "#c6dbef";
}

}  // namespace

void write_svg(const ScanResult& r, std::ostream& out) {
  const int n = r.spec.grid;
  const int cell = std::max(1, 600 / std::max(n, 1));
  const int margin = 50;
  const int size = cell * n;
  const int width = size + 2 * margin + 120;
  const int height = size + 2 * margin;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  char title[256];
  std::snprintf(title, sizeof title, "2j = %d, u = (%g, %g, %g)", r.spec.spin.two_j(), r.spec.u(0),
                r.spec.u(1), r.spec.u(2));
  out << "<title>" << title << "</title>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size << "\" height=\"" << size
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  out << "<g id=\"cells\" shape-rendering=\"crispEdges\">\n";
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const ScanPoint& p = r.points[static_cast<std::size_t>(i) * n + k];
      const char* cls = cell_class(r.spec, p);
      if (!cls) continue;
      // v2 grows upwards.
      out << "<rect class=\"" << cls << "\" x=\"" << margin + k * cell << "\" y=\""
          << margin + (n - 1 - i) * cell << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"" << fill_for(cls) << "\"/>\n";
    }
  }
  out << "</g>\n";
  char label[128];
  std::snprintf(label, sizeof label, "v1 in [%g, %g]", r.spec.v1_min, r.spec.v1_max);
  out << "<text x=\"" << margin << "\" y=\"" << height - 15 << "\" font-size=\"14\">" << label << "</text>\n";
  std::snprintf(label, sizeof label, "v2 in [%g, %g]", r.spec.v2_min, r.spec.v2_max);
  out << "<text x=\"10\" y=\"" << margin - 15 << "\" font-size=\"14\">" << label << "</text>\n";
  const int lx = margin + size + 20;
  const char* names[3][2] = {{"R", "R (PPT)"}, {"S", "S_j (exact)"}, {"T", "T_j (outer)"}};
  for (int s = 0; s < 3; ++s) {
    const int ly = margin + 25 * s;
    out << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"15\" height=\"15\" fill=\""
        << fill_for(names[s][0]) << "\"/>\n";
    out << "<text x=\"" << lx + 22 << "\" y=\"" << ly + 12 << "\" font-size=\"12\">" << names[s][1]
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace spinmoment::cli
