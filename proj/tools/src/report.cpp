#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace spinmoment::cli {

using nlohmann::json;

int exit_code(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::quantum: return kExitQuantum;
    case VerdictStatus::non_quantum: return kExitNonQuantum;
    case VerdictStatus::boundary: return kExitBoundary;
  }
  return kExitInputError;
}

std::string format_vector(const RealVector& x) {
  std::string s = "[";
  char buf[32];
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", x(i));
    s += buf;
  }
  return s + "]";
}

void print_witness(const Witness& w, std::ostream& out) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", w.value);
  out << "witness value z.t:     " << buf << "\n";
  out << "Z spectrum:            " << format_vector(hermitian_eig(w.Z).values) << "\n";
  std::snprintf(buf, sizeof buf, "%.12g", w.Z.trace());
  out << "tr Z:                  " << buf << "\n";
  out << "z (orthonormal basis): " << format_vector(w.z) << "\n";
  out << "Z in measured operators:\n";
  for (Eigen::Index i = 0; i < w.coefficients.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%+.10g", w.coefficients(i));
    const std::string name = static_cast<std::size_t>(i) < w.labels.size() ? w.labels[i] : "O" + std::to_string(i);
    out << "  " << name << std::string(name.size() < 6 ? 6 - name.size() : 1, ' ') << buf << "\n";
  }
}

void print_verdict(const Verdict& v, const std::string& title, std::ostream& out) {
  out << "input:  " << title << "\n";
  out << "status: " << to_string(v.status) << "\n";
  out << "stage:  " << v.stage << "\n";
  if (!std::isnan(v.t_star)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v.t_star);
    out << "t*:     " << buf << "\n";
  }
  out << "tests run:\n";
  for (const auto& t : v.tests_run) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-20s %-40s %10.6f s\n", t.name.c_str(), t.outcome.c_str(), t.seconds);
    out << buf;
  }
  if (const auto* s = v.state()) {
    out << "certificate state (dim " << s->dim() << ") spectrum: " << format_vector(hermitian_eig(*s).values)
        << "\n";
  } else if (const auto* w = v.witness()) {
    print_witness(*w, out);
  }
}

json witness_json(const Witness& w) {
  json j;
  j["value"] = w.value;
  j["z"] = std::vector<double>(w.z.data(), w.z.data() + w.z.size());
  const RealVector spec = hermitian_eig(w.Z).values;
  j["Z_spectrum"] = std::vector<double>(spec.data(), spec.data() + spec.size());
  j["trace_Z"] = w.Z.trace();
  json coeffs = json::object();
  for (Eigen::Index i = 0; i < w.coefficients.size(); ++i) {
    const std::string name = static_cast<std::size_t>(i) < w.labels.size() ? w.labels[i] : "O" + std::to_string(i);
    coeffs[name] = w.coefficients(i);
  }
  j["coefficients"] = coeffs;
  return j;
}

json verdict_json(const Verdict& v) {
  json j;
  j["status"] = to_string(v.status);
  j["stage"] = v.stage;
  j["t_star"] = std::isnan(v.t_star) ? json(nullptr) : json(v.t_star);
  if (const auto* w = v.witness()) j["witness"] = witness_json(*w);
  if (const auto* s = v.state()) {
    const RealVector spec = hermitian_eig(*s).values;
    j["certificate_spectrum"] = std::vector<double>(spec.data(), spec.data() + spec.size());
  }
  json runs = json::array();
  for (const auto& t : v.tests_run) runs.push_back({{"name", t.name}, {"outcome", t.outcome}, {"seconds", t.seconds}});
  j["tests_run"] = runs;
  return j;
}

}  // namespace spinmoment::cli
