#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>
#include <spinmoment/feasibility.hpp>

namespace spinmoment::cli {

// Process exit codes. Everything above kExitBoundary is an error.
inline constexpr int kExitQuantum = 0;
inline constexpr int kExitNonQuantum = 1;
inline constexpr int kExitBoundary = 2;
inline constexpr int kExitInputError = 3;
inline constexpr int kExitSolverError = 4;
inline constexpr int kExitIoError = 5;

int exit_code(VerdictStatus s);

void print_verdict(const Verdict& v, const std::string& title, std::ostream& out);
void print_witness(const Witness& w, std::ostream& out);

/// {status, stage, t_star, witness?, certificate_spectrum?, tests_run}
nlohmann::json verdict_json(const Verdict& v);
nlohmann::json witness_json(const Witness& w);

std::string format_vector(const RealVector& x);

}  // namespace spinmoment::cli
