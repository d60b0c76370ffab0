#pragma once

// JSON moment files:
//
//   {"two_j": 10, "M": [[[re, im], [re, im], [re, im]], ...], "label": "..."}
//   {"two_j": 10, "coords": {"u": [u1, u2, u3], "v": [v1, v2, v3]}}

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <spinmoment/reduction.hpp>
#include <spinmoment/spinalg.hpp>

namespace spinmoment::cli {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MomentFile {
  SpinNumber spin{2};
  std::optional<Matrix3c> m;
  std::optional<RenormalizedCoords> coords;
  std::string label;

  /// Structural validation happens here (ConstraintViolation).
  MomentMatrix moments() const;
};

MomentFile parse_moment_file(std::string_view text, std::string_view source = "<input>");
MomentFile load_moment_file(const std::filesystem::path& path);

std::string to_json(const MomentFile& f);

/// Rational spin from "5", "5/2" or "2.5"; returns two_j.
int parse_spin(std::string_view text);

}  // namespace spinmoment::cli
