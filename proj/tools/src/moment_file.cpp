#include "moment_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace spinmoment::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(std::string_view source, const std::string& field, const std::string& what) {
  throw ParseError(std::string(source) + ": field '" + field + "': " + what);
}

double number_at(const json& node, std::string_view source, const std::string& field) {
  if (!node.is_number()) fail(source, field, "expected a number, got " + std::string(node.type_name()));
  const double x = node.get<double>();
  if (!std::isfinite(x)) fail(source, field, "not finite");
  return x;
}

Vector3 vector_at(const json& obj, const char* key, std::string_view source, const std::string& path) {
  const std::string field = path + "." + key;
  if (!obj.contains(key)) fail(source, field, "missing");
  const json& arr = obj.at(key);
  if (!arr.is_array() || arr.size() != 3) fail(source, field, "expected an array of 3 numbers");
  Vector3 v;
  for (int k = 0; k < 3; ++k) v(k) = number_at(arr[k], source, field + "[" + std::to_string(k) + "]");
  return v;
}

std::pair<int, int> line_col(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

MomentMatrix MomentFile::moments() const {
  if (m) return MomentMatrix::create(spin, *m);
  RenormalizedCoords c = *coords;
  c.spin = spin;
  return moments_from_coords(c);
}

MomentFile parse_moment_file(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": malformed JSON: " + e.what());
  }
  if (!doc.is_object()) fail(source, "<root>", "expected a JSON object");

  MomentFile f;
  if (!doc.contains("two_j")) fail(source, "two_j", "missing");
  const json& tj = doc.at("two_j");
  if (!tj.is_number_integer()) fail(source, "two_j", "expected an integer (twice the spin)");
  const long long two_j = tj.get<long long>();
  if (two_j < 1 || two_j > 100000) fail(source, "two_j", "must be a positive integer, got " + std::to_string(two_j));
  f.spin = SpinNumber(static_cast<int>(two_j));

  const bool has_m = doc.contains("M");
  const bool has_c = doc.contains("coords");
  if (has_m == has_c) fail(source, has_m ? "M" : "coords", "exactly one of 'M' and 'coords' must be present");

  if (has_m) {
    const json& rows = doc.at("M");
    if (!rows.is_array() || rows.size() != 3) fail(source, "M", "expected 3 rows");
    Matrix3c m;
    for (int k = 0; k < 3; ++k) {
      const json& row = rows[k];
      const std::string rf = "M[" + std::to_string(k) + "]";
      if (!row.is_array() || row.size() != 3) fail(source, rf, "expected 3 entries");
      for (int l = 0; l < 3; ++l) {
        const std::string ef = rf + "[" + std::to_string(l) + "]";
        const json& e = row[l];
        if (e.is_number()) {
          m(k, l) = Complex(number_at(e, source, ef), 0.0);
        } else if (e.is_array() && e.size() == 2) {
          m(k, l) = Complex(number_at(e[0], source, ef + "[0]"), number_at(e[1], source, ef + "[1]"));
        } else {
          fail(source, ef, "expected [re, im]");
        }
      }
    }
    f.m = m;
  } else {
    const json& c = doc.at("coords");
    if (!c.is_object()) fail(source, "coords", "expected an object with 'u' and 'v'");
    RenormalizedCoords rc;
    rc.u = vector_at(c, "u", source, "coords");
    rc.v = vector_at(c, "v", source, "coords");
    rc.spin = f.spin;
    f.coords = rc;
  }
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) fail(source, "label", "expected a string");
    f.label = doc.at("label").get<std::string>();
  }
  return f;
}

MomentFile load_moment_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_moment_file(ss.str(), path.string());
}

std::string to_json(const MomentFile& f) {
  json doc;
  doc["two_j"] = f.spin.two_j();
  if (f.m) {
    json rows = json::array();
    for (int k = 0; k < 3; ++k) {
      json row = json::array();
      for (int l = 0; l < 3; ++l) row.push_back({(*f.m)(k, l).real(), (*f.m)(k, l).imag()});
      rows.push_back(row);
    }
    doc["M"] = rows;
  } else if (f.coords) {
    doc["coords"] = {{"u", {f.coords->u(0), f.coords->u(1), f.coords->u(2)}},
                     {"v", {f.coords->v(0), f.coords->v(1), f.coords->v(2)}}};
  }
  if (!f.label.empty()) doc["label"] = f.label;
  return doc.dump(2);
}

int parse_spin(std::string_view text) {
  const std::string s(text);
  auto bad = [&] { return std::invalid_argument("invalid spin '" + s + "' (use e.g. 5, 5/2 or 2.5)"); };
  try {
    std::size_t pos = 0;
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      const int num = std::stoi(s.substr(0, slash), &pos);
      if (pos != slash) throw bad();
      const std::string den_s = s.substr(slash + 1);
      const int den = std::stoi(den_s, &pos);
      if (pos != den_s.size() || (den != 1 && den != 2)) throw bad();
      const int two_j = den == 1 ? 2 * num : num;
      if (two_j < 1) throw bad();
      return two_j;
    }
    const double j = std::stod(s, &pos);
    if (pos != s.size()) throw bad();
    const double two_j = 2.0 * j;
    if (std::abs(two_j - std::round(two_j)) > 1e-12 || two_j < 0.5) throw bad();
    return static_cast<int>(std::lround(two_j));
  } catch (const std::logic_error&) {
    throw bad();
  }
}

}  // namespace spinmoment::cli
