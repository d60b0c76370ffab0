#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "moment_file.hpp"
#include "report.hpp"
#include "scan.hpp"

using namespace spinmoment;
using namespace spinmoment::cli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "spinmoment");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("spinmoment-test-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string read(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string mixed_m_file(int two_j) {
  const double jj = 0.5 * two_j;
  const double d = jj * (jj + 1) / 3;
  nlohmann::json m = nlohmann::json::array();
  for (int k = 0; k < 3; ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (int l = 0; l < 3; ++l) row.push_back({k == l ? d : 0.0, 0.0});
    m.push_back(row);
  }
  return nlohmann::json{{"two_j", two_j}, {"M", m}, {"label", "maximally mixed"}}.dump();
}

std::string coords_file(int two_j, const std::vector<double>& u, const std::vector<double>& v) {
  return nlohmann::json{{"two_j", two_j}, {"coords", {{"u", u}, {"v", v}}}}.dump();
}

}  // namespace

TEST(CliCheck, MaximallyMixedIsQuantumAtInnerStage) {
  TempDir dir;
  const auto in = dir.write("mixed.json", mixed_m_file(10));
  const auto json_out = dir.file("report.json");
  const CliRun r = run({"check", "--input", in, "--json", json_out});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("quantum"), std::string::npos);
  const auto report = nlohmann::json::parse(read(json_out));
  EXPECT_EQ(report.at("status"), "quantum");
  EXPECT_EQ(report.at("stage"), "inner");
  EXPECT_TRUE(report.contains("t_star"));
  EXPECT_TRUE(report.contains("certificate_spectrum"));
}

TEST(CliCheck, FirstMomentViolationExitsOneWithWitness) {
  TempDir dir;
  const auto in = dir.write("bad.json", coords_file(10, {0, 0, 1.1}, {0.1, 0.1, 0.8}));
  const CliRun r = run({"check", "-i", in, "--json", "-"});
  EXPECT_EQ(r.code, 1) << r.err;
  const auto pos = r.out.find('{');
  ASSERT_NE(pos, std::string::npos);
  const auto report = nlohmann::json::parse(r.out.substr(pos));
  EXPECT_EQ(report.at("status"), "non-quantum");
  ASSERT_TRUE(report.contains("witness"));
  EXPECT_LT(report.at("witness").at("value").get<double>(), 0.0);
}

TEST(CliCheck, CasimirViolationIsAnInputError) {
  TempDir dir;
  const auto in = dir.write("cas.json", coords_file(10, {0, 0, 0}, {0.3, 0.3, 0.3}));
  const CliRun r = run({"check", "--input", in});
  EXPECT_GT(r.code, 2);
  EXPECT_NE(r.err.find("Casimir violated"), std::string::npos) << r.err;
}

TEST(CliCheck, ParseErrorsNameTheField) {
  TempDir dir;
  const CliRun a = run({"check", "--input", dir.write("a.json", R"({"two_j": 4, "coords": {"u": [0, 0], "v": [1, 0, 0]}})")});
  EXPECT_EQ(a.code, kExitInputError);
  EXPECT_NE(a.err.find("coords.u"), std::string::npos) << a.err;

  const CliRun b = run({"check", "--input", dir.write("b.json", "{\"two_j\": 4,\n  \"M\": [1, 2,]}")});
  EXPECT_EQ(b.code, kExitInputError);
  EXPECT_NE(b.err.find(":2:"), std::string::npos) << b.err;

  const CliRun c = run({"check", "--input", dir.write("c.json", R"({"two_j": 4})")});
  EXPECT_EQ(c.code, kExitInputError);

  const CliRun d = run({"check", "--input", dir.file("missing.json")});
  EXPECT_GT(d.code, 2);
}

TEST(CliCheck, ExitCodesAreTotalOverStatus) {
  EXPECT_EQ(exit_code(VerdictStatus::quantum), 0);
  EXPECT_EQ(exit_code(VerdictStatus::non_quantum), 1);
  EXPECT_EQ(exit_code(VerdictStatus::boundary), 2);
}

TEST(CliWitness, QuantumInputHasNone) {
  TempDir dir;
  const CliRun r = run({"witness", "--input", dir.write("m.json", mixed_m_file(6))});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("no witness exists"), std::string::npos);
}

TEST(CliWitness, NonQuantumPrintsHyperplane) {
  TempDir dir;
  const CliRun r =
      run({"witness", "--input", dir.write("w.json", coords_file(8, {0, 0, 0}, {1.1, -0.05, -0.05})), "--json", "-"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find('{');
  ASSERT_NE(pos, std::string::npos);
  const auto j = nlohmann::json::parse(r.out.substr(pos));
  EXPECT_LT(j.at("optimal_value").get<double>(), 0.0);
  const auto& w = j.at("witness");
  EXPECT_GE(w.at("Z_spectrum").at(0).get<double>(), -1e-9);
}

TEST(CliWitness, MalformedInputIsUsageError) {
  TempDir dir;
  EXPECT_EQ(run({"witness", "--input", dir.write("x.json", "not json")}).code, kExitInputError);
  EXPECT_EQ(run({"witness"}).code, kExitInputError);
  EXPECT_EQ(run({"bogus"}).code, kExitInputError);
}

TEST(MomentFile, RoundTripAndSpinParsing) {
  const auto f = parse_moment_file(coords_file(5, {0.1, 0.2, 0.3}, {0.2, 0.3, 0.5}));
  const auto again = parse_moment_file(to_json(f));
  EXPECT_EQ(again.spin.two_j(), 5);
  EXPECT_LE((again.moments().matrix() - f.moments().matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(parse_spin("5"), 10);
  EXPECT_EQ(parse_spin("5/2"), 5);
  EXPECT_EQ(parse_spin("2.5"), 5);
  EXPECT_THROW(parse_spin("5/3"), std::invalid_argument);
  EXPECT_THROW(parse_spin("0"), std::invalid_argument);
  EXPECT_THROW(parse_spin("x"), std::invalid_argument);
}

TEST(CliScan, SmallGridNestedAndRoundTrips) {
  TempDir dir;
  const auto csv = dir.file("scan.csv");
  const auto svg = dir.file("scan.svg");
  const CliRun r = run({"scan", "--j", "5/2", "--u", "0.1,0.2,0.3", "--grid", "21", "--out", csv, "--svg", svg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("nesting violations: 0"), std::string::npos);

  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "v1,v2,in_R,in_Sj,in_Tj");
  in.seekg(0);
  const auto points = read_csv(in);
  ASSERT_EQ(points.size(), 21u * 21u);

  ScanSpec spec;
  spec.spin = SpinNumber(5);
  spec.u = Vector3(0.1, 0.2, 0.3);
  spec.grid = 21;
  std::size_t r_count = 0, s_count = 0, t_count = 0;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto& p = points[idx];
    const int i = static_cast<int>(idx / 21), k = static_cast<int>(idx % 21);
    EXPECT_DOUBLE_EQ(p.v1, grid_value(spec.v1_min, spec.v1_max, 21, k));
    EXPECT_DOUBLE_EQ(p.v2, grid_value(spec.v2_min, spec.v2_max, 21, i));
    ASSERT_TRUE(p.in_s.has_value());
    if (p.in_r) EXPECT_TRUE(*p.in_s);
    if (*p.in_s) EXPECT_TRUE(p.in_t);
    r_count += p.in_r;
    s_count += *p.in_s;
    t_count += p.in_t;
  }
  EXPECT_GT(r_count, 0u);
  EXPECT_LE(r_count, s_count);
  EXPECT_LE(s_count, t_count);

  // Re-test a random sample of points from scratch.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  for (int n = 0; n < 20; ++n) {
    const auto& p = points[pick(rng)];
    const auto q = scan_point(spec, p.v1, p.v2);
    EXPECT_EQ(q.in_r, p.in_r);
    EXPECT_EQ(q.in_s, p.in_s);
    EXPECT_EQ(q.in_t, p.in_t);
  }

  // Each drawn cell's class is the innermost set its CSV row belongs to.
  const std::string text = read(svg);
  const std::regex rect(R"re(<rect class="([RST])" x="(\d+)" y="(\d+)" width="(\d+)")re");
  std::size_t drawn = 0;
  for (std::sregex_iterator it(text.begin(), text.end(), rect), end; it != end; ++it) {
    const int cell = std::stoi((*it)[4]);
    const int k = (std::stoi((*it)[2]) - 50) / cell;
    const int i = 20 - (std::stoi((*it)[3]) - 50) / cell;
    const auto& p = points[static_cast<std::size_t>(i) * 21 + k];
    const std::string cls = (*it)[1];
    const std::string expected = p.in_r ? "R" : (*p.in_s ? "S" : "T");
    EXPECT_EQ(cls, expected) << "cell " << i << "," << k;
    EXPECT_TRUE(p.in_t);
    ++drawn;
  }
  EXPECT_EQ(drawn, t_count);
}

TEST(CliScan, BoundaryFirstMomentsCollapseToOnePoint) {
  TempDir dir;
  const auto csv = dir.file("pole.csv");
  // Step 0.02 puts v1 = v2 = 0 on the grid.
  const CliRun r = run({"scan", "--two-j", "10", "--u", "0,0,1", "--grid", "61", "--out", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(csv);
  const auto points = read_csv(in);
  std::size_t r_count = 0, s_count = 0, t_count = 0;
  for (const auto& p : points) {
    r_count += p.in_r;
    s_count += p.in_s.value_or(false);
    t_count += p.in_t;
    if (p.in_t) {
      EXPECT_NEAR(p.v1, 0.0, 1e-12);
      EXPECT_NEAR(p.v2, 0.0, 1e-12);
    }
  }
  EXPECT_EQ(r_count, 1u);
  EXPECT_EQ(s_count, 1u);
  EXPECT_EQ(t_count, 1u);
}

TEST(CliScan, SpinOneExactSetIsThePsdSet) {
  ScanSpec spec;
  spec.spin = SpinNumber(2);
  spec.grid = 31;
  spec.exact_everywhere = true;
  const auto r = run_scan(spec);
  std::size_t strict = 0;
  for (const auto& p : r.points) {
    const bool psd = rho_from_coords(Vector3::Zero(), Vector3(p.v1, p.v2, 1 - p.v1 - p.v2)).is_state();
    EXPECT_EQ(p.in_s.value(), psd) << p.v1 << "," << p.v2;
    strict += psd && !p.in_r;
  }
  EXPECT_GT(strict, 0u);
}

TEST(CliScan, SetsSelectionAndNaColumn) {
  TempDir dir;
  const auto csv = dir.file("rt.csv");
  const CliRun r = run({"scan", "--j", "2", "--u", "0,0,0", "--grid", "5", "--sets", "R,T", "--out", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = read(csv);
  EXPECT_NE(text.find(",NA,"), std::string::npos);
  EXPECT_EQ(run({"scan", "--j", "2", "--u", "0,0,0", "--sets", "Q", "--out", csv}).code, kExitInputError);
  EXPECT_EQ(run({"scan", "--j", "2", "--u", "0,0,0", "--grid", "2000", "--out", csv}).code, kExitInputError);
  EXPECT_EQ(run({"scan", "--u", "0,0,0", "--out", csv}).code, kExitInputError);
}

TEST(CliScan, UnwritableOutputIsIoError) {
  const CliRun r = run({"scan", "--j", "1", "--u", "0,0,0", "--grid", "3", "--out", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(r.code, kExitIoError);
}

TEST(CliScan, LargeFirstMomentsWarn) {
  TempDir dir;
  const CliRun r = run({"scan", "--j", "1", "--u", "1,1,0", "--grid", "3", "--out", dir.file("w.csv")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.out.find("T_j: 0 points"), std::string::npos);
}

TEST(CliValidate, PassesAndReportsCasimirAtSpinFifteen) {
  const CliRun r = run({"validate", "--j-max", "30", "--samples", "10"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS casimir[2j=30]"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliValidate, BrokenToleranceNamesTheInvariant) {
  const CliRun r = run({"validate", "--j-max", "4", "--tol", "1e-300", "--samples", "5"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("FAIL "), std::string::npos) << r.out;
}
