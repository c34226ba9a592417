#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "hardyspec/cli.hpp"
#include "hardyspec/error.hpp"
#include "hardyspec/io.hpp"

using namespace hardyspec;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hardyspec");
  std::ostringstream out, err;
  const int code = cli::parse_and_run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) result.push_back(line);
  return result;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> result;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, ',')) result.push_back(f);
  return result;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hardyspec_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("list and range parsers") {
  CHECK(cli::parse_double_list("1e-1,1e-2, 1e-3") == std::vector<double>{1e-1, 1e-2, 1e-3});
  CHECK(cli::parse_int_list("1,2,4") == std::vector<int>{1, 2, 4});
  CHECK_THROWS_AS(cli::parse_int_list("1,,2"), DomainError);
  CHECK_THROWS_AS(cli::parse_int_list("1.5"), DomainError);
  CHECK_THROWS_AS(cli::parse_double_list("abc"), DomainError);
  CHECK_THROWS_AS(cli::parse_double_list("inf"), DomainError);

  const auto ks = cli::parse_double_range("-20:5:0.25");
  REQUIRE(ks.size() == 101);
  CHECK(ks.front() == -20.0);
  CHECK(ks[1] == -19.75);
  CHECK(ks.back() == 5.0);
  CHECK(cli::parse_double_range("0:0.3:0.1").size() == 4);
  CHECK_THROWS_AS(cli::parse_double_range("1:0:0.1"), DomainError);
  CHECK_THROWS_AS(cli::parse_double_range("0:1:0"), DomainError);
  CHECK_THROWS_AS(cli::parse_double_range("0:1"), DomainError);

  CHECK(cli::parse_int_range("0:8") == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(cli::parse_int_range("1:7:3") == std::vector<int>{1, 4, 7});
  CHECK_THROWS_AS(cli::parse_int_range("3:1"), DomainError);
  CHECK_THROWS_AS(cli::parse_int_range("1"), DomainError);
}

TEST_CASE("polynomial parsing and families") {
  const auto plain = cli::parse_polynomial("2,0:1; 0,2:-1");
  REQUIRE(plain.size() == 2);
  CHECK(plain[0].exponents == std::vector<int>{2, 0});
  CHECK(plain[1].coefficient == -1.0);
  const auto json = cli::parse_polynomial(R"([{"exponents":[2,0],"coefficient":1},{"exponents":[0,2],"coefficient":-1}])");
  REQUIRE(json.size() == 2);
  CHECK(json[1].exponents == std::vector<int>{0, 2});
  CHECK_THROWS_AS(cli::parse_polynomial(""), DomainError);
  CHECK_THROWS_AS(cli::parse_polynomial("2,0"), DomainError);
  CHECK_THROWS_AS(cli::parse_polynomial("[{\"exponents\":[2,0]}]"), DomainError);
  CHECK_THROWS_AS(cli::parse_polynomial("[1,2"), DomainError);

  CHECK(cli::make_family("zonal", 3, 2, std::nullopt).degree() == 2);
  CHECK(cli::make_family("product", 4, 0, std::nullopt).degree() == 4);
  CHECK(cli::make_family("planar-sin", 2, 3, std::nullopt).degree() == 3);
  CHECK(cli::make_family("poly", 2, 0, std::string("1,1:1")).degree() == 2);
  CHECK_THROWS_AS(cli::make_family("planar-cos", 3, 1, std::nullopt), DomainError);
  CHECK_THROWS_AS(cli::make_family("poly", 2, 0, std::nullopt), DomainError);
  CHECK_THROWS_AS(cli::make_family("spiral", 2, 0, std::nullopt), DomainError);
  CHECK_THROWS_AS(cli::make_family("poly", 2, 0, std::string("2,0:1")), DomainError);

  TempDir dir;
  const fs::path file = dir.path / "p.json";
  std::ofstream(file) << R"([{"exponents":[1,1,0],"coefficient":2.0}])";
  CHECK(cli::make_family("poly", 3, 0, "@" + file.string()).degree() == 2);
  CHECK_THROWS_AS(cli::make_family("poly", 3, 0, "@" + (dir.path / "missing").string()), DomainError);
}

TEST_CASE("number formatting") {
  CHECK(io::format_double(0.25) == "0.25");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::format_double(std::nan("")) == "nan");
  for (double v : {1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("thresholds and min-degree") {
  const Run t = run({"thresholds", "--N", "3"});
  CHECK(t.code == 0);
  const auto j = nlohmann::json::parse(t.out);
  CHECK(j["N"] == 3);
  CHECK(j["friedrichs"].get<double>() == -0.25);
  CHECK(j["essential_sa"].get<double>() == 0.75);
  CHECK(j["quadrant"].get<double>() == -0.75);
  CHECK(j["theorem1"] == "-inf");

  const Run m = run({"min-degree", "--N", "3", "--k", "-10"});
  CHECK(m.code == 0);
  const auto mj = nlohmann::json::parse(m.out);
  CHECK(mj["ell_min"] == 3);
  CHECK(mj["lambda_ell"].get<double>() == 12.0);
  CHECK(mj["sharp_constant"].get<double>() == 12.25);
  CHECK(mj["condition_holds"] == true);
  CHECK(nlohmann::json::parse(run({"min-degree", "--N", "2", "--k", "-100"}).out)["ell_min"] == 10);
}

TEST_CASE("hardy-verify writes the sweep") {
  TempDir dir;
  const fs::path csv = dir.path / "sweep.csv";
  const Run r = run({"hardy-verify", "--N", "3", "--ell", "0", "--m", "1,2,4,8", "--bump", "mollifier", "--out",
                     csv.string()});
  CHECK(r.code == 0);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "m,rayleigh,predicted,gap");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 4);
    CHECK(std::abs(std::stod(f[3])) <= 1e-6);
  }
  // No temporary file is left behind.
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir.path)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);

  const Run cos = run({"hardy-verify", "--N", "4", "--family", "product", "--m", "1,4", "--bump", "cosine"});
  CHECK(cos.code == 0);
  CHECK(lines(cos.out).size() == 3);
}

TEST_CASE("psi-check") {
  const Run r = run({"psi-check", "--N", "3", "--ell", "1", "--points", "20", "--seed", "4"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 21);
  CHECK(rows[0] == "index,radius,step,residual_coarse,residual_fine,scale,ratio,residual");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 8);
    const double radius = std::stod(f[1]);
    CHECK(radius >= 0.5);
    CHECK(radius <= 2.0);
    CHECK(std::stod(f[2]) <= 2e-2);
    CHECK(std::abs(std::stod(f[6]) - 4.0) <= 0.5);
  }
  const Run fixed = run({"psi-check", "--N", "3", "--ell", "1", "--points", "3", "--step", "5e-3"});
  CHECK(fixed.code == 0);
  CHECK(fields(lines(fixed.out)[1])[2] == "0.0050000000000000001");
  // psi constant: ratios carry no information and are reported as nan.
  const Run flat = run({"psi-check", "--N", "2", "--ell", "0", "--points", "5"});
  CHECK(flat.code == 0);
  CHECK(fields(lines(flat.out)[1])[6] == "nan");
  CHECK(run({"psi-check", "--N", "3", "--step", "0"}).code == 1);
}

TEST_CASE("spectrum") {
  const Run r = run({"spectrum", "--N", "3", "--ell", "0", "--k", "0", "--eps", "0", "--R", "1", "--n", "2000",
                     "--count", "3", "--spacing", "uniform"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "index,eigenvalue");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int j = 1; j <= 3; ++j) {
    const auto f = fields(rows[j]);
    CHECK(std::stoi(f[0]) == j);
    CHECK(std::stod(f[1]) == doctest::Approx(j * j * pi2).epsilon(1e-3));
  }
  CHECK(run({"spectrum", "--N", "3", "--spacing", "spiral"}).code == 1);
  CHECK(run({"spectrum", "--N", "3", "--count", "0"}).code == 1);
  CHECK(run({"spectrum", "--N", "3", "--eps", "0"}).code == 1);  // log spacing needs eps > 0
}

TEST_CASE("fall-to-center") {
  TempDir dir;
  const fs::path csv = dir.path / "scan.csv";
  const Run r = run({"fall-to-center", "--N", "3", "--ell", "0", "--k", "-1", "--eps", "1e-1,1e-2,1e-3", "--R",
                     "100", "--n", "4000", "--out", csv.string()});
  CHECK(r.code == 0);
  const auto summary = nlohmann::json::parse(r.out);
  CHECK(summary["classification"] == "UNBOUNDED");
  CHECK(summary["condition_holds"] == false);
  CHECK(summary["consistent"] == true);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "epsilon,lambda_min,classification");
  CHECK(std::stod(fields(rows[3])[1]) < -1e3);

  // Cutoffs too coarse to resolve a weak attraction: diagnostic failure.
  const Run weak = run({"fall-to-center", "--N", "3", "--ell", "0", "--k", "-0.3", "--eps", "1e-1,1e-2,1e-3",
                        "--n", "400"});
  CHECK(weak.code == 2);
  CHECK(weak.err.find("disagrees") != std::string::npos);

  CHECK(run({"fall-to-center", "--N", "3", "--eps", "1e-3,1e-2"}).code == 1);
}

TEST_CASE("phase-diagram") {
  TempDir dir;
  const fs::path csv = dir.path / "phase.csv";
  const fs::path json = dir.path / "phase.json";
  const Run r = run({"phase-diagram", "--N", "3", "--k-range", "-2:0:1", "--ell-range", "0:2", "--eps",
                     "1e-2,1e-4,1e-6", "--n", "1000", "--out", csv.string(), "--json-out", json.string()});
  CHECK(r.code == 0);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "k,ell,condition,lambda_min");
  const auto doc = nlohmann::json::parse(slurp(json));
  REQUIRE(doc.size() == 9);
  for (const auto& row : doc) {
    for (const char* key : {"N", "ell", "k", "lambda_ell", "sharp_constant", "condition_holds"}) {
      CHECK(row.contains(key));
    }
    const int ell = row["ell"];
    CHECK(row["lambda_ell"].get<double>() == ell * (ell + 1.0));
    CHECK(row["sharp_constant"].get<double>() == 0.25 + ell * (ell + 1.0));
  }
  CHECK(run({"phase-diagram", "--N", "3", "--k-range", "0:1"}).code == 1);
}

TEST_CASE("invalid arguments") {
  const Run unknown = run({"thresholds", "--N", "3", "--bogus", "1"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("bogus") != std::string::npos);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == 1);
  CHECK(run({"nosuch"}).code == 1);
  CHECK(run({"thresholds"}).code == 1);
  CHECK(run({"thresholds", "--N", "1"}).code == 1);
  CHECK(run({"thresholds", "--N", "three"}).code == 1);
  CHECK(run({"hardy-verify", "--N", "3", "--m", "1,0"}).code == 1);
  CHECK(run({"hardy-verify", "--N", "3", "--bump", "box"}).code == 1);
  CHECK(run({"hardy-verify", "--N", "3", "--family", "planar-cos"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output directory from the environment") {
  TempDir dir;
  ::setenv(cli::kOutputDirEnv, dir.path.c_str(), 1);
  const Run r = run({"thresholds", "--N", "4", "--out", "t4.json"});
  ::unsetenv(cli::kOutputDirEnv);
  CHECK(r.code == 0);
  REQUIRE(fs::exists(dir.path / "t4.json"));
  const auto j = nlohmann::json::parse(slurp(dir.path / "t4.json"));
  CHECK(j["friedrichs"].get<double>() == -1.0);
  CHECK(j["essential_sa"].get<double>() == 0.0);
}

TEST_CASE("atomic write replaces existing content") {
  TempDir dir;
  const fs::path p = dir.path / "x.txt";
  io::write_atomically(p, "first");
  io::write_atomically(p, "second");
  CHECK(slurp(p) == "second");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir.path)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
  CHECK_THROWS(io::write_atomically(dir.path / "no" / "such" / "dir" / "x.txt", "z"));
}

TEST_CASE("reruns are byte-identical") {
  TempDir dir;
  const std::vector<std::vector<std::string>> commands{
      {"thresholds", "--N", "5"},
      {"min-degree", "--N", "4", "--k", "-7"},
      {"hardy-verify", "--N", "3", "--ell", "1", "--m", "1,2"},
      {"psi-check", "--N", "4", "--family", "product", "--points", "10", "--seed", "99"},
      {"spectrum", "--N", "3", "--ell", "1", "--k", "-1", "--n", "500", "--count", "2"},
      {"fall-to-center", "--N", "3", "--k", "-1", "--n", "500"},
      {"phase-diagram", "--N", "2", "--k-range", "-1:0:0.5", "--ell-range", "0:1", "--n", "300", "--eps",
       "1e-2,1e-4,1e-6,1e-8"}};
  int index = 0;
  for (auto cmd : commands) {
    std::string contents[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path p = dir.path / ("out" + std::to_string(index) + "_" + std::to_string(rep));
      auto args = cmd;
      args.push_back("--out");
      args.push_back(p.string());
      const Run r = run(args);
      CHECK_MESSAGE(r.code == 0, cmd[0] << ": " << r.err);
      contents[rep] = slurp(p);
    }
    CHECK(!contents[0].empty());
    CHECK(contents[0] == contents[1]);
    ++index;
  }
}

#ifdef HARDYSPEC_CLI_PATH
TEST_CASE("installed binary exit codes") {
  const std::string bin = HARDYSPEC_CLI_PATH;
  CHECK(std::system((bin + " thresholds --N 3 > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((bin + " thresholds --N 3 --bogus 2> /dev/null").c_str())) == 1);
  CHECK(WEXITSTATUS(std::system(
            (bin + " fall-to-center --N 3 --k -0.3 --n 400 > /dev/null 2>&1").c_str())) == 2);
}
#endif
