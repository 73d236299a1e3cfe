#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "doctest.h"
#include "json.hpp"
#include "trackscore/path_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "trackscore");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = trackscore::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("trackscore_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* kTwoSeries =
    "series_id,t,x1,x2\n"
    "a,0,0,0\na,1,1,0\na,2,1,1\n"
    "b,0,0,0\nb,1,0,1\nb,2,-1,2\n";

}  // namespace

TEST_CASE("sig") {
  TempDir dir;
  const auto input = dir.file("one.csv", "series_id,t,x\ns,0,0\ns,1,1\n");
  auto r = run({"sig", input, "--depth", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "1,2\n1\n1\n0.5\n");
  r = run({"sig", input, "--depth", "0"});
  CHECK(r.out == "1,0\n1\n");

  const auto empty = dir.file("empty.csv", "");
  r = run({"sig", empty});
  CHECK(r.code == 2);
  CHECK(r.err.find(empty) != std::string::npos);

  const auto bad = dir.file("bad.csv", "series_id,t,x\ns,0,0\ns,0,1\n");
  r = run({"sig", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  const auto two = dir.file("two.csv", kTwoSeries);
  const auto out = dir.path("sigs.txt");
  r = run({"sig", two, "--depth", "3", "--time-augment", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["command"] == "sig");
  CHECK(manifest["parameters"]["depth"] == 3);
  CHECK(manifest["outputs"]["series_ids"] == nlohmann::json::array({"a", "b"}));
  CHECK(manifest["outputs"]["synthesized_times"] == false);
  CHECK(slurp(out).rfind("3,3\n1\n", 0) == 0);

  const auto untimed = dir.file("untimed.csv", "series_id,x\ns,0\ns,1\n");
  r = run({"sig", untimed, "--time-augment", "--out", dir.path("u.txt")});
  CHECK(nlohmann::json::parse(slurp(dir.path("u.txt.manifest.json")))["outputs"]["synthesized_times"] == true);
}

TEST_CASE("divergence, entropy and score") {
  TempDir dir;
  const auto a = dir.file("a.csv", kTwoSeries);
  const auto b = dir.file("b.csv", "series_id,x1,x2\nq,0,0\nq,2,0\n");

  auto r = run({"divergence", "--a", a, "--b", a});
  CHECK(r.code == 0);
  CHECK(r.out == "0\n");

  r = run({"divergence", "--a", a, "--b", b, "--depth", "3"});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) > 0.0);

  r = run({"divergence", "--a", a, "--b", dir.path("missing.csv")});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());

  const auto out = dir.path("d.txt");
  r = run({"divergence", "--a", a, "--b", b, "--out", out});
  CHECK(r.code == 0);
  const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["command"] == "divergence");
  CHECK(manifest["parameters"]["side"] == "right");
  CHECK(manifest["parameters"]["depth"] == 4);
  CHECK(manifest.contains("timestamp"));
  CHECK(manifest["version"].is_string());
  CHECK(std::stod(slurp(out)) == doctest::Approx(manifest["outputs"]["value"].get<double>()));

  r = run({"entropy", b});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(0.0).epsilon(1e-12));

  r = run({"entropy", a, "--side", "left", "--csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("quantity,side,depth,value,n_samples,seed,iterations,grad_norm\nentropy,left,4,", 0) == 0);

  r = run({"score", "--x", b, "--mu", b});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(0.0).epsilon(1e-12));

  const auto manifest_path = dir.path("m.json");
  r = run({"score", "--x", a, "--mu", b, "--manifest", manifest_path});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(manifest_path))["command"] == "score");
}

TEST_CASE("exhausted optimiser budget exits with the numerical code") {
  TempDir dir;
  const auto a = dir.file("a.csv", kTwoSeries);
  const auto r = run({"entropy", a, "--max-iters", "1", "--method", "gd", "--step", "1e-4"});
  CHECK(r.code == 3);
  CHECK_FALSE(r.out.empty());
  CHECK(r.err.find("did not converge") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"entropy"}).code == 1);
  CHECK(run({"mi", "--rho", "1.5"}).code == 1);
  CHECK(run({"entropy", "x.csv", "--side", "middle"}).code == 1);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("experiment-warp") != std::string::npos);
}

TEST_CASE("simulate") {
  TempDir dir;
  const auto out = dir.path("sim.csv");
  auto r = run({"simulate", "--process", "warp", "--n", "3", "--seed", "5", "--resolution", "0.1", "--out", out});
  CHECK(r.code == 0);
  std::ifstream is(out);
  const auto series = trackscore::read_series_csv(is);
  REQUIRE(series.size() == 6);
  CHECK(series[0].id == "x0");
  CHECK(series[1].id == "z0");
  CHECK(series[0].path.size() == 11);
  const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["outputs"]["draws"].size() == 3);

  const auto again = run({"simulate", "--process", "spiral", "--n", "2", "--seed", "5", "--resolution", "0.1"});
  CHECK(again.out == run({"simulate", "--process", "spiral", "--n", "2", "--seed", "5", "--resolution", "0.1"}).out);
}

TEST_CASE("experiments are reproducible and well formed") {
  TempDir dir;
  const auto first = dir.path("w1.csv");
  const auto second = dir.path("w2.csv");
  const std::vector<std::string> args{"experiment-warp", "--n-p", "4", "--n-paths", "3", "--gammas", "1,0.1"};
  auto a = args;
  a.insert(a.end(), {"--out", first});
  auto b = args;
  b.insert(b.end(), {"--out", second, "--threads", "1"});
  CHECK(run(a).code == 0);
  CHECK(run(b).code == 0);
  const std::string csv = slurp(first);
  CHECK(csv == slurp(second));
  std::istringstream lines(csv);
  std::string header;
  std::string row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "p,geometric_divergence,sdtw_gamma_1,sdtw_gamma_0.1,dtw");
  CHECK(row.rfind("1,", 0) == 0);
  const double geometric = std::stod(row.substr(2));
  CHECK(geometric <= 1e-10);
  const auto manifest = nlohmann::json::parse(slurp(first + ".manifest.json"));
  CHECK(manifest["parameters"]["gammas"] == nlohmann::json::array({1.0, 0.1}));
  CHECK(manifest["parameters"]["resolution"] == 0.01);

  const std::vector<std::string> mi{"experiment-mi-warp", "--rhos", "0,1", "--n-u", "3", "--n-x", "4",
                                    "--resolution", "0.1", "--seed", "9"};
  const auto m1 = run(mi);
  const auto m2 = run(mi);
  CHECK(m1.code == 0);
  CHECK(m1.out == m2.out);
  CHECK(m1.out.rfind("rho,mi,entropy,n_u,n_x,seed\n0,", 0) == 0);
  CHECK(m1.out.find("\n1,") != std::string::npos);
  CHECK(run({"experiment-warp", "--p-max", "0.5"}).code == 1);
}

TEST_CASE("installed executable reports missing files") {
  const std::string cmd = std::string(TRACKSCORE_EXE) + " entropy /nonexistent/file.csv 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
