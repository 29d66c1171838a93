#include <doctest.h>

#include "sson/matrix_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using sson::Mat;

namespace {

const std::string kCli = SSON_CLI_PATH;

int run_cli(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sson_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::map<std::string, std::string> read_kv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("simulate: deterministic bundles that reload losslessly") {
  const fs::path dir = fresh_dir("simulate");
  const std::string a = (dir / "a").string();
  const std::string b = (dir / "b").string();
  const std::string common = "simulate --model gaussian --family er --p 12 --prob 0.2 --seed 7 --out ";
  CHECK(run_cli(common + a) == 0);
  CHECK(run_cli(common + b) == 0);

  for (const char* name : {"adjacency.csv", "theta_true.csv", "samples.csv", "manifest.txt"}) {
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }

  const Mat adj = sson::read_csv_matrix(a + "/adjacency.csv");
  const Mat reload = sson::read_csv_matrix(a + "/adjacency.csv");
  CHECK((adj - reload).cwiseAbs().maxCoeff() == 0.0);
  CHECK(adj.rows() == 12);

  const auto manifest = read_kv(dir / "a" / "manifest.txt");
  CHECK(manifest.at("model") == "gaussian");
  CHECK(manifest.at("p") == "12");
  CHECK(manifest.at("m") == "60");  // 5p default
}

TEST_CASE("simulate: invalid probability exits 2 naming the field") {
  const fs::path dir = fresh_dir("simulate_bad");
  CHECK(run_cli("simulate --family er --p 10 --prob 1.5 --out " + (dir / "x").string()) == 2);
  // Message names the flag.
  const std::string cmd = kCli + " simulate --family er --p 10 --prob 1.5 --out " +
                          (dir / "x").string() + " 2> " + (dir / "err.txt").string() +
                          " >/dev/null";
  (void)std::system(cmd.c_str());
  CHECK(slurp(dir / "err.txt").find("--prob") != std::string::npos);
}

TEST_CASE("estimate: bundle run produces parseable artifacts") {
  const fs::path dir = fresh_dir("estimate");
  const std::string inst = (dir / "inst").string();
  const std::string res = (dir / "res").string();
  REQUIRE(run_cli("simulate --model covariance --family er --p 15 --prob 0.1 --seed 3 --out " + inst) == 0);
  REQUIRE(run_cli("estimate --input " + inst + " --out " + res +
                  " --tau 1e-8 --max-iter 3000") == 0);

  const auto summary = read_kv(fs::path(res) / "summary.txt");
  CHECK(summary.at("converged") == "true");
  CHECK(summary.at("model") == "covariance");
  CHECK(std::stod(summary.at("primal_residual")) <= 1e-3);

  const Mat theta = sson::read_csv_matrix(res + "/theta_hat.csv");
  CHECK(theta.rows() == 15);
  const Mat e = sson::read_csv_matrix(res + "/E.csv");
  CHECK(e.rows() == 15);
  for (int i = 1; i <= 5; ++i) {
    CHECK(fs::exists(fs::path(res) / ("Z_" + std::to_string(i) + ".csv")));
  }
  CHECK(fs::exists(fs::path(res) / "edges.txt"));

  // Trace has the documented columns.
  std::ifstream trace(fs::path(res) / "trace.csv");
  std::string header;
  std::getline(trace, header);
  CHECK(header == "k,L_gamma,primal_residual,stop_stat,stationarity_residual,wall_ms");

  // Theta equals the reconstruction of the exported components up to the
  // primal residual.
  Mat recon = e;
  for (int i = 1; i <= 5; ++i) {
    const Mat z = sson::read_csv_matrix(res + "/Z_" + std::to_string(i) + ".csv");
    recon += z + z.transpose();
  }
  CHECK((recon - theta).norm() <= std::stod(summary.at("primal_residual")) + 1e-10);
}

TEST_CASE("estimate: seeded rerun reproduces artifacts byte-for-byte") {
  const fs::path dir = fresh_dir("estimate_det");
  const std::string inst = (dir / "inst").string();
  REQUIRE(run_cli("simulate --model gaussian --family nn --p 10 --neighbors 2 --seed 9 --out " + inst) == 0);
  const std::string r1 = (dir / "r1").string();
  const std::string r2 = (dir / "r2").string();
  REQUIRE(run_cli("estimate --input " + inst + " --out " + r1 + " --tau 1e-6") == 0);
  REQUIRE(run_cli("estimate --input " + inst + " --out " + r2 + " --tau 1e-6") == 0);
  // Everything except the wall-clock column of the trace is deterministic.
  for (const char* name :
       {"theta_hat.csv", "E.csv", "Z_1.csv", "Z_3.csv", "edges.txt", "summary.txt"}) {
    CHECK(slurp(fs::path(r1) / name) == slurp(fs::path(r2) / name));
  }
}

TEST_CASE("estimate: missing input exits 2") {
  const fs::path dir = fresh_dir("estimate_bad");
  CHECK(run_cli("estimate --input " + (dir / "nope").string() + " --out " +
                (dir / "res").string()) == 2);
  CHECK(run_cli("estimate --out " + (dir / "res2").string()) == 2);
}

TEST_CASE("estimate: gauss-seidel and jacobian agree through the cli") {
  const fs::path dir = fresh_dir("estimate_modes");
  const std::string inst = (dir / "inst").string();
  REQUIRE(run_cli("simulate --model covariance --family er --p 12 --prob 0.15 --seed 21 --out " + inst) == 0);
  const std::string gs = (dir / "gs").string();
  const std::string jac = (dir / "jac").string();
  REQUIRE(run_cli("estimate --input " + inst + " --out " + gs +
                  " --rho 4.5 --tau 1e-12 --max-iter 20000") == 0);
  REQUIRE(run_cli("estimate --input " + inst + " --out " + jac +
                  " --mode jacobian --rho 12 --tau 1e-12 --max-iter 20000") == 0);
  const double f_gs = std::stod(read_kv(fs::path(gs) / "summary.txt").at("objective"));
  const double f_jac = std::stod(read_kv(fs::path(jac) / "summary.txt").at("objective"));
  CHECK(std::abs(f_gs - f_jac) <= 5e-5);  // 5 * default tau
}

TEST_CASE("estimate: var bundle round trip") {
  const fs::path dir = fresh_dir("estimate_var");
  const std::string inst = (dir / "inst").string();
  REQUIRE(run_cli("simulate --model var --family er --p 8 --prob 0.2 --var-coef 0.4 --m 400 --seed 5 --out " + inst) == 0);
  CHECK(fs::exists(fs::path(inst) / "Y.csv"));
  CHECK(fs::exists(fs::path(inst) / "X.csv"));
  const Mat y = sson::read_csv_matrix(inst + "/Y.csv");
  CHECK(y.rows() == 399);  // m - 1 stacked rows

  const std::string res = (dir / "res").string();
  REQUIRE(run_cli("estimate --input " + inst + " --out " + res + " --tau 1e-8 --max-iter 4000") == 0);
  CHECK(read_kv(fs::path(res) / "summary.txt").at("converged") == "true");
}

TEST_CASE("benchmark: single solver, single instance gives flat profile") {
  const fs::path dir = fresh_dir("benchmark");
  const std::string out = (dir / "bench").string();
  REQUIRE(run_cli("benchmark --model covariance --family er --p 10 --prob 0.2 "
                  "--repeats 1 --solvers sson --seed 2 --tau 1e-6 --out " + out) == 0);
  std::ifstream profile(fs::path(out) / "profile_ne.csv");
  std::string line;
  std::getline(profile, line);
  CHECK(line == "tau,solver,rho");
  int rows = 0;
  while (std::getline(profile, line)) {
    CHECK(line.find("sson") != std::string::npos);
    CHECK(line.substr(line.rfind(',') + 1) == "1");
    ++rows;
  }
  CHECK(rows >= 1);

  // Table parses back losslessly as CSV.
  std::ifstream table(fs::path(out) / "table.csv");
  std::getline(table, line);
  CHECK(line == "instance,seed,solver,n_e,s_e,time_ms,converged");
  std::getline(table, line);
  CHECK(line.find("sson") != std::string::npos);
}

TEST_CASE("decompose-export: long format matches sources") {
  const fs::path dir = fresh_dir("export");
  const std::string inst = (dir / "inst").string();
  const std::string res = (dir / "res").string();
  REQUIRE(run_cli("simulate --model covariance --family er --p 6 --prob 0.3 --seed 1 --out " + inst) == 0);
  REQUIRE(run_cli("estimate --input " + inst + " --out " + res + " --tau 1e-6") == 0);
  const std::string out = (dir / "long.csv").string();
  REQUIRE(run_cli("decompose-export --results " + res + " --out " + out) == 0);

  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "i,j,value,component");
  int rows = 0;
  std::string line;
  std::map<std::string, Mat> sources;
  for (int i = 1; i <= 5; ++i) {
    sources["Z_" + std::to_string(i)] = sson::read_csv_matrix(res + "/Z_" + std::to_string(i) + ".csv");
  }
  sources["E"] = sson::read_csv_matrix(res + "/E.csv");
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string i_s, j_s, v_s, comp;
    std::getline(ss, i_s, ',');
    std::getline(ss, j_s, ',');
    std::getline(ss, v_s, ',');
    std::getline(ss, comp, ',');
    const Mat& src = sources.at(comp);
    CHECK(src(std::stoi(i_s) - 1, std::stoi(j_s) - 1) == std::stod(v_s));
  }
  CHECK(rows == 6 * 6 * 6);  // (n components + E) * p^2

  CHECK(run_cli("decompose-export --results " + (dir / "missing").string() + " --out " +
                (dir / "x.csv").string()) == 2);
}

TEST_CASE("config file drives a subcommand and rejects unknown keys") {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream cfg(dir / "run.ini");
    cfg << "[simulate]\n";
    cfg << "model=covariance\n";
    cfg << "family=er\n";
    cfg << "p=9\n";
    cfg << "prob=0.25\n";
    cfg << "seed=4\n";
    cfg << "out=" << (dir / "inst").string() << "\n";
  }
  CHECK(run_cli("--config " + (dir / "run.ini").string() + " simulate") == 0);
  CHECK(fs::exists(dir / "inst" / "samples.csv"));
  const auto manifest = read_kv(dir / "inst" / "manifest.txt");
  CHECK(manifest.at("p") == "9");

  {
    std::ofstream cfg(dir / "bad.ini");
    cfg << "[simulate]\n";
    cfg << "p=9\n";
    cfg << "no_such_key=1\n";
    cfg << "out=" << (dir / "inst2").string() << "\n";
  }
  CHECK(run_cli("--config " + (dir / "bad.ini").string() + " simulate") == 2);
}
