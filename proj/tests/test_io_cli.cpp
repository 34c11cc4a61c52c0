#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rcm/cli.hpp"
#include "rcm/io.hpp"
#include "rcm/model.hpp"

using namespace rcm;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "rcm_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = temp_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << content;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kInstanceA =
    "1,1.0,0.0\n"
    "+1,2.0,1.0\n"
    "-1,-1.0,0.0\n"
    "-1,-2.0,1.0\n";

}  // namespace

TEST_CASE("ingest_csv minimal file") {
  const auto p = write_file("mini.csv", "1,1.0,0.0\n-1,-1.0,0.0\n");
  const Dataset d = ingest_csv(p.string());
  CHECK(d.size() == 2);
  CHECK(d.dim() == 2);
  CHECK(d.y(0) == +1);
  CHECK(d.y(1) == -1);
  CHECK(d.x(0)[0] == doctest::Approx(1.0));
}

TEST_CASE("ingest_csv skips a header row") {
  const auto p =
      write_file("hdr.csv", "label,f1,f2\n1,1.0,0.0\n-1,-1.0,0.0\n");
  CHECK(ingest_csv(p.string()).size() == 2);
}

TEST_CASE("ingest_csv reports ragged rows with the line number") {
  const auto p = write_file(
      "ragged.csv", "1,1.0,0.0,5.0\n-1,-1.0,0.0,5.0\n1,2.0,1.0\n");
  try {
    ingest_csv(p.string());
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("ingest_csv rejects labels outside +1/1/-1") {
  const auto p = write_file("lbl.csv", "1,1.0\n2,0.5\n-1,-1.0\n");
  try {
    ingest_csv(p.string());
    FAIL("expected LabelError");
  } catch (const LabelError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("ingest_csv requires both classes") {
  const auto p = write_file("oneclass.csv", "1,1.0\n1,2.0\n");
  CHECK_THROWS_AS(ingest_csv(p.string()), EmptyClass);
}

TEST_CASE("model file round trip with 17-digit numbers") {
  const auto data = write_file("a.csv", kInstanceA);
  const Dataset d = ingest_csv(data.string());
  const TrainedModel m = train(d, Family::ConvexHull, ParamSpec::automatic());
  const auto mp = temp_dir() / "roundtrip.json";
  save_model(mp.string(), m);
  const TrainedModel r = load_model(mp.string());
  CHECK(r.family == m.family);
  CHECK(r.w.size() == m.w.size());
  CHECK(r.w[0] == m.w[0]);  // bit-exact through %.17g
  CHECK(r.b == m.b);
  CHECK(r.g_value == m.g_value);
  CHECK(r.regime == m.regime);

  save_model((temp_dir() / "roundtrip2.json").string(), r);
  CHECK(read_file(mp) == read_file(temp_dir() / "roundtrip2.json"));
}

TEST_CASE("run_train then run_predict reproduces the training labels") {
  const auto data = write_file("train.csv", kInstanceA);
  cli::RunConfig cfg;
  cfg.data_path = data.string();
  cfg.family = "ch";
  cfg.out_path = (temp_dir() / "model_a.json").string();
  REQUIRE(cli::run_train(cfg) == cli::kOk);

  const TrainedModel m = load_model(cfg.out_path);
  CHECK(m.w[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(m.b == doctest::Approx(0.0));

  cli::RunConfig pc;
  pc.data_path = data.string();
  pc.model_path = cfg.out_path;
  pc.out_path = (temp_dir() / "pred_a.csv").string();
  REQUIRE(cli::run_predict(pc) == cli::kOk);
  CHECK(read_file(pc.out_path) == "+1\n+1\n-1\n-1\n");
}

TEST_CASE("run_train maps infeasible nu to the parameter exit code") {
  const auto data = write_file(
      "balanced6.csv",
      "1,1.0,0.2\n1,1.5,0.4\n1,1.2,-0.1\n-1,-1.0,0.2\n-1,-1.5,0.4\n-1,-1.2,-0.1\n");
  cli::RunConfig cfg;
  cfg.data_path = data.string();
  cfg.family = "rch";
  cfg.param = "1.01";  // nu_max = 1 on balanced data
  cfg.out_path = (temp_dir() / "never.json").string();
  CHECK(cli::run_train(cfg) == cli::kParamError);
}

TEST_CASE("run_sweep writes a non-increasing value column") {
  const auto data = write_file("sweep_data.csv", kInstanceA);
  cli::RunConfig cfg;
  cfg.data_path = data.string();
  cfg.family = "ellipsoid";
  cfg.grid = 11;
  cfg.out_path = (temp_dir() / "sweep.csv").string();
  REQUIRE(cli::run_sweep(cfg) == cli::kOk);

  std::ifstream in(cfg.out_path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "param,value");
  int rows = 0;
  double prev = std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double value = std::stod(line.substr(comma + 1));
    CHECK(value <= prev + 1e-6);
    prev = value;
    ++rows;
  }
  CHECK(rows == 11);
}

TEST_CASE("identical config and seed produce byte-identical model files") {
  const auto data = write_file("det.csv", kInstanceA);
  cli::RunConfig cfg;
  cfg.data_path = data.string();
  cfg.family = "rch";
  cfg.param = "0.9";
  cfg.seed = 17;
  cfg.out_path = (temp_dir() / "det1.json").string();
  REQUIRE(cli::run_train(cfg) == cli::kOk);
  cfg.out_path = (temp_dir() / "det2.json").string();
  REQUIRE(cli::run_train(cfg) == cli::kOk);
  CHECK(read_file(temp_dir() / "det1.json") ==
        read_file(temp_dir() / "det2.json"));
}

TEST_CASE("rcm binary end to end") {
  const auto data = write_file("bin.csv", kInstanceA);
  const auto model = temp_dir() / "bin_model.json";
  const auto pred = temp_dir() / "bin_pred.csv";
  std::string cmd = std::string(RCM_BIN) + " train --data " + data.string() +
                    " --family ch --out " + model.string() + " >/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  cmd = std::string(RCM_BIN) + " predict --data " + data.string() +
        " --model " + model.string() + " --out " + pred.string() +
        " >/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(read_file(pred) == "+1\n+1\n-1\n-1\n");

  cmd = std::string(RCM_BIN) + " eta-max --data " + data.string() +
        " --family ellipsoid > " + (temp_dir() / "etamax.txt").string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  const std::string out = read_file(temp_dir() / "etamax.txt");
  CHECK(out.find("kappa_max") != std::string::npos);
}

TEST_CASE("ingest_features accepts raw and labeled rows") {
  const auto p = write_file("feat.csv", "1.5,2.5\n-0.5,0.25\n");
  const auto rows = ingest_features(p.string(), 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == doctest::Approx(1.5));
  const auto q = write_file("feat_lbl.csv", "+1,1.5,2.5\n-1,-0.5,0.25\n");
  const auto lrows = ingest_features(q.string(), 2);
  REQUIRE(lrows.size() == 2);
  CHECK(lrows[1][1] == doctest::Approx(0.25));
  const auto bad = write_file("feat_bad.csv", "1.5,2.5,3.5,4.5\n");
  CHECK_THROWS_AS(ingest_features(bad.string(), 2), FormatError);
}

TEST_CASE("run_train records the overlapping regime from CSV input") {
  const auto data = write_file("overlap1d.csv", "1,3\n1,-1\n-1,-3\n-1,1\n");
  cli::RunConfig cfg;
  cfg.data_path = data.string();
  cfg.family = "rch";
  cfg.param = "0.5";
  cfg.out_path = (temp_dir() / "overlap1d.json").string();
  cfg.trace_path = (temp_dir() / "overlap1d_trace.json").string();
  REQUIRE(cli::run_train(cfg) == cli::kOk);
  const TrainedModel m = load_model(cfg.out_path);
  CHECK(m.regime == Regime::Overlapping);
  CHECK(m.g_value == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(m.w[0] == doctest::Approx(1.0));
  // trace file exists and is valid JSON with at least one record
  const std::string trace = read_file(cfg.trace_path);
  CHECK(trace.find("\"w_tilde\"") != std::string::npos);
}
