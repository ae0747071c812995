#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "swirl/config.hpp"
#include "swirl/output.hpp"
#include "swirl/pipeline.hpp"

using namespace swirl;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("swirl_unit_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = "[upstream]\nw = sin_bump 0.05\nq = constant 2\n";

std::string reference_text(std::size_t n, const std::string& sigma = "0.01") {
  return "[domain]\nnz = " + std::to_string(n) + "\nnr = " + std::to_string(n) +
         "\n[upstream]\nmode = wq\nw = sin_bump 0.05\nq = constant 2\n"
         "[perturbation]\nsigma = " + sigma +
         "\nw_en = sin_bump 1\nq_en = zero\np_ex = constant -1e-5\n";
}

ErrorKind kind_of(const std::function<void()>& fn, std::string* msg = nullptr) {
  try {
    fn();
  } catch (const SolverError& e) {
    if (msg) *msg = e.what();
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::numerical;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = parse_config_string(kMinimal);
  CHECK(c.gas.gamma() == 1.4);
  CHECK(c.gas.c_v() == 1.0);
  CHECK(c.nz == 129);
  CHECK(c.nr == 129);
  CHECK(c.L == 1.0);
  CHECK(c.mode == UpstreamMode::wq);
  CHECK_FALSE(c.has_perturbation);
  CHECK(c.cfl == 0.8);
}

TEST_CASE("shipped configs parse") {
  const fs::path src = SWIRL_SOURCE_DIR;
  const auto ref = parse_config(src / "configs/reference_swirl.ini");
  CHECK(ref.has_perturbation);
  CHECK(ref.sigma == 0.01);
  CHECK(ref.upstream_wq().wbar.max_abs() > 0.0);
  const auto zero = parse_config(src / "configs/zero_swirl.ini");
  CHECK(zero.upstream_wq().wbar.max_abs() == 0.0);
}

TEST_CASE("endpoint violations name the condition") {
  std::string msg;
  const auto k = kind_of(
      [] {
        parse_config_string(std::string(kMinimal) +
                            "[perturbation]\nsigma = 0.1\nw_en = constant 1\n");
      },
      &msg);
  CHECK(k == ErrorKind::config);
  CHECK(msg.find("w_en(0)=0") != std::string::npos);
  CHECK(kind_of([] { parse_config_string("[upstream]\nw = constant 1\nq = constant 2\n"); },
                &msg) == ErrorKind::config);
  CHECK(msg.find("wbar(0)=0") != std::string::npos);
  CHECK(kind_of([] { parse_config_string("[upstream]\nw = zero\nq = constant -1\n"); }) ==
        ErrorKind::config);
}

TEST_CASE("parse errors carry the line") {
  std::string msg;
  kind_of([] { parse_config_string("[gas]\ngamma = 1.4\nbogus = 3\n"); }, &msg);
  CHECK(msg.find(":3") != std::string::npos);
  kind_of([] { parse_config_string("[gas]\ngamma 1.4\n"); }, &msg);
  CHECK(msg.find(":2") != std::string::npos);
  kind_of([] { parse_config_string("[gas]\ngamma = abc\n[upstream]\nw=zero\nq=constant 1\n"); },
          &msg);
  CHECK(msg.find("gamma") != std::string::npos);
  CHECK(kind_of([] { parse_config_string("[upstream]\nw = wiggle 1\nq = constant 2\n"); }) ==
        ErrorKind::config);
  CHECK(kind_of([] { parse_config_string("[gas]\ngamma = 0.9\n"); }) == ErrorKind::config);
  CHECK(kind_of([] { parse_config(fs::path("/nonexistent/x.ini")); }) == ErrorKind::io);
}

TEST_CASE("profile sums") {
  const auto p = parse_profile("constant 1 + cos_bump -0.01");
  REQUIRE(p.terms.size() == 2);
  const auto f = p.sample(1.0, 33, Parity::even);
  CHECK(f.front() == doctest::Approx(0.99));
  CHECK(f.back() == doctest::Approx(1.01));
  const auto q = parse_profile("poly_odd 2").sample(2.0, 17, Parity::odd);
  CHECK(q[8] == doctest::Approx(2 * 1.0 * 9.0 / 32.0));
}

TEST_CASE("table profiles are cubic-resampled, fourth order") {
  const auto dir = scratch_dir("table");
  auto err = [&](int m) {
    const auto file = dir / ("w" + std::to_string(m) + ".csv");
    std::ofstream out(file);
    out.precision(17);
    for (int k = 0; k < m; ++k) {
      const double r = static_cast<double>(k) / (m - 1);
      out << r << "," << 0.05 * std::sin(std::numbers::pi * r) << "\n";
    }
    out.close();
    const auto spec = parse_profile("table " + file.filename().string(), dir);
    const auto f = spec.sample(1.0, 257, Parity::odd);
    double e = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
      e = std::max(e, std::abs(f[j] - 0.05 * std::sin(std::numbers::pi * f.r(j))));
    return e;
  };
  const double e33 = err(33), e65 = err(65);
  CHECK(e33 < 1e-6);
  CHECK(e33 / e65 > 12.0);
  std::ofstream bad(dir / "bad.csv");
  bad << "0 1\n0.5 1\n0.7 1\n1 1\n";
  bad.close();
  CHECK_THROWS_AS(parse_profile("table bad.csv", dir).sample(1.0, 9, Parity::even), SolverError);
}

TEST_CASE("exit code table") {
  CHECK(exit_code_for(ErrorKind::config) == 2);
  CHECK(exit_code_for(ErrorKind::io) == 2);
  CHECK(exit_code_for(ErrorKind::admissibility) == 3);
  CHECK(exit_code_for(ErrorKind::axis) == 3);
  CHECK(exit_code_for(ErrorKind::singular) == 3);
  CHECK(exit_code_for(ErrorKind::no_root) == 4);
  CHECK(exit_code_for(ErrorKind::ambiguous_root) == 4);
  CHECK(exit_code_for(ErrorKind::solvability) == 4);
  CHECK(exit_code_for(ErrorKind::coercivity) == 5);
  CHECK(exit_code_for(ErrorKind::numerical) == 6);
  CHECK(exit_code_for(ErrorKind::step_size) == 6);
  CHECK(exit_code_for(ErrorKind::trace) == 6);
}

TEST_CASE("background-only run needs no perturbation") {
  const auto c = parse_config_string(kMinimal);
  const auto res = run_pipeline(c, Stage::background);
  CHECK(res.exit_code == 0);
  CHECK(res.background.has_value());
  const auto res2 = run_pipeline(c, Stage::supersonic);
  CHECK(res2.exit_code == 2);
}

TEST_CASE("output files: formats and report round trip") {
  auto cfg = parse_config_string(reference_text(33));
  const auto res = run_pipeline(cfg, Stage::solve);
  REQUIRE(res.exit_code == 0);
  const auto dir = scratch_dir("out");
  write_outputs(res, dir);

  std::ifstream bgcsv(dir / "background.csv");
  std::string header;
  std::getline(bgcsv, header);
  CHECK(header ==
        "r,p_minus,w_minus,q_minus,s_minus,rho_minus,M2_minus,p_plus,w_plus,q_plus,s_plus,"
        "rho_plus,M2_plus,t");
  int rows = 0;
  for (std::string l; std::getline(bgcsv, l);) ++rows;
  CHECK(rows == 33);

  std::ifstream fcsv(dir / "subsonic_dp.csv");
  std::string zline, rline;
  std::getline(fcsv, zline);
  std::getline(fcsv, rline);
  CHECK(zline.rfind("z,", 0) == 0);
  CHECK(rline.rfind("r,0,", 0) == 0);
  int frows = 0;
  for (std::string l; std::getline(fcsv, l);) ++frows;
  CHECK(frows == static_cast<int>(res.subsonic->dp.nz()));

  const auto text = slurp(dir / "report.json");
  CHECK(text.find('\r') == std::string::npos);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["z_star"].get<double>() == res.location->z_star);
  CHECK(j["I1_at_root"].get<double>() == res.location->I1_at_root);
  CHECK(j["I2"].get<double>() == *res.I2);
  CHECK(j["I3"].get<double>() == *res.I3);
  CHECK(j["L_star"].get<double>() == res.location->L_star);
  CHECK(j["residuals"]["subsonic_eq2"].get<double>() == res.subsonic_residuals->eq2);
  CHECK(j["residuals"]["supersonic_cde1"].get<double>() == res.supersonic_residuals->cde1);
  CHECK(j["flags"]["window_ok"].get<bool>());
  CHECK(j["grid"]["nr"].get<int>() == 33);
  CHECK(j["status"]["exit_code"].get<int>() == 0);

  write_outputs(res, dir, ReportFormat::csv);
  const auto rcsv = slurp(dir / "report.csv");
  CHECK(rcsv.find("z_star," + format_double(res.location->z_star) + "\n") != std::string::npos);
}

TEST_CASE("zero perturbation gives zero downstream fields") {
  const auto cfg = parse_config_string(reference_text(33, "0"));
  const auto res = run_pipeline(cfg, Stage::solve);
  REQUIRE(res.exit_code == 0);
  CHECK(res.zero_perturbation);
  const auto dir = scratch_dir("zero");
  write_outputs(res, dir);
  for (const char* f : {"dp", "dtheta", "dw", "dq", "ds", "dB", "phi", "psi"}) {
    std::ifstream in(dir / (std::string("subsonic_") + f + ".csv"));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    bool all_zero = true;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) all_zero = all_zero && cell == "0";
    }
    CHECK_MESSAGE(all_zero, f);
  }
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["z_star"].is_null());
}

TEST_CASE("unwritable output directory is an io error") {
  const auto dir = scratch_dir("io");
  std::ofstream(dir / "file") << "x";
  const auto res = run_pipeline(parse_config_string(kMinimal), Stage::background);
  CHECK(kind_of([&] { write_outputs(res, dir / "file" / "sub"); }) == ErrorKind::io);
}
