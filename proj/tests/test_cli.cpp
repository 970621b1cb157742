#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "duality/angle.hpp"
#include "duality/errors.hpp"
#include "duality/image_io.hpp"
#include "duality/sweep.hpp"

using namespace duality;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dualsim");
  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dualsim::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / "dualsim_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

} // namespace

TEST_CASE("angle parsing") {
  CHECK(parse_angle("0.25") == 0.25);
  CHECK(parse_angle("-1e-3") == -1e-3);
  CHECK(parse_angle("pi") == pi);
  CHECK(parse_angle("-pi/2") == -pi / 2);
  CHECK(parse_angle("pi/12") == pi / 12);
  CHECK(parse_angle("17pi/36") == doctest::Approx(17 * pi / 36).epsilon(1e-15));
  CHECK(parse_angle("17*pi/36") == doctest::Approx(17 * pi / 36).epsilon(1e-15));
  CHECK(parse_angle("2*pi") == 2 * pi);
  for (const char *bad : {"", "pie", "pi/", "pi/0", "1/2", "x", "pi/x", "2pi3", "--1"})
    CHECK_THROWS_AS(parse_angle(bad), std::invalid_argument);
}

TEST_CASE("theta sweep at alpha = pi/12") {
  const std::vector<SweepRow> rows = run_sweep(SweepConfig::defaults(SweptParameter::theta));
  REQUIRE(rows.size() == 181);
  CHECK(rows.front().theta == 0.0);
  CHECK(rows.back().theta == 2 * pi);
  double best = 0.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow &r = rows[i];
    CHECK(r.alpha == pi / 12);
    if (!std::isnan(r.sum_cond_squares)) {
      CHECK(r.sum_cond_squares >= r.sum_avg_squares - 1e-9);
      if (r.sum_cond_squares > best) best = r.sum_cond_squares, best_index = i;
    }
    CHECK(r.sum_avg_squares <= 1.0 + 1e-9);
  }
  const double peak_theta = rows[best_index].theta;
  const double step = 2 * pi / 180;
  CHECK((std::abs(peak_theta - (pi - pi / 12)) <= step || std::abs(peak_theta - (pi + pi / 12)) <= step));
}

TEST_CASE("alpha sweep at theta = pi/2") {
  const std::vector<SweepRow> rows = run_sweep(SweepConfig::defaults(SweptParameter::alpha));
  CHECK(rows.front().sum_cond_squares == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows[90].alpha == doctest::Approx(pi).epsilon(1e-15));
  CHECK(rows[90].sum_cond_squares == doctest::Approx(2.0).epsilon(1e-12));
  for (std::size_t i = 1; i <= 90; ++i) CHECK(rows[i].sum_cond_squares > rows[i - 1].sum_cond_squares);
}

TEST_CASE("sweep rows do not depend on the thread count") {
  SweepConfig config = SweepConfig::defaults(SweptParameter::alpha);
  config.samples = 7;
  config.measure = true;
  config.pipeline.grid = GridSpec::square(96);
  config.pipeline.noise.photon_budget = 1e6;
  config.pipeline.noise.readout_sigma = 1.0;
  config.pipeline.noise.seed = 11;
  config.threads = 1;
  std::ostringstream serial, parallel;
  write_sweep_csv(serial, run_sweep(config), true);
  config.threads = 4;
  write_sweep_csv(parallel, run_sweep(config), true);
  CHECK(serial.str() == parallel.str());
}

TEST_CASE("sweep CSV schema") {
  const Result analytic = run({"sweep", "--samples", "3"});
  REQUIRE(analytic.code == 0);
  const auto rows = parse_csv(analytic.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"theta", "alpha", "V_cond_V", "P_cond_H", "sum_cond_squares", "V_avg",
                                            "P_avg", "sum_avg_squares", "p_H", "p_V"});
  for (const auto &r : rows) CHECK(r.size() == 10);

  const Result measured = run({"--grid", "64", "--photons", "1e5", "--seed", "4", "sweep", "--samples", "2"});
  REQUIRE(measured.code == 0);
  const auto header = parse_csv(measured.out).front();
  CHECK(header.size() == 16);
  CHECK(header.back() == "sum_avg_squares_measured");
  CHECK(header == sweep_columns(true));
}

TEST_CASE("seeded commands are byte-identical") {
  const std::vector<std::string> sweep{"--grid", "64", "--photons", "1e5", "--readout-sigma", "1", "--seed", "9",
                                       "sweep", "--param", "alpha", "--samples", "5", "--threads", "3"};
  CHECK(run(sweep).out == run(sweep).out);
  std::vector<std::string> json_sweep = sweep;
  json_sweep.push_back("--json");
  CHECK(run(json_sweep).out == run(json_sweep).out);

  const fs::path a = scratch("render_a"), b = scratch("render_b");
  fs::remove_all(a);
  fs::remove_all(b);
  REQUIRE(run({"render", "--grid", "128", "--photons", "1e6", "--readout-sigma", "1", "--seed", "3", "--out", a.string()}).code == 0);
  REQUIRE(run({"render", "--grid", "128", "--photons", "1e6", "--readout-sigma", "1", "--seed", "3", "--out", b.string()}).code == 0);
  for (const char *name : {"h_port.pfm", "v_port.pfm", "h_port.pgm", "v_port.pgm", "v_profile.csv", "metadata.json", "report.json"})
    CHECK(slurp(a / name) == slurp(b / name));

  const std::vector<std::string> weak{"weak", "--phi", "0.1,0.05", "--mode", "exact"};
  CHECK(run(weak).out == run(weak).out);
}

TEST_CASE("render examples") {
  const fs::path dir = scratch("render_examples");
  SUBCASE("separable state shows no fringes") {
    const Result r = run({"render", "--theta", "pi/2", "--alpha", "0", "--grid", "256", "--out", dir.string(), "--json"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"P_measured\": 1.0") != std::string::npos);
    const auto profile = parse_csv(slurp(dir / "v_profile.csv"));
    CHECK(profile.front() == std::vector<std::string>{"angle_deg", "mean_intensity", "stderr"});
    CHECK(profile.size() == 121);
  }
  SUBCASE("full coupling gives unit visibility") {
    const Result r = run({"render", "--theta", "pi/2", "--alpha", "pi", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("V_measured=", 0) == 0);
    const std::string v = r.out.substr(11, r.out.find(' ') - 11);
    CHECK(std::abs(std::stod(v) - 1.0) <= 1e-3);
  }
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"sweep", "--samples", "1"}).code == 1);
  CHECK(run({"sweep", "--param", "phi"}).code == 1);
  CHECK(run({"sweep", "--start", "pi/"}).code == 1);
  CHECK(run({"sweep", "--readout-sigma", "2"}).code == 1);
  CHECK(run({"--grid", "8", "sweep", "--measure"}).code == 1);
  CHECK(run({"weak", "--phi", "0"}).code == 2);
  CHECK(run({"weak", "--psi", "lorentzian(3)"}).code == 1);
  CHECK(run({"sweep", "--out", "/nonexistent/dir/out.csv"}).code == 2);
  CHECK(run({"--config", scratch("missing.json").string(), "sweep"}).code == 1);
}

TEST_CASE("JSON config") {
  const fs::path config = scratch("config.json");
  std::ofstream(config) << R"({"seed": 5, "sweep": {"param": "alpha", "samples": 4, "fixed": "pi/3"}})";
  const Result r = run({"--config", config.string(), "sweep"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(std::stod(rows[1][0]) == doctest::Approx(pi / 3).epsilon(1e-11));

  const Result overridden = run({"--config", config.string(), "sweep", "--samples", "2"});
  CHECK(parse_csv(overridden.out).size() == 3);

  std::ofstream(config) << "[1, 2]";
  CHECK(run({"--config", config.string(), "sweep"}).code == 1);
}

TEST_CASE("weak subcommand") {
  SUBCASE("uniform reconstruction is flat") {
    const Result r = run({"weak", "--psi", "uniform", "--n", "64", "--phi", "0.1"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 65);
    CHECK(rows[0] == std::vector<std::string>{"phi", "x", "re_psi_ratio", "im_psi_ratio", "re_truth", "im_truth",
                                              "abs_error_vs_truth"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][2]) == doctest::Approx(0.125).epsilon(1e-5));
  }
  SUBCASE("error ratio for halved phi") {
    const Result r = run({"weak", "--psi", "gaussian(16)", "--phi", "0.1,0.05", "--json"});
    REQUIRE(r.code == 0);
    const auto pos = r.out.find("\"error_ratios\"");
    REQUIRE(pos != std::string::npos);
    const double ratio = std::stod(r.out.substr(r.out.find('[', pos) + 1));
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
  }
  SUBCASE("wavefunction file") {
    const fs::path file = scratch("psi.txt");
    std::ofstream(file) << "# re im\n0.5 0\n1.0, 0.0\n\n0.5 0.0\n";
    const Result ok = run({"weak", "--psi", "file(" + file.string() + ")", "--phi", "0.01"});
    CHECK(ok.code == 0);
    CHECK(parse_csv(ok.out).size() == 4);

    std::ofstream(file) << "0.5 0\n1.0 zero\n";
    const Result bad = run({"weak", "--psi", "file(" + file.string() + ")"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find(":2:") != std::string::npos);

    std::ofstream(file) << "0.5 0\n1.0 0\n0.5 0 7\n";
    CHECK(run({"weak", "--psi", "file(" + file.string() + ")"}).err.find(":3:") != std::string::npos);

    CHECK(run({"weak", "--psi", "file(" + scratch("absent.txt").string() + ")"}).code == 2);
  }
}

TEST_CASE("image files") {
  IntensityImage img{GridSpec::square(32), std::vector<double>(32 * 32)};
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<double>(i % 97) * 0.5;
  const fs::path pfm = scratch("img.pfm");
  write_pfm(pfm, img);
  const std::string bytes = slurp(pfm);
  CHECK(bytes.rfind("Pf\n32 32\n-1.0\n", 0) == 0);
  const IntensityImage back = read_pfm(pfm);
  CHECK(back.grid == img.grid);
  CHECK(back.pixels == img.pixels);

  const fs::path pgm = scratch("img.pgm");
  CHECK(write_pgm16(pgm, img) == 48.0);
  const std::string raster = slurp(pgm);
  CHECK(raster.rfind("P5\n32 32\n65535\n", 0) == 0);
  CHECK(raster.size() == std::string("P5\n32 32\n65535\n").size() + 2 * 32 * 32);

  CHECK_THROWS_AS(write_pfm("/nonexistent/dir/x.pfm", img), IoError);
  CHECK_THROWS_AS(read_pfm(scratch("absent.pfm")), IoError);
}
