#include "doctest.h"

#include <clocale>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "twinbeam/run.hpp"

using namespace twinbeam;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("twinbeam_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(TWINBEAM_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("nine significant digits, locale independent") {
  CHECK(format_sig9(6.18466e-15) == "6.18466e-15");
  CHECK(format_sig9(1.0 / 3.0) == "0.333333333");
  CHECK(format_sig9(-60.0) == "-60");
  CHECK(format_sig9(0.0) == "0");
  const char* old = std::setlocale(LC_ALL, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_ALL, "de_DE.UTF-8") || std::setlocale(LC_ALL, "fr_FR.UTF-8")) {
    CHECK(format_sig9(0.5) == "0.5");
  }
  std::setlocale(LC_ALL, saved.c_str());
}

TEST_CASE("profile csv layout") {
  CorrelationProfile p;
  p.delays = {-1e-15, 0.0, 1e-15};
  p.intensity = {0.5, 2.0, 0.5};
  const std::string csv = profile_csv(p);
  CHECK(csv == "delay_fs,intensity,intensity_normalized\n-1,0.5,0.25\n0,2,1\n1,0.5,0.25\n");
}

TEST_CASE("atomic writes") {
  TempDir d("atomic");
  write_atomically(d.path / "a.txt", "hello\n");
  CHECK(slurp(d.path / "a.txt") == "hello\n");
  write_atomically(d.path / "a.txt", "replaced\n");
  CHECK(slurp(d.path / "a.txt") == "replaced\n");
  CHECK_THROWS_AS(write_atomically(d.path / "missing" / "b.txt", "x"), OutputError);
  CHECK_FALSE(fs::exists(d.path / "missing"));
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d.path)) ++entries;
  CHECK(entries == 1);
}

TEST_CASE("in-process fig2 run writes profile, summary and effective config") {
  TempDir d("fig2");
  RunConfig c;
  c.output_dir = (d.path / "out").string();
  std::ostringstream log;
  const RunSummary s = run(c, log);
  REQUIRE(s.results.size() == 1);
  CHECK(s.convergence.converged);
  const std::string csv = slurp(d.path / "out" / "profile.csv");
  CHECK(count_lines(csv) == 242);
  CHECK(csv.rfind("delay_fs,intensity,intensity_normalized\n-60,", 0) == 0);

  const auto j = nlohmann::json::parse(slurp(d.path / "out" / "summary.json"));
  CHECK(j["scenario"] == "fig2");
  CHECK(j["fwhm_fs"].get<double>() == doctest::Approx(6.2).epsilon(0.05));
  CHECK(j["fit"]["width_rad_per_s"].get<double>() == doctest::Approx(0.9e15).epsilon(0.05));
  CHECK(j["grid_converged"] == true);
  CHECK(j["results"].size() == 1);

  CHECK(load_config((d.path / "out" / "effective.cfg").string()) == c);
}

TEST_CASE("cli: fig2 end to end") {
  TempDir d("cli");
  const fs::path out = d.path / "run";
  REQUIRE(cli("--scenario fig2 --out " + out.string() + " > " + (d.path / "log").string()) == 0);
  CHECK(count_lines(slurp(out / "profile.csv")) == 242);
  const auto j = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(std::abs(j["fwhm_fs"].get<double>() - 6.2) < 0.3);
}

TEST_CASE("cli: fig4 writes one profile per defocus") {
  TempDir d("fig4");
  const fs::path cfg = d.path / "fast.cfg";
  std::ofstream(cfg) << "[run]\nscenario = fig4\n[grid]\nn_q = 64\nn_omega = 256\n"
                        "[transfer]\ndefocus_list = 0 100 200 400 um\n";
  const fs::path out = d.path / "run";
  REQUIRE(cli("--config " + cfg.string() + " --out " + out.string() + " > /dev/null") == 0);
  for (const char* name : {"profile_dz0um.csv", "profile_dz100um.csv", "profile_dz200um.csv",
                           "profile_dz400um.csv"}) {
    CHECK(fs::exists(out / name));
  }
  const auto j = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(j["results"].size() == 4);
}

TEST_CASE("cli: failures leave no partial output and report JSON on stderr") {
  TempDir d("fail");
  const fs::path blocker = d.path / "file";
  std::ofstream(blocker) << "not a directory";
  const fs::path err = d.path / "err.json";
  const int code = cli("--out " + (blocker / "out").string() + " > /dev/null 2> " + err.string());
  CHECK(code == 1);
  CHECK(nlohmann::json::parse(slurp(err))["error"]["type"] == "output");
  CHECK_FALSE(fs::exists(blocker / "out"));

  const fs::path bad = d.path / "bad.cfg";
  std::ofstream(bad) << "[grid]\n\nn_qq = 4\n";
  CHECK(cli("--config " + bad.string() + " --out " + (d.path / "o").string() + " > /dev/null 2> " +
            err.string()) == 2);
  const auto e = nlohmann::json::parse(slurp(err));
  CHECK(e["error"]["type"] == "config");
  CHECK(e["error"]["line"] == 3);
  CHECK_FALSE(fs::exists(d.path / "o"));

  CHECK(cli("--scenario fig9 > /dev/null 2>&1") == 2);
}

TEST_CASE("cli: grid check") {
  TempDir d("grid");
  const fs::path log = d.path / "log";
  CHECK(cli("--grid-check > " + log.string()) == 0);
  CHECK(slurp(log).find("fft check                     ok") != std::string::npos);
  CHECK(slurp(log).find("grid convergence              ok") != std::string::npos);
}
