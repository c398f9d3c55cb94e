#pragma once
// In-process driver for the command-line front end: runs commands against a
// scratch output root and reads back the files they write.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "strider/cli/app.hpp"
#include "strider/csv.hpp"

namespace strider::testing {

namespace fs = std::filesystem;

class ScratchRoot {
 public:
  explicit ScratchRoot(const std::string& tag) {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("strider-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(dir_);
    ::setenv("STRIDER_OUTPUT_ROOT", dir_.c_str(), 1);
  }
  ~ScratchRoot() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  ScratchRoot(const ScratchRoot&) = delete;
  ScratchRoot& operator=(const ScratchRoot&) = delete;

  const fs::path& path() const { return dir_; }
  fs::path run(const std::string& name) const { return dir_ / "runs" / name; }

 private:
  fs::path dir_;
};

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline csv::Table read_table(const fs::path& p) {
  std::ifstream in(p);
  return csv::read_numeric(in, p.string());
}

// gyro_x carries two on-bin tones, gyro_y is silent, gyro_z and acc_y carry
// a single tone plus an offset.
inline std::string synthetic_trace(std::size_t samples, double rate) {
  constexpr double two_pi = 6.283185307179586476925;
  std::ostringstream s;
  s << "t_s,gyro_x,gyro_y,gyro_z,acc_y\n";
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double gx = 2.0 * std::sin(two_pi * 1.0 * t + 0.4) + 0.5 * std::sin(two_pi * 3.0 * t - 1.2);
    const double gz = 0.3 * std::sin(two_pi * 2.0 * t);
    const double ay = 9.81 + 0.2 * std::sin(two_pi * 4.0 * t + 1.0);
    s << csv::num(t) << ',' << csv::num(gx) << ",0," << csv::num(gz) << ',' << csv::num(ay) << '\n';
  }
  return s.str();
}

}  // namespace strider::testing
