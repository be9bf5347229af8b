#pragma once

// Hand-rolled generators for property tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ceilfit/flops.hpp"
#include "ceilfit/scaling.hpp"
#include "ceilfit/series.hpp"

namespace testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double log_real(double lo, double hi) { return std::exp(real(std::log(lo), std::log(hi))); }
  bool coin() { return integer(0, 1) == 1; }
  std::uint64_t bits() { return eng_(); }

  ceilfit::ModelConfig model() {
    ceilfit::ModelConfig c;
    c.num_layers = integer(1, 96);
    c.hidden_size = integer(1, 8192);
    c.ffn_intermediate = integer(1, 32768);
    c.vocab_size = integer(1, 256000);
    c.kv_total_dim = integer(1, c.hidden_size);
    return c;
  }

  // Whole-token lengths keep every product exactly representable.
  double length() { return static_cast<double>(integer(1, 8192)); }

  ceilfit::SigmoidParams sigmoid() {
    ceilfit::SigmoidParams p;
    p.p_start = real(0.0, 80.0);
    p.ceiling = p.p_start + real(0.5, 25.0);
    p.c_mid = log_real(0.5, 500.0);
    p.steepness = log_real(0.3, 4.0);
    return p;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline ceilfit::ModelConfig tiny_model() { return {1, 1, 1, 1, 1}; }

inline std::filesystem::path data_dir() { return CEILFIT_DATA_DIR; }

// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ceilfit_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
