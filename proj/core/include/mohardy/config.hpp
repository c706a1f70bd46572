#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mohardy/ball_index.hpp"
#include "mohardy/functionals.hpp"
#include "mohardy/growth.hpp"

namespace mohardy {

struct GridBlock {
  int dim = 1;
  double half_width = 32.0;    ///< grid.L
  int cells = 4096;            ///< grid.cells, or 2L / grid.h
  double t_min = 0.125;
  double rho = 1.1040895136738123;  ///< 2^{1/7}
  int levels = 57;
};

struct GrowthBlock {
  std::string kind = "identity";  ///< identity | power | product | log
  double p = 1.0;
  double weight = 0.0;            ///< exponent a of |x|^a
  std::string orlicz = "power";   ///< power | power_over_log | power_times_log
  double alpha = 1.0, beta = 0.0, gamma = 0.0;
};

struct WaveletBlock {
  int moments = 1;  ///< wavelet.s
  double r_lo = 0.5;
  double r_hi = 2.0;
  int order = 0;    ///< 0 picks the default
};

/// Plain key=value configuration. Blank lines and lines starting with '#'
/// are ignored; sections are key prefixes (grid., growth., wavelet., balls.,
/// run.).
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::filesystem::path out = "mohardy-out";
  GridBlock grid;
  GrowthBlock growth;
  WaveletBlock wavelet;
  double gamma = 0.5;
  BallFamilyKind balls = BallFamilyKind::Dyadic;
  int samples = 0;        ///< run.samples, 0 = experiment default
  double epsilon = 1.0;   ///< run.epsilon
  bool refine = true;     ///< run.refine
  std::vector<std::string> keys_set;

  bool has(std::string_view key) const;
};

/// Keys accepted by parse_config, in documentation order.
const std::vector<std::string>& config_keys();

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

SpatialGrid make_grid(const ExperimentConfig& cfg);
HalfSpaceGrid make_levels(const ExperimentConfig& cfg);
GrowthFunction make_growth(const ExperimentConfig& cfg);
AdmissibleWavelet make_wavelet(const ExperimentConfig& cfg, const HalfSpaceGrid& levels);

}  // namespace mohardy
