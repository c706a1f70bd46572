#include "mohardy/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mohardy/error.hpp"

namespace mohardy {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("config: key '" + std::string(key) + "' expects a number, got '" +
                      std::string(text) + "'");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw ConfigError("config: key '" + std::string(key) + "' expects a boolean");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

}  // namespace

bool ExperimentConfig::has(std::string_view key) const {
  return std::find(keys_set.begin(), keys_set.end(), key) != keys_set.end();
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "experiment",   "seed",          "out",          "gamma",        "grid.dim",
      "grid.L",       "grid.cells",    "grid.h",       "grid.t_min",   "grid.rho",
      "grid.levels",  "growth.kind",   "growth.p",     "growth.weight", "growth.orlicz",
      "growth.alpha", "growth.beta",   "growth.gamma", "wavelet.s",    "wavelet.r_lo",
      "wavelet.r_hi", "wavelet.order", "balls.family", "run.samples",  "run.epsilon",
      "run.refine"};
  return keys;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  double spacing = 0.0;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& known = config_keys();
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (cfg.has(key)) throw ConfigError("config: duplicate key '" + key + "'");
    cfg.keys_set.push_back(key);

    if (key == "experiment") cfg.experiment = value;
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "out") cfg.out = std::string(value);
    else if (key == "gamma") cfg.gamma = parse_number<double>(key, value);
    else if (key == "grid.dim") cfg.grid.dim = parse_number<int>(key, value);
    else if (key == "grid.L") cfg.grid.half_width = parse_number<double>(key, value);
    else if (key == "grid.cells") cfg.grid.cells = parse_number<int>(key, value);
    else if (key == "grid.h") spacing = parse_number<double>(key, value);
    else if (key == "grid.t_min") cfg.grid.t_min = parse_number<double>(key, value);
    else if (key == "grid.rho") cfg.grid.rho = parse_number<double>(key, value);
    else if (key == "grid.levels") cfg.grid.levels = parse_number<int>(key, value);
    else if (key == "growth.kind") cfg.growth.kind = value;
    else if (key == "growth.p") cfg.growth.p = parse_number<double>(key, value);
    else if (key == "growth.weight") cfg.growth.weight = parse_number<double>(key, value);
    else if (key == "growth.orlicz") cfg.growth.orlicz = value;
    else if (key == "growth.alpha") cfg.growth.alpha = parse_number<double>(key, value);
    else if (key == "growth.beta") cfg.growth.beta = parse_number<double>(key, value);
    else if (key == "growth.gamma") cfg.growth.gamma = parse_number<double>(key, value);
    else if (key == "wavelet.s") cfg.wavelet.moments = parse_number<int>(key, value);
    else if (key == "wavelet.r_lo") cfg.wavelet.r_lo = parse_number<double>(key, value);
    else if (key == "wavelet.r_hi") cfg.wavelet.r_hi = parse_number<double>(key, value);
    else if (key == "wavelet.order") cfg.wavelet.order = parse_number<int>(key, value);
    else if (key == "balls.family") {
      if (value == "dyadic") cfg.balls = BallFamilyKind::Dyadic;
      else if (value == "all") cfg.balls = BallFamilyKind::AllIntervals;
      else throw ConfigError("config: balls.family must be 'dyadic' or 'all'");
    } else if (key == "run.samples") cfg.samples = parse_number<int>(key, value);
    else if (key == "run.epsilon") cfg.epsilon = parse_number<double>(key, value);
    else if (key == "run.refine") cfg.refine = parse_bool(key, value);
  }

  require(!cfg.experiment.empty(), "missing key 'experiment'");
  require(!(cfg.has("grid.h") && cfg.has("grid.cells")), "give grid.cells or grid.h, not both");
  require(cfg.grid.dim == 1 || cfg.grid.dim == 2, "grid.dim must be 1 or 2");
  require(cfg.grid.half_width > 0.0 && std::isfinite(cfg.grid.half_width), "grid.L must be positive");
  if (cfg.has("grid.h")) {
    require(spacing > 0.0, "grid.h must be positive");
    const double cells = 2.0 * cfg.grid.half_width / spacing;
    require(std::abs(cells - std::round(cells)) < 1e-9 * cells, "2 grid.L / grid.h must be an integer");
    cfg.grid.cells = static_cast<int>(std::round(cells));
  }
  require(cfg.grid.cells >= 2, "grid.cells must be at least 2");
  require(cfg.grid.t_min > 0.0, "grid.t_min must be positive");
  require(cfg.grid.rho > 1.0, "grid.rho must exceed 1");
  require(cfg.grid.levels >= 1 && cfg.grid.levels <= 4096, "grid.levels must lie in [1, 4096]");
  try {
    make_levels(cfg);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: invalid grid block: ") + e.what());
  }
  require(cfg.gamma > 0.0 && cfg.gamma < 1.0, "gamma must lie in (0, 1)");
  require(cfg.wavelet.moments >= 0, "wavelet.s must be >= 0");
  require(cfg.wavelet.r_lo > 0.0 && cfg.wavelet.r_hi > cfg.wavelet.r_lo,
          "wavelet band needs 0 < r_lo < r_hi");
  require(cfg.samples >= 0, "run.samples must be >= 0");
  require(cfg.epsilon > 0.0, "run.epsilon must be positive");
  make_growth(cfg);  // validates the growth block
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SpatialGrid make_grid(const ExperimentConfig& cfg) {
  return SpatialGrid(cfg.grid.dim, cfg.grid.half_width, cfg.grid.cells);
}

HalfSpaceGrid make_levels(const ExperimentConfig& cfg) {
  return HalfSpaceGrid(make_grid(cfg), cfg.grid.t_min, cfg.grid.rho, cfg.grid.levels);
}

GrowthFunction make_growth(const ExperimentConfig& cfg) {
  const auto& g = cfg.growth;
  const int n = cfg.grid.dim;
  try {
    if (g.kind == "identity") return GrowthFunction::identity(n);
    if (g.kind == "power") return GrowthFunction::power(n, g.p);
    if (g.kind == "product") {
      OrliczShape shape;
      if (g.orlicz == "power") shape = OrliczShape::Power;
      else if (g.orlicz == "power_over_log") shape = OrliczShape::PowerOverLog;
      else if (g.orlicz == "power_times_log") shape = OrliczShape::PowerTimesLog;
      else throw ConfigError("config: unknown growth.orlicz '" + g.orlicz + "'");
      return GrowthFunction::product(n, PowerWeight{g.weight}, OrliczFunction{shape, g.p});
    }
    if (g.kind == "log") return GrowthFunction::log_family(n, g.alpha, g.beta, g.gamma);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: invalid growth block: ") + e.what());
  }
  throw ConfigError("config: unknown growth.kind '" + g.kind + "'");
}

AdmissibleWavelet make_wavelet(const ExperimentConfig& cfg, const HalfSpaceGrid& levels) {
  try {
    return make_admissible_wavelet(levels, cfg.wavelet.moments, cfg.wavelet.r_lo, cfg.wavelet.r_hi,
                                   cfg.wavelet.order);
  } catch (const Error& e) {
    throw ConfigError(std::string("config: wavelet block: ") + e.what());
  }
}

}  // namespace mohardy
