#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "mohardy/error.hpp"

namespace mohardy::detail {

namespace {

// The planner is not thread safe; executing an existing plan on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

const Plans& plans_for(int dim, int padded) {
  static std::map<std::pair<int, int>, Plans> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find({dim, padded});
  if (it != cache.end()) return it->second;
  const std::size_t real = dim == 1 ? padded : static_cast<std::size_t>(padded) * padded;
  const std::size_t spec = dim == 1 ? padded / 2 + 1 : static_cast<std::size_t>(padded) * (padded / 2 + 1);
  double* in = fftw_alloc_real(real);
  fftw_complex* out = fftw_alloc_complex(spec);
  Plans p;
  if (dim == 1) {
    p.forward = fftw_plan_dft_r2c_1d(padded, in, out, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_1d(padded, out, in, FFTW_ESTIMATE);
  } else {
    p.forward = fftw_plan_dft_r2c_2d(padded, padded, in, out, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_2d(padded, padded, out, in, FFTW_ESTIMATE);
  }
  fftw_free(in);
  fftw_free(out);
  if (p.forward == nullptr || p.backward == nullptr) throw NumericalError("FFT planning failed");
  return cache.emplace(std::pair{dim, padded}, p).first->second;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {}
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

SpectralGrid::SpectralGrid(const SpatialGrid& grid) : grid_(grid) {
  padded_ = 2 * grid.cells_per_axis();
  const std::size_t p = static_cast<std::size_t>(padded_);
  const std::size_t half = p / 2 + 1;
  real_size_ = grid.dim() == 1 ? p : p * p;
  spectrum_size_ = grid.dim() == 1 ? half : p * half;
  radial_.resize(spectrum_size_);
  const double unit = 1.0 / (padded_ * grid.spacing());
  auto signed_index = [&](std::size_t k) {
    return k <= p / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(p);
  };
  if (grid.dim() == 1) {
    for (std::size_t k = 0; k < half; ++k) radial_[k] = k * unit;
  } else {
    for (std::size_t r = 0; r < p; ++r) {
      const double fy = signed_index(r) * unit;
      for (std::size_t k = 0; k < half; ++k) {
        radial_[r * half + k] = std::hypot(k * unit, fy);
      }
    }
  }
  plans_for(grid.dim(), padded_);
}

std::size_t SpectralGrid::padded_index(std::size_t cell) const {
  if (grid_.dim() == 1) return cell;
  const auto ij = grid_.coords(cell);
  return static_cast<std::size_t>(ij[1]) * padded_ + ij[0];
}

Spectrum SpectralGrid::forward(std::span<const double> values) const {
  if (values.size() != grid_.size()) throw PreconditionError("spectral forward: size mismatch");
  std::vector<double> padded(real_size_, 0.0);
  for (std::size_t c = 0; c < values.size(); ++c) padded[padded_index(c)] = values[c];
  return forward_padded(padded);
}

Spectrum SpectralGrid::forward_padded(std::span<const double> padded) const {
  const Plans& p = plans_for(grid_.dim(), padded_);
  RealBuffer in(real_size_);
  ComplexBuffer out(spectrum_size_);
  std::memcpy(in.data, padded.data(), real_size_ * sizeof(double));
  fftw_execute_dft_r2c(p.forward, in.data, out.data);
  Spectrum s(spectrum_size_);
  for (std::size_t k = 0; k < spectrum_size_; ++k) s[k] = {out.data[k][0], out.data[k][1]};
  return s;
}

std::vector<double> SpectralGrid::inverse_padded(const Spectrum& spectrum) const {
  if (spectrum.size() != spectrum_size_) throw PreconditionError("spectral inverse: size mismatch");
  const Plans& p = plans_for(grid_.dim(), padded_);
  ComplexBuffer in(spectrum_size_);
  RealBuffer out(real_size_);
  for (std::size_t k = 0; k < spectrum_size_; ++k) {
    in.data[k][0] = spectrum[k].real();
    in.data[k][1] = spectrum[k].imag();
  }
  fftw_execute_dft_c2r(p.backward, in.data, out.data);
  const double scale = 1.0 / static_cast<double>(real_size_);
  std::vector<double> r(real_size_);
  for (std::size_t i = 0; i < real_size_; ++i) r[i] = out.data[i] * scale;
  return r;
}

GridFunction SpectralGrid::inverse(const Spectrum& spectrum) const {
  const auto padded = inverse_padded(spectrum);
  GridFunction out(grid_.size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = padded[padded_index(c)];
  return out;
}

}  // namespace mohardy::detail
