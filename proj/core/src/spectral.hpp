#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mohardy/grid.hpp"

namespace mohardy::detail {

using Spectrum = std::vector<std::complex<double>>;

/// Real FFTs on the grid zero-padded to twice its width per axis, so that
/// products of spectra act as aperiodic convolutions on the domain.
class SpectralGrid {
 public:
  explicit SpectralGrid(const SpatialGrid& grid);

  const SpatialGrid& grid() const { return grid_; }
  int padded() const { return padded_; }
  std::size_t real_size() const { return real_size_; }
  std::size_t spectrum_size() const { return spectrum_size_; }
  /// |xi| (cycles per unit length) for every spectrum slot.
  std::span<const double> radial_frequency() const { return radial_; }

  /// Spectrum of the zero-padded grid function.
  Spectrum forward(std::span<const double> values) const;
  /// Spectrum of a padded real array (real_size() entries, padded layout).
  Spectrum forward_padded(std::span<const double> padded) const;
  /// Inverse transform divided by the padded size, cropped to the domain.
  GridFunction inverse(const Spectrum& spectrum) const;
  /// Same without cropping.
  std::vector<double> inverse_padded(const Spectrum& spectrum) const;

  /// Padded-layout index of a domain cell.
  std::size_t padded_index(std::size_t cell) const;

 private:
  SpatialGrid grid_;
  int padded_ = 0;
  std::size_t real_size_ = 0;
  std::size_t spectrum_size_ = 0;
  std::vector<double> radial_;
};

}  // namespace mohardy::detail
