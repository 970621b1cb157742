#pragma once

// Scalar field synthesis for the OAM interferometer and camera rendering.
//
// Lengths are in beam-waist units. Pixels are square with side
// 2 * extent / width; the beam axis sits at (center_x, center_y) in pixel
// index coordinates, which default to the geometric grid center.

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "duality/qubit.hpp"

namespace duality {

struct GridSpec {
  int width = 512;
  int height = 512;
  /// Physical half-width of the grid along x.
  double extent = 4.0;
  double center_x = 255.5;
  double center_y = 255.5;

  static GridSpec square(int pixels, double extent = 4.0);

  double pixel_size() const { return 2.0 * extent / width; }
  double pixel_area() const { return pixel_size() * pixel_size(); }
  std::size_t size() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  /// Physical coordinates of a pixel center relative to the beam axis.
  double x_of(int column) const { return (column - center_x) * pixel_size(); }
  double y_of(int row) const { return (row - center_y) * pixel_size(); }

  /// Throws std::invalid_argument unless width, height >= 16 and extent > 0.
  void validate() const;

  bool operator==(const GridSpec &) const = default;
};

enum class Port { none, H, V };

const char *to_string(Port port);

/// Complex amplitude of one polarization component on a grid, row-major.
class FieldImage {
public:
  FieldImage(GridSpec grid, Port port = Port::none);
  FieldImage(GridSpec grid, std::vector<cplx> amplitudes, Port port = Port::none);

  const GridSpec &grid() const { return grid_; }
  Port port() const { return port_; }
  void set_port(Port port) { port_ = port; }

  std::span<const cplx> amplitudes() const { return data_; }
  std::span<cplx> amplitudes() { return data_; }
  const cplx &at(int row, int column) const { return data_[index(row, column)]; }

  /// sum |a|^2 * pixel area.
  double power() const;

  /// Inner product sum conj(a) b * pixel area.
  friend cplx overlap(const FieldImage &a, const FieldImage &b);

  /// a * f + b * g on a shared grid.
  friend FieldImage superpose(cplx a, const FieldImage &f, cplx b, const FieldImage &g);

private:
  std::size_t index(int row, int column) const {
    return static_cast<std::size_t>(row) * grid_.width + column;
  }

  GridSpec grid_;
  std::vector<cplx> data_;
  Port port_;
};

/// (r/w)^{|l|} exp(-r^2/w^2) exp(i l phi), normalized to unit power on the grid.
FieldImage oam_mode(int l, const GridSpec &grid);

/// The +l and -l modes of one grid, computed once and reused across configurations.
struct ModePair {
  int l = 3;
  FieldImage plus;
  FieldImage minus;
};

ModePair make_mode_pair(int l, const GridSpec &grid);

enum class Arms { both, upper_only, lower_only };

struct InterferometerOptions {
  /// Relative phase of the lower arm; rotates the petal pattern only.
  double path_phase = 0.0;
  Arms arms = Arms::both;
};

struct PortFields {
  FieldImage h;
  FieldImage v;
};

/// Upper arm: cos(theta/2) of mode +l, polarization V. Lower arm: sin(theta/2)
/// of mode -l (Dove prism) with polarization cos(alpha/2)H + sin(alpha/2)V.
/// The final PBS routes the H and V components to the two returned fields.
PortFields simulate_interferometer(const StateParams &params, const ModePair &modes,
                                   const InterferometerOptions &options = {});
PortFields simulate_interferometer(const StateParams &params, int l, const GridSpec &grid,
                                   const InterferometerOptions &options = {});

struct NoiseModel {
  /// Expected detected photons for the full unit-power input beam;
  /// infinity selects the exact noiseless path.
  double photon_budget = std::numeric_limits<double>::infinity();
  /// Additive Gaussian readout noise in photon units.
  double readout_sigma = 0.0;
  std::uint64_t seed = 0;

  static NoiseModel noiseless() { return {}; }
  bool has_shot_noise() const { return std::isfinite(photon_budget); }
  /// Same settings with a seed derived deterministically from (seed, stream).
  NoiseModel substream(std::uint64_t stream) const;
  void validate() const;
};

/// Real per-pixel intensity (counts) on a grid, row-major, all values >= 0.
struct IntensityImage {
  GridSpec grid;
  std::vector<double> pixels;

  double at(int row, int column) const {
    return pixels[static_cast<std::size_t>(row) * grid.width + column];
  }
  double total() const;
};

/// Incoherent sum of |a|^2 over `fields`. Noiseless: exact |a|^2. Otherwise
/// counts are Poisson(photon_budget * |a|^2 * pixel area) plus
/// N(0, readout_sigma^2), clamped at zero. Deterministic for a given seed.
IntensityImage render_image(std::span<const FieldImage> fields, const NoiseModel &noise);
IntensityImage render_image(const FieldImage &field, const NoiseModel &noise);

} // namespace duality
