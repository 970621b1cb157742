#include "duality/optics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace duality {

GridSpec GridSpec::square(int pixels, double extent) {
  const double center = (pixels - 1) / 2.0;
  return {pixels, pixels, extent, center, center};
}

void GridSpec::validate() const {
  if (width < 16 || height < 16) throw std::invalid_argument("grid must be at least 16x16 pixels");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw std::invalid_argument("grid extent must be positive");
  if (!std::isfinite(center_x) || !std::isfinite(center_y))
    throw std::invalid_argument("grid center must be finite");
}

const char *to_string(Port port) {
  switch (port) {
  case Port::H: return "H";
  case Port::V: return "V";
  case Port::none: break;
  }
  return "none";
}

FieldImage::FieldImage(GridSpec grid, Port port)
    : grid_(grid), data_(grid.size(), cplx(0.0, 0.0)), port_(port) {
  grid_.validate();
}

FieldImage::FieldImage(GridSpec grid, std::vector<cplx> amplitudes, Port port)
    : grid_(grid), data_(std::move(amplitudes)), port_(port) {
  grid_.validate();
  if (data_.size() != grid_.size()) throw std::invalid_argument("amplitude count does not match grid");
}

double FieldImage::power() const {
  double sum = 0.0;
  for (const cplx &a : data_) sum += std::norm(a);
  return sum * grid_.pixel_area();
}

cplx overlap(const FieldImage &a, const FieldImage &b) {
  if (!(a.grid_ == b.grid_)) throw std::invalid_argument("fields live on different grids");
  cplx sum(0.0, 0.0);
  for (std::size_t i = 0; i < a.data_.size(); ++i) sum += std::conj(a.data_[i]) * b.data_[i];
  return sum * a.grid_.pixel_area();
}

FieldImage superpose(cplx a, const FieldImage &f, cplx b, const FieldImage &g) {
  if (!(f.grid_ == g.grid_)) throw std::invalid_argument("fields live on different grids");
  FieldImage out(f.grid_);
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = a * f.data_[i] + b * g.data_[i];
  return out;
}

FieldImage oam_mode(int l, const GridSpec &grid) {
  FieldImage mode(grid);
  auto amplitudes = mode.amplitudes();
  const int charge = std::abs(l);
  for (int row = 0; row < grid.height; ++row) {
    const double y = grid.y_of(row);
    for (int column = 0; column < grid.width; ++column) {
      const double x = grid.x_of(column);
      const double r2 = x * x + y * y;
      const double envelope = std::pow(std::sqrt(r2), charge) * std::exp(-r2);
      amplitudes[static_cast<std::size_t>(row) * grid.width + column] =
          std::polar(envelope, l * std::atan2(y, x));
    }
  }
  const double norm = std::sqrt(mode.power());
  for (cplx &a : amplitudes) a /= norm;
  return mode;
}

ModePair make_mode_pair(int l, const GridSpec &grid) {
  return {l, oam_mode(l, grid), oam_mode(-l, grid)};
}

PortFields simulate_interferometer(const StateParams &params, const ModePair &modes,
                                   const InterferometerOptions &options) {
  const bool upper = options.arms != Arms::lower_only;
  const bool lower = options.arms != Arms::upper_only;
  const double upper_amp = upper ? std::cos(params.theta / 2.0) : 0.0;
  const cplx lower_amp =
      lower ? std::polar(std::sin(params.theta / 2.0), options.path_phase) : cplx(0.0, 0.0);
  const double to_h = std::cos(params.alpha / 2.0);
  const double to_v = std::sin(params.alpha / 2.0);

  // The lower arm never contributes +l and the upper arm never contributes H.
  FieldImage h = superpose(0.0, modes.plus, lower_amp * to_h, modes.minus);
  FieldImage v = superpose(upper_amp, modes.plus, lower_amp * to_v, modes.minus);
  h.set_port(Port::H);
  v.set_port(Port::V);
  return {std::move(h), std::move(v)};
}

PortFields simulate_interferometer(const StateParams &params, int l, const GridSpec &grid,
                                   const InterferometerOptions &options) {
  return simulate_interferometer(params, make_mode_pair(l, grid), options);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

NoiseModel NoiseModel::substream(std::uint64_t stream) const {
  NoiseModel out = *this;
  out.seed = splitmix64(seed ^ splitmix64(stream + 1));
  return out;
}

void NoiseModel::validate() const {
  if (!(photon_budget >= 0.0)) throw std::invalid_argument("photon budget must be >= 0");
  if (!(readout_sigma >= 0.0) || !std::isfinite(readout_sigma))
    throw std::invalid_argument("readout sigma must be finite and >= 0");
}

double IntensityImage::total() const {
  double sum = 0.0;
  for (double p : pixels) sum += p;
  return sum;
}

IntensityImage render_image(std::span<const FieldImage> fields, const NoiseModel &noise) {
  if (fields.empty()) throw std::invalid_argument("render_image needs at least one field");
  noise.validate();
  const GridSpec grid = fields.front().grid();
  for (const FieldImage &f : fields)
    if (!(f.grid() == grid)) throw std::invalid_argument("fields must share a grid");

  IntensityImage image{grid, std::vector<double>(grid.size(), 0.0)};
  for (const FieldImage &f : fields) {
    const auto amplitudes = f.amplitudes();
    for (std::size_t i = 0; i < amplitudes.size(); ++i) image.pixels[i] += std::norm(amplitudes[i]);
  }

  const bool shot = noise.has_shot_noise();
  if (!shot && noise.readout_sigma == 0.0) return image;

  const double scale = shot ? noise.photon_budget * grid.pixel_area() : 1.0;
  // one engine per row
  for (int row = 0; row < grid.height; ++row) {
    std::seed_seq seq{static_cast<std::uint32_t>(noise.seed), static_cast<std::uint32_t>(noise.seed >> 32),
                      static_cast<std::uint32_t>(row)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> readout(0.0, noise.readout_sigma > 0.0 ? noise.readout_sigma : 1.0);
    for (int column = 0; column < grid.width; ++column) {
      double &pixel = image.pixels[static_cast<std::size_t>(row) * grid.width + column];
      double counts = pixel * scale;
      if (shot && counts > 0.0) {
        std::poisson_distribution<long long> shot_noise(counts);
        counts = static_cast<double>(shot_noise(engine));
      }
      if (noise.readout_sigma > 0.0) counts = std::max(0.0, counts + readout(engine));
      pixel = counts;
    }
  }
  return image;
}

IntensityImage render_image(const FieldImage &field, const NoiseModel &noise) {
  return render_image(std::span<const FieldImage>(&field, 1), noise);
}

} // namespace duality
