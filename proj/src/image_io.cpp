#include "duality/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "duality/errors.hpp"

namespace duality {
namespace {

std::ofstream open_for_writing(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
  out.flush();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

} // namespace

void write_pfm(const std::filesystem::path &path, const IntensityImage &image) {
  auto out = open_for_writing(path);
  const GridSpec &grid = image.grid;
  out << "Pf\n" << grid.width << ' ' << grid.height << "\n-1.0\n";
  std::vector<float> line(static_cast<std::size_t>(grid.width));
  for (int row = grid.height - 1; row >= 0; --row) {
    for (int column = 0; column < grid.width; ++column)
      line[static_cast<std::size_t>(column)] = static_cast<float>(image.at(row, column));
    if constexpr (std::endian::native == std::endian::big) {
      for (float &value : line) {
        std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
        bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) | (bits >> 24);
        value = std::bit_cast<float>(bits);
      }
    }
    out.write(reinterpret_cast<const char *>(line.data()), static_cast<std::streamsize>(line.size() * sizeof(float)));
  }
  finish(out, path);
}

IntensityImage read_pfm(const std::filesystem::path &path, double extent) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string magic;
  int width = 0;
  int height = 0;
  double scale = 0.0;
  in >> magic >> width >> height >> scale;
  in.get();
  if (!in || magic != "Pf" || width <= 0 || height <= 0 || scale == 0.0)
    throw IoError("'" + path.string() + "' is not a single-channel PFM file");
  const bool little = scale < 0.0;
  const bool swap = little != (std::endian::native == std::endian::little);

  GridSpec grid{width, height, extent, (width - 1) / 2.0, (height - 1) / 2.0};
  IntensityImage image{grid, std::vector<double>(grid.size())};
  std::vector<std::uint32_t> line(static_cast<std::size_t>(width));
  for (int row = height - 1; row >= 0; --row) {
    in.read(reinterpret_cast<char *>(line.data()), static_cast<std::streamsize>(line.size() * 4));
    if (!in) throw IoError("'" + path.string() + "' is truncated");
    for (int column = 0; column < width; ++column) {
      std::uint32_t bits = line[static_cast<std::size_t>(column)];
      if (swap)
        bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) | (bits >> 24);
      image.pixels[static_cast<std::size_t>(row) * width + column] = std::bit_cast<float>(bits);
    }
  }
  return image;
}

double write_pgm16(const std::filesystem::path &path, const IntensityImage &image) {
  auto out = open_for_writing(path);
  const GridSpec &grid = image.grid;
  const double peak = image.pixels.empty() ? 0.0 : *std::max_element(image.pixels.begin(), image.pixels.end());
  out << "P5\n" << grid.width << ' ' << grid.height << "\n65535\n";
  std::vector<unsigned char> line(static_cast<std::size_t>(grid.width) * 2);
  for (int row = 0; row < grid.height; ++row) {
    for (int column = 0; column < grid.width; ++column) {
      const double scaled = peak > 0.0 ? image.at(row, column) / peak * 65535.0 : 0.0;
      const auto level = static_cast<std::uint16_t>(std::clamp(std::lround(scaled), 0L, 65535L));
      line[2 * static_cast<std::size_t>(column)] = static_cast<unsigned char>(level >> 8);
      line[2 * static_cast<std::size_t>(column) + 1] = static_cast<unsigned char>(level & 0xff);
    }
    out.write(reinterpret_cast<const char *>(line.data()), static_cast<std::streamsize>(line.size()));
  }
  finish(out, path);
  return peak;
}

} // namespace duality
