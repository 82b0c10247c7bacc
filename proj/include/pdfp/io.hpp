#ifndef PDFP_IO_HPP_
#define PDFP_IO_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "pdfp/vec.hpp"

namespace pdfp {

// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::runtime_error("parse_double: bad number '" + std::string(s) + "'");
  }
  return v;
}

struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  Vec pixels;  // row-major, intensities in [0, 1]
};

// ASCII portable graymap (P2). Values are scaled by maxval on read.
inline Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_pgm: cannot open " + path.string());

  const auto next_token = [&in, &path]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw std::runtime_error("read_pgm: truncated file " + path.string());
  };

  if (next_token() != "P2") throw std::runtime_error("read_pgm: not an ASCII P2 file");
  const std::size_t w = std::stoul(next_token());
  const std::size_t h = std::stoul(next_token());
  const double maxval = std::stod(next_token());
  if (w == 0 || h == 0 || maxval <= 0) throw std::runtime_error("read_pgm: bad header");

  Image img{h, w, Vec(h * w)};
  for (auto& p : img.pixels) p = std::stod(next_token()) / maxval;
  return img;
}

inline void write_pgm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
  out << "P2\n" << img.width << " " << img.height << "\n255\n";
  for (std::size_t i = 0; i < img.height; ++i) {
    for (std::size_t j = 0; j < img.width; ++j) {
      const double v = std::clamp(img.pixels[i * img.width + j], 0.0, 1.0);
      out << static_cast<int>(std::lround(v * 255.0)) << (j + 1 < img.width ? ' ' : '\n');
    }
  }
  if (!out) throw std::runtime_error("write_pgm: write failed for " + path.string());
}

// Single-column CSV with a header row.
inline void write_vector_csv(const Vec& v, const std::filesystem::path& path,
                             std::string_view header = "x") {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vector_csv: cannot open " + path.string());
  out << header << "\n";
  for (double c : v) out << format_double(c) << "\n";
  if (!out) throw std::runtime_error("write_vector_csv: write failed for " + path.string());
}

inline Vec read_vector_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_vector_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_vector_csv: empty file");
  Vec v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    v.push_back(parse_double(line));
  }
  return v;
}

}  // namespace pdfp

#endif  // PDFP_IO_HPP_
