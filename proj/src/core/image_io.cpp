#include "core/image_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "core/errors.hpp"

namespace dg3pd {

namespace {

void swap4(char* p) {
  std::swap(p[0], p[3]);
  std::swap(p[1], p[2]);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  return f;
}

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw IoError("unexpected end of header");
  return tok;
}

int parse_dim(const std::string& tok, const std::string& path) {
  try {
    int v = std::stoi(tok);
    if (v < 1) throw IoError("non-positive dimension in " + path);
    return v;
  } catch (const IoError&) {
    throw;
  } catch (...) {
    throw IoError("malformed header in " + path);
  }
}

}  // namespace

void write_pgm(const std::string& path, const Image& img) {
  auto f = open_out(path);
  f << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(img.cols()));
  for (int i = 0; i < img.rows(); ++i) {
    for (int j = 0; j < img.cols(); ++j)
      row[static_cast<std::size_t>(j)] =
          static_cast<unsigned char>(std::round(std::clamp(img.at(i, j), 0.0, 255.0)));
    f.write(reinterpret_cast<const char*>(row.data()), img.cols());
  }
  if (!f) throw IoError("write failed: " + path);
}

Image read_pgm(const std::string& path) {
  auto f = open_in(path);
  if (next_token(f) != "P5") throw IoError("not a P5 PGM: " + path);
  int cols = parse_dim(next_token(f), path);
  int rows = parse_dim(next_token(f), path);
  int maxval = parse_dim(next_token(f), path);
  if (maxval != 255) throw IoError("only 8-bit PGM supported: " + path);
  // header ends with a single whitespace byte, already consumed by next_token
  Image img(rows, cols);
  std::vector<unsigned char> row(static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i) {
    f.read(reinterpret_cast<char*>(row.data()), cols);
    if (!f) throw IoError("truncated PGM: " + path);
    for (int j = 0; j < cols; ++j) img.at(i, j) = static_cast<double>(row[static_cast<std::size_t>(j)]);
  }
  return img;
}

void write_mask_pgm(const std::string& path, const Mask& mask) {
  auto f = open_out(path);
  f << "P5\n" << mask.cols() << " " << mask.rows() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(mask.cols()));
  for (int i = 0; i < mask.rows(); ++i) {
    for (int j = 0; j < mask.cols(); ++j)
      row[static_cast<std::size_t>(j)] = mask.at(i, j) ? 255 : 0;
    f.write(reinterpret_cast<const char*>(row.data()), mask.cols());
  }
  if (!f) throw IoError("write failed: " + path);
}

Mask read_mask_pgm(const std::string& path) {
  Image img = read_pgm(path);
  Mask mask(img.rows(), img.cols());
  for (std::size_t k = 0; k < img.size(); ++k) mask[k] = img[k] >= 128.0 ? 1 : 0;
  return mask;
}

void write_pfm(const std::string& path, const Image& img) {
  auto f = open_out(path);
  f << "Pf\n" << img.cols() << " " << img.rows() << "\n-1.0\n";
  std::vector<float> row(static_cast<std::size_t>(img.cols()));
  for (int i = img.rows() - 1; i >= 0; --i) {
    for (int j = 0; j < img.cols(); ++j) row[static_cast<std::size_t>(j)] = static_cast<float>(img.at(i, j));
    if constexpr (std::endian::native == std::endian::big) {
      for (auto& v : row) swap4(reinterpret_cast<char*>(&v));
    }
    f.write(reinterpret_cast<const char*>(row.data()),
            static_cast<std::streamsize>(sizeof(float)) * img.cols());
  }
  if (!f) throw IoError("write failed: " + path);
}

Image read_pfm(const std::string& path) {
  auto f = open_in(path);
  std::string magic = next_token(f);
  if (magic != "Pf") throw IoError("not a grayscale PFM: " + path);
  int cols = parse_dim(next_token(f), path);
  int rows = parse_dim(next_token(f), path);
  double scl = 0.0;
  try {
    scl = std::stod(next_token(f));
  } catch (...) {
    throw IoError("malformed PFM scale: " + path);
  }
  bool file_little = scl < 0.0;
  Image img(rows, cols);
  std::vector<float> row(static_cast<std::size_t>(cols));
  for (int i = rows - 1; i >= 0; --i) {
    f.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(sizeof(float)) * cols);
    if (!f) throw IoError("truncated PFM: " + path);
    bool host_little = std::endian::native == std::endian::little;
    if (file_little != host_little)
      for (auto& v : row) swap4(reinterpret_cast<char*>(&v));
    for (int j = 0; j < cols; ++j) img.at(i, j) = static_cast<double>(row[static_cast<std::size_t>(j)]);
  }
  return img;
}

}  // namespace dg3pd
