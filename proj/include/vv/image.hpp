#pragma once

/// Binary lattice images and Gauss digitization.

#include "vv/lattice.hpp"
#include "vv/shapes.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace vv {

/// Bits of a d-dimensional box of lattice points. Point (x,y,z) of the box
/// sits at lattice coordinate origin + (x,y,z). Each row along the first
/// axis is packed LSB-first into 64-bit words, with one spare zero word at
/// the end so that shifted reads never leave the row.
class BinaryImage {
public:
  BinaryImage() = default;
  BinaryImage(const Lattice& L, std::array<int, 3> extent, std::array<long long, 3> origin);

  int dim() const { return lattice_.dim; }
  const Lattice& lattice() const { return lattice_; }
  const std::array<int, 3>& extent() const { return extent_; }
  const std::array<long long, 3>& origin() const { return origin_; }
  std::size_t numSamples() const { return std::size_t(extent_[0]) * extent_[1] * extent_[2]; }

  bool get(int x, int y, int z = 0) const {
    return (rowPtr(y, z)[x >> 6] >> (x & 63)) & 1u;
  }
  void set(int x, int y, int z, bool v);

  const std::uint64_t* rowPtr(int y, int z) const { return bits_.data() + rowIndex(y, z) * rowWords_; }
  std::uint64_t* rowPtr(int y, int z) { return bits_.data() + rowIndex(y, z) * rowWords_; }
  int rowWords() const { return rowWords_; }

  std::uint64_t foregroundCount() const;
  /// Smallest number of background samples between the foreground and any
  /// side of the box; a very large value for an empty image.
  int foregroundMargin() const;

  std::string id;

private:
  std::size_t rowIndex(int y, int z) const { return std::size_t(z) * extent_[1] + y; }

  Lattice lattice_;
  std::array<int, 3> extent_{0, 0, 1};
  std::array<long long, 3> origin_{0, 0, 0};
  int rowWords_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct DigitizeOptions {
  int margin = 4;
  std::uint64_t maxSamples = std::uint64_t(1) << 30;
  int threads = 1;
};

/// bit(z) = contains(S, a(z + c)) over the lattice bounding box of S plus
/// `margin` background layers on every side.
BinaryImage digitize(const Shape& S, const Lattice& L, const DigitizeOptions& opt = {});

/// Image of the bit pattern under z ↦ M z (M a lattice symmetry).
BinaryImage transformImage(const BinaryImage& img, const IMat& M);

void writeImage(const BinaryImage& img, const std::string& path);
/// Reads the VVIMG format, or PBM P4 (d = 2, Z², a = 1, phase 0; the first
/// PBM row becomes the top row y = height − 1, padded by the default margin).
BinaryImage readImage(const std::string& path);

}  // namespace vv
