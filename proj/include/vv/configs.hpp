#pragma once

/// Configuration indices of n^d windows, sliding-window counting and the
/// direct-membership hit-or-miss oracle.

#include "vv/image.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vv {

/// Window C^n_{0,0}: lattice points λ ∈ [0,n)^d, point j = Σ n^{i−1} λ_i.
struct Window {
  int n = 2, dim = 2;
  std::vector<Eigen::Vector3i> lambdas;

  int points() const { return int(lambdas.size()); }
  std::uint32_t numConfigs() const { return std::uint32_t(1) << points(); }
  std::uint32_t fullConfig() const { return numConfigs() - 1; }
  /// Window points B·λ_j at unit spacing.
  std::vector<Vec3> worldPoints(const Lattice& L) const;
};

/// Supported: d = 2 with 1 ≤ n ≤ 4, d = 3 with 1 ≤ n ≤ 2.
Window makeWindow(int n, int dim);

int pixelIndex(const std::vector<int>& lambda, int n);

/// l of the window anchored (minimal corner) at lattice coordinate z.
std::uint32_t configOfWindow(const BinaryImage& img, const std::array<long long, 3>& z, int n);

struct CountVector {
  int n = 2, dim = 2;
  std::vector<std::uint64_t> counts;  ///< counts[0] is unused: l = 0 is unbounded
  std::string imageId;

  std::uint64_t operator[](std::uint32_t l) const { return counts[l]; }
  std::uint64_t nonzeroTotal() const;  ///< Σ_{l≥1} N_l
  bool operator==(const CountVector& o) const { return n == o.n && dim == o.dim && counts == o.counts; }
};

/// Bit-sliced count of every window configuration. Needs a background margin
/// of at least n − 1 around the foreground.
CountVector countConfigs(const BinaryImage& img, int n, int threads = 1);

/// One anchor at a time, for cross-checking.
CountVector countConfigsNaive(const BinaryImage& img, int n);

/// Number of anchors z with a(B_l+z+c) ⊆ S and a(W_l+z+c) ∩ S = ∅, by
/// membership tests on window points. l = 0 is rejected.
std::uint64_t hitOrMissCount(const Shape& S, const Lattice& L, int n, std::uint32_t l);
/// The same oracle for every l at once.
CountVector hitOrMissCounts(const Shape& S, const Lattice& L, int n);

/// Windows meeting the foreground, counted from the distinct anchors that
/// cover each foreground sample.
std::uint64_t touchedWindowCount(const BinaryImage& img, int n);

/// Pixel permutations induced by the window-preserving elements of G,
/// acting about the window centre.
std::vector<std::vector<int>> windowActions(const SymmetryGroup& G, int n);
std::uint32_t applyAction(std::uint32_t l, const std::vector<int>& perm);
/// Sorted orbit of l.
std::vector<std::uint32_t> orbitOf(std::uint32_t l, int n, const SymmetryGroup& G);
/// Counts of the image transformed by the element behind `perm`.
CountVector permuteCounts(const CountVector& c, const std::vector<int>& perm);

void writeCountsCsv(const CountVector& c, const std::string& path);
CountVector readCountsCsv(const std::string& path);

}  // namespace vv
