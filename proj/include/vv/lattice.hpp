#pragma once

#include "vv/core.hpp"

namespace vv {

/// The observation grid a(Λ + c). Coordinates of c are w.r.t. the basis.
struct Lattice {
  int dim = 2;
  Mat3 basis = Mat3::Identity();  ///< columns ξ_i; padded with e3 when dim = 2
  double spacing = 1.0;
  Vec3 phase = Vec3::Zero();

  static Lattice standard(int dim, double spacing = 1.0);
  /// Validates dimension, orientation and phase range.
  static Lattice fromBasis(int dim, const Mat3& basis, double spacing = 1.0,
                           const Vec3& phase = Vec3::Zero());

  Lattice withSpacing(double a) const;
  Lattice withPhase(const Vec3& c) const;

  /// World position of the sample at lattice coordinate z, i.e. a·B(z + c).
  Vec3 sample(const Vec3& z) const { return spacing * (basis * (z + phase)); }
  /// Basis coordinates of a world point, inverse of sample().
  Vec3 coords(const Vec3& x) const;
  /// B·λ at unit spacing.
  Vec3 vec(const Vec3& lambda) const { return basis * lambda; }
};

double unitCellVolume(const Lattice& L);

/// Copy of L with phase drawn uniformly from [0,1)^d.
Lattice samplePhase(const Lattice& L, Rng& rng);

using IMat = Eigen::Matrix3i;

/// Orthogonal maps preserving Λ, as integer matrices in basis coordinates.
/// For dim = 2 the third row/column is the identity.
struct SymmetryGroup {
  int dim = 2;
  bool includesReflections = true;
  std::vector<IMat> elements;

  std::size_t order() const { return elements.size(); }
};

SymmetryGroup latticeSymmetries(const Lattice& L, bool reflections);

/// Table check: contains identity, closed under products and inverses.
bool isClosedGroup(const SymmetryGroup& G);

/// World-coordinate orthogonal matrix B·M·B⁻¹ of a group element.
Mat3 worldMatrix(const Lattice& L, const IMat& M);

/// Rotation about the coordinate axes by the given angles (radians),
/// applied x first, then y, then z.
Mat3 eulerRotation(double ax, double ay, double az);
Mat3 rotation2d(double angle);

}  // namespace vv
