#include "vv/lattice.hpp"

#include <cmath>

namespace vv {

namespace {

void checkDim(int d) {
  if (d != 2 && d != 3) throw Error("lattice dimension must be 2 or 3");
}

Mat3 padded(int d, Mat3 B) {
  if (d == 2) {
    B.row(2).setZero();
    B.col(2).setZero();
    B(2, 2) = 1;
  }
  return B;
}

}  // namespace

Lattice Lattice::standard(int dim, double spacing) {
  return fromBasis(dim, Mat3::Identity(), spacing);
}

Lattice Lattice::fromBasis(int dim, const Mat3& basis, double spacing, const Vec3& phase) {
  checkDim(dim);
  Lattice L;
  L.dim = dim;
  L.basis = padded(dim, basis);
  if (!(L.basis.determinant() > 0)) throw Error("lattice basis must be positively oriented");
  if (!(spacing > 0) || !std::isfinite(spacing)) throw Error("lattice spacing must be positive");
  L.spacing = spacing;
  return L.withPhase(phase);
}

Lattice Lattice::withSpacing(double a) const {
  if (!(a > 0) || !std::isfinite(a)) throw Error("lattice spacing must be positive");
  Lattice L = *this;
  L.spacing = a;
  return L;
}

Lattice Lattice::withPhase(const Vec3& c) const {
  for (int i = 0; i < dim; ++i)
    if (!(c[i] >= 0 && c[i] < 1)) throw Error("phase coordinates must lie in [0,1)");
  Lattice L = *this;
  L.phase = c;
  if (dim == 2) L.phase[2] = 0;
  return L;
}

Vec3 Lattice::coords(const Vec3& x) const { return basis.inverse() * (x / spacing) - phase; }

double unitCellVolume(const Lattice& L) { return L.basis.determinant(); }

Lattice samplePhase(const Lattice& L, Rng& rng) {
  Vec3 c = Vec3::Zero();
  for (int i = 0; i < L.dim; ++i) c[i] = uniform01(rng);
  return L.withPhase(c);
}

SymmetryGroup latticeSymmetries(const Lattice& L, bool reflections) {
  const int d = L.dim;
  const Mat3& B = L.basis;
  Mat3 gram = B.transpose() * B;
  double scale = gram.diagonal().maxCoeff();
  double tol = 1e-9 * scale;
  // |λ_k| ≤ ‖B⁻¹‖·|Bλ|, with the Frobenius norm as a cheap upper bound.
  double inv = B.inverse().norm();

  // Candidate images of each basis vector: lattice vectors of equal length.
  std::vector<std::vector<Eigen::Vector3i>> cand(d);
  for (int i = 0; i < d; ++i) {
    int bound = static_cast<int>(std::ceil(inv * std::sqrt(gram(i, i)) + 1e-9));
    Eigen::Vector3i lam;
    for (lam[0] = -bound; lam[0] <= bound; ++lam[0])
      for (lam[1] = -bound; lam[1] <= bound; ++lam[1])
        for (lam[2] = (d == 3 ? -bound : 0); lam[2] <= (d == 3 ? bound : 0); ++lam[2]) {
          Vec3 v = B * lam.cast<double>();
          if (std::abs(v.squaredNorm() - gram(i, i)) <= tol) cand[i].push_back(lam);
        }
  }

  SymmetryGroup G;
  G.dim = d;
  G.includesReflections = reflections;
  IMat M = IMat::Identity();
  auto accept = [&] {
    Mat3 Md = M.cast<double>();
    Mat3 g2 = Md.transpose() * gram * Md;
    if ((g2 - gram).cwiseAbs().maxCoeff() > tol) return;
    int det = static_cast<int>(std::lround(Md.determinant()));
    if (!reflections && det != 1) return;
    G.elements.push_back(M);
  };
  for (auto& c0 : cand[0])
    for (auto& c1 : cand[1]) {
      M.col(0) = c0;
      M.col(1) = c1;
      if (d == 2) {
        M.col(2) = Eigen::Vector3i(0, 0, 1);
        accept();
      } else {
        for (auto& c2 : cand[2]) {
          M.col(2) = c2;
          accept();
        }
      }
    }
  return G;
}

bool isClosedGroup(const SymmetryGroup& G) {
  auto has = [&](const IMat& X) {
    return std::any_of(G.elements.begin(), G.elements.end(), [&](const IMat& Y) { return X == Y; });
  };
  if (!has(IMat::Identity())) return false;
  for (auto& A : G.elements) {
    for (auto& B : G.elements)
      if (!has(A * B)) return false;
    IMat inv = A.cast<double>().inverse().array().round().cast<int>().matrix();
    if (!(inv * A == IMat::Identity()) || !has(inv)) return false;
  }
  return true;
}

Mat3 worldMatrix(const Lattice& L, const IMat& M) {
  return L.basis * M.cast<double>() * L.basis.inverse();
}

Mat3 eulerRotation(double ax, double ay, double az) {
  using Eigen::AngleAxisd;
  return (AngleAxisd(az, Vec3::UnitZ()) * AngleAxisd(ay, Vec3::UnitY()) *
          AngleAxisd(ax, Vec3::UnitX()))
      .toRotationMatrix();
}

Mat3 rotation2d(double angle) {
  Mat3 R = Mat3::Identity();
  R(0, 0) = std::cos(angle);
  R(0, 1) = -std::sin(angle);
  R(1, 0) = std::sin(angle);
  R(1, 1) = std::cos(angle);
  return R;
}

}  // namespace vv
