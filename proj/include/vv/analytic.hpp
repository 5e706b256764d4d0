#pragma once

/// Exact expectations and asymptotic means of local estimators.

#include "vv/configs.hpp"
#include "vv/shapes.hpp"
#include "vv/weights.hpp"

#include <string>
#include <utility>
#include <vector>

namespace vv {

/// Configurations cut out by a single halfspace with outer normal u: the
/// window points sorted by ⟨p,u⟩ and split at each gap. Points with equal
/// projections (within tol) move together.
struct ThresholdConfig {
  std::uint32_t mask = 0;  ///< B, the lower part
  double width = 0;        ///< (−h(B ⊕ W̌, u))⁺ = min_W⟨w,u⟩ − max_B⟨b,u⟩
  double low = 0, high = 0;  ///< max_B⟨b,u⟩ and min_W⟨w,u⟩
  int beta = -1, omega = -1;  ///< unique argmax over B / argmin over W, −1 on ties
};
struct ThresholdSplit {
  std::vector<ThresholdConfig> partial;
  double top = 0;   ///< h(C,u), max over all window points
  bool tie = false;  ///< some pair of points projects equally
};
ThresholdSplit thresholdConfigs(const std::vector<Vec3>& pts, const Vec3& u, double tol = 1e-12);

/// (−h(B_l ⊕ W̌_l, u))⁺ for an arbitrary configuration.
double hitWidth(std::uint32_t l, const std::vector<Vec3>& pts, const Vec3& u);

struct LimitReport {
  double value = 0;
  std::vector<std::pair<std::string, double>> terms;  ///< value = Σ terms
  std::vector<std::pair<std::string, double>> coefficients;
  double quadratureError = 0;

  double term(const std::string& name) const;
};

// ---------------------------------------------------------------- polygons

struct RegionEntry {
  double total = 0, interior = 0, edge = 0, corner = 0, other = 0;
};

/// H²{x : configuration at anchor x is m}, split by how many halfspaces
/// cut the window (0 interior, 1 edge strip, 2 corner wedge, more: other).
struct RegionVolumeTable {
  int n = 2;
  double a = 0, aMax = 0, det = 1;
  std::vector<RegionEntry> regions;
  std::vector<std::size_t> tieNormals;  ///< polygon edges whose normal has projection ties

  /// a^{−2} det^{−1} area_m.
  std::vector<double> expectedCounts() const;
  /// Area of anchors whose window meets both P and its complement.
  double bandArea() const;
};

/// Conservative resolution bound under which only adjacent edges interact:
/// feature / (4·max|p|·max(1, csc θ_min)), feature = min(edge length,
/// vertex to non-adjacent edge distance), p over window points.
double polygonValidityThreshold(const HalfspacePolytope& P, int n, const Lattice& L);

struct PolygonOptions {
  bool allowAnyA = false;  ///< skip the a < a_max check (region path is exact for all a)
};

/// Exact region areas by clipping P's anchor box with each halfspace's
/// threshold strips.
RegionVolumeTable polygonRegionVolumes(const HalfspacePolytope& P, int n, const Lattice& L, double a,
                                       const PolygonOptions& opt = {});
std::vector<double> polygonExpectedCounts(const HalfspacePolytope& P, int n, const Lattice& L, double a,
                                          const PolygonOptions& opt = {});

/// a^q Σ w_m E N_m.
double expectedEstimate(const std::vector<double>& expectedCounts, const WeightTable& T, double a);

/// Closed-form edge/corner evaluation of E V̂ for a homogeneous table:
/// interior term, edge strips with cot/csc corrections, and corner pairs
/// weighted by w(B_l ∩ B_k). Requires a < a_max.
LimitReport polygonExpectedEstimate(const HalfspacePolytope& P, const WeightTable& T, const Lattice& L,
                                    double a);
/// The same for q = 0 tables.
double polygonExpectedEuler(const HalfspacePolytope& P, const WeightTable& T, const Lattice& L, double a);

/// lim_{a→0} E V̂_0 on P(φ, ψ, s1, s2) for a q = 0 table. Reports α for
/// F1 = cos φ cos(φ+ψ)/sin ψ, F2 = sin φ sin(φ+ψ)/sin ψ,
/// F3 = sin(2φ+ψ)/sin ψ, plus the constant α0 of asymmetric tables.
LimitReport parallelogramLimit(const WeightTable& T, double phi, double psi, const Lattice& L,
                               double s1 = 1, double s2 = 1);

// ------------------------------------------------------- asymptotic means

/// det^{−1} Σ_facets H^{d−1}(F_i) Σ_l w_l (−h(B_l ⊕ W̌_l, u_i))⁺.
LimitReport surfaceAreaLimitPolytope(const HalfspacePolytope& P, const WeightTable& T, const Lattice& L);

/// det^{−1} Σ_l w_l ∫_{∂X} (−h(B_l ⊕ W̌_l, n))⁺ dH^{d−1}.
LimitReport surfaceAreaLimitRegular(const Shape& S, const WeightTable& T, const Lattice& L);

/// Mean-curvature limit on X(R, r, θ): I1 (cap) + I3 (tube) from F1, F2;
/// the flat disk contributes nothing.
LimitReport meanCurvatureLimitRevolution(const RevolutionBody& X, const WeightTable& T, const Lattice& L);

/// The same second-order formula on any supported smooth shape by patch
/// quadrature (used for balls and as a cross-check).
LimitReport meanCurvatureLimitRegular(const Shape& S, const WeightTable& T, const Lattice& L);

struct MustholdPoint {
  double theta, lhs, rhs, residual, errorBound;
};
/// lhs(θ) = ∫_θ^π (F1+F2) sin φ dφ + sin θ ∫_0^θ F1 dφ against
/// rhs(θ) = 2(1 + cos θ) + θ sin θ.
std::vector<MustholdPoint> mustholdResidual(const WeightTable& T, const Lattice& L,
                                            const std::vector<double>& thetaGrid);

/// F1(φ), F2(φ) as used above (meridian and parallel direction).
std::pair<double, double> revolutionF(const WeightTable& T, const Lattice& L, double phi);

// ------------------------------------------------------------ MC oracle

struct RegionSpec {
  int dim = 2;
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
  std::function<bool(const Vec3&)> inside;
};

struct McResult {
  double estimate = 0, stderr_ = 0;
};
McResult mcRegionVolume(const RegionSpec& spec, std::uint64_t samples, std::uint64_t seed);

/// Anchors x whose window x + a·p_j shows configuration m on S.
RegionSpec hitOrMissRegion(const Shape& S, const Lattice& L, double a, int n, std::uint32_t m);
/// Anchors whose window meets S and its complement.
RegionSpec boundaryBandRegion(const Shape& S, const Lattice& L, double a, int n);

/// Table with weight w on every configuration extending the pattern
/// (B ⊆ foreground, W ⊆ background), as window pixel indices.
WeightTable patternTable(int n, int dim, int q, const std::vector<int>& B, const std::vector<int>& W,
                         const Rational& w = 1);

}  // namespace vv
