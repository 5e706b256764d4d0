#pragma once

/// Test shapes: membership, support data, polygon geometry, boundary
/// parametrizations and exact intrinsic volumes.

#include "vv/core.hpp"
#include "vv/lattice.hpp"
#include "vv/quadrature.hpp"

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vv {

/// ∩ {x : ⟨x,u_i⟩ ≤ t_i}. In d = 2 the halfspaces are reordered so that
/// edge i runs from vertices[i] to vertices[i+1] counterclockwise.
struct HalfspacePolytope {
  int dim = 2;
  std::vector<Vec3> normals;
  std::vector<double> offsets;
  std::vector<Vec3> vertices;
  std::vector<double> facetMeasures;  ///< edge lengths (d=2) or facet areas (d=3)

  static HalfspacePolytope fromHalfspaces(int dim, std::vector<Vec3> normals,
                                          std::vector<double> offsets);
  /// Convex polygon from its vertices in counterclockwise order.
  static HalfspacePolytope fromVertices(const std::vector<Vec3>& ccw);

  std::size_t size() const { return normals.size(); }
  /// Interior angle at vertices[i] (d = 2).
  double interiorAngle(std::size_t i) const;
  double area() const;
};

struct Parallelogram2D {
  double phi = 0, psi = kPi / 2, s1 = 1, s2 = 1;
  Vec3 anchor = Vec3::Zero();

  Vec3 v1() const { return {std::cos(phi), std::sin(phi), 0}; }
  Vec3 v2() const { return {std::cos(phi + psi), std::sin(phi + psi), 0}; }
  HalfspacePolytope toPolytope() const;
};

/// U·(⊕[0, t_i e_i]) + anchor.
struct Box {
  int dim = 2;
  Mat3 rotation = Mat3::Identity();
  Vec3 sides = Vec3::Ones();
  Vec3 anchor = Vec3::Zero();

  HalfspacePolytope toPolytope() const;
};

struct Ball {
  int dim = 2;
  Vec3 center = Vec3::Zero();
  double radius = 1;
};

/// P ⊕ B(r), d = 2.
struct RoundedPolytope {
  HalfspacePolytope P;
  double r = 0.1;
};

/// Spherical cap of B(R) below height R cos θ, glued to a rounded disk of
/// tube radius r. 0 < r ≤ R, θ ∈ (0,π), d = 3.
struct RevolutionBody {
  double R = 1, r = 0.3, theta = kPi / 3;
  Vec3 center = Vec3::Zero();

  double diskRadius() const { return (R - r) * std::sin(theta); }
  double diskHeight() const { return (R - r) * std::cos(theta); }
  double topHeight() const { return diskHeight() + r; }
};

struct EmptyShape {
  int dim = 2;
};

using Shape = std::variant<EmptyShape, HalfspacePolytope, Box, Ball, RoundedPolytope, RevolutionBody>;

int shapeDim(const Shape& S);
std::string shapeKind(const Shape& S);
bool contains(const Shape& S, const Vec3& x);

struct BoundingBox {
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
  bool empty = true;
};
BoundingBox boundingBox(const Shape& S);

/// A ball containing S (used to clip digitization rows).
struct BoundingSphere {
  Vec3 center = Vec3::Zero();
  double radius = -1;
};
BoundingSphere boundingSphere(const Shape& S);

/// max ⟨p,u⟩; −∞ for an empty set.
double support(const std::vector<Vec3>& pts, const Vec3& u);

struct Argmax {
  bool tie = false;
  int index = -1;
};
/// Unique maximizer of ⟨p,u⟩ unless the top two values are within tol.
Argmax supportArgmax(const std::vector<Vec3>& pts, const Vec3& u, double tol);
/// Default tie tolerance, 1e-12 times the point-set diameter.
double defaultTieTol(const std::vector<Vec3>& pts);

/// Directions z/|z| for lattice vectors z = Bλ, λ ∈ {−n..n}² \ {0},
/// deduplicated and sorted by angle in [0, 2π).
std::vector<Vec3> dSet(const Lattice& L, int n);
std::vector<double> dSetAngles(const Lattice& L, int n);

/// Indices of polygon vertices whose closed tangent cone contains no
/// direction of dSet(L, n).
std::vector<std::size_t> nCriticalVertices(const HalfspacePolytope& P, int n, const Lattice& L);

/// Boundary-point test for polygons: only vertices can be critical, since
/// the tangent cone at an edge point is a half-plane and D is symmetric.
bool isNCriticalBoundaryPoint(const HalfspacePolytope& P, const Vec3& x, int n, const Lattice& L,
                              double tol = 1e-12);

/// Local differential data at a boundary point. Principal direction 0 is
/// the parallel (circle) direction, the last one the meridian direction.
struct SurfacePoint {
  Vec3 x = Vec3::Zero();
  Vec3 normal = Vec3::Zero();
  std::array<Vec3, 2> dirs{Vec3::Zero(), Vec3::Zero()};
  std::array<double, 2> curvatures{0, 0};
  double jacobian = 0;  ///< area element w.r.t. the patch parameters
};

struct Patch {
  /// How the normal depends on the parameters: fixed; (cos u, sin u) in
  /// d = 2; sin v·(cos u, sin u, 0) + cos v·e3 in d = 3.
  enum class Normal { Constant, Angle, Spherical };

  std::string name;
  int paramDim = 1;
  Normal normal = Normal::Constant;
  std::array<double, 2> lo{0, 0}, hi{0, 0};
  std::function<SurfacePoint(double, double)> eval;
};

std::vector<Patch> boundaryAtlas(const Shape& S);

/// ∫ g(point) dH over one patch by nested adaptive quadrature.
QuadResult integratePatch(const Patch& p, const std::function<double(const SurfacePoint&)>& g,
                          double relTol = 1e-10);

/// (V_0, …, V_d). RevolutionBody V_1 is evaluated by quadrature.
std::vector<double> intrinsicVolumes(const Shape& S);

/// Closed-form V_1 of X(R, r, θ).
double revolutionV1Closed(const RevolutionBody& X);

/// Shape from key–value settings; see README for the schema.
Shape shapeFromConfig(const std::map<std::string, std::string>& kv);

}  // namespace vv
