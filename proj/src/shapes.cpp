#include "vv/shapes.hpp"

#include "vv/keyvalue.hpp"

#include <cmath>
#include <numeric>

namespace vv {

namespace {

constexpr double kGeomTol = 1e-10;
constexpr double kBig = 1e7;

double angleOf(const Vec3& v) {
  double a = std::atan2(v[1], v[0]);
  return a < 0 ? a + 2 * kPi : a;
}

double cross2(const Vec3& a, const Vec3& b) { return a[0] * b[1] - a[1] * b[0]; }

// Vertices of ∩ H⁻ by solving every d-subset, keeping feasible points.
// A large box is added so that unbounded inputs show up as vertices on it.
std::vector<Vec3> enumerateVertices(int d, const std::vector<Vec3>& U, const std::vector<double>& T) {
  std::vector<Vec3> nu = U;
  std::vector<double> nt = T;
  for (int i = 0; i < d; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = 1;
    nu.push_back(e);
    nt.push_back(kBig);
    nu.push_back(-e);
    nt.push_back(kBig);
  }
  std::vector<Vec3> out;
  auto feasible = [&](const Vec3& x) {
    for (std::size_t k = 0; k < nu.size(); ++k)
      if (x.dot(nu[k]) > nt[k] + kGeomTol * (1 + std::abs(nt[k]))) return false;
    return true;
  };
  auto addUnique = [&](const Vec3& x) {
    for (auto& y : out)
      if ((x - y).norm() < 1e-9 * (1 + x.norm())) return;
    out.push_back(x);
  };
  const std::size_t m = nu.size();
  if (d == 2) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        Eigen::Matrix2d A;
        A << nu[i][0], nu[i][1], nu[j][0], nu[j][1];
        if (std::abs(A.determinant()) < 1e-12) continue;
        Eigen::Vector2d x = A.inverse() * Eigen::Vector2d(nt[i], nt[j]);
        Vec3 p(x[0], x[1], 0);
        if (feasible(p)) addUnique(p);
      }
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) {
          Mat3 A;
          A.row(0) = nu[i];
          A.row(1) = nu[j];
          A.row(2) = nu[k];
          if (std::abs(A.determinant()) < 1e-12) continue;
          Vec3 p = A.inverse() * Vec3(nt[i], nt[j], nt[k]);
          if (feasible(p)) addUnique(p);
        }
  }
  for (auto& p : out)
    if (p.cwiseAbs().maxCoeff() > 0.5 * kBig) throw Error("halfspace intersection is unbounded");
  return out;
}

double segmentDist2(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).squaredNorm();
}

// Area of a planar convex point set on a facet with unit normal u.
double facetArea(std::vector<Vec3> pts, const Vec3& u) {
  if (pts.size() < 3) return 0;
  Vec3 c = Vec3::Zero();
  for (auto& p : pts) c += p;
  c /= double(pts.size());
  Vec3 e1 = (pts[0] - c).normalized();
  Vec3 e2 = u.cross(e1);
  std::sort(pts.begin(), pts.end(), [&](const Vec3& a, const Vec3& b) {
    return std::atan2((a - c).dot(e2), (a - c).dot(e1)) < std::atan2((b - c).dot(e2), (b - c).dot(e1));
  });
  double s = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    s += (pts[i] - c).cross(pts[(i + 1) % pts.size()] - c).dot(u);
  return 0.5 * s;
}

}  // namespace

HalfspacePolytope HalfspacePolytope::fromHalfspaces(int dim, std::vector<Vec3> normals,
                                                    std::vector<double> offsets) {
  if (dim != 2 && dim != 3) throw Error("polytope dimension must be 2 or 3");
  if (normals.size() != offsets.size()) throw Error("normals and offsets differ in length");
  if (normals.size() < std::size_t(dim + 1)) throw Error("too few halfspaces for a bounded polytope");
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (dim == 2) normals[i][2] = 0;
    double len = normals[i].norm();
    if (!(len > 0)) throw Error("zero normal vector");
    normals[i] /= len;
    offsets[i] /= len;
  }
  for (std::size_t i = 0; i < normals.size(); ++i)
    for (std::size_t j = i + 1; j < normals.size(); ++j)
      if (normals[i].cross(normals[j]).norm() < 1e-9 && normals[i].dot(normals[j]) > 0)
        throw Error("near-parallel halfspaces (degenerate representation)");

  HalfspacePolytope P;
  P.dim = dim;
  std::vector<Vec3> verts = enumerateVertices(dim, normals, offsets);

  if (dim == 2) {
    std::vector<std::size_t> order(normals.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return angleOf(normals[a]) < angleOf(normals[b]); });
    for (auto k : order) {
      P.normals.push_back(normals[k]);
      P.offsets.push_back(offsets[k]);
    }
    const std::size_t N = P.normals.size();
    for (std::size_t i = 0; i < N; ++i) {
      const Vec3 &u0 = P.normals[(i + N - 1) % N], &u1 = P.normals[i];
      Eigen::Matrix2d A;
      A << u0[0], u0[1], u1[0], u1[1];
      if (cross2(u0, u1) <= 1e-12) throw Error("halfspace intersection is unbounded or degenerate");
      Eigen::Vector2d x = A.inverse() * Eigen::Vector2d(P.offsets[(i + N - 1) % N], P.offsets[i]);
      P.vertices.emplace_back(x[0], x[1], 0);
    }
    for (std::size_t i = 0; i < N; ++i) {
      const Vec3 &a = P.vertices[i], &b = P.vertices[(i + 1) % N];
      double len = (b - a).norm();
      // A redundant halfspace shows up as a reversed or null edge.
      if ((b - a).dot(Vec3(-P.normals[i][1], P.normals[i][0], 0)) <= 1e-12 || len < 1e-12)
        throw Error("halfspace " + std::to_string(i) + " is not facet-defining");
      P.facetMeasures.push_back(len);
    }
    for (auto& v : P.vertices)
      for (std::size_t k = 0; k < N; ++k)
        if (v.dot(P.normals[k]) > P.offsets[k] + kGeomTol * (1 + std::abs(P.offsets[k])))
          throw Error("halfspace " + std::to_string(k) + " cuts off a vertex (not a convex CCW system)");
  } else {
    P.normals = normals;
    P.offsets = offsets;
    P.vertices = verts;
    for (std::size_t i = 0; i < normals.size(); ++i) {
      std::vector<Vec3> on;
      for (auto& v : verts)
        if (std::abs(v.dot(normals[i]) - offsets[i]) <= 1e-9 * (1 + std::abs(offsets[i]))) on.push_back(v);
      double A = facetArea(on, normals[i]);
      if (!(A > 1e-12)) throw Error("halfspace " + std::to_string(i) + " is not facet-defining");
      P.facetMeasures.push_back(A);
    }
  }
  return P;
}

HalfspacePolytope HalfspacePolytope::fromVertices(const std::vector<Vec3>& ccw) {
  const std::size_t N = ccw.size();
  if (N < 3) throw Error("polygon needs at least 3 vertices");
  std::vector<Vec3> U;
  std::vector<double> T;
  for (std::size_t i = 0; i < N; ++i) {
    Vec3 e = ccw[(i + 1) % N] - ccw[i];
    e[2] = 0;
    if (cross2(e, ccw[(i + 2) % N] - ccw[(i + 1) % N]) <= 0)
      throw Error("vertices are not strictly convex and counterclockwise");
    Vec3 u(e[1], -e[0], 0);
    u.normalize();
    U.push_back(u);
    T.push_back(u.dot(ccw[i]));
  }
  return fromHalfspaces(2, U, T);
}

double HalfspacePolytope::interiorAngle(std::size_t i) const {
  const std::size_t N = normals.size();
  const Vec3 &u0 = normals[(i + N - 1) % N], &u1 = normals[i];
  return kPi - std::atan2(cross2(u0, u1), u0.dot(u1));
}

double HalfspacePolytope::area() const {
  if (dim != 2) throw Error("area() is for polygons");
  double s = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    s += cross2(vertices[i], vertices[(i + 1) % vertices.size()]);
  return 0.5 * s;
}

HalfspacePolytope Parallelogram2D::toPolytope() const {
  if (!(psi > 0 && psi < kPi) || !(s1 > 0) || !(s2 > 0)) throw Error("invalid parallelogram parameters");
  Vec3 a = anchor, b = anchor + s1 * v1(), c = b + s2 * v2(), d = anchor + s2 * v2();
  return HalfspacePolytope::fromVertices({a, b, c, d});
}

HalfspacePolytope Box::toPolytope() const {
  std::vector<Vec3> U;
  std::vector<double> T;
  for (int i = 0; i < dim; ++i) {
    Vec3 u = rotation.col(i);
    U.push_back(u);
    T.push_back(u.dot(anchor) + sides[i]);
    U.push_back(-u);
    T.push_back(-u.dot(anchor));
  }
  return HalfspacePolytope::fromHalfspaces(dim, U, T);
}

int shapeDim(const Shape& S) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RoundedPolytope>) return s.P.dim;
        else if constexpr (std::is_same_v<T, RevolutionBody>) return 3;
        else return s.dim;
      },
      S);
}

std::string shapeKind(const Shape& S) {
  static const char* names[] = {"empty", "polytope", "box", "ball", "rounded_polygon", "revolution"};
  return names[S.index()];
}

bool contains(const Shape& S, const Vec3& x) {
  struct V {
    const Vec3& x;
    bool operator()(const EmptyShape&) const { return false; }
    bool operator()(const HalfspacePolytope& P) const {
      for (std::size_t i = 0; i < P.normals.size(); ++i)
        if (x.dot(P.normals[i]) > P.offsets[i]) return false;
      return true;
    }
    bool operator()(const Box& B) const {
      Vec3 y = B.rotation.transpose() * (x - B.anchor);
      for (int i = 0; i < B.dim; ++i)
        if (y[i] < 0 || y[i] > B.sides[i]) return false;
      return true;
    }
    bool operator()(const Ball& B) const { return (x - B.center).squaredNorm() <= B.radius * B.radius; }
    bool operator()(const RoundedPolytope& R) const {
      if ((*this)(R.P)) return true;
      const auto& v = R.P.vertices;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (segmentDist2(x, v[i], v[(i + 1) % v.size()]) <= R.r * R.r) return true;
      return false;
    }
    bool operator()(const RevolutionBody& X) const {
      Vec3 y = x - X.center;
      if (y.squaredNorm() <= X.R * X.R && y[2] <= X.R * std::cos(X.theta)) return true;
      double rho = std::hypot(y[0], y[1]);
      double dr = std::max(rho - X.diskRadius(), 0.0), dz = y[2] - X.diskHeight();
      return dr * dr + dz * dz <= X.r * X.r;
    }
  };
  return std::visit(V{x}, S);
}

BoundingBox boundingBox(const Shape& S) {
  BoundingBox b;
  auto fromPts = [&](const std::vector<Vec3>& pts, double pad) {
    b.empty = false;
    b.lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    b.hi = -b.lo;
    for (auto& p : pts) {
      b.lo = b.lo.cwiseMin(p);
      b.hi = b.hi.cwiseMax(p);
    }
    b.lo.array() -= pad;
    b.hi.array() += pad;
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HalfspacePolytope>) fromPts(s.vertices, 0);
        else if constexpr (std::is_same_v<T, Box>) fromPts(s.toPolytope().vertices, 0);
        else if constexpr (std::is_same_v<T, Ball>) fromPts({s.center}, s.radius);
        else if constexpr (std::is_same_v<T, RoundedPolytope>) fromPts(s.P.vertices, s.r);
        else if constexpr (std::is_same_v<T, RevolutionBody>) {
          b.empty = false;
          b.lo = s.center + Vec3(-s.R, -s.R, -s.R);
          b.hi = s.center + Vec3(s.R, s.R, s.topHeight());
        }
      },
      S);
  if (!b.empty && shapeDim(S) == 2) b.lo[2] = b.hi[2] = 0;
  return b;
}

BoundingSphere boundingSphere(const Shape& S) {
  BoundingSphere s;
  auto fromPts = [&](const std::vector<Vec3>& pts, double pad) {
    Vec3 lo = pts[0], hi = pts[0];
    for (auto& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    s.center = 0.5 * (lo + hi);
    s.radius = 0;
    for (auto& p : pts) s.radius = std::max(s.radius, (p - s.center).norm());
    s.radius += pad;
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, HalfspacePolytope>) fromPts(x.vertices, 0);
        else if constexpr (std::is_same_v<T, Box>) fromPts(x.toPolytope().vertices, 0);
        else if constexpr (std::is_same_v<T, Ball>) s = {x.center, x.radius};
        else if constexpr (std::is_same_v<T, RoundedPolytope>) fromPts(x.P.vertices, x.r);
        else if constexpr (std::is_same_v<T, RevolutionBody>) s = {x.center, x.R};
      },
      S);
  return s;
}

double support(const std::vector<Vec3>& pts, const Vec3& u) {
  double m = -std::numeric_limits<double>::infinity();
  for (auto& p : pts) m = std::max(m, p.dot(u));
  return m;
}

double defaultTieTol(const std::vector<Vec3>& pts) {
  double diam = 0;
  for (auto& p : pts)
    for (auto& q : pts) diam = std::max(diam, (p - q).norm());
  return 1e-12 * std::max(diam, 1.0);
}

Argmax supportArgmax(const std::vector<Vec3>& pts, const Vec3& u, double tol) {
  if (pts.empty()) throw Error("supportArgmax of an empty set");
  double best = -std::numeric_limits<double>::infinity(), second = best;
  int idx = -1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double v = pts[i].dot(u);
    if (v > best) {
      second = best;
      best = v;
      idx = int(i);
    } else if (v > second) {
      second = v;
    }
  }
  if (pts.size() > 1 && best - second <= tol) return {true, -1};
  return {false, idx};
}

std::vector<double> dSetAngles(const Lattice& L, int n) {
  if (L.dim != 2) throw Error("dSet is defined for d = 2");
  if (n < 1) throw Error("window size must be positive");
  std::vector<double> ang;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j)
      if (i || j) ang.push_back(angleOf(L.vec(Vec3(i, j, 0))));
  std::sort(ang.begin(), ang.end());
  std::vector<double> out;
  for (double a : ang)
    if (out.empty() || a - out.back() > 1e-12) out.push_back(a);
  if (out.size() > 1 && out.front() + 2 * kPi - out.back() <= 1e-12) out.pop_back();
  return out;
}

std::vector<Vec3> dSet(const Lattice& L, int n) {
  std::vector<Vec3> out;
  for (double a : dSetAngles(L, n)) out.emplace_back(std::cos(a), std::sin(a), 0);
  return out;
}

namespace {

bool coneHitsD(double start, double opening, const std::vector<double>& D, double tol) {
  for (double a : D) {
    double rel = std::fmod(a - start + 4 * kPi, 2 * kPi);
    if (rel <= opening + tol || rel >= 2 * kPi - tol) return true;
  }
  return false;
}

}  // namespace

std::vector<std::size_t> nCriticalVertices(const HalfspacePolytope& P, int n, const Lattice& L) {
  if (P.dim != 2) throw Error("n-critical vertices are defined for polygons");
  auto D = dSetAngles(L, n);
  std::vector<std::size_t> out;
  const std::size_t N = P.vertices.size();
  for (std::size_t i = 0; i < N; ++i) {
    double start = angleOf(P.vertices[(i + 1) % N] - P.vertices[i]);
    if (!coneHitsD(start, P.interiorAngle(i), D, 1e-12)) out.push_back(i);
  }
  return out;
}

bool isNCriticalBoundaryPoint(const HalfspacePolytope& P, const Vec3& x, int n, const Lattice& L,
                              double tol) {
  for (std::size_t i = 0; i < P.vertices.size(); ++i)
    if ((P.vertices[i] - x).norm() <= tol * (1 + x.norm())) {
      auto crit = nCriticalVertices(P, n, L);
      return std::find(crit.begin(), crit.end(), i) != crit.end();
    }
  return false;
}

std::vector<Patch> boundaryAtlas(const Shape& S) {
  std::vector<Patch> out;
  auto sphereLike = [](Vec3 c, double R, double phiLo, double phiHi, const char* name) {
    Patch p;
    p.name = name;
    p.paramDim = 2;
    p.normal = Patch::Normal::Spherical;
    p.lo = {0, phiLo};
    p.hi = {2 * kPi, phiHi};
    p.eval = [c, R](double t, double phi) {
      SurfacePoint s;
      Vec3 u(std::cos(t), std::sin(t), 0);
      s.normal = std::sin(phi) * u + std::cos(phi) * Vec3::UnitZ();
      s.x = c + R * s.normal;
      s.dirs = {Vec3(-std::sin(t), std::cos(t), 0), -std::cos(phi) * u + std::sin(phi) * Vec3::UnitZ()};
      s.curvatures = {1 / R, 1 / R};
      s.jacobian = R * R * std::sin(phi);
      return s;
    };
    return p;
  };
  auto arc = [](Vec3 c, double R, double t0, double t1, std::string name) {
    Patch p;
    p.name = std::move(name);
    p.paramDim = 1;
    p.normal = Patch::Normal::Angle;
    p.lo = {t0, 0};
    p.hi = {t1, 0};
    p.eval = [c, R](double t, double) {
      SurfacePoint s;
      s.normal = Vec3(std::cos(t), std::sin(t), 0);
      s.x = c + R * s.normal;
      s.dirs[0] = Vec3(-std::sin(t), std::cos(t), 0);
      s.curvatures[0] = 1 / R;
      s.jacobian = R;
      return s;
    };
    return p;
  };

  if (auto* b = std::get_if<Ball>(&S)) {
    if (b->dim == 2) out.push_back(arc(b->center, b->radius, 0, 2 * kPi, "circle"));
    else out.push_back(sphereLike(b->center, b->radius, 0, kPi, "sphere"));
  } else if (auto* rp = std::get_if<RoundedPolytope>(&S)) {
    const auto& P = rp->P;
    if (P.dim != 2) throw Error("boundaryAtlas supports rounded polygons only in d = 2");
    const std::size_t N = P.vertices.size();
    for (std::size_t i = 0; i < N; ++i) {
      // Arc at vertex i between the normals of edges i−1 and i.
      double t0 = angleOf(P.normals[(i + N - 1) % N]);
      double t1 = t0 + (kPi - P.interiorAngle(i));
      out.push_back(arc(P.vertices[i], rp->r, t0, t1, "arc" + std::to_string(i)));
      Patch seg;
      seg.name = "segment" + std::to_string(i);
      seg.paramDim = 1;
      seg.lo = {0, 0};
      seg.hi = {P.facetMeasures[i], 0};
      Vec3 a = P.vertices[i] + rp->r * P.normals[i];
      Vec3 dir = (P.vertices[(i + 1) % N] - P.vertices[i]).normalized();
      Vec3 u = P.normals[i];
      seg.eval = [a, dir, u](double s, double) {
        SurfacePoint p;
        p.x = a + s * dir;
        p.normal = u;
        p.dirs[0] = dir;
        p.jacobian = 1;
        return p;
      };
      out.push_back(seg);
    }
  } else if (auto* X = std::get_if<RevolutionBody>(&S)) {
    const double R = X->R, r = X->r, th = X->theta;
    if (!(r > 0 && r <= R && th > 0 && th < kPi)) throw Error("invalid revolution body parameters");
    const Vec3 c = X->center;
    out.push_back(sphereLike(c, R, th, kPi, "S1"));
    Patch tube;
    tube.name = "S2";
    tube.paramDim = 2;
    tube.normal = Patch::Normal::Spherical;
    tube.lo = {0, 0};
    tube.hi = {2 * kPi, th};
    tube.eval = [c, R, r, th](double t, double phi) {
      SurfacePoint s;
      Vec3 u(std::cos(t), std::sin(t), 0);
      double rho = (R - r) * std::sin(th) + r * std::sin(phi);
      s.x = c + rho * u + ((R - r) * std::cos(th) + r * std::cos(phi)) * Vec3::UnitZ();
      s.normal = std::sin(phi) * u + std::cos(phi) * Vec3::UnitZ();
      s.dirs = {Vec3(-std::sin(t), std::cos(t), 0), -std::cos(phi) * u + std::sin(phi) * Vec3::UnitZ()};
      s.curvatures = {std::sin(phi) / rho, 1 / r};
      s.jacobian = r * rho;
      return s;
    };
    out.push_back(tube);
    Patch disk;
    disk.name = "S3";
    disk.paramDim = 2;
    disk.lo = {0, 0};
    disk.hi = {2 * kPi, X->diskRadius()};
    double top = X->topHeight();
    disk.eval = [c, top](double t, double s) {
      SurfacePoint p;
      Vec3 u(std::cos(t), std::sin(t), 0);
      p.x = c + s * u + top * Vec3::UnitZ();
      p.normal = Vec3::UnitZ();
      p.dirs = {Vec3(-std::sin(t), std::cos(t), 0), u};
      p.jacobian = s;
      return p;
    };
    out.push_back(disk);
  } else {
    throw Error("boundaryAtlas does not support shape kind '" + shapeKind(S) + "'");
  }
  return out;
}

QuadResult integratePatch(const Patch& p, const std::function<double(const SurfacePoint&)>& g,
                          double relTol) {
  if (p.paramDim == 1) {
    return integrate([&](double t) {
      SurfacePoint s = p.eval(t, 0);
      return g(s) * s.jacobian;
    }, p.lo[0], p.hi[0], relTol, 1e-14);
  }
  double inner = 0;
  auto outer = [&](double v) {
    QuadResult r = integrate([&](double t) {
      SurfacePoint s = p.eval(t, v);
      return g(s) * s.jacobian;
    }, p.lo[0], p.hi[0], relTol, 1e-14);
    inner += r.error;
    return r.value;
  };
  QuadResult r = integrate(outer, p.lo[1], p.hi[1], relTol, 1e-14);
  r.error += inner;
  return r;
}

double revolutionV1Closed(const RevolutionBody& X) {
  double R = X.R, r = X.r, th = X.theta;
  return 2 * R * (1 + std::cos(th)) + (R - r) * th * std::sin(th) + 2 * r * (1 - std::cos(th));
}

std::vector<double> intrinsicVolumes(const Shape& S) {
  return std::visit(
      [&](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EmptyShape>) {
          return std::vector<double>(s.dim + 1, 0.0);
        } else if constexpr (std::is_same_v<T, HalfspacePolytope>) {
          if (s.dim == 2) {
            double per = std::accumulate(s.facetMeasures.begin(), s.facetMeasures.end(), 0.0);
            return {1, per / 2, s.area()};
          }
          double surf = 0, vol = 0, v1 = 0;
          for (std::size_t i = 0; i < s.size(); ++i) {
            surf += s.facetMeasures[i];
            vol += s.facetMeasures[i] * s.offsets[i] / 3;
          }
          // Edges: facet pairs sharing exactly two vertices; external angle
          // is the angle between the normals over 2π.
          for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) {
              std::vector<Vec3> shared;
              for (auto& v : s.vertices)
                if (std::abs(v.dot(s.normals[i]) - s.offsets[i]) <= 1e-9 * (1 + std::abs(s.offsets[i])) &&
                    std::abs(v.dot(s.normals[j]) - s.offsets[j]) <= 1e-9 * (1 + std::abs(s.offsets[j])))
                  shared.push_back(v);
              if (shared.size() == 2) {
                double ang = std::acos(std::clamp(s.normals[i].dot(s.normals[j]), -1.0, 1.0));
                v1 += (shared[0] - shared[1]).norm() * ang / (2 * kPi);
              }
            }
          return {1, v1, surf / 2, vol};
        } else if constexpr (std::is_same_v<T, Box>) {
          const Vec3& t = s.sides;
          if (s.dim == 2) return {1, t[0] + t[1], t[0] * t[1]};
          return {1, t.sum(), t[0] * t[1] + t[0] * t[2] + t[1] * t[2], t.prod()};
        } else if constexpr (std::is_same_v<T, Ball>) {
          double R = s.radius;
          if (s.dim == 2) return {1, kPi * R, kPi * R * R};
          return {1, 4 * R, 2 * kPi * R * R, 4.0 / 3.0 * kPi * R * R * R};
        } else if constexpr (std::is_same_v<T, RoundedPolytope>) {
          auto v = intrinsicVolumes(Shape{s.P});
          double per = 2 * v[1], r = s.r;
          return {1, v[1] + kPi * r, v[2] + per * r + kPi * r * r};
        } else {
          const double R = s.R, r = s.r, th = s.theta, A = s.diskRadius();
          double I = 0;
          for (const auto& p : boundaryAtlas(Shape{s}))
            if (p.name != "S3")
              I += integratePatch(p, [](const SurfacePoint& q) { return q.curvatures[0] + q.curvatures[1]; },
                                  1e-10).value;
          double c = std::cos(th);
          double S1 = 2 * kPi * R * R * (1 + c);
          double S2 = 2 * kPi * r * (A * th + r * (1 - c));
          double S3 = kPi * A * A;
          double hc = R * (1 - c);
          double cap = kPi * hc * hc * (3 * R - hc) / 3;
          double top = kPi * r *
                       (A * A * (1 - c) + 2 * A * r * (th / 2 - std::sin(2 * th) / 4) +
                        r * r * (2.0 / 3.0 - c + c * c * c / 3));
          return {1, I / (2 * kPi), (S1 + S2 + S3) / 2, 4.0 / 3.0 * kPi * R * R * R - cap + top};
        }
      },
      S);
}

Shape shapeFromConfig(const std::map<std::string, std::string>& kv) {
  KeyValue cfg(kv);
  std::string kind = cfg.getString("kind");
  auto placePolygon = [&](std::vector<Vec3> pts) {
    double rot = deg(cfg.getDouble("rotate_deg", 0));
    Vec3 shift = cfg.getVec("translate", Vec3::Zero());
    Mat3 R = rotation2d(rot);
    for (auto& p : pts) p = R * p + shift;
    return HalfspacePolytope::fromVertices(pts);
  };
  if (kind == "empty") return EmptyShape{int(cfg.getInt("dim", 2))};
  if (kind == "polygon") return placePolygon(cfg.getPoints("vertices"));
  if (kind == "square") {
    double s = cfg.getDouble("side", 1);
    return placePolygon({Vec3(0, 0, 0), Vec3(s, 0, 0), Vec3(s, s, 0), Vec3(0, s, 0)});
  }
  if (kind == "regular_polygon") {
    long N = cfg.getInt("sides");
    double rad = cfg.getDouble("radius", 1);
    std::vector<Vec3> pts;
    for (long k = 0; k < N; ++k)
      pts.emplace_back(rad * std::cos(2 * kPi * k / N), rad * std::sin(2 * kPi * k / N), 0);
    return placePolygon(pts);
  }
  if (kind == "halfspaces") {
    int d = int(cfg.getInt("dim", 2));
    auto U = cfg.getPoints("normals");
    auto T = cfg.getDoubles("offsets");
    return HalfspacePolytope::fromHalfspaces(d, U, T);
  }
  if (kind == "parallelogram") {
    Parallelogram2D p;
    p.phi = deg(cfg.getDouble("phi_deg"));
    p.psi = deg(cfg.getDouble("psi_deg"));
    p.s1 = cfg.getDouble("s1", 1);
    p.s2 = cfg.getDouble("s2", 1);
    p.anchor = cfg.getVec("anchor", Vec3::Zero());
    return p.toPolytope();
  }
  if (kind == "box") {
    Box b;
    b.dim = int(cfg.getInt("dim", 2));
    b.sides = cfg.getVec("sides", Vec3::Ones());
    b.anchor = cfg.getVec("anchor", Vec3::Zero());
    if (b.dim == 2) b.rotation = rotation2d(deg(cfg.getDouble("rotate_deg", 0)));
    else {
      Vec3 e = cfg.getVec("euler_deg", Vec3::Zero());
      b.rotation = eulerRotation(deg(e[0]), deg(e[1]), deg(e[2]));
    }
    return b;
  }
  if (kind == "ball" || kind == "disk") {
    Ball b;
    b.dim = int(cfg.getInt("dim", kind == "disk" ? 2 : 3));
    b.center = cfg.getVec("center", Vec3::Zero());
    b.radius = cfg.getDouble("radius", 1);
    if (!(b.radius > 0)) throw Error("ball radius must be positive");
    return b;
  }
  if (kind == "rounded_polygon") {
    RoundedPolytope rp;
    rp.P = placePolygon(cfg.getPoints("vertices"));
    rp.r = cfg.getDouble("r");
    if (!(rp.r > 0)) throw Error("rounding radius must be positive");
    return rp;
  }
  if (kind == "revolution") {
    RevolutionBody X;
    X.R = cfg.getDouble("R", 1);
    X.r = cfg.getDouble("r", 0.3);
    X.theta = cfg.has("theta_deg") ? deg(cfg.getDouble("theta_deg")) : cfg.getDouble("theta", kPi / 3);
    X.center = cfg.getVec("center", Vec3::Zero());
    if (!(X.r > 0 && X.r <= X.R && X.theta > 0 && X.theta < kPi))
      throw Error("revolution body needs 0 < r <= R and 0 < theta < pi");
    return X;
  }
  throw Error("unknown shape kind '" + kind + "'");
}

}  // namespace vv
