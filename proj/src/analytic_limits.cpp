#include "vv/analytic.hpp"
#include "vv/quadrature.hpp"

#include <cmath>
#include <map>

namespace vv {

namespace {

struct Oriented {
  int dim = 2;
  std::vector<Vec3> pts, diffs;
  std::vector<double> w;
  double det = 1;
};

Oriented prepare(const WeightTable& T, const Lattice& L) {
  if (T.dim != L.dim) throw Error("table and lattice dimensions differ");
  Oriented o;
  o.dim = T.dim;
  o.pts = makeWindow(T.n, T.dim).worldPoints(L);
  o.w = T.asDouble();
  o.det = unitCellVolume(L);
  if (o.w.back() != 0) throw Error("nonzero all-black weight");
  for (std::size_t i = 0; i < o.pts.size(); ++i)
    for (std::size_t j = i + 1; j < o.pts.size(); ++j) {
      Vec3 v = (o.pts[j] - o.pts[i]).normalized();
      bool dup = false;
      for (auto& d : o.diffs) dup = dup || std::abs(std::abs(d.dot(v)) - 1) < 1e-12;
      if (!dup) o.diffs.push_back(v);
    }
  return o;
}

/// Σ w_l (−h(B_l ⊕ W̌_l, n))⁺.
double firstOrder(const Oriented& o, const Vec3& n) {
  double s = 0;
  for (auto& k : thresholdConfigs(o.pts, n).partial) s += o.w[k.mask] * k.width;
  return s;
}

/// ½ Σ w (−⟨β,ε⟩² + ⟨β,n⟩² + ⟨ω,ε⟩² − ⟨ω,n⟩²) over threshold configurations.
double secondOrder(const Oriented& o, const Vec3& n, const Vec3& e) {
  double s = 0;
  for (auto& k : thresholdConfigs(o.pts, n).partial) {
    double wk = o.w[k.mask];
    if (wk == 0 || k.beta < 0 || k.omega < 0) continue;  // ties: measure zero
    const Vec3 &b = o.pts[k.beta], &w = o.pts[k.omega];
    double be = b.dot(e), bn = b.dot(n), we = w.dot(e), wn = w.dot(n);
    s += wk * (-be * be + bn * bn + we * we - wn * wn);
  }
  return 0.5 * s;
}

/// All b + 2πk inside (lo, hi), plus the endpoints.
void wrapInto(std::vector<double>& out, double b, double lo, double hi) {
  for (int k = -3; k <= 3; ++k) {
    double x = b + 2 * kPi * k;
    if (x > lo && x < hi) out.push_back(x);
  }
}

/// Angles t ∈ (lo, hi) where sin φ (cos t, sin t, 0) + cos φ e3 ⊥ some difference.
std::vector<double> tBreaks(const Oriented& o, double phi, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (auto& v : o.diffs) {
    double A = std::sin(phi) * v[0], B = std::sin(phi) * v[1], C = -std::cos(phi) * v[2];
    double rho = std::hypot(A, B);
    if (rho == 0 || std::abs(C) > rho) continue;
    double base = std::atan2(B, A), d = std::acos(std::clamp(C / rho, -1.0, 1.0));
    wrapInto(out, base + d, lo, hi);
    wrapInto(out, base - d, lo, hi);
  }
  std::sort(out.begin(), out.end());
  // Keep panels short so that a fixed rule is exact to rounding.
  std::vector<double> fine;
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    int m = std::max(1, int(std::ceil((out[i + 1] - out[i]) / (kPi / 4))));
    for (int j = 0; j < m; ++j) fine.push_back(out[i] + (out[i + 1] - out[i]) * j / m);
  }
  fine.push_back(out.back());
  return fine;
}

/// Polar angles where the circle of normals at φ becomes tangent to a break curve.
std::vector<double> phiBreaks(const Oriented& o, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (auto& v : o.diffs) {
    double b = std::atan2(std::abs(v[2]), std::hypot(v[0], v[1]));
    for (double x : {b, kPi - b})
      if (x > lo && x < hi) out.push_back(x);
  }
  return out;
}

/// Angles in (lo, hi) where (cos t, sin t) ⊥ some difference (d = 2).
std::vector<double> angleBreaks(const Oriented& o, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (auto& v : o.diffs) {
    double b = std::atan2(v[1], v[0]);
    wrapInto(out, b + kPi / 2, lo, hi);
    wrapInto(out, b - kPi / 2, lo, hi);
  }
  return out;
}

/// Fixed 15-point rule on every piece between consecutive breaks.
double piecewiseFixed(const std::function<double(double)>& f, const std::vector<double>& br) {
  const GaussRule& g = gaussLegendre(15);
  double s = 0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    double a = br[i], b = br[i + 1];
    if (!(b > a)) continue;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a), p = 0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) p += g.weights[k] * f(mid + half * g.nodes[k]);
    s += p * half;
  }
  return s;
}

/// ∫ g dH over a patch, splitting at the kinks of the normal-dependent part.
QuadResult integrateAtlasPatch(const Oriented& o, const Patch& p,
                               const std::function<double(const SurfacePoint&)>& g, double relTol) {
  switch (p.normal) {
    case Patch::Normal::Constant:
      return integratePatch(p, g, relTol);
    case Patch::Normal::Angle:
      return integratePieces([&](double t) {
        SurfacePoint s = p.eval(t, 0);
        return g(s) * s.jacobian;
      }, angleBreaks(o, p.lo[0], p.hi[0]), relTol, 1e-14);
    case Patch::Normal::Spherical:
      return integratePieces([&](double phi) {
        return piecewiseFixed([&](double t) {
          SurfacePoint s = p.eval(t, phi);
          return g(s) * s.jacobian;
        }, tBreaks(o, phi, p.lo[0], p.hi[0]));
      }, phiBreaks(o, p.lo[1], p.hi[1]), relTol, 1e-13);
  }
  return {};
}

void requireHomogeneous(const WeightTable& T, int q, const char* what) {
  if (!T.homogeneous || T.q != q)
    throw Error(std::string(what) + " needs a homogeneous table with q = " + std::to_string(q));
}

/// The flat top S₃ needs e3 off the tie set: no window difference ⊥ e3.
void requireE3OffD(const Oriented& o) {
  for (auto& v : o.diffs)
    if (std::abs(v[2]) < 1e-9)
      throw Error("e3 lies in D for this lattice (window difference orthogonal to e3); rotate the lattice");
}

class FCache {
 public:
  explicit FCache(Oriented o) : o_(std::move(o)) {}
  const Oriented& oriented() const { return o_; }

  std::pair<double, double> operator()(double phi) {
    auto it = memo_.find(phi);
    if (it != memo_.end()) return it->second;
    const double sp = std::sin(phi), cp = std::cos(phi);
    double f1 = 0, f2 = 0;
    auto br = tBreaks(o_, phi, 0, 2 * kPi);
    f1 = piecewiseFixed([&](double t) {
      Vec3 u(std::cos(t), std::sin(t), 0);
      return secondOrder(o_, sp * u + cp * Vec3::UnitZ(), -cp * u + sp * Vec3::UnitZ());
    }, br);
    f2 = piecewiseFixed([&](double t) {
      Vec3 u(std::cos(t), std::sin(t), 0);
      return secondOrder(o_, sp * u + cp * Vec3::UnitZ(), Vec3(-std::sin(t), std::cos(t), 0));
    }, br);
    return memo_[phi] = {f1 / o_.det, f2 / o_.det};
  }

  QuadResult integral(const std::function<double(double, std::pair<double, double>)>& f, double lo,
                      double hi) {
    return integratePieces([&](double phi) { return f(phi, (*this)(phi)); }, phiBreaks(o_, lo, hi), 1e-11,
                           1e-13);
  }

 private:
  Oriented o_;
  std::map<double, std::pair<double, double>> memo_;
};

}  // namespace

LimitReport surfaceAreaLimitRegular(const Shape& S, const WeightTable& T, const Lattice& L) {
  const int d = shapeDim(S);
  if (d != T.dim) throw Error("dimension mismatch");
  requireHomogeneous(T, d - 1, "surface-area limit");
  Oriented o = prepare(T, L);
  LimitReport r;
  for (const Patch& p : boundaryAtlas(S)) {
    QuadResult q = integrateAtlasPatch(o, p, [&](const SurfacePoint& s) { return firstOrder(o, s.normal); },
                                       1e-11);
    r.terms.push_back({p.name, q.value / o.det});
    r.value += q.value / o.det;
    r.quadratureError += q.error / o.det;
  }
  return r;
}

LimitReport meanCurvatureLimitRegular(const Shape& S, const WeightTable& T, const Lattice& L) {
  const int d = shapeDim(S);
  if (d != T.dim) throw Error("dimension mismatch");
  requireHomogeneous(T, d - 2, "second-order limit");
  Oriented o = prepare(T, L);
  LimitReport r;
  double lead = 0;
  for (const Patch& p : boundaryAtlas(S)) {
    QuadResult q = integrateAtlasPatch(o, p, [&](const SurfacePoint& s) {
      double v = 0;
      for (int j = 0; j + 1 < d; ++j)
        if (s.curvatures[j] != 0) v += s.curvatures[j] * secondOrder(o, s.normal, s.dirs[j]);
      return v;
    }, 1e-11);
    r.terms.push_back({p.name, q.value / o.det});
    r.value += q.value / o.det;
    r.quadratureError += q.error / o.det;
    lead += integrateAtlasPatch(o, p, [&](const SurfacePoint& s) { return firstOrder(o, s.normal); }, 1e-11)
                .value / o.det;
  }
  r.coefficients = {{"a^-1", lead}};
  return r;
}

std::pair<double, double> revolutionF(const WeightTable& T, const Lattice& L, double phi) {
  if (T.dim != 3) throw Error("revolutionF needs d = 3");
  FCache F(prepare(T, L));
  return F(phi);
}

LimitReport meanCurvatureLimitRevolution(const RevolutionBody& X, const WeightTable& T, const Lattice& L) {
  if (T.dim != 3 || L.dim != 3) throw Error("meanCurvatureLimitRevolution needs d = 3");
  requireHomogeneous(T, 1, "mean-curvature limit");
  const double R = X.R, r = X.r, th = X.theta;
  if (!(r > 0 && r <= R && th > 0 && th < kPi)) throw Error("invalid revolution body parameters");
  FCache F(prepare(T, L));
  requireE3OffD(F.oriented());
  QuadResult i1 = F.integral([&](double phi, std::pair<double, double> f) {
    return R * (f.first + f.second) * std::sin(phi);
  }, th, kPi);
  QuadResult i3 = F.integral([&](double phi, std::pair<double, double> f) {
    double rho = (R - r) * std::sin(th) + r * std::sin(phi);
    return rho * f.first + r * std::sin(phi) * f.second;
  }, 0, th);
  LimitReport rep;
  rep.terms = {{"I1", i1.value}, {"I3", i3.value}, {"disk", 0.0}};
  rep.value = i1.value + i3.value;
  rep.quadratureError = i1.error + i3.error;
  // The a^{-1} coefficient ∫ Σ w f dH should vanish for a sensible table.
  const Oriented& o = F.oriented();
  double lead = 0;
  for (const Patch& p : boundaryAtlas(Shape{X}))
    lead += integrateAtlasPatch(o, p, [&](const SurfacePoint& s) { return firstOrder(o, s.normal); }, 1e-11)
                .value / o.det;
  rep.coefficients = {{"a^-1", lead}};
  return rep;
}

std::vector<MustholdPoint> mustholdResidual(const WeightTable& T, const Lattice& L,
                                            const std::vector<double>& thetaGrid) {
  if (T.dim != 3 || L.dim != 3) throw Error("musthold needs d = 3");
  requireHomogeneous(T, 1, "musthold");
  FCache F(prepare(T, L));
  requireE3OffD(F.oriented());
  std::vector<MustholdPoint> out;
  for (double th : thetaGrid) {
    QuadResult cap = F.integral([](double phi, std::pair<double, double> f) {
      return (f.first + f.second) * std::sin(phi);
    }, th, kPi);
    QuadResult tube = F.integral([](double, std::pair<double, double> f) { return f.first; }, 0, th);
    MustholdPoint p;
    p.theta = th;
    p.lhs = cap.value + std::sin(th) * tube.value;
    p.rhs = 2 * (1 + std::cos(th)) + th * std::sin(th);
    p.residual = p.lhs - p.rhs;
    p.errorBound = cap.error + std::sin(th) * tube.error;
    out.push_back(p);
  }
  return out;
}

McResult mcRegionVolume(const RegionSpec& spec, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw Error("need at least one sample");
  Rng g = makeStream(seed, 0);
  double vol = 1;
  for (int i = 0; i < spec.dim; ++i) vol *= spec.hi[i] - spec.lo[i];
  std::uint64_t hits = 0;
  Vec3 x = Vec3::Zero();
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < spec.dim; ++i) x[i] = spec.lo[i] + (spec.hi[i] - spec.lo[i]) * uniform01(g);
    hits += spec.inside(x);
  }
  double p = double(hits) / double(samples);
  return {vol * p, vol * std::sqrt(p * (1 - p) / double(samples))};
}

namespace {

RegionSpec anchorBox(const Shape& S, const std::vector<Vec3>& pts, double a) {
  RegionSpec spec;
  spec.dim = shapeDim(S);
  BoundingBox bb = boundingBox(S);
  Vec3 plo = pts[0], phi = pts[0];
  for (auto& p : pts) {
    plo = plo.cwiseMin(p);
    phi = phi.cwiseMax(p);
  }
  spec.lo = bb.lo - a * phi;
  spec.hi = bb.hi - a * plo;
  for (int i = spec.dim; i < 3; ++i) spec.lo[i] = spec.hi[i] = 0;
  return spec;
}

}  // namespace

RegionSpec hitOrMissRegion(const Shape& S, const Lattice& L, double a, int n, std::uint32_t m) {
  auto pts = makeWindow(n, shapeDim(S)).worldPoints(L);
  if (m == 0 || m >= (1u << pts.size())) throw Error("configuration index out of range");
  RegionSpec spec = anchorBox(S, pts, a);
  spec.inside = [S, pts, a, m](const Vec3& x) {
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (contains(S, x + a * pts[j]) != bool((m >> j) & 1)) return false;
    return true;
  };
  return spec;
}

RegionSpec boundaryBandRegion(const Shape& S, const Lattice& L, double a, int n) {
  auto pts = makeWindow(n, shapeDim(S)).worldPoints(L);
  RegionSpec spec = anchorBox(S, pts, a);
  spec.inside = [S, pts, a](const Vec3& x) {
    bool in = false, out = false;
    for (auto& p : pts) (contains(S, x + a * p) ? in : out) = true;
    return in && out;
  };
  return spec;
}

}  // namespace vv
