#include <doctest.h>

#include "vv/analytic.hpp"
#include "vv/estimator.hpp"

#include <cmath>

using namespace vv;

namespace {
HalfspacePolytope poly(std::vector<Vec3> v) { return HalfspacePolytope::fromVertices(v); }
HalfspacePolytope unitSquare() { return poly({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)}); }
HalfspacePolytope rotated(const HalfspacePolytope& P, double ang) {
  std::vector<Vec3> v;
  for (auto& p : P.vertices) v.push_back(rotation2d(ang) * p);
  return poly(v);
}
const Lattice Z2 = Lattice::standard(2);
}  // namespace

TEST_CASE("threshold configurations") {
  auto pts = makeWindow(2, 2).worldPoints(Z2);
  Vec3 u(std::cos(deg(10)), std::sin(deg(10)), 0);
  ThresholdSplit s = thresholdConfigs(pts, u);
  CHECK_FALSE(s.tie);
  REQUIRE(s.partial.size() == 3);
  CHECK(s.partial[0].mask == 1);
  CHECK(s.partial[1].mask == 5);
  CHECK(s.partial[2].mask == 7);
  CHECK(s.top == doctest::Approx(u[0] + u[1]));
  for (auto& k : s.partial) CHECK(k.width == doctest::Approx(hitWidth(k.mask, pts, u)));
  CHECK(hitWidth(6, pts, u) == 0);
  CHECK(thresholdConfigs(pts, Vec3(1, 0, 0)).tie);
}

TEST_CASE("region volumes on the unit square") {
  // Left column black, right column white: a strip along the right edge.
  RegionVolumeTable t = polygonRegionVolumes(unitSquare(), 2, Z2, 0.01, {true});
  auto EN = t.expectedCounts();
  CHECK(EN[5] * 0.01 == doctest::Approx(1 - 0.01));
  CHECK(EN[15] * 1e-4 == doctest::Approx(0.99 * 0.99));
  for (auto& r : t.regions) {
    CHECK(r.total >= 0);
    CHECK(r.total == doctest::Approx(r.interior + r.edge + r.corner + r.other));
  }
}

TEST_CASE("region volumes match the Monte Carlo oracle") {
  HalfspacePolytope P = poly({Vec3(0, 0, 0), Vec3(1.1, 0.2, 0), Vec3(0.8, 1.0, 0), Vec3(-0.1, 0.7, 0)});
  double a = 0.1;
  RegionVolumeTable t = polygonRegionVolumes(P, 2, Z2, a, {true});
  for (std::uint32_t m : {1u, 5u, 7u, 12u, 15u}) {
    McResult mc = mcRegionVolume(hitOrMissRegion(P, Z2, a, 2, m), 400000, 100 + m);
    CHECK(std::abs(mc.estimate - t.regions[m].total) <= 4 * mc.stderr_ + 1e-12);
  }
  McResult band = mcRegionVolume(boundaryBandRegion(P, Z2, a, 2), 400000, 7);
  CHECK(std::abs(band.estimate - t.bandArea()) <= 4 * band.stderr_);
}

TEST_CASE("mcRegionVolume on a rectangle strip") {
  RegionSpec s;
  s.dim = 2;
  s.lo = Vec3(0, 0, 0);
  s.hi = Vec3(1, 1, 0);
  s.inside = [](const Vec3& x) { return x[1] < 0.25; };
  McResult r = mcRegionVolume(s, 100000, 1);
  CHECK(std::abs(r.estimate - 0.25) <= 3 * r.stderr_);
  s.inside = [](const Vec3&) { return false; };
  CHECK(mcRegionVolume(s, 1000, 1).estimate == 0);
}

TEST_CASE("two paths agree") {
  std::vector<WeightTable> tables = {eulerWeights(2, Z2), eulerWeights(3, Z2), standardTable("perimeter2d"),
                                     standardTable("area2d"), patternTable(2, 2, 1, {0}, {1})};
  std::vector<HalfspacePolytope> polys = {
      rotated(unitSquare(), 0.3), poly({Vec3(0, 0, 0), Vec3(1.3, 0.1, 0), Vec3(0.6, 1.1, 0)}),
      poly({Vec3(0, 0, 0), Vec3(1, -0.3, 0), Vec3(1.7, 0.5, 0), Vec3(1.0, 1.4, 0), Vec3(-0.2, 0.9, 0)})};
  for (auto& P : polys)
    for (auto& T : tables) {
      double a = polygonValidityThreshold(P, T.n, Z2) / 2;
      double A = expectedEstimate(polygonExpectedCounts(P, T.n, Z2, a), T, a);
      LimitReport B = polygonExpectedEstimate(P, T, Z2, a);
      CHECK(std::abs(A - B.value) <= 1e-10 * std::max(1.0, std::abs(A)));
      double s = 0;
      for (auto& [k, v] : B.terms) s += v;
      CHECK(std::abs(s - B.value) < 1e-12 * std::max(1.0, std::abs(s)));
    }
}

TEST_CASE("polygon expectation examples") {
  WeightTable E = eulerWeights(2, Z2);
  HalfspacePolytope sq = rotated(unitSquare(), deg(20));
  for (double f : {0.5, 0.25, 0.1}) {
    double a = f * polygonValidityThreshold(sq, 2, Z2);
    CHECK(polygonExpectedEuler(sq, E, Z2, a) == doctest::Approx(1).epsilon(1e-12));
  }
  CHECK(polygonExpectedEuler(sq, WeightTable::zeros(2, 2, 0), Z2, 0.01) == 0);
  CHECK_THROWS_AS(polygonExpectedEuler(sq, E, Z2, 1.0), Error);
  // Scale behaviour: (sP, sa) gives the same counts.
  HalfspacePolytope big = poly({Vec3(0, 0, 0), Vec3(3, 0.6, 0), Vec3(1.5, 2.4, 0)});
  HalfspacePolytope small = poly({Vec3(0, 0, 0), Vec3(1, 0.2, 0), Vec3(0.5, 0.8, 0)});
  auto e1 = polygonExpectedCounts(small, 2, Z2, 0.01), e3 = polygonExpectedCounts(big, 2, Z2, 0.03);
  for (std::size_t m = 1; m < e1.size(); ++m) CHECK(e1[m] == doctest::Approx(e3[m]).epsilon(1e-9));
  // Interior dominance of the all-black configuration.
  auto en = polygonExpectedCounts(small, 2, Z2, 1e-4);
  CHECK(en[15] * 1e-8 == doctest::Approx(small.area()).epsilon(1e-3));
}

TEST_CASE("parallelogram limit") {
  WeightTable E = eulerWeights(2, Z2);
  LimitReport z = parallelogramLimit(WeightTable::zeros(2, 2, 0), deg(4), deg(16), Z2);
  CHECK(z.value == 0);
  CHECK(z.term("alpha1") == 0);
  CHECK(z.term("alpha2") == 0);
  CHECK(z.term("alpha3") == 0);
  double v16 = parallelogramLimit(E, deg(4), deg(16), Z2).value;
  double v4 = parallelogramLimit(E, deg(4), deg(4), Z2).value;
  CHECK(std::abs(v4 - 1) > std::abs(v16 - 1));
  LimitReport a = parallelogramLimit(E, deg(4), deg(8), Z2), b = parallelogramLimit(E, deg(4), deg(8), Z2, 3, 0.5);
  CHECK(std::abs(a.value - b.value) < 1e-12);
  CHECK(std::abs(a.value - a.term("corner_from_alpha")) < 1e-12);
  // The limit equals the exact expectation for any small a.
  HalfspacePolytope P = Parallelogram2D{deg(4), deg(8), 1, 1, Vec3::Zero()}.toPolytope();
  CHECK(polygonExpectedEuler(P, E, Z2, 0.001) == doctest::Approx(a.value).epsilon(1e-10));
  CHECK_THROWS_WITH_AS(parallelogramLimit(E, deg(20), deg(20), Z2), doctest::Contains("direction in D"), Error);
  CHECK_THROWS_WITH_AS(parallelogramLimit(patternTable(2, 2, 0, {0}, {1}), deg(4), deg(8), Z2),
                       doctest::Contains("no finite limit"), Error);
}

TEST_CASE("surface-area limits") {
  WeightTable edge = patternTable(2, 2, 1, {0}, {1});
  CHECK(edge.w[1] == 1);
  CHECK(edge.w[5] == 1);
  CHECK(edge.w[9] == 1);
  CHECK(edge.w[13] == 1);
  CHECK(edge.w[3] == 0);
  CHECK(std::abs(surfaceAreaLimitPolytope(unitSquare(), edge, Z2).value - 1) < 1e-12);
  CHECK(surfaceAreaLimitPolytope(unitSquare(), WeightTable::zeros(2, 2, 1), Z2).value == 0);
  CHECK(std::abs(surfaceAreaLimitRegular(Ball{2, Vec3::Zero(), 0.7}, edge, Z2).value - 1.4) < 1e-10);
  CHECK(surfaceAreaLimitRegular(Ball{2, Vec3::Zero(), 0.7}, WeightTable::zeros(2, 2, 1), Z2).value == 0);
  WeightTable per = standardTable("perimeter2d");
  double lim = surfaceAreaLimitPolytope(rotated(unitSquare(), deg(20)), per, Z2).value;
  CHECK(std::abs(lim / 4 - 1) > 1e-3);
  // Rounded polygons approach the polygon as r → 0.
  HalfspacePolytope P = poly({Vec3(0, 0, 0), Vec3(1.2, 0.3, 0), Vec3(0.4, 1.0, 0)});
  double base = surfaceAreaLimitPolytope(P, per, Z2).value;
  double d1 = std::abs(surfaceAreaLimitRegular(RoundedPolytope{P, 0.1}, per, Z2).value - base);
  double d2 = std::abs(surfaceAreaLimitRegular(RoundedPolytope{P, 0.01}, per, Z2).value - base);
  CHECK(d2 < d1 / 5);
  CHECK(d2 > d1 / 20);
  WeightTable bad = WeightTable::zeros(2, 2, 1);
  bad.w[15] = 1;
  CHECK_THROWS_AS(surfaceAreaLimitPolytope(unitSquare(), bad, Z2), Error);
  // 3D: ball with the surface table.
  Lattice L3 = Lattice::fromBasis(3, eulerRotation(0.3, 0.2, 0.1));
  double s = surfaceAreaLimitRegular(Ball{3, Vec3::Zero(), 1}, standardTable("surface3d"), L3).value;
  CHECK(std::abs(s / (4 * kPi) - 1) < 0.05);
  Box cube{3, Mat3::Identity(), Vec3(1, 1, 1), Vec3::Zero()};
  CHECK(surfaceAreaLimitPolytope(cube.toPolytope(), patternTable(2, 3, 2, {0}, {1}), Lattice::standard(3)).value ==
        doctest::Approx(1));
}

TEST_CASE("second-order limits") {
  Lattice L3 = Lattice::fromBasis(3, eulerRotation(deg(17), deg(11), deg(7)));
  WeightTable M = standardTable("meancurv3d");
  // 2D sanity: the Euler table sees χ = 1 on a disk.
  CHECK(meanCurvatureLimitRegular(Ball{2, Vec3::Zero(), 0.6}, eulerWeights(2, Z2), Z2).value ==
        doctest::Approx(1).epsilon(1e-9));
  LimitReport b = meanCurvatureLimitRegular(Ball{3, Vec3::Zero(), 1.3}, M, L3);
  CHECK(b.value == doctest::Approx(4 * 1.3).epsilon(1e-8));
  RevolutionBody X{1, 0.3, kPi / 3, Vec3::Zero()};
  LimitReport r = meanCurvatureLimitRevolution(X, M, L3);
  CHECK(std::abs(r.value - r.term("I1") - r.term("I3")) < 1e-12);
  CHECK(std::abs(r.term("a^-1")) < 1e-9);
  CHECK(meanCurvatureLimitRegular(X, M, L3).value == doctest::Approx(r.value).epsilon(1e-8));
  // Closed form for this table: two thirds of the summed axis widths.
  auto h = [&](Vec3 v) {
    v.normalize();
    double cap = std::acos(v[2]) >= X.theta ? X.R : -1e9;
    return std::max(cap, X.r + (X.R - X.r) * (std::sin(X.theta) * std::hypot(v[0], v[1]) + std::cos(X.theta) * v[2]));
  };
  double w = 0;
  for (int k = 0; k < 3; ++k) w += h(L3.basis.col(k)) + h(-L3.basis.col(k));
  CHECK(r.value == doctest::Approx(2.0 / 3 * w).epsilon(1e-8));
  CHECK(meanCurvatureLimitRevolution(X, WeightTable::zeros(2, 3, 1), L3).value == 0);
  CHECK_THROWS_AS(meanCurvatureLimitRevolution(X, M, Lattice::standard(3)), Error);
}

TEST_CASE("musthold residual") {
  Lattice L3 = Lattice::fromBasis(3, eulerRotation(deg(17), deg(11), deg(7)));
  std::vector<double> grid = {0.3, 0.8, 1.5, 2.6};
  auto z = mustholdResidual(WeightTable::zeros(2, 3, 1), L3, grid);
  for (auto& p : z) {
    CHECK(p.lhs == 0);
    CHECK(p.residual == -p.rhs);
    CHECK(p.rhs == doctest::Approx(2 * (1 + std::cos(p.theta)) + p.theta * std::sin(p.theta)));
  }
  auto m = mustholdResidual(standardTable("meancurv3d"), L3, grid);
  double mx = 0;
  for (auto& p : m) mx = std::max(mx, std::abs(p.residual));
  CHECK(mx > 1e-3);
  // The ball part: ∫ (F1 + F2) sin φ over (0, π) is V1 of the unit ball.
  auto f = revolutionF(standardTable("meancurv3d"), L3, 1.0);
  CHECK(std::isfinite(f.first + f.second));
}
