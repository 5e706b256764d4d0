#include <doctest.h>

#include "vv/shapes.hpp"

#include <cmath>

using namespace vv;

namespace {
HalfspacePolytope unitSquare() {
  return HalfspacePolytope::fromVertices({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)});
}
std::vector<Vec3> corners2() { return {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)}; }
}  // namespace

TEST_CASE("contains") {
  CHECK(contains(unitSquare(), Vec3(0.5, 0.5, 0)));
  CHECK(contains(unitSquare(), Vec3(1.0, 1.0, 0)));
  CHECK_FALSE(contains(Ball{2, Vec3::Zero(), 1}, Vec3(1.0001, 0, 0)));
}

TEST_CASE("support and argmax") {
  CHECK(support({Vec3::Zero()}, Vec3(0.6, 0.8, 0)) == 0);
  CHECK(support({Vec3::Zero(), Vec3(1, 1, 0)}, Vec3(1, 0, 0)) == 1);
  Vec3 u(std::cos(deg(10)), std::sin(deg(10)), 0);
  CHECK(support(corners2(), u) == doctest::Approx(1.1584559306791384));
  CHECK(std::isinf(support({}, u)));
  CHECK(support({}, u) < 0);
  auto a = supportArgmax({Vec3::Zero(), Vec3(1, 0, 0)}, Vec3(1, 0, 0), 1e-12);
  CHECK((!a.tie && a.index == 1));
  CHECK(supportArgmax({Vec3::Zero(), Vec3(1, 0, 0)}, Vec3(0, 1, 0), 1e-12).tie);
  auto c = supportArgmax(corners2(), u, defaultTieTol(corners2()));
  CHECK((!c.tie && c.index == 3));
  // support ≥ ⟨p,u⟩ with equality attained
  for (int k = 0; k < 50; ++k) {
    Vec3 v(std::cos(0.37 * k), std::sin(0.37 * k), 0);
    double h = support(corners2(), v), best = -1e9;
    for (auto& p : corners2()) {
      CHECK(h >= p.dot(v));
      best = std::max(best, p.dot(v));
    }
    CHECK(h == best);
  }
}

TEST_CASE("dSet") {
  Lattice L = Lattice::standard(2);
  auto ang = dSetAngles(L, 2);
  auto has = [&](double d) {
    for (double a : ang)
      if (std::abs(a - deg(d)) < 1e-9) return true;
    return false;
  };
  CHECK(has(0));
  CHECK(has(45));
  CHECK(has(90));
  CHECK(has(std::atan(0.5) * 180 / kPi));
  CHECK(has(std::atan(2.0) * 180 / kPi));
  for (std::size_t i = 1; i < ang.size(); ++i) CHECK(ang[i] > ang[i - 1]);
  CHECK(dSet(L, 1).size() == 8);
}

TEST_CASE("n-critical vertices") {
  Lattice L = Lattice::standard(2);
  CHECK(nCriticalVertices(unitSquare(), 2, L).empty());
  HalfspacePolytope par = Parallelogram2D{deg(5), deg(15), 1, 1, Vec3::Zero()}.toPolytope();
  auto crit = nCriticalVertices(par, 2, L);
  REQUIRE(crit.size() == 2);
  for (auto i : crit) CHECK(par.interiorAngle(i) == doctest::Approx(deg(15)));
  std::vector<Vec3> hex;
  for (int k = 0; k < 6; ++k) hex.push_back(Vec3(std::cos(k * kPi / 3), std::sin(k * kPi / 3), 0));
  CHECK(nCriticalVertices(HalfspacePolytope::fromVertices(hex), 2, L).empty());
  // Invariant under lattice translation and scaling.
  std::vector<Vec3> shifted;
  for (auto& v : par.vertices) shifted.push_back(3.5 * v + Vec3(2, -1, 0));
  CHECK(nCriticalVertices(HalfspacePolytope::fromVertices(shifted), 2, L).size() == 2);
  CHECK(isNCriticalBoundaryPoint(par, par.vertices[crit[0]], 2, L));
  CHECK_FALSE(isNCriticalBoundaryPoint(par, 0.5 * (par.vertices[0] + par.vertices[1]), 2, L));
}

TEST_CASE("polytope construction") {
  CHECK_THROWS_AS(HalfspacePolytope::fromHalfspaces(2, {Vec3(1, 0, 0), Vec3(-1, 0, 0)}, {1, 1}), Error);
  CHECK_THROWS_AS(HalfspacePolytope::fromHalfspaces(2, {Vec3(1, 0, 0), Vec3(1, 1e-12, 0), Vec3(0, 1, 0),
                                                        Vec3(-1, -1, 0)},
                                                    {1, 1, 1, 1}),
                  Error);
  auto P = HalfspacePolytope::fromHalfspaces(2, {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(-1, 0, 0), Vec3(0, -1, 0)},
                                             {1, 1, 0, 0});
  CHECK(P.vertices.size() == 4);
  CHECK(P.area() == doctest::Approx(1));
}

TEST_CASE("boundaryAtlas") {
  auto circle = boundaryAtlas(Ball{2, Vec3::Zero(), 1});
  REQUIRE(circle.size() == 1);
  CHECK(std::abs(integratePatch(circle[0], [](const SurfacePoint&) { return 1.0; }).value - 2 * kPi) < 1e-10);
  CHECK(circle[0].eval(0.3, 0).curvatures[0] == 1);
  RevolutionBody X{1, 0.3, kPi / 3, Vec3::Zero()};
  auto atlas = boundaryAtlas(X);
  double S3 = 0, total = 0;
  for (auto& p : atlas) {
    double A = integratePatch(p, [](const SurfacePoint&) { return 1.0; }).value;
    total += A;
    if (p.name == "S3") S3 = A;
    for (double t : {0.1, 2.0, 4.0})
      for (double s : {0.2, 0.5, 0.9}) {
        double v = p.lo[1] + s * (p.hi[1] - p.lo[1]);
        CHECK(std::abs(p.eval(t, v).normal.norm() - 1) < 1e-12);
      }
  }
  CHECK(std::abs(S3 - kPi * std::pow(0.7 * std::sin(kPi / 3), 2)) < 1e-10);
  CHECK(std::abs(total - 2 * intrinsicVolumes(X)[2]) < 1e-6);
  CHECK_THROWS_AS(boundaryAtlas(unitSquare()), Error);
}

TEST_CASE("intrinsic volumes") {
  auto v = intrinsicVolumes(unitSquare());
  CHECK(v[0] == doctest::Approx(1));
  CHECK(v[1] == doctest::Approx(2));
  CHECK(v[2] == doctest::Approx(1));
  auto b = intrinsicVolumes(Ball{3, Vec3::Zero(), 1.5});
  CHECK(b[1] == doctest::Approx(6));
  CHECK(b[3] == doctest::Approx(4.0 / 3 * kPi * 1.5 * 1.5 * 1.5));
  for (double th : {0.4, 1.3, 2.5})
    CHECK(std::abs(intrinsicVolumes(RevolutionBody{1, 1, th, Vec3::Zero()})[1] - 4) < 1e-6);
  RevolutionBody X{1, 0.3, kPi / 3, Vec3::Zero()};
  CHECK(std::abs(intrinsicVolumes(X)[1] - revolutionV1Closed(X)) < 1e-8);
  Box box{3, eulerRotation(0.3, 0.2, 0.1), Vec3(1, 2, 3), Vec3::Zero()};
  auto bv = intrinsicVolumes(box);
  CHECK(bv[1] == doctest::Approx(6));
  CHECK(bv[2] == doctest::Approx(11));
  CHECK(bv[3] == doctest::Approx(6));
  auto rp = intrinsicVolumes(RoundedPolytope{unitSquare(), 0.2});
  CHECK(rp[2] == doctest::Approx(1 + 0.8 + kPi * 0.04));
}

TEST_CASE("Monte Carlo volume agrees with intrinsic volumes") {
  std::vector<Shape> shapes = {unitSquare(), Ball{2, Vec3::Zero(), 1}, RoundedPolytope{unitSquare(), 0.3},
                               Box{3, eulerRotation(0.4, 0.1, 0.2), Vec3(1, 0.5, 0.7), Vec3::Zero()},
                               RevolutionBody{1, 0.3, kPi / 3, Vec3::Zero()}};
  Rng g = makeStream(11, 0);
  for (auto& S : shapes) {
    BoundingBox bb = boundingBox(S);
    int d = shapeDim(S);
    const int N = 1000000;
    long hits = 0;
    for (int i = 0; i < N; ++i) {
      Vec3 x = Vec3::Zero();
      for (int k = 0; k < d; ++k) x[k] = bb.lo[k] + (bb.hi[k] - bb.lo[k]) * uniform01(g);
      hits += contains(S, x);
    }
    double vol = 1;
    for (int k = 0; k < d; ++k) vol *= bb.hi[k] - bb.lo[k];
    double p = double(hits) / N, est = vol * p, se = vol * std::sqrt(p * (1 - p) / N);
    CHECK(std::abs(est - intrinsicVolumes(S).back()) <= 4 * se);
  }
}

TEST_CASE("shapes from settings") {
  auto S = shapeFromConfig({{"kind", "regular_polygon"}, {"sides", "6"}, {"radius", "1"}});
  CHECK(intrinsicVolumes(S)[2] == doctest::Approx(1.5 * std::sqrt(3.0)));
  auto R = shapeFromConfig({{"kind", "revolution"}, {"R", "1"}, {"r", "0.3"}, {"theta_deg", "60"}});
  CHECK(shapeKind(R) == "revolution");
  CHECK_THROWS_AS(shapeFromConfig({{"kind", "torus"}}), Error);
}
