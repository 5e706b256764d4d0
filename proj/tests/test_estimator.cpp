#include <doctest.h>

#include "vv/estimator.hpp"

#include <cmath>

using namespace vv;

namespace {
HalfspacePolytope square(double angle) {
  Mat3 R = rotation2d(angle);
  std::vector<Vec3> v;
  for (auto [x, y] : {std::pair{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}) v.push_back(R * Vec3(x, y, 0));
  return HalfspacePolytope::fromVertices(v);
}
}  // namespace

TEST_CASE("estimate examples") {
  Lattice L = Lattice::standard(2).withSpacing(0.02).withPhase(Vec3(0.31, 0.77, 0));
  BinaryImage disk = digitize(Ball{2, Vec3::Zero(), 1}, L);
  CHECK(estimate(disk, WeightTable::zeros(2, 2, 0)).value == 0);
  EstimateRecord r = estimate(disk, eulerWeights(2, Lattice::standard(2)));
  CHECK(r.exactSum == 1);
  CHECK(r.value == 1);
  BinaryImage one(Lattice::standard(2), {10, 10, 1}, {0, 0, 0});
  one.set(5, 5, 0, true);
  CHECK(estimate(one, eulerWeights(2, Lattice::standard(2))).exactSum == 1);
  CHECK(volumeEstimate(BinaryImage(Lattice::standard(2), {10, 10, 1}, {0, 0, 0})) == 0);
  BinaryImage block(Lattice::standard(2), {11, 11, 1}, {0, 0, 0});
  for (int y = 4; y < 7; ++y)
    for (int x = 4; x < 7; ++x) block.set(x, y, 0, true);
  CHECK(volumeEstimate(block) == 9);
}

TEST_CASE("estimate rejects mismatched tables") {
  BinaryImage img(Lattice::standard(2), {10, 10, 1}, {0, 0, 0});
  img.set(1, 5, 0, true);
  CHECK_THROWS_AS(estimate(img, eulerWeights(3, Lattice::standard(2))), Error);
  CHECK_THROWS_AS(estimate(img, WeightTable::zeros(2, 3, 0)), Error);
}

TEST_CASE("homogeneous scaling uses a^q") {
  Lattice L = Lattice::standard(2).withSpacing(0.1);
  BinaryImage img = digitize(Ball{2, Vec3::Zero(), 0.5}, L);
  WeightTable T = WeightTable::zeros(2, 2, 2);
  T.w[15] = 1;
  EstimateRecord r = estimate(img, T);
  CHECK(r.value == doctest::Approx(toDouble(r.exactSum) * 0.01).epsilon(1e-15));
}

TEST_CASE("designMean") {
  Lattice L = Lattice::standard(2);
  DesignOptions o;
  o.numPhases = 1000;
  o.seed = 5;
  WeightTable Z = WeightTable::zeros(2, 2, 0);
  DesignMean z = designMean(square(0), &Z, L, 0.1, o);
  CHECK(z.mean == 0);
  CHECK(z.stderr_ == 0);
  DesignMean v = designMean(square(0), nullptr, L, 0.1, o);
  CHECK(std::abs(v.mean - 1) <= 4 * v.stderr_ + 1e-12);
  o.numPhases = 200;
  WeightTable E = eulerWeights(2, L);
  DesignMean e = designMean(square(deg(20)), &E, L, 0.02, o);
  CHECK(e.mean == 1);
  CHECK(e.stderr_ == 0);
  CHECK(e.min == 1);
  CHECK(e.max == 1);
  // Reproducible and independent of threads.
  o.threads = 3;
  DesignMean e3 = designMean(Ball{2, Vec3::Zero(), 0.7}, nullptr, L, 0.05, o);
  o.threads = 1;
  DesignMean e1 = designMean(Ball{2, Vec3::Zero(), 0.7}, nullptr, L, 0.05, o);
  CHECK(e3.mean == e1.mean);
  CHECK(e3.stderr_ == e1.stderr_);
  o.numPhases = 1;
  CHECK_THROWS_AS(designMean(square(0), nullptr, L, 0.1, o), Error);
}

TEST_CASE("stderr scales like 1/sqrt(phases)") {
  Lattice L = Lattice::standard(2);
  DesignOptions o;
  o.seed = 9;
  o.numPhases = 400;
  double s1 = designMean(square(0.3), nullptr, L, 0.1, o).stderr_;
  o.numPhases = 1600;
  double s2 = designMean(square(0.3), nullptr, L, 0.1, o).stderr_;
  CHECK(s1 / s2 == doctest::Approx(2).epsilon(0.25));
}

TEST_CASE("volume estimator is unbiased at every a") {
  Lattice L = Lattice::fromBasis(2, rotation2d(0.2));
  DesignOptions o;
  o.numPhases = 1000;
  o.seed = 3;
  Ball b{2, Vec3(0.1, 0, 0), 0.8};
  for (double a : {0.2, 0.1, 0.05}) {
    DesignMean m = designMean(b, nullptr, L, a, o);
    CHECK(std::abs(m.mean - kPi * 0.64) <= 4 * m.stderr_);
  }
}

TEST_CASE("multigridSweep") {
  Lattice L = Lattice::standard(2);
  DesignOptions o;
  o.numPhases = 200;
  SweepResult r = multigridSweep(square(0.4), nullptr, L, geometricSequence(0.2, 3), o);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[1].a == 0.1);
  for (auto& row : r.rows) CHECK(std::abs(row.mean - 1) <= 4 * row.stderr_);
  CHECK_THROWS_AS(multigridSweep(square(0.4), nullptr, L, {0.1, 0.2}, o), Error);
  o.fixedPhase = true;
  SweepResult f = multigridSweep(square(0.4), nullptr, L, {0.1, 0.05}, o);
  CHECK(f.rows[0].stderr_ == 0);
}

TEST_CASE("invariant tables see symmetric images alike") {
  Lattice L = Lattice::standard(2).withSpacing(0.05).withPhase(Vec3(0.2, 0.9, 0));
  BinaryImage img = digitize(HalfspacePolytope::fromVertices({Vec3(0, 0, 0), Vec3(1, 0.2, 0), Vec3(0.3, 0.8, 0)}), L);
  SymmetryGroup G = latticeSymmetries(L, true);
  for (auto& name : {"euler2d_n2", "perimeter2d", "area2d"}) {
    WeightTable T = standardTable(name);
    Rational ref = estimate(img, T).exactSum;
    for (auto& M : G.elements) CHECK(estimate(transformImage(img, M), T).exactSum == ref);
  }
}
