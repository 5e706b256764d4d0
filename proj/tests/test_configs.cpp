#include <doctest.h>

#include "vv/configs.hpp"

#include <chrono>
#include <filesystem>

using namespace vv;

namespace {
BinaryImage blank(int w = 12, int h = 12) { return BinaryImage(Lattice::standard(2), {w, h, 1}, {0, 0, 0}); }
}  // namespace

TEST_CASE("pixelIndex") {
  CHECK(pixelIndex({0, 0}, 2) == 0);
  CHECK(pixelIndex({1, 0}, 2) == 1);
  CHECK(pixelIndex({2, 1}, 3) == 5);
  CHECK_THROWS_AS(pixelIndex({2, 0}, 2), Error);
}

TEST_CASE("configOfWindow") {
  BinaryImage img = blank();
  CHECK(configOfWindow(img, {3, 3, 0}, 2) == 0);
  img.set(4, 3, 0, true);
  img.set(3, 4, 0, true);
  CHECK(configOfWindow(img, {3, 3, 0}, 2) == 6);
  img.set(3, 3, 0, true);
  img.set(4, 4, 0, true);
  CHECK(configOfWindow(img, {3, 3, 0}, 2) == 15);
  CHECK_THROWS_AS(configOfWindow(img, {11, 3, 0}, 2), Error);
}

TEST_CASE("countConfigs examples") {
  BinaryImage img = blank();
  CountVector e = countConfigs(img, 2);
  CHECK(e.nonzeroTotal() == 0);
  img.set(5, 5, 0, true);
  CountVector c = countConfigs(img, 2);
  for (std::uint32_t l = 1; l < 16; ++l) CHECK(c[l] == (l == 1 || l == 2 || l == 4 || l == 8 ? 1u : 0u));
  img.set(6, 5, 0, true);
  CountVector p = countConfigs(img, 2);
  CHECK(p[3] == 1);
  CHECK(p[12] == 1);
  CHECK(p[1] == 1);
  CHECK(p[2] == 1);
  CHECK(p[4] == 1);
  CHECK(p[8] == 1);
  CHECK(p.nonzeroTotal() == 6);
  CHECK(p == countConfigsNaive(img, 2));
  CHECK(touchedWindowCount(img, 2) == 6);
}

TEST_CASE("insufficient margin is rejected") {
  BinaryImage img = blank(6, 6);
  img.set(1, 3, 0, true);
  CHECK_THROWS_AS(countConfigs(img, 3), Error);
}

TEST_CASE("hitOrMissCount") {
  Lattice L = Lattice::standard(2);
  CHECK(hitOrMissCounts(EmptyShape{2}, L, 2).nonzeroTotal() == 0);
  HalfspacePolytope sq = HalfspacePolytope::fromVertices({Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(2, 2, 0), Vec3(0, 2, 0)});
  CHECK(hitOrMissCount(sq, L, 2, 15) == 4);
  CHECK_THROWS_AS(hitOrMissCount(sq, L, 2, 0), Error);
}

TEST_CASE("fast counts equal the oracle on random disks and squares") {
  for (int i = 0; i < 20; ++i) {
    Rng g = makeStream(99, i);
    Lattice L = Lattice::standard(2).withSpacing(0.05 + 0.1 * uniform01(g));
    Rng pg = makeStream(98, i);
    L = samplePhase(L, pg);
    Shape S;
    if (i % 2) S = Ball{2, Vec3(uniform01(g), uniform01(g), 0), 0.3 + uniform01(g)};
    else S = Box{2, rotation2d(6 * uniform01(g)), Vec3(0.5 + uniform01(g), 0.5 + uniform01(g), 1), Vec3::Zero()};
    int n = 2 + i % 3;
    BinaryImage img = digitize(S, L);
    CountVector c = countConfigs(img, n);
    CHECK(c.counts == hitOrMissCounts(S, L, n).counts);
    CHECK(c == countConfigsNaive(img, n));
    CHECK(c.nonzeroTotal() == touchedWindowCount(img, n));
  }
}

TEST_CASE("3D counting") {
  Lattice L = Lattice::fromBasis(3, eulerRotation(0.2, 0.5, 0.1)).withSpacing(0.15).withPhase(Vec3(0.2, 0.4, 0.6));
  Ball b{3, Vec3::Zero(), 0.8};
  BinaryImage img = digitize(b, L);
  CountVector c = countConfigs(img, 2);
  CHECK(c.counts == hitOrMissCounts(b, L, 2).counts);
  CHECK(c == countConfigsNaive(img, 2));
}

TEST_CASE("counting is independent of threads") {
  BinaryImage img = digitize(Ball{2, Vec3::Zero(), 1}, Lattice::standard(2).withSpacing(0.01));
  CHECK(countConfigs(img, 3, 1) == countConfigs(img, 3, 4));
}

TEST_CASE("orbits") {
  SymmetryGroup G = latticeSymmetries(Lattice::standard(2), true);
  CHECK(orbitOf(0, 2, G) == std::vector<std::uint32_t>{0});
  CHECK(orbitOf(1, 2, G) == std::vector<std::uint32_t>{1, 2, 4, 8});
  for (std::uint32_t l = 0; l < 512; l += 7) CHECK(G.order() % orbitOf(l, 3, G).size() == 0);
}

TEST_CASE("symmetry action permutes counts") {
  Lattice L = Lattice::standard(2).withSpacing(0.07).withPhase(Vec3(0.3, 0.6, 0));
  HalfspacePolytope P = HalfspacePolytope::fromVertices({Vec3(0, 0, 0), Vec3(1.2, 0.1, 0), Vec3(0.4, 0.9, 0)});
  BinaryImage img = digitize(P, L);
  SymmetryGroup G = latticeSymmetries(L, true);
  auto acts = windowActions(G, 3);
  CountVector c = countConfigs(img, 3);
  for (std::size_t k = 0; k < G.order(); ++k)
    CHECK(countConfigs(transformImage(img, G.elements[k]), 3).counts == permuteCounts(c, acts[k]).counts);
}

TEST_CASE("counts CSV round trip") {
  BinaryImage img = digitize(Ball{2, Vec3::Zero(), 0.5}, Lattice::standard(2).withSpacing(0.1));
  img.id = "disk";
  CountVector c = countConfigs(img, 2);
  auto path = (std::filesystem::temp_directory_path() / "vv_counts_test.csv").string();
  writeCountsCsv(c, path);
  CHECK(readCountsCsv(path) == c);
  std::filesystem::remove(path);
}

TEST_CASE("counting scales linearly") {
  auto timeAt = [](double a) {
    BinaryImage img = digitize(Ball{2, Vec3::Zero(), 1}, Lattice::standard(2).withSpacing(a));
    countConfigs(img, 2);
    auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < 5; ++k) countConfigs(img, 2);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  double t1 = timeAt(0.004), t2 = timeAt(0.002);
  CHECK(t2 / t1 <= 6);
}
