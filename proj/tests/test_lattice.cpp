#include <doctest.h>

#include "vv/image.hpp"
#include "vv/keyvalue.hpp"

#include <cmath>
#include <filesystem>

using namespace vv;

namespace {
Mat3 cols2(double a, double b, double c, double d) {
  Mat3 B = Mat3::Identity();
  B(0, 0) = a, B(1, 0) = b, B(0, 1) = c, B(1, 1) = d;
  return B;
}
}  // namespace

TEST_CASE("unitCellVolume") {
  CHECK(unitCellVolume(Lattice::standard(2)) == doctest::Approx(1.0));
  CHECK(unitCellVolume(Lattice::fromBasis(2, cols2(2, 0, 0, 3))) == doctest::Approx(6.0));
  CHECK(unitCellVolume(Lattice::fromBasis(2, cols2(1, 0, 1, 1))) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Lattice::fromBasis(2, cols2(0, 1, 1, 0)), Error);  // negative orientation
}

TEST_CASE("samplePhase") {
  Lattice L = Lattice::standard(2);
  Rng a = makeStream(0, 0), b = makeStream(0, 0);
  CHECK(samplePhase(L, a).phase == samplePhase(L, b).phase);
  Rng g = makeStream(7, 0);
  Vec3 sum = Vec3::Zero();
  const int N = 10000;
  for (int i = 0; i < N; ++i) {
    Vec3 c = samplePhase(L, g).phase;
    for (int k = 0; k < 2; ++k) CHECK((c[k] >= 0 && c[k] < 1));
    sum += c;
  }
  CHECK(std::abs(sum[0] / N - 0.5) < 0.02);
  CHECK(std::abs(sum[1] / N - 0.5) < 0.02);
}

TEST_CASE("latticeSymmetries") {
  SymmetryGroup g2 = latticeSymmetries(Lattice::standard(2), true);
  CHECK(g2.order() == 8);
  CHECK(isClosedGroup(g2));
  SymmetryGroup g3 = latticeSymmetries(Lattice::standard(3), false);
  CHECK(g3.order() == 24);
  CHECK(isClosedGroup(g3));
  CHECK(latticeSymmetries(Lattice::standard(3), true).order() == 48);
  SymmetryGroup sh = latticeSymmetries(Lattice::fromBasis(2, cols2(1, 0, 0.37, 1.21)), true);
  CHECK(sh.order() == 2);
  CHECK(isClosedGroup(sh));
  // Hexagonal lattice: dihedral group of order 12.
  SymmetryGroup hex = latticeSymmetries(Lattice::fromBasis(2, cols2(1, 0, 0.5, std::sqrt(3.0) / 2)), true);
  CHECK(hex.order() == 12);
  CHECK(isClosedGroup(hex));
}

TEST_CASE("digitize examples") {
  Lattice L = Lattice::standard(2).withSpacing(0.5);
  HalfspacePolytope sq = HalfspacePolytope::fromVertices({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)});
  BinaryImage img = digitize(sq, L);
  CHECK(img.foregroundCount() == 9);
  CHECK(img.foregroundMargin() >= 4);
  CHECK(digitize(EmptyShape{2}, L).foregroundCount() == 0);
  BinaryImage disk = digitize(Ball{2, Vec3::Zero(), 1.0}, Lattice::standard(2).withSpacing(0.01));
  CHECK(std::abs(disk.foregroundCount() * 1e-4 - kPi) < 0.05);
}

TEST_CASE("digitize matches contains and is translation covariant") {
  Lattice L = Lattice::fromBasis(2, cols2(1, 0.1, -0.2, 0.9)).withSpacing(0.13).withPhase(Vec3(0.3, 0.8, 0));
  Ball b{2, Vec3(0.2, -0.1, 0), 0.9};
  BinaryImage img = digitize(b, L);
  auto e = img.extent();
  auto o = img.origin();
  for (int y = 0; y < e[1]; ++y)
    for (int x = 0; x < e[0]; ++x)
      CHECK(img.get(x, y) == contains(b, L.sample(Vec3(double(o[0] + x), double(o[1] + y), 0))));
  // Shift by a lattice vector: same pattern, origin moved.
  Ball b2 = b;
  b2.center += L.spacing * L.vec(Vec3(3, -2, 0));
  BinaryImage img2 = digitize(b2, L);
  CHECK(img2.foregroundCount() == img.foregroundCount());
  CHECK(img2.origin()[0] == o[0] + 3);
  CHECK(img2.origin()[1] == o[1] - 2);
  for (int y = 0; y < e[1]; ++y)
    for (int x = 0; x < e[0]; ++x) CHECK(img2.get(x, y) == img.get(x, y));
}

TEST_CASE("digitize size cap") {
  DigitizeOptions o;
  o.maxSamples = 1000;
  CHECK_THROWS_AS(digitize(Ball{2, Vec3::Zero(), 1.0}, Lattice::standard(2).withSpacing(0.01), o), Error);
}

TEST_CASE("image files round trip") {
  Lattice L = Lattice::fromBasis(3, eulerRotation(0.1, 0.2, 0.3)).withSpacing(0.2).withPhase(Vec3(0.1, 0.2, 0.3));
  BinaryImage img = digitize(Ball{3, Vec3::Zero(), 0.7}, L);
  auto path = (std::filesystem::temp_directory_path() / "vv_test_img.vvimg").string();
  writeImage(img, path);
  BinaryImage back = readImage(path);
  CHECK(back.extent() == img.extent());
  CHECK(back.origin() == img.origin());
  CHECK(back.foregroundCount() == img.foregroundCount());
  CHECK(back.lattice().spacing == img.lattice().spacing);
  CHECK((back.lattice().basis - img.lattice().basis).norm() == 0);
  std::filesystem::remove(path);
}

TEST_CASE("key-value settings") {
  KeyValue kv = KeyValue::parse("# c\nkind = \"polygon\"\nvertices = [0,0; 1,0; 0,1]\n[lattice]\nspacing = 0.5\n");
  CHECK(kv.getString("kind") == "polygon");
  CHECK(kv.getPoints("vertices").size() == 3);
  CHECK(kv.getDouble("lattice.spacing") == 0.5);
  CHECK(kv.section("lattice").count("spacing") == 1);
  CHECK_THROWS_AS(kv.getDouble("missing"), Error);
}

TEST_CASE("exact rationals") {
  CHECK(parseRational("3/6") == Rational(1, 2));
  CHECK(parseRational("-0.25") == Rational(-1, 4));
  CHECK(parseRational("1e-3") == Rational(1, 1000));
  CHECK(formatRational(Rational(-3, 4)) == "-3/4");
  CHECK(parseRational(formatRational(Rational(22, 7))) == Rational(22, 7));
}
