#include <doctest.h>

#include "vv/configs.hpp"
#include "vv/weights.hpp"

#include <filesystem>
#include <fstream>

using namespace vv;

TEST_CASE("Euler weights n=2") {
  WeightTable T = eulerWeights(2, Lattice::standard(2));
  CHECK(T.w[1] == Rational(1, 4));
  CHECK(T.w[9] == Rational(-1, 2));
  CHECK(T.w[6] == Rational(-1, 2));
  CHECK(T.w[15] == 0);
  CHECK(T.w[0] == 0);
  auto nk = eulerNeighbourCounts(2);
  CHECK(nk[1] == std::vector<long long>{1, 3, 3, 1});
  CHECK(nk[9] == std::vector<long long>{1, 6, 6, 2});
  CHECK(nk[15] == std::vector<long long>{1, 8, 12, 4});
  CHECK(checkInvariance(T, latticeSymmetries(Lattice::standard(2), true)).invariant);
  CHECK_THROWS_AS(eulerWeights(5, Lattice::standard(2)), Error);
}

TEST_CASE("Euler weights n=3 and n=4 are invariant") {
  SymmetryGroup G = latticeSymmetries(Lattice::standard(2), true);
  for (int n : {3, 4}) {
    WeightTable T = eulerWeights(n, Lattice::standard(2));
    CHECK(T.size() == (1u << (n * n)));
    CHECK(checkInvariance(T, G).invariant);
    CHECK(T.w[T.size() - 1] == 0);
  }
}

TEST_CASE("symmetrize") {
  SymmetryGroup G = latticeSymmetries(Lattice::standard(2), true);
  WeightTable T = WeightTable::zeros(2, 2, 0);
  T.w[1] = 1;
  WeightTable S = symmetrize(T, G);
  for (std::uint32_t l : {1u, 2u, 4u, 8u}) CHECK(S.w[l] == Rational(1, 4));
  CHECK(symmetrize(S, G) == S);
  WeightTable E = eulerWeights(2, Lattice::standard(2));
  CHECK(symmetrize(E, G) == E);
  WeightTable bad = WeightTable::zeros(2, 2, 0);
  bad.w[1] = 1;
  bad.w[2] = 2;
  auto rep = checkInvariance(bad, G);
  CHECK_FALSE(rep.invariant);
  CHECK(rep.orbit == std::vector<std::uint32_t>{1, 2, 4, 8});
  CHECK(checkInvariance(WeightTable::zeros(2, 2, 0), G).invariant);
}

TEST_CASE("table files") {
  auto dir = std::filesystem::temp_directory_path();
  WeightTable T = eulerWeights(3, Lattice::standard(2));
  saveTable(T, (dir / "vv_t.vvwt").string());
  CHECK(loadTable((dir / "vv_t.vvwt").string()) == T);
  CHECK_THROWS_AS(parseTable("VVWT n=2 d=2 q=0 homogeneous=1\n0 1/2\n"), Error);
  CHECK_THROWS_AS(parseTable("VVWT n=2 d=2 q=0 homogeneous=1\n16 1\n"), Error);
  CHECK_THROWS_AS(parseTable("VWT n=2\n"), Error);
  WeightTable sparse = parseTable("VVWT n=2 d=2 q=1 homogeneous=1\n# note\n3 -2/6\n");
  CHECK(sparse.w[3] == Rational(-1, 3));
  CHECK(sparse.w[5] == 0);
  CHECK(sparse.q == 1);
  std::filesystem::remove(dir / "vv_t.vvwt");
}

TEST_CASE("shipped tables match their generator and are invariant") {
  for (auto& name : standardTableNames()) {
    CAPTURE(name);
    WeightTable shipped = standardTable(name);
    CHECK(shipped == buildStandardTable(name));
    CHECK(checkInvariance(shipped, latticeSymmetries(Lattice::standard(shipped.dim), true)).invariant);
    CHECK(shipped.w[0] == 0);
  }
  CHECK(standardTable("euler2d_n2") == eulerWeights(2, Lattice::standard(2)));
}

TEST_CASE("table specs") {
  CHECK(resolveTable("euler:2") == eulerWeights(2, Lattice::standard(2)));
  CHECK(resolveTable("zero:2,3,1").size() == 256);
  CHECK_THROWS_AS(resolveTable("no-such-table"), Error);
}
