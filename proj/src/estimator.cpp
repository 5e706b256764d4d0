#include "vv/estimator.hpp"

#include <cmath>
#include <fstream>

namespace vv {

EstimateRecord estimateFromCounts(const CountVector& c, const WeightTable& T, double a) {
  if (T.n != c.n || T.dim != c.dim) throw Error("table window does not match the counts");
  if (T.w[0] != 0) throw Error("weight for l=0 must be zero");
  EstimateRecord r;
  r.tableId = T.id;
  r.a = a;
  Rational s = 0;
  for (std::uint32_t l = 1; l < T.size(); ++l)
    if (c.counts[l] && T.w[l] != 0) s += T.w[l] * Rational(BigInt(c.counts[l]));
  r.exactSum = s;
  r.value = toDouble(s) * (T.homogeneous ? std::pow(a, T.q) : 1.0);
  return r;
}

EstimateRecord estimate(const BinaryImage& img, const WeightTable& T, int threads) {
  if (T.dim != img.dim()) throw Error("table and image dimensions differ");
  if (img.foregroundMargin() < T.n - 1) throw Error("image margin too small for the table's window");
  auto counts = std::make_shared<CountVector>(countConfigs(img, T.n, threads));
  EstimateRecord r = estimateFromCounts(*counts, T, img.lattice().spacing);
  r.shapeId = img.id;
  r.phase = img.lattice().phase;
  r.counts = counts;
  return r;
}

double volumeEstimate(const BinaryImage& img) {
  const Lattice& L = img.lattice();
  return std::pow(L.spacing, L.dim) * unitCellVolume(L) * double(img.foregroundCount());
}

Lattice phaseFor(const Lattice& L, std::uint64_t seed, std::uint64_t i) {
  Rng g = makeStream(seed, i);
  return samplePhase(L, g);
}

DesignMean designMean(const Shape& S, const WeightTable* T, const Lattice& L, double a,
                      const DesignOptions& opt) {
  if (opt.numPhases < 2) throw Error("designMean needs at least 2 phases");
  const Lattice base = L.withSpacing(a);
  std::vector<EstimateRecord> rec(opt.numPhases);
  // Parallel over phases; each digitization and count runs single-threaded.
  parallelFor(std::size_t(opt.numPhases), opt.threads, [&](std::size_t i) {
    Lattice Li = opt.fixedPhase ? base.withPhase(Vec3::Zero()) : phaseFor(base, opt.seed, i);
    BinaryImage img = digitize(S, Li, opt.digitize);
    img.id = shapeKind(S);
    if (T) {
      rec[i] = estimate(img, *T);
      if (!opt.keepSamples) rec[i].counts.reset();
    } else {
      rec[i].value = volumeEstimate(img);
      rec[i].a = a;
      rec[i].phase = Li.phase;
      rec[i].tableId = "volume";
      rec[i].shapeId = img.id;
    }
  });
  DesignMean out;
  out.numPhases = opt.numPhases;
  double s = 0;
  out.min = out.max = rec[0].value;
  for (auto& r : rec) {
    s += r.value;
    out.min = std::min(out.min, r.value);
    out.max = std::max(out.max, r.value);
  }
  out.mean = s / opt.numPhases;
  // Constant samples: report them exactly instead of rounding noise.
  if (out.min == out.max) out.mean = out.min;
  double ss = 0;
  for (auto& r : rec) ss += (r.value - out.mean) * (r.value - out.mean);
  out.stderr_ = std::sqrt(ss / (opt.numPhases - 1)) / std::sqrt(double(opt.numPhases));
  if (opt.keepSamples) out.samples = std::move(rec);
  return out;
}

Extrapolation SweepResult::linearExtrapolation() const {
  if (rows.size() < 2) throw Error("extrapolation needs at least two sweep rows");
  // Weights 1/σ²; a tiny floor keeps exact (σ = 0) rows usable.
  double floor = 0;
  for (auto& r : rows) floor = std::max(floor, r.stderr_);
  floor = std::max(floor * 1e-6, 1e-300);
  double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
  for (auto& r : rows) {
    double sig = std::max(r.stderr_, floor), w = 1 / (sig * sig);
    S += w;
    Sx += w * r.a;
    Sy += w * r.mean;
    Sxx += w * r.a * r.a;
    Sxy += w * r.a * r.mean;
  }
  double det = S * Sxx - Sx * Sx;
  Extrapolation e;
  e.intercept = (Sxx * Sy - Sx * Sxy) / det;
  e.slope = (S * Sxy - Sx * Sy) / det;
  e.stderr_ = std::sqrt(Sxx / det);
  return e;
}

SweepResult multigridSweep(const Shape& S, const WeightTable* T, const Lattice& L,
                           const std::vector<double>& aList, const DesignOptions& opt) {
  if (aList.empty()) throw Error("empty a-list");
  for (std::size_t i = 0; i < aList.size(); ++i)
    if (!(aList[i] > 0) || (i && !(aList[i] < aList[i - 1])))
      throw Error("a-list must be positive and strictly decreasing");
  SweepResult out;
  out.shapeId = shapeKind(S);
  out.tableId = T ? T->id : "volume";
  for (std::size_t i = 0; i < aList.size(); ++i) {
    DesignOptions o = opt;
    o.seed = opt.seed + 1000003ull * i;
    DesignMean m = designMean(S, T, L, aList[i], o);
    out.rows.push_back({aList[i], m.mean, m.stderr_, m.numPhases});
  }
  return out;
}

std::vector<double> geometricSequence(double a0, int count, double factor) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(a0 * std::pow(factor, i));
  return out;
}

void writeSweepCsv(const SweepResult& r, const std::string& path) {
  if (r.rows.empty()) throw Error("no sweep rows to write");
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << "a,mean,stderr,numPhases,shape,table\n";
  for (auto& row : r.rows)
    f << fmt17(row.a) << "," << fmt17(row.mean) << "," << fmt17(row.stderr_) << "," << row.numPhases << ","
      << r.shapeId << "," << r.tableId << "\n";
}

}  // namespace vv
