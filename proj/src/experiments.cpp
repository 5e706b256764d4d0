#include "vv/experiments.hpp"

#include "vv/analytic.hpp"
#include "vv/estimator.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace vv {

// ------------------------------------------------------------------ tables

void ResultTable::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("result row has the wrong number of cells");
  rows.push_back(std::move(row));
}

double ResultTable::number(std::size_t row, const std::string& column) const {
  auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw Error("no column '" + column + "'");
  const Cell& c = rows.at(row)[it - columns.begin()];
  if (auto* d = std::get_if<double>(&c)) return *d;
  if (auto* i = std::get_if<long long>(&c)) return double(*i);
  return NAN;
}

namespace {

std::string cellText(const Cell& c) {
  if (auto* d = std::get_if<double>(&c)) return fmt17(*d);
  if (auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void writeText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

}  // namespace

std::string csvText(const ResultTable& t) {
  if (t.rows.empty()) throw Error("empty result set");
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cellText(r[i]);
    os << '\n';
  }
  return os.str();
}

void emitCsv(const ResultTable& t, const std::string& path) { writeText(path, csvText(t)); }

std::string svgText(const ResultTable& t, const PlotSpec& p) {
  if (t.rows.empty() || p.y.empty()) throw Error("empty result set");
  const double W = 640, H = 400, ml = 70, mr = 20, mt = 40, mb = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto grow = [](double& lo, double& hi, double v) {
    if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
  };
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    grow(x0, x1, t.number(r, p.x));
    for (auto& c : p.y) {
      double v = t.number(r, c), e = p.error.empty() ? 0 : t.number(r, p.error);
      grow(y0, y1, v - e);
      grow(y0, y1, v + e);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return std::string(b);
  };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H << "\" width=\"" << W
     << "\" height=\"" << H << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << p.title
     << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    os << "<text x=\"" << X(xv) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << num(xv) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
       << num(yv) << "</text>\n";
  }
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << p.x << "</text>\n";
  for (std::size_t s = 0; s < p.y.size(); ++s) {
    const char* col = colors[s % 4];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      double xv = t.number(r, p.x), yv = t.number(r, p.y[s]);
      if (std::isfinite(xv) && std::isfinite(yv)) os << num(X(xv)) << ',' << num(Y(yv)) << ' ';
    }
    os << "\"/>\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      double xv = t.number(r, p.x), yv = t.number(r, p.y[s]);
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      os << "<circle cx=\"" << num(X(xv)) << "\" cy=\"" << num(Y(yv)) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
      if (s == 0 && !p.error.empty()) {
        double e = t.number(r, p.error);
        os << "<line x1=\"" << num(X(xv)) << "\" y1=\"" << num(Y(yv - e)) << "\" x2=\"" << num(X(xv))
           << "\" y2=\"" << num(Y(yv + e)) << "\" stroke=\"" << col << "\"/>\n";
      }
    }
    os << "<text x=\"" << W - mr - 4 << "\" y=\"" << mt + 14 * (s + 1) << "\" text-anchor=\"end\" fill=\"" << col
       << "\" font-size=\"12\">" << p.y[s] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emitSvg(const ResultTable& t, const PlotSpec& p, const std::string& path) {
  writeText(path, svgText(t, p));
}

bool ScenarioResult::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Lattice latticeFromConfig(const std::map<std::string, std::string>& kvm, int defaultDim) {
  KeyValue kv(kvm);
  int d = int(kv.getInt("dim", defaultDim));
  if (d != 2 && d != 3) throw Error("lattice dim must be 2 or 3");
  Mat3 B = Mat3::Identity();
  if (kv.has("basis")) {
    auto v = kv.getDoubles("basis");
    if (int(v.size()) != d * d) throw Error("lattice basis needs d*d row-major entries");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) B(i, j) = v[i * d + j];
  }
  if (d == 2 && kv.has("rotate_deg")) B = rotation2d(deg(kv.getDouble("rotate_deg"))) * B;
  if (d == 3 && kv.has("euler_deg")) {
    Vec3 e = kv.getVec("euler_deg", Vec3::Zero());
    B = eulerRotation(deg(e[0]), deg(e[1]), deg(e[2])) * B;
  }
  return Lattice::fromBasis(d, B, kv.getDouble("spacing", 1.0));
}

// --------------------------------------------------------------- scenarios

namespace {

struct Ctx {
  const ScenarioConfig& cfg;
  std::uint64_t seed;
  const KeyValue& kv;

  double tol(const std::string& name, double dflt) const { return kv.getDouble("tol." + name, dflt); }
  DesignOptions design(int phases, std::uint64_t salt = 0) const {
    DesignOptions o;
    o.numPhases = int(kv.getInt("phases", phases));
    o.seed = seed + salt;
    o.threads = cfg.threads;
    o.digitize.threads = 1;
    return o;
  }
};

std::string g17(double x) { return fmt17(x); }

Check check(std::string name, bool pass, std::string detail) { return {std::move(name), pass, std::move(detail)}; }

HalfspacePolytope polygon(const std::vector<Vec3>& v) { return HalfspacePolytope::fromVertices(v); }

/// Unit square centred at the origin, rotated by `angle`.
HalfspacePolytope rotatedSquare(double angle, double side = 1) {
  Mat3 R = rotation2d(angle);
  std::vector<Vec3> v;
  for (auto [x, y] : {std::pair{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}})
    v.push_back(R * Vec3(side * x, side * y, 0));
  return polygon(v);
}

HalfspacePolytope unitSquare() { return polygon({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)}); }

/// Jittered convex polygon around the origin with 4 to 7 vertices and
/// interior angles of at least 50°.
HalfspacePolytope randomPolygon(Rng& g) {
  for (;;) {
    int k = 4 + int(uniform01(g) * 4);
    double rot = 2 * kPi * uniform01(g);
    std::vector<Vec3> v;
    for (int i = 0; i < k; ++i) {
      double t = rot + 2 * kPi * (i + 0.6 * (uniform01(g) - 0.5)) / k;
      double r = 0.8 + 0.4 * uniform01(g);
      v.push_back(Vec3(r * std::cos(t), r * std::sin(t), 0));
    }
    try {
      HalfspacePolytope P = polygon(v);
      if (P.size() != std::size_t(k)) continue;
      bool ok = true;
      for (std::size_t i = 0; i < P.size(); ++i) ok = ok && P.interiorAngle(i) > deg(50);
      if (ok) return P;
    } catch (const Error&) {
    }
  }
}

Shape overrideShape(const Ctx& c, Shape dflt) {
  auto sec = c.kv.section("shape");
  return sec.count("kind") ? shapeFromConfig(sec) : dflt;
}

Lattice overrideLattice(const Ctx& c, int dim, Lattice dflt) {
  auto sec = c.kv.section("lattice");
  return sec.empty() ? dflt : latticeFromConfig(sec, dim);
}

// ---- volume-unbiased

ScenarioResult volumeUnbiased(const Ctx& c) {
  ScenarioResult r;
  Shape S = overrideShape(c, rotatedSquare(deg(20)));
  Lattice L = overrideLattice(c, 2, Lattice::standard(2));
  double a = c.kv.getDouble("a", 0.05);
  DesignMean m = designMean(S, nullptr, L, a, c.design(2000));
  double V = intrinsicVolumes(S).back();
  r.table.columns = {"a", "mean", "stderr", "numPhases", "shape", "table", "volume"};
  r.table.add({a, m.mean, m.stderr_, (long long)m.numPhases, shapeKind(S), std::string("volume"), V});
  double k = c.tol("sigmas", 4), se = c.tol("max_stderr", 0.01);
  r.checks.push_back(check("mean within " + g17(k) + " stderr of the volume", std::abs(m.mean - V) <= k * m.stderr_,
                           "mean " + g17(m.mean) + " volume " + g17(V) + " stderr " + g17(m.stderr_)));
  r.checks.push_back(check("stderr below " + g17(se), m.stderr_ < se, "stderr " + g17(m.stderr_)));
  return r;
}

// ---- euler-exactness

ScenarioResult eulerExactness(const Ctx& c) {
  ScenarioResult r;
  r.table.columns = {"shape", "n", "a", "numPhases", "exact_ones", "min", "max", "mean", "stderr"};
  Lattice L = Lattice::standard(2);
  double a = c.kv.getDouble("a", 0.02);
  std::vector<std::pair<std::string, Shape>> shapes = {{"disk", Ball{2, Vec3::Zero(), 1.0}},
                                                       {"square20", rotatedSquare(deg(20))}};
  for (auto& [name, S] : shapes)
    for (int n : {2, 3}) {
      WeightTable T = eulerWeights(n, L);
      DesignOptions o = c.design(200, 17 * n);
      o.keepSamples = true;
      DesignMean m = designMean(S, &T, L, a, o);
      long long ones = 0;
      for (auto& s : m.samples) ones += s.exactSum == 1;
      r.table.add({name, (long long)n, a, (long long)m.numPhases, ones, m.min, m.max, m.mean, m.stderr_});
      r.checks.push_back(check(name + " n=" + std::to_string(n) + ": every estimate equals 1 exactly",
                               ones == m.numPhases,
                               std::to_string(ones) + "/" + std::to_string(m.numPhases) + " exact, range [" +
                                   g17(m.min) + ", " + g17(m.max) + "]"));
    }
  return r;
}

// ---- euler-weights

/// Independent n = 2 oracle: enumerate all subsets of the 8 neighbour windows.
std::vector<Rational> bruteEuler2() {
  std::vector<Eigen::Vector2i> zs;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      if (x || y) zs.push_back({x, y});
  auto inWindow = [](int px, int py, const Eigen::Vector2i& z) {
    return px >= z[0] && px <= z[0] + 1 && py >= z[1] && py <= z[1] + 1;
  };
  std::vector<Rational> w(16, 0);
  for (unsigned l = 1; l < 16; ++l) {
    std::vector<long long> nk(9, 0);
    for (unsigned S = 0; S < 256; ++S) {
      bool meet = false;
      for (int j = 0; j < 4 && !meet; ++j) {
        if (!((l >> j) & 1)) continue;
        int px = j & 1, py = j >> 1;
        bool all = true;
        for (int i = 0; i < 8; ++i)
          if ((S >> i) & 1) all = all && inWindow(px, py, zs[i]);
        meet = all;
      }
      if (meet) nk[std::popcount(S)]++;
    }
    for (int k = 1; k <= 4; ++k) w[l] += Rational(k % 2 ? 1 : -1, k) * nk[k - 1];
  }
  return w;
}

ScenarioResult eulerWeightsScenario(const Ctx&) {
  ScenarioResult r;
  WeightTable T = eulerWeights(2, Lattice::standard(2));
  auto oracle = bruteEuler2();
  r.table.columns = {"l", "black", "weight", "oracle"};
  bool all = true;
  for (std::uint32_t l = 0; l < 16; ++l) {
    r.table.add({(long long)l, (long long)std::popcount(l), formatRational(T.w[l]), formatRational(oracle[l])});
    all = all && T.w[l] == oracle[l];
  }
  r.checks.push_back(check("single black l=1 is 1/4", T.w[1] == Rational(1, 4), formatRational(T.w[1])));
  r.checks.push_back(check("diagonal l=9 is -1/2", T.w[9] == Rational(-1, 2), formatRational(T.w[9])));
  r.checks.push_back(check("all black l=15 is 0", T.w[15] == 0, formatRational(T.w[15])));
  r.checks.push_back(check("three black l=7 matches the subset enumeration", T.w[7] == oracle[7],
                           formatRational(T.w[7]) + " vs " + formatRational(oracle[7])));
  r.checks.push_back(check("whole n=2 table matches the subset enumeration", all, ""));
  return r;
}

// ---- count-validate

ScenarioResult countValidate(const Ctx& c) {
  ScenarioResult r;
  r.table.columns = {"case", "kind", "dim", "n", "a", "foreground", "windows", "touched", "counts_match"};
  int cases = int(c.kv.getInt("cases", 50));
  int bad = 0, badTotal = 0;
  for (int i = 0; i < cases; ++i) {
    Rng g = makeStream(c.seed, i);
    Shape S;
    Lattice L;
    int n = 2;
    auto u = [&] { return uniform01(g); };
    switch (i % 5) {
      case 0:
        S = Ball{2, Vec3(u(), u(), 0), 0.5 + u()};
        break;
      case 1:
        S = randomPolygon(g);
        break;
      case 2:
        S = RoundedPolytope{randomPolygon(g), 0.1 + 0.3 * u()};
        break;
      case 3: {
        Box b;
        b.dim = i % 2 ? 3 : 2;
        b.rotation = b.dim == 3 ? eulerRotation(u() * 6, u() * 6, u() * 6) : rotation2d(u() * 6);
        b.sides = Vec3(0.5 + u(), 0.5 + u(), b.dim == 3 ? 0.5 + u() : 1);
        S = b;
        break;
      }
      default:
        if (i % 2) S = Ball{3, Vec3(u(), u(), u()), 0.5 + 0.5 * u()};
        else S = RevolutionBody{1, 0.2 + 0.6 * u(), 0.3 + 2.5 * u(), Vec3::Zero()};
    }
    const int d = shapeDim(S);
    if (d == 2) {
      Mat3 B = Mat3::Identity();
      B(0, 1) = u() - 0.5;
      B(1, 1) = 0.8 + 0.4 * u();
      L = Lattice::fromBasis(2, rotation2d(u() * 6) * B);
      n = 2 + int(u() * 3);
      L = L.withSpacing(0.05 + 0.1 * u());
    } else {
      Mat3 B = eulerRotation(u() * 6, u() * 6, u() * 6);
      B.col(2) += 0.3 * (u() - 0.5) * B.col(0);
      L = Lattice::fromBasis(3, B).withSpacing(0.12 + 0.1 * u());
    }
    Rng pg = makeStream(c.seed + 1, i);
    L = samplePhase(L, pg);
    BinaryImage img = digitize(S, L);
    CountVector fast = countConfigs(img, n, c.cfg.threads);
    CountVector oracle = hitOrMissCounts(S, L, n);
    std::uint64_t touched = touchedWindowCount(img, n);
    bool match = fast.counts == oracle.counts;
    bad += !match;
    badTotal += fast.nonzeroTotal() != touched;
    r.table.add({(long long)i, shapeKind(S), (long long)d, (long long)n, L.spacing,
                 (long long)img.foregroundCount(), (long long)fast.nonzeroTotal(), (long long)touched,
                 (long long)match});
  }
  r.checks.push_back(check("countConfigs equals hitOrMissCount on every case", bad == 0,
                           std::to_string(cases - bad) + "/" + std::to_string(cases) + " match"));
  r.checks.push_back(check("sum of counts equals the touched-window count", badTotal == 0,
                           std::to_string(badTotal) + " mismatches"));
  return r;
}

// ---- polygon-two-path

ScenarioResult polygonTwoPath(const Ctx& c) {
  ScenarioResult r;
  r.table.columns = {"polygon", "vertices", "table", "a", "a_max", "regions", "closed_form", "abs_diff",
                     "mc_mean", "mc_stderr"};
  Lattice L = Lattice::standard(2);
  std::vector<WeightTable> tables = {eulerWeights(2, L), standardTable("perimeter2d"), eulerWeights(3, L)};
  int count = int(c.kv.getInt("polygons", 10));
  double tolPath = c.tol("two_path", 1e-10), k = c.tol("sigmas", 3), floor = c.tol("mc_floor", 1e-9);
  int pathBad = 0, mcBad = 0;
  double worst = 0;
  for (int i = 0; i < count; ++i) {
    Rng g = makeStream(c.seed, i);
    HalfspacePolytope P = randomPolygon(g);
    for (std::size_t t = 0; t < tables.size(); ++t) {
      const WeightTable& T = tables[t];
      double a = polygonValidityThreshold(P, T.n, L) / 2;
      double A = expectedEstimate(polygonExpectedCounts(P, T.n, L, a), T, a);
      double B = polygonExpectedEstimate(P, T, L, a).value;
      double diff = std::abs(A - B);
      worst = std::max(worst, diff / std::max(1.0, std::abs(A)));
      pathBad += diff > tolPath * std::max(1.0, std::abs(A));
      DesignMean m = designMean(P, &T, L, a, c.design(500, 1000 * (i + 1) + t));
      bool mcOk = std::abs(m.mean - A) <= k * m.stderr_ + floor;
      mcBad += !mcOk;
      r.table.add({(long long)i, (long long)P.size(), T.id, a, 2 * a, A, B, diff, m.mean, m.stderr_});
    }
  }
  std::string cases = std::to_string(count * tables.size());
  r.checks.push_back(check("region path and closed form agree within " + g17(tolPath), pathBad == 0,
                           std::to_string(pathBad) + "/" + cases + " disagree, worst relative " + g17(worst)));
  r.checks.push_back(check("expectation matches designMean within " + g17(k) + " stderr", mcBad == 0,
                           std::to_string(mcBad) + "/" + cases + " outside"));
  return r;
}

// ---- euler-blowup

ScenarioResult eulerBlowup(const Ctx& c) {
  ScenarioResult r;
  r.table.columns = {"kind", "phi_deg", "psi_deg", "a", "value", "stderr", "numPhases"};
  Lattice L = Lattice::standard(2);
  WeightTable T = standardTable(c.kv.getString("table", "euler2d_n2"));
  const double phi = c.kv.getDouble("phi_deg", 4);
  auto psis = c.kv.getDoubles("psi_deg", {16, 8, 4, 2});
  ResultTable plot;
  plot.columns = {"psi_deg", "limit", "abs_bias"};
  std::vector<double> bias;
  for (double psi : psis) {
    LimitReport lr = parallelogramLimit(T, deg(phi), deg(psi), L);
    bias.push_back(std::abs(lr.value - 1));
    r.table.add({std::string("limit"), phi, psi, 0.0, lr.value, 0.0, 0LL});
    plot.add({psi, lr.value, bias.back()});
  }
  bool increasing = true;
  for (std::size_t i = 1; i < bias.size(); ++i) increasing = increasing && bias[i] > bias[i - 1];
  std::string bs;
  for (double b : bias) bs += (bs.empty() ? "" : ", ") + g17(b);
  r.checks.push_back(check("|limit - 1| strictly increases as psi shrinks", increasing, bs));
  r.checks.push_back(check("|limit - 1| > 1 at the smallest psi", bias.back() > c.tol("blowup", 1.0),
                           g17(bias.back())));

  // Sweep on P(φ, 8°) against its limit.
  const double psiS = c.kv.getDouble("sweep_psi_deg", 8);
  HalfspacePolytope P = Parallelogram2D{deg(phi), deg(psiS), 1, 1, Vec3::Zero()}.toPolytope();
  double lim = parallelogramLimit(T, deg(phi), deg(psiS), L).value;
  SweepResult sw = multigridSweep(P, &T, L, c.kv.getDoubles("a", {0.008, 0.004, 0.002}), c.design(500));
  for (auto& row : sw.rows)
    r.table.add({std::string("sweep"), phi, psiS, row.a, row.mean, row.stderr_, (long long)row.numPhases});
  Extrapolation ex = sw.linearExtrapolation();
  r.table.add({std::string("extrapolation"), phi, psiS, 0.0, ex.intercept, ex.stderr_, 0LL});
  double k = c.tol("sigmas", 2);
  r.checks.push_back(check("sweep extrapolation matches the limit within " + g17(k) + " stderr",
                           std::abs(ex.intercept - lim) <= k * ex.stderr_,
                           "extrapolated " + g17(ex.intercept) + " +- " + g17(ex.stderr_) + ", limit " + g17(lim)));

  // P(φ, 4°) at a = 0.002: exact region expectation against the design mean.
  const double psiE = c.kv.getDouble("exact_psi_deg", 4), aE = c.kv.getDouble("exact_a", 0.002);
  HalfspacePolytope P4 = Parallelogram2D{deg(phi), deg(psiE), 1, 1, Vec3::Zero()}.toPolytope();
  double E = expectedEstimate(polygonExpectedCounts(P4, T.n, L, aE, {true}), T, aE);
  DesignMean m = designMean(P4, &T, L, aE, c.design(500, 7));
  r.table.add({std::string("expected"), phi, psiE, aE, E, 0.0, 0LL});
  r.table.add({std::string("design"), phi, psiE, aE, m.mean, m.stderr_, (long long)m.numPhases});
  r.checks.push_back(check("P(4,4) expectation differs from 1 and matches designMean within 3 stderr",
                           std::abs(E - 1) > 0.01 && std::abs(m.mean - E) <= 3 * m.stderr_,
                           "expected " + g17(E) + ", design " + g17(m.mean) + " +- " + g17(m.stderr_)));
  r.plot = {"Euler limit on P(" + g17(phi) + " deg, psi)", "psi_deg", {"limit"}, ""};
  r.plotData = plot;
  return r;
}

// ---- kr-crosscheck

ScenarioResult krCrosscheck(const Ctx& c) {
  ScenarioResult r;
  r.table.columns = {"case", "shape", "table", "a", "limit", "mean", "stderr", "numPhases", "target"};
  Lattice L = Lattice::standard(2);
  double a = c.kv.getDouble("a", 0.005);

  WeightTable per = standardTable("perimeter2d");
  Ball disk{2, Vec3::Zero(), 1.0};
  LimitReport lim = surfaceAreaLimitRegular(disk, per, L);
  DesignMean m = designMean(disk, &per, L, a, c.design(200));
  double rel = std::abs(m.mean / lim.value - 1);
  r.table.add({std::string("perimeter"), std::string("disk"), per.id, a, lim.value, m.mean, m.stderr_,
               (long long)m.numPhases, 2 * kPi});
  double tolRel = c.tol("relative", 0.01);
  r.checks.push_back(check("disk perimeter limit matches designMean within " + g17(100 * tolRel) + "%",
                           rel <= tolRel, "limit " + g17(lim.value) + " mean " + g17(m.mean) + " relative " + g17(rel)));

  WeightTable edge = patternTable(2, 2, 1, {0}, {1});
  edge.id = "edge_x0_x1";
  HalfspacePolytope sq = unitSquare();
  LimitReport le = surfaceAreaLimitPolytope(sq, edge, L);
  DesignMean me = designMean(sq, &edge, L, a, c.design(200, 1));
  r.table.add({std::string("edge"), std::string("unit_square"), edge.id, a, le.value, me.mean, me.stderr_,
               (long long)me.numPhases, 1.0});
  r.checks.push_back(check("edge detector limit on the unit square is 1 within 1e-8",
                           std::abs(le.value - 1) <= c.tol("quadrature", 1e-8), g17(le.value)));
  r.checks.push_back(check("edge detector matches designMean within 3 stderr",
                           std::abs(me.mean - le.value) <= 3 * me.stderr_ + 1e-12,
                           "mean " + g17(me.mean) + " +- " + g17(me.stderr_)));

  LimitReport ld = surfaceAreaLimitRegular(disk, edge, L);
  r.table.add({std::string("edge"), std::string("disk"), edge.id, 0.0, ld.value, 0.0, 0.0, 0LL, 2.0});
  r.checks.push_back(check("edge detector limit on the unit disk is 2 within 1e-8", std::abs(ld.value - 2) <= 1e-8,
                           g17(ld.value)));
  return r;
}

// ---- box-rotation-bias

ScenarioResult boxRotationBias(const Ctx& c) {
  ScenarioResult r;
  r.table.columns = {"rotation", "angle_deg", "limit", "perimeter", "relative_bias"};
  Lattice L = Lattice::standard(2);
  WeightTable T = standardTable(c.kv.getString("table", "perimeter2d"));
  int count = int(c.kv.getInt("rotations", 20));
  double thr = c.tol("bias", 1e-3);
  int biased = 0;
  Rng g = makeStream(c.seed, 0);
  for (int i = 0; i < count; ++i) {
    double ang = 2 * kPi * uniform01(g);
    HalfspacePolytope sq = rotatedSquare(ang);
    double lim = surfaceAreaLimitPolytope(sq, T, L).value;
    double per = 2 * intrinsicVolumes(sq)[1];
    double b = std::abs(lim / per - 1);
    biased += b > thr;
    r.table.add({(long long)i, ang * 180 / kPi, lim, per, b});
  }
  int need = int(c.kv.getInt("min_biased", 19));
  r.checks.push_back(check("relative bias above " + g17(thr) + " for at least " + std::to_string(need) + " of " +
                               std::to_string(count) + " rotations",
                           biased >= need, std::to_string(biased) + " biased"));
  r.plot = {"Relative perimeter bias of rotated unit squares", "angle_deg", {"relative_bias"}, ""};
  // Sorted by angle for the plot.
  r.plotData.columns = r.table.columns;
  r.plotData.rows = r.table.rows;
  std::sort(r.plotData.rows.begin(), r.plotData.rows.end(),
            [](auto& x, auto& y) { return std::get<double>(x[1]) < std::get<double>(y[1]); });
  return r;
}

// ---- meancurv-crosscheck / musthold-residual

Lattice rotatedZ3(const Ctx& c) {
  return overrideLattice(c, 3, Lattice::fromBasis(3, eulerRotation(deg(17), deg(11), deg(7))));
}

ScenarioResult meancurvCrosscheck(const Ctx& c) {
  ScenarioResult r;
  r.table.columns = {"quantity", "value", "stderr", "reference"};
  Lattice L = rotatedZ3(c);
  WeightTable T = standardTable(c.kv.getString("table", "meancurv3d"));
  RevolutionBody X{c.kv.getDouble("R", 1), c.kv.getDouble("r", 0.3), c.kv.getDouble("theta", kPi / 3),
                   Vec3::Zero()};
  LimitReport lim = meanCurvatureLimitRevolution(X, T, L);
  double a = c.kv.getDouble("a", 0.01);
  DesignMean m = designMean(X, &T, L, a, c.design(50));
  double V1 = revolutionV1Closed(X);
  r.table.add({std::string("I1"), lim.term("I1"), 0.0, V1});
  r.table.add({std::string("I3"), lim.term("I3"), 0.0, V1});
  r.table.add({std::string("limit"), lim.value, lim.quadratureError, V1});
  r.table.add({std::string("design_mean_a" + g17(a)), m.mean, m.stderr_, lim.value});
  double rel = std::abs(m.mean / lim.value - 1), tolRel = c.tol("relative", 0.03);
  r.checks.push_back(check("limit matches designMean within " + g17(100 * tolRel) + "%", rel <= tolRel,
                           "limit " + g17(lim.value) + " mean " + g17(m.mean) + " +- " + g17(m.stderr_)));
  r.checks.push_back(check("limit equals I1 + I3 within 1e-12",
                           std::abs(lim.value - lim.term("I1") - lim.term("I3")) < 1e-12, ""));
  RevolutionBody ball{1, 1, X.theta, Vec3::Zero()};
  double v1 = intrinsicVolumes(ball)[1];
  r.table.add({std::string("trueV1_R1_r1"), v1, 0.0, 4.0});
  r.checks.push_back(check("V1 of X(1,1) is 4 within 1e-6", std::abs(v1 - 4) <= 1e-6, g17(v1)));
  return r;
}

ScenarioResult mustholdScenario(const Ctx& c) {
  ScenarioResult r;
  r.table.columns = {"theta", "lhs", "rhs", "residual", "error_bound"};
  Lattice L = rotatedZ3(c);
  WeightTable T = standardTable(c.kv.getString("table", "meancurv3d"));
  int N = int(c.kv.getInt("grid", 32));
  std::vector<double> grid;
  for (int k = 0; k < N; ++k) grid.push_back((k + 0.5) * kPi / N);
  auto pts = mustholdResidual(T, L, grid);
  double maxRes = 0, maxErr = 0, maxJump = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& p = pts[i];
    r.table.add({p.theta, p.lhs, p.rhs, p.residual, p.errorBound});
    maxRes = std::max(maxRes, std::abs(p.residual));
    maxErr = std::max(maxErr, p.errorBound);
    if (i) maxJump = std::max(maxJump, std::abs(p.residual - pts[i - 1].residual));
  }
  r.checks.push_back(check("max |residual| exceeds 10x the quadrature error bound", maxRes > 10 * maxErr,
                           "max residual " + g17(maxRes) + ", max error bound " + g17(maxErr)));
  double h = kPi / N;
  r.checks.push_back(check("adjacent residuals differ by less than 10x the grid spacing", maxJump < 10 * h,
                           "max jump " + g17(maxJump) + ", spacing " + g17(h)));
  auto zero = mustholdResidual(WeightTable::zeros(2, 3, 1), L, {grid.front(), grid.back()});
  bool zeroOk = true;
  for (auto& p : zero) zeroOk = zeroOk && p.residual == -p.rhs;
  r.checks.push_back(check("zero table residual is -rhs", zeroOk, ""));
  r.plot = {"Residual of the mean-curvature identity", "theta", {"residual"}, ""};
  return r;
}

// ---- symmetrize-check

Rational randomRational(Rng& g) {
  return Rational(long(uniform01(g) * 41) - 20, 1 + long(uniform01(g) * 12));
}

ScenarioResult symmetrizeCheck(const Ctx& c) {
  ScenarioResult r;
  r.table.columns = {"case", "dim", "n", "group_order", "table_invariant", "idempotent", "images",
                     "all_elements_equal"};
  struct Case {
    int dim, n;
  };
  const std::vector<Case> cases = {{2, 2}, {2, 3}, {3, 2}};
  int imagesPer = int(c.kv.getInt("images", 10));
  bool allInv = true, allEq = true, allIdem = true;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    auto [d, n] = cases[ci];
    Lattice L = Lattice::standard(d);
    SymmetryGroup G = latticeSymmetries(L, true);
    Rng g = makeStream(c.seed, ci);
    WeightTable T = WeightTable::zeros(n, d, d == 2 ? 1 : 2, "random");
    for (std::uint32_t l = 1; l < T.size(); ++l) T.w[l] = randomRational(g);
    WeightTable S = symmetrize(T, G);
    bool inv = checkInvariance(S, G).invariant;
    bool idem = symmetrize(S, G) == S;
    bool eq = true;
    for (int im = 0; im < imagesPer; ++im) {
      int side = d == 2 ? 24 : 10;
      std::array<int, 3> ext{side + 8, side + 8, d == 3 ? side + 8 : 1};
      BinaryImage img(L.withSpacing(0.1), ext, {0, 0, 0});
      double p = 0.2 + 0.6 * uniform01(g);
      for (int z = d == 3 ? 4 : 0; z < (d == 3 ? side + 4 : 1); ++z)
        for (int y = 4; y < side + 4; ++y)
          for (int x = 4; x < side + 4; ++x) img.set(x, y, z, uniform01(g) < p);
      Rational ref = estimate(img, S).exactSum;
      for (auto& M : G.elements) eq = eq && estimate(transformImage(img, M), S).exactSum == ref;
    }
    allInv = allInv && inv;
    allEq = allEq && eq;
    allIdem = allIdem && idem;
    r.table.add({(long long)ci, (long long)d, (long long)n, (long long)G.elements.size(), (long long)inv,
                 (long long)idem, (long long)imagesPer, (long long)eq});
  }
  r.checks.push_back(check("symmetrized tables pass checkInvariance", allInv, ""));
  r.checks.push_back(check("symmetrize is idempotent", allIdem, ""));
  r.checks.push_back(check("estimates agree exactly on every symmetry-transformed image", allEq, ""));
  bool shipped = true;
  std::string bad;
  for (auto& name : standardTableNames()) {
    WeightTable T = standardTable(name);
    if (!checkInvariance(T, latticeSymmetries(Lattice::standard(T.dim), true)).invariant) {
      shipped = false;
      bad += name + " ";
    }
  }
  r.checks.push_back(check("shipped standard tables are invariant", shipped, bad));
  return r;
}

using Runner = std::function<ScenarioResult(const Ctx&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"euler-weights", eulerWeightsScenario},   {"count-validate", countValidate},
      {"volume-unbiased", volumeUnbiased},       {"euler-exactness", eulerExactness},
      {"polygon-two-path", polygonTwoPath},      {"euler-blowup", eulerBlowup},
      {"kr-crosscheck", krCrosscheck},           {"box-rotation-bias", boxRotationBias},
      {"meancurv-crosscheck", meancurvCrosscheck}, {"musthold-residual", mustholdScenario},
      {"symmetrize-check", symmetrizeCheck}};
  return r;
}

}  // namespace

const std::vector<std::string>& scenarioNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (auto& [k, f] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

std::uint64_t defaultSeed(const std::string& scenario) {
  auto& names = scenarioNames();
  auto it = std::find(names.begin(), names.end(), scenario);
  if (it == names.end()) throw Error("unknown scenario '" + scenario + "'");
  return 1001 + std::uint64_t(it - names.begin());
}

ScenarioResult runScenario(const ScenarioConfig& cfg) {
  const Runner* run = nullptr;
  for (auto& [k, f] : registry())
    if (k == cfg.name) run = &f;
  if (!run) throw Error("unknown scenario '" + cfg.name + "'");
  Ctx ctx{cfg, cfg.seed ? cfg.seed : defaultSeed(cfg.name), cfg.settings};
  auto t0 = std::chrono::steady_clock::now();
  ScenarioResult r = (*run)(ctx);
  r.name = cfg.name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!cfg.outDir.empty()) {
    std::filesystem::create_directories(cfg.outDir);
    emitCsv(r.table, cfg.outDir + "/" + cfg.name + ".csv");
    if (cfg.svg && !r.plot.y.empty())
      emitSvg(r.plotData.rows.empty() ? r.table : r.plotData, r.plot, cfg.outDir + "/" + cfg.name + ".svg");
  }
  return r;
}

}  // namespace vv
