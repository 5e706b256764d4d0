#include "vv/quadrature.hpp"

#include "vv/core.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace vv {

const GaussRule& gaussLegendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2 / ((1 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

namespace {

double panel(const std::function<double(double)>& f, double a, double b, const GaussRule& g) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a), s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + half * g.nodes[i]);
  return s * half;
}

void adapt(const std::function<double(double)>& f, double a, double b, double whole,
           double relTol, double absTol, int depth, const GaussRule& g, QuadResult& out) {
  double m = 0.5 * (a + b);
  double left = panel(f, a, m, g), right = panel(f, m, b, g);
  double refined = left + right, diff = std::abs(refined - whole);
  if (diff <= std::max(absTol, relTol * std::abs(refined)) || depth >= 48 || !(m > a && m < b)) {
    out.value += refined;
    out.error += diff;
    return;
  }
  adapt(f, a, m, left, relTol, 0.5 * absTol, depth + 1, g, out);
  adapt(f, m, b, right, relTol, 0.5 * absTol, depth + 1, g, out);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double relTol,
                     double absTol) {
  QuadResult out;
  if (a == b) return out;
  const GaussRule& g = gaussLegendre(15);
  adapt(f, a, b, panel(f, a, b, g), relTol, absTol, 0, g, out);
  return out;
}

QuadResult integratePieces(const std::function<double(double)>& f, std::vector<double> breaks,
                           double relTol, double absTol) {
  std::sort(breaks.begin(), breaks.end());
  QuadResult out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    QuadResult r = integrate(f, breaks[i], breaks[i + 1], relTol, absTol);
    out.value += r.value;
    out.error += r.error;
  }
  return out;
}

}  // namespace vv
