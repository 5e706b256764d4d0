#pragma once

#include <functional>
#include <vector>

namespace vv {

struct QuadResult {
  double value = 0;
  double error = 0;  ///< sum of |coarse − refined| over accepted panels
};

/// Adaptive composite Gauss–Legendre (15 nodes per panel, bisection until a
/// panel and its two halves agree to max(absTol, relTol·|value|)).
/// The subdivision rule is fixed, so results are deterministic.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double relTol = 1e-10, double absTol = 1e-14);

/// Integrates over [breaks.front(), breaks.back()], one adaptive run per
/// piece. Unsorted or duplicate breaks are tolerated.
QuadResult integratePieces(const std::function<double(double)>& f, std::vector<double> breaks,
                           double relTol = 1e-10, double absTol = 1e-14);

/// Fixed n-point Gauss–Legendre rule on [-1,1].
struct GaussRule {
  std::vector<double> nodes, weights;
};
const GaussRule& gaussLegendre(int n);

}  // namespace vv
