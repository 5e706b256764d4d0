#pragma once

#include "vv/configs.hpp"
#include "vv/weights.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vv {

struct EstimateRecord {
  std::string shapeId, tableId;
  double a = 0;
  Vec3 phase = Vec3::Zero();
  Rational exactSum = 0;  ///< Σ w_l N_l before the a^q scaling
  double value = 0;
  std::shared_ptr<const CountVector> counts;
};

/// a^q Σ w_l N_l (factor a^q only for homogeneous tables).
EstimateRecord estimate(const BinaryImage& img, const WeightTable& T, int threads = 1);
EstimateRecord estimateFromCounts(const CountVector& c, const WeightTable& T, double a);

/// a^d · det(Λ) · #foreground samples.
double volumeEstimate(const BinaryImage& img);

struct DesignOptions {
  int numPhases = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  bool fixedPhase = false;  ///< every "phase" is c = 0 (fixed-origin multigrid)
  bool keepSamples = false;
  DigitizeOptions digitize;
};

struct DesignMean {
  double mean = 0, stderr_ = 0;
  int numPhases = 0;
  double min = 0, max = 0;
  std::vector<EstimateRecord> samples;  ///< filled when keepSamples
};

/// Phase i uses stream makeStream(seed, i).
Lattice phaseFor(const Lattice& L, std::uint64_t seed, std::uint64_t i);

/// Mean and standard error of the estimator over i.i.d. uniform phases.
/// A null table selects volumeEstimate.
DesignMean designMean(const Shape& S, const WeightTable* T, const Lattice& L, double a,
                      const DesignOptions& opt);

struct SweepRow {
  double a, mean, stderr_;
  int numPhases;
};

struct Extrapolation {
  double intercept = 0, stderr_ = 0, slope = 0;
};

struct SweepResult {
  std::string shapeId, tableId;
  std::vector<SweepRow> rows;

  /// Weighted least-squares line mean ≈ α + β a; reports α with its
  /// standard error.
  Extrapolation linearExtrapolation() const;
};

SweepResult multigridSweep(const Shape& S, const WeightTable* T, const Lattice& L,
                           const std::vector<double>& aList, const DesignOptions& opt);

/// a0, a0/2, a0/4, …
std::vector<double> geometricSequence(double a0, int count, double factor = 0.5);

void writeSweepCsv(const SweepResult& r, const std::string& path);

}  // namespace vv
