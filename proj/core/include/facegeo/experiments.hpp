#pragma once

#include <optional>
#include <string>
#include <vector>

#include "facegeo/face_geometry.hpp"
#include "facegeo/solvers.hpp"

namespace facegeo {

// Seeded Monte-Carlo harness configuration. Per-trial randomness comes from
// Rng::for_trial(seed, trial_index), so record streams are independent of
// thread count and schedule.
struct ExperimentConfig {
  int n = 3;
  int m = 3;
  int d = 1;
  double theta = 1.0;
  int trials = 100;
  std::uint64_t seed = 0;
  std::optional<SupportPattern> pattern;
  SolverConfig solver;
  // Classification thresholds applied to solver output; looser than the
  // library defaults because iterates carry solver-level error.
  Tolerances certify_tol{1e-6, 1e-6, 1e-8};
  int threads = 0;  // 0 = hardware concurrency
  int subdiff_samples = 500;
  bool use_range_rank = true;  // use rank(stacked A) in the extreme-point inequality
};

struct TrialRecord {
  int trial_index = 0;
  std::uint64_t seed_used = 0;
  bool converged = false;
  double objective = 0.0;
  int rank = 0;
  int zero_count = 0;
  int span_dim = 0;
  int face_dim = 0;
  int d_used = 0;
  bool inequality_ok = true;
  bool is_rank_one = false;
  bool support_match = false;
  bool support_equal = false;
  int subdiff_dim = -1;
  bool single_entry = false;
  bool full_dim = false;
  std::string label;
};

// Plants a sparse rank <= 2 matrix, measures it with Gaussian matrices,
// recovers by joint-norm minimization, refines to an extreme point of the
// solution set, certifies, and records the extreme-point inequality with
// d_used = rank of the stacked operator (or the raw measurement count when
// use_range_rank is off). Every converged trial must report
// inequality_ok = true.
std::vector<TrialRecord> inequality_sweep(const ExperimentConfig& cfg);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// 95% score interval by default.
WilsonInterval wilson_interval(int hits, int total, double z = 1.959963984540054);

struct RecoverySummary {
  int hits = 0;
  int converged_trials = 0;
  int unconverged_trials = 0;
  double fraction = 0.0;
  WilsonInterval interval;
  std::vector<TrialRecord> records;
};

// Fraction of Gaussian objectives V whose minimizer over the ball is rank one
// with support contained in the prescribed block pattern (support equality is
// recorded alongside). The pattern must be a p x q all-ones block up to
// row/column permutation.
RecoverySummary recovery_probability(const ExperimentConfig& cfg);

// Requires sigma_1(x) = 1 with a spectral gap; true iff <Y v, u> stays away
// from -1 by more than `threshold`, where (u, v) is the top singular pair.
bool submersion_check(const Matrix& y, const Matrix& x, const Tolerances& tol,
                      double threshold = 1e-6);

struct VertexScanSummary {
  int full_dim_hits = 0;   // points whose subdifferential dimension reached n*m-1
  int false_hits = 0;      // full-dimension hits at non-single-entry points
  std::vector<TrialRecord> records;
};

// Samples random boundary points of the ball, estimates the subdifferential
// dimension at each, then injects the known vertex candidates (single-entry
// matrices) and, on square shapes, the scaled identity. Full dimension must
// occur exactly at single-entry points.
VertexScanSummary vertex_scan(const ExperimentConfig& cfg);

void validate_block_pattern(const SupportPattern& pattern);

// CSV emission: fixed per-experiment columns, header line first, floats at 17
// significant digits. Byte-identical for identical (seed, config).
std::string sweep_csv(const std::vector<TrialRecord>& records);
std::string recovery_csv(const RecoverySummary& summary);
std::string vertex_scan_csv(const VertexScanSummary& summary);

}  // namespace facegeo
