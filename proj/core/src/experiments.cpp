#include "facegeo/experiments.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "facegeo/manifold.hpp"
#include "facegeo/rng.hpp"

namespace facegeo {

namespace {

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1));
}

// Runs fn(t) for t in [0, trials) on `threads` workers. Work items only write
// to their own slot, so scheduling cannot change the output.
void parallel_trials(int trials, int threads, const std::function<void(int)>& fn) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, trials));
  if (threads == 1) {
    for (int t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= trials) return;
        fn(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

Matrix gaussian_matrix(Rng& rng, int n, int m) {
  Matrix x(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = rng.gaussian();
  return x;
}

// Random rank <= 2 matrix with sparse factors; entries kept with probability
// 0.6 so both the rank and the sparsity of the planted point vary.
Matrix planted_sparse_low_rank(Rng& rng, int n, int m) {
  const int rank = rng.uniform() < 0.5 ? 1 : 2;
  Matrix x = Matrix::Zero(n, m);
  for (int k = 0; k < rank; ++k) {
    Vector u(n), v(m);
    for (int i = 0; i < n; ++i) u(i) = rng.uniform() < 0.6 ? rng.gaussian() : 0.0;
    for (int j = 0; j < m; ++j) v(j) = rng.uniform() < 0.6 ? rng.gaussian() : 0.0;
    x += u * v.transpose();
  }
  return x;
}

}  // namespace

std::vector<TrialRecord> inequality_sweep(const ExperimentConfig& cfg) {
  cfg.solver.validate();
  cfg.certify_tol.validate();
  if (cfg.trials < 1) throw std::invalid_argument("inequality_sweep: trials must be >= 1");
  if (cfg.d < 0 || cfg.d > cfg.n * cfg.m)
    throw std::invalid_argument("inequality_sweep: need 0 <= d <= n*m");

  std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.trials));
  parallel_trials(cfg.trials, cfg.threads, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    TrialRecord rec;
    rec.trial_index = t;
    rec.seed_used = trial_seed(cfg.seed, static_cast<std::uint64_t>(t));

    LinearMap a;
    a.n = cfg.n;
    a.m = cfg.m;
    for (int i = 0; i < cfg.d; ++i) a.ops.push_back(gaussian_matrix(rng, cfg.n, cfg.m));
    const Matrix planted = planted_sparse_low_rank(rng, cfg.n, cfg.m);
    a.b.resize(cfg.d);
    for (int i = 0; i < cfg.d; ++i) a.b(i) = (a.ops[i].array() * planted.array()).sum();

    const SolveResult solved = solve_affine_recovery(a, cfg.theta, cfg.solver);
    const Matrix w = gaussian_matrix(rng, cfg.n, cfg.m);
    const SolveResult refined =
        extreme_point_refine(a, cfg.theta, solved.objective, w, cfg.solver);
    rec.converged = solved.converged && refined.converged;
    rec.objective = refined.objective;

    const FaceReport report = minimal_face_dimension(refined.x, cfg.theta, cfg.certify_tol);
    rec.rank = report.rank;
    rec.zero_count = report.zero_count;
    rec.span_dim = report.span_dim;
    rec.face_dim = report.face_dim;
    rec.d_used = cfg.use_range_rank ? a.range_rank(Tolerances{}) : cfg.d;
    rec.inequality_ok = check_extreme_inequality(report, rec.d_used);
    records[static_cast<std::size_t>(t)] = std::move(rec);
  });
  return records;
}

WilsonInterval wilson_interval(int hits, int total, double z) {
  WilsonInterval w;
  if (total <= 0) return w;
  const double p = static_cast<double>(hits) / total;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / total;
  const double center = p + z2 / (2.0 * total);
  const double rad = z * std::sqrt(p * (1.0 - p) / total + z2 / (4.0 * total * total));
  w.lo = std::max(0.0, (center - rad) / denom);
  w.hi = std::min(1.0, (center + rad) / denom);
  return w;
}

void validate_block_pattern(const SupportPattern& pattern) {
  const int n = pattern.rows(), m = pattern.cols();
  std::vector<bool> row_live(n, false), col_live(m, false);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (!pattern.zero_mask(i, j)) {
        row_live[i] = true;
        col_live[j] = true;
      }
  // Block structure: support must be exactly live-rows x live-cols.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const bool expect = row_live[i] && col_live[j];
      if (expect == pattern.zero_mask(i, j))
        throw std::invalid_argument(
            "recovery_probability: pattern is not a block pattern up to permutations");
    }
  bool any = false;
  for (int i = 0; i < n; ++i) any = any || row_live[i];
  if (!any) throw std::invalid_argument("recovery_probability: empty pattern");
}

RecoverySummary recovery_probability(const ExperimentConfig& cfg) {
  cfg.solver.validate();
  if (!cfg.pattern) throw std::invalid_argument("recovery_probability: pattern is required");
  if (cfg.pattern->rows() != cfg.n || cfg.pattern->cols() != cfg.m)
    throw std::invalid_argument("recovery_probability: pattern shape mismatch");
  validate_block_pattern(*cfg.pattern);
  const SupportPattern& pattern = *cfg.pattern;

  RecoverySummary summary;
  summary.records.resize(static_cast<std::size_t>(cfg.trials));
  parallel_trials(cfg.trials, cfg.threads, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    TrialRecord rec;
    rec.trial_index = t;
    rec.seed_used = trial_seed(cfg.seed, static_cast<std::uint64_t>(t));

    const Matrix v = gaussian_matrix(rng, cfg.n, cfg.m);
    const SolveResult res = minimize_linear_over_ball(v, cfg.theta, cfg.solver);
    rec.converged = res.converged;
    rec.objective = res.objective;

    const SvdFactors f = svd(res.x);
    rec.rank = numerical_rank(f.sigma, cfg.certify_tol);
    rec.is_rank_one = (rec.rank == 1);
    // The minimizer sits on the unit sphere of the joint norm, so the
    // absolute zero threshold applies directly.
    rec.support_match = true;
    rec.support_equal = true;
    for (int i = 0; i < cfg.n; ++i)
      for (int j = 0; j < cfg.m; ++j) {
        const bool live = std::abs(res.x(i, j)) > cfg.certify_tol.zero_abs;
        if (pattern.zero_mask(i, j) && live) rec.support_match = false;
        if (!pattern.zero_mask(i, j) && !live) rec.support_equal = false;
      }
    rec.support_equal = rec.support_equal && rec.support_match;
    summary.records[static_cast<std::size_t>(t)] = std::move(rec);
  });

  for (const auto& rec : summary.records) {
    if (!rec.converged) {
      ++summary.unconverged_trials;
      continue;
    }
    ++summary.converged_trials;
    if (rec.is_rank_one && rec.support_match) ++summary.hits;
  }
  if (summary.converged_trials > 0)
    summary.fraction = static_cast<double>(summary.hits) / summary.converged_trials;
  summary.interval = wilson_interval(summary.hits, summary.converged_trials);
  return summary;
}

bool submersion_check(const Matrix& y, const Matrix& x, const Tolerances& tol,
                      double threshold) {
  tol.validate();
  if (y.rows() != x.rows() || y.cols() != x.cols())
    throw std::invalid_argument("submersion_check: shape mismatch");
  const SvdFactors f = svd(x);
  if (std::abs(f.sigma(0) - 1.0) > 1e-8)
    throw std::invalid_argument("submersion_check: sigma_1(X) must equal 1");
  if (f.sigma.size() > 1 && f.sigma(0) - f.sigma(1) <= tol.rank_rel)
    throw std::invalid_argument("submersion_check: degenerate top singular gap");
  const Vector u = f.u.col(0);
  const Vector v = f.v.col(0);
  return std::abs(u.dot(y * v) + 1.0) > threshold;
}

VertexScanSummary vertex_scan(const ExperimentConfig& cfg) {
  cfg.solver.validate();
  const int nm = cfg.n * cfg.m;

  // Injected candidates follow the random trials: every single-entry point
  // (the claimed vertices) and, on square shapes, the scaled identity.
  struct Injection {
    Matrix x;
    std::string label;
  };
  std::vector<Injection> injections;
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.m; ++j)
      for (int sgn : {1, -1}) {
        Matrix e = Matrix::Zero(cfg.n, cfg.m);
        e(i, j) = sgn / (1.0 + cfg.theta);
        injections.push_back({e, "injected_single_entry"});
      }
  if (cfg.n == cfg.m) {
    const Matrix id = Matrix::Identity(cfg.n, cfg.n);
    injections.push_back({id / joint_norm(id, cfg.theta), "injected_identity"});
  }

  const int total = cfg.trials + static_cast<int>(injections.size());
  VertexScanSummary summary;
  summary.records.resize(static_cast<std::size_t>(total));

  parallel_trials(total, cfg.threads, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    TrialRecord rec;
    rec.trial_index = t;
    rec.seed_used = trial_seed(cfg.seed, static_cast<std::uint64_t>(t));

    Matrix x;
    if (t < cfg.trials) {
      Matrix dir = gaussian_matrix(rng, cfg.n, cfg.m);
      x = dir / joint_norm(dir, cfg.theta);
      rec.label = "random_boundary";
    } else {
      x = injections[static_cast<std::size_t>(t - cfg.trials)].x;
      rec.label = injections[static_cast<std::size_t>(t - cfg.trials)].label;
    }

    rec.subdiff_dim =
        subdifferential_dimension_estimate(x, cfg.theta, cfg.subdiff_samples, rec.seed_used);
    int live = 0;
    for (int i = 0; i < cfg.n; ++i)
      for (int j = 0; j < cfg.m; ++j)
        if (std::abs(x(i, j)) > cfg.certify_tol.zero_abs) ++live;
    rec.single_entry = (live == 1);
    rec.full_dim = (rec.subdiff_dim == nm - 1);
    rec.converged = true;
    summary.records[static_cast<std::size_t>(t)] = std::move(rec);
  });

  for (const auto& rec : summary.records) {
    if (rec.full_dim) {
      ++summary.full_dim_hits;
      if (!rec.single_entry) ++summary.false_hits;
    }
  }
  return summary;
}

namespace {

const char* bit(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string sweep_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "trial,seed_used,converged,objective,rank,zero_count,span_dim,face_dim,d_used,"
         "inequality_ok\n";
  for (const auto& r : records) {
    out << r.trial_index << ',' << r.seed_used << ',' << bit(r.converged) << ','
        << format_sig17(r.objective) << ',' << r.rank << ',' << r.zero_count << ','
        << r.span_dim << ',' << r.face_dim << ',' << r.d_used << ',' << bit(r.inequality_ok)
        << '\n';
  }
  return out.str();
}

std::string recovery_csv(const RecoverySummary& summary) {
  std::ostringstream out;
  out << "trial,seed_used,converged,objective,rank,is_rank_one,support_match,support_equal\n";
  for (const auto& r : summary.records) {
    out << r.trial_index << ',' << r.seed_used << ',' << bit(r.converged) << ','
        << format_sig17(r.objective) << ',' << r.rank << ',' << bit(r.is_rank_one) << ','
        << bit(r.support_match) << ',' << bit(r.support_equal) << '\n';
  }
  return out.str();
}

std::string vertex_scan_csv(const VertexScanSummary& summary) {
  std::ostringstream out;
  out << "trial,seed_used,label,subdiff_dim,single_entry,full_dim\n";
  for (const auto& r : summary.records) {
    out << r.trial_index << ',' << r.seed_used << ',' << r.label << ',' << r.subdiff_dim << ','
        << bit(r.single_entry) << ',' << bit(r.full_dim) << '\n';
  }
  return out.str();
}

}  // namespace facegeo
