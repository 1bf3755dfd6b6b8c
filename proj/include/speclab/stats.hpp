#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speclab/instability.hpp"
#include "speclab/linalg.hpp"
#include "speclab/models.hpp"
#include "speclab/parallel.hpp"
#include "speclab/types.hpp"

namespace speclab::stats {

struct RunRecord {
  std::int64_t sample_index = 0;
  double instability_index = 0.0;
  double half_list_index = 0.0;
  RealVector sorted_log_norms;  // ascending
  bool excluded = false;
  std::string reason;  // "degenerate" or "non_convergent"
};

// One eigendecomposition per sample feeds the index, the half-list value and
// the sorted log-norm list; solver failures become counted exclusions.
[[nodiscard]] inline RunRecord evaluate_sample(const models::EnsembleSpec& spec,
                                               std::int64_t sample_index,
                                               const linalg::Options& opt = {}) {
  RunRecord rec;
  rec.sample_index = sample_index;
  const Matrix a = models::sample_tridiagonal(spec, sample_index);
  linalg::EigenSystem es;
  try {
    es = linalg::eigendecompose(a, opt);
  } catch (const NonConvergenceError&) {
    rec.excluded = true;
    rec.reason = "non_convergent";
    return rec;
  }
  if (es.degenerate) {
    rec.excluded = true;
    rec.reason = "degenerate";
    return rec;
  }
  const auto pn = instability::projection_norms_gram(es);
  const Index n = pn.sorted_norms.size();
  rec.instability_index = pn.sorted_norms(n - 1);
  rec.half_list_index = pn.sorted_norms((n + 1) / 2 - 1);
  rec.sorted_log_norms = pn.sorted_norms.array().log().matrix();
  return rec;
}

[[nodiscard]] inline std::vector<RunRecord> run_ensemble(const models::EnsembleSpec& spec,
                                                         unsigned threads = 1,
                                                         const linalg::Options& opt = {}) {
  spec.validate();
  std::vector<RunRecord> records(static_cast<std::size_t>(spec.M));
  parallel_for(records.size(), threads, [&](std::size_t i) {
    records[i] = evaluate_sample(spec, static_cast<std::int64_t>(i), opt);
  });
  return records;
}

[[nodiscard]] inline std::vector<double> instability_values(const std::vector<RunRecord>& records) {
  std::vector<double> values;
  values.reserve(records.size());
  for (const auto& rec : records)
    if (!rec.excluded) values.push_back(rec.instability_index);
  return values;
}

[[nodiscard]] inline std::vector<double> half_list_values(const std::vector<RunRecord>& records) {
  std::vector<double> values;
  values.reserve(records.size());
  for (const auto& rec : records)
    if (!rec.excluded) values.push_back(rec.half_list_index);
  return values;
}

// Value at 1-based index ceil(r M / 100) of the ascending sort, clamped to the
// first element for r = 0.
[[nodiscard]] inline double percentile(std::vector<double> values, double r) {
  if (values.empty()) throw EmptyInputError("percentile: empty input");
  if (r < 0.0 || r > 100.0) throw ConfigError("percentile: r must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const auto m = static_cast<double>(values.size());
  auto idx = static_cast<std::size_t>(std::ceil(r * m / 100.0));
  idx = std::clamp<std::size_t>(idx, 1, values.size());
  return values[idx - 1];
}

[[nodiscard]] inline double relative_difference(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / ((a + b) / 2.0);
}

// Runs the ensemble with seed and seed XOR 1; returns |P_r1 - P_r2| over the
// two-run average.
[[nodiscard]] inline double two_run_difference(const models::EnsembleSpec& spec, double r,
                                               unsigned threads = 1,
                                               const linalg::Options& opt = {}) {
  models::EnsembleSpec twin = spec;
  twin.seed = spec.seed ^ 1ull;
  const double p1 = percentile(instability_values(run_ensemble(spec, threads, opt)), r);
  const double p2 = percentile(instability_values(run_ensemble(twin, threads, opt)), r);
  return relative_difference(p1, p2);
}

struct CovarianceSpectrum {
  RealVector eigenvalues;  // ascending
  RealVector leading;      // unit leading eigenvector, sign fixed to positive sum
  double mu = 0.0;         // second-largest over largest eigenvalue
  std::int64_t used_records = 0;
  bool centered = false;
};

// Second-moment matrix C_{mn} = E[X_m X_n] of the sorted log norms over the
// non-excluded records (uncentered by default, exactly as defined; the
// centered variant exists for sensitivity runs only).
[[nodiscard]] inline CovarianceSpectrum covariance_spectrum(const std::vector<RunRecord>& records,
                                                            bool centered = false) {
  Index n = 0;
  std::int64_t kept = 0;
  for (const auto& rec : records)
    if (!rec.excluded) {
      n = rec.sorted_log_norms.size();
      ++kept;
    }
  if (kept == 0 || kept < n)
    throw InsufficientDataError("covariance_spectrum: need at least N non-excluded records");

  RealMatrix c = RealMatrix::Zero(n, n);
  RealVector mean = RealVector::Zero(n);
  for (const auto& rec : records) {
    if (rec.excluded) continue;
    c.noalias() += rec.sorted_log_norms * rec.sorted_log_norms.transpose();
    mean += rec.sorted_log_norms;
  }
  c /= static_cast<double>(kept);
  if (centered) {
    mean /= static_cast<double>(kept);
    c.noalias() -= mean * mean.transpose();
  }

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(c);
  if (solver.info() != Eigen::Success)
    throw NonConvergenceError("covariance_spectrum: symmetric eigensolver failed");

  CovarianceSpectrum out;
  out.centered = centered;
  out.used_records = kept;
  out.eigenvalues = solver.eigenvalues();
  out.leading = solver.eigenvectors().col(n - 1);
  if (out.leading.sum() < 0) out.leading = -out.leading;
  const double top = out.eigenvalues(n - 1);
  if (!(top > 0))
    throw InsufficientDataError("covariance_spectrum: leading eigenvalue is not positive");
  out.mu = n > 1 ? out.eigenvalues(n - 2) / top : 0.0;
  return out;
}

// Pearson correlation of v against (1, 2, ..., N); 0 by convention when v is
// constant (zero variance).
[[nodiscard]] inline double leading_vector_shape(const RealVector& v) {
  const Index n = v.size();
  if (n == 0 || v.isZero(0.0))
    throw DegenerateInputError("leading_vector_shape: zero vector");
  if (n == 1) return 0.0;
  const double mean_v = v.mean();
  const double mean_i = (static_cast<double>(n) + 1.0) / 2.0;
  double cov = 0.0;
  double var_v = 0.0;
  double var_i = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double dv = v(k) - mean_v;
    const double di = static_cast<double>(k + 1) - mean_i;
    cov += dv * di;
    var_v += dv * dv;
    var_i += di * di;
  }
  if (var_v == 0.0) return 0.0;
  return cov / std::sqrt(var_v * var_i);
}

// Median of all projection norms pooled across records (exp of the stored
// log values), order-independent.
[[nodiscard]] inline double pooled_median(const std::vector<RunRecord>& records) {
  std::vector<double> pool;
  for (const auto& rec : records) {
    if (rec.excluded) continue;
    for (Index k = 0; k < rec.sorted_log_norms.size(); ++k)
      pool.push_back(std::exp(rec.sorted_log_norms(k)));
  }
  if (pool.empty()) throw EmptyInputError("pooled_median: no records");
  return percentile(std::move(pool), 50.0);
}

struct StatsReport {
  models::EnsembleSpec spec;
  unsigned threads = 1;
  std::map<double, double> percentiles;           // r -> P_r
  std::map<double, double> two_run_differences;   // r -> D_r (when requested)
  double j_median = 0.0;
  double pooled = 0.0;
  std::optional<CovarianceSpectrum> covariance;
  double leading_shape = 0.0;  // meaningful when covariance is present
  std::int64_t excluded_degenerate = 0;
  std::int64_t excluded_non_convergent = 0;
  double wall_seconds = 0.0;  // serialized only into the run manifest
};

struct ReportRequest {
  std::vector<double> percentiles{50.0, 95.0};
  bool two_run = false;
  bool with_covariance = false;
  bool centered_covariance = false;
};

// Aggregates an already-computed record list; make_stats_report wraps this
// with the ensemble run.  The twin run for two-run differences happens here.
[[nodiscard]] inline StatsReport summarize_records(const std::vector<RunRecord>& records,
                                                   const models::EnsembleSpec& spec,
                                                   const ReportRequest& req,
                                                   unsigned threads = 1,
                                                   const linalg::Options& opt = {}) {
  StatsReport report;
  report.spec = spec;
  report.threads = threads;
  for (const auto& rec : records) {
    if (!rec.excluded) continue;
    if (rec.reason == "degenerate")
      ++report.excluded_degenerate;
    else
      ++report.excluded_non_convergent;
  }
  const auto values = instability_values(records);
  for (const double r : req.percentiles) report.percentiles[r] = percentile(values, r);
  report.j_median = percentile(half_list_values(records), 50.0);
  report.pooled = pooled_median(records);
  if (req.with_covariance) {
    report.covariance = covariance_spectrum(records, req.centered_covariance);
    report.leading_shape = leading_vector_shape(report.covariance->leading);
  }
  if (req.two_run) {
    models::EnsembleSpec twin = spec;
    twin.seed = spec.seed ^ 1ull;
    const auto twin_values = instability_values(run_ensemble(twin, threads, opt));
    for (const double r : req.percentiles)
      report.two_run_differences[r] =
          relative_difference(percentile(values, r), percentile(twin_values, r));
  }
  return report;
}

[[nodiscard]] inline StatsReport make_stats_report(const models::EnsembleSpec& spec,
                                                   const ReportRequest& req,
                                                   unsigned threads = 1,
                                                   const linalg::Options& opt = {}) {
  return summarize_records(run_ensemble(spec, threads, opt), spec, req, threads, opt);
}

}  // namespace speclab::stats
