#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "speclab/stats.hpp"

using namespace speclab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

stats::RunRecord record_with_logs(std::initializer_list<double> logs) {
  stats::RunRecord rec;
  rec.sorted_log_norms = RealVector(static_cast<Index>(logs.size()));
  Index k = 0;
  for (double v : logs) rec.sorted_log_norms(k++) = v;
  if (logs.size() > 0) {
    rec.instability_index = std::exp(rec.sorted_log_norms(rec.sorted_log_norms.size() - 1));
    rec.half_list_index =
        std::exp(rec.sorted_log_norms((rec.sorted_log_norms.size() + 1) / 2 - 1));
  }
  return rec;
}

}  // namespace

TEST_CASE("percentile picks the ceil-index order statistic", "[stats]") {
  std::vector<double> values;
  for (int k = 100; k >= 1; --k) values.push_back(static_cast<double>(k));
  CHECK(stats::percentile(values, 50.0) == 50.0);
  CHECK(stats::percentile(values, 95.0) == 95.0);
  CHECK(stats::percentile(values, 0.0) == 1.0);
  CHECK(stats::percentile(values, 100.0) == 100.0);
  CHECK(stats::percentile({5.0}, 50.0) == 5.0);
  CHECK(stats::percentile({5.0}, 99.0) == 5.0);
  CHECK(stats::percentile({1.0, 2.0, 3.0}, 50.0) == 2.0);
  CHECK_THROWS_AS(stats::percentile({}, 50.0), EmptyInputError);
  CHECK_THROWS_AS(stats::percentile({1.0}, -1.0), ConfigError);
  CHECK_THROWS_AS(stats::percentile({1.0}, 100.5), ConfigError);
}

TEST_CASE("relative difference is symmetric and vanishes on equality", "[stats]") {
  CHECK(stats::relative_difference(3.0, 3.0) == 0.0);
  CHECK(stats::relative_difference(0.0, 0.0) == 0.0);
  CHECK_THAT(stats::relative_difference(2.0, 4.0), WithinRel(2.0 / 3.0, 1e-15));
  CHECK(stats::relative_difference(2.0, 4.0) == stats::relative_difference(4.0, 2.0));
}

TEST_CASE("ensemble records are reproducible and parallel-invariant", "[stats]") {
  models::EnsembleSpec spec;
  spec.N = 6;
  spec.M = 40;
  spec.seed = 11;
  const auto serial = stats::run_ensemble(spec, 1);
  const auto parallel = stats::run_ensemble(spec, 3);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].excluded == parallel[i].excluded);
    CHECK(serial[i].instability_index == parallel[i].instability_index);
    CHECK(serial[i].sorted_log_norms == parallel[i].sorted_log_norms);
  }
  const auto again = stats::run_ensemble(spec, 1);
  for (std::size_t i = 0; i < serial.size(); ++i)
    CHECK(serial[i].instability_index == again[i].instability_index);
}

TEST_CASE("record values are sorted logs of norms bounded below by one", "[stats]") {
  models::EnsembleSpec spec;
  spec.N = 6;
  spec.M = 25;
  spec.seed = 3;
  for (const auto& rec : stats::run_ensemble(spec)) {
    if (rec.excluded) continue;
    REQUIRE(rec.sorted_log_norms.size() == spec.N);
    for (Index k = 0; k < spec.N; ++k) {
      CHECK(rec.sorted_log_norms(k) >= -1e-8);
      if (k > 0) CHECK(rec.sorted_log_norms(k) >= rec.sorted_log_norms(k - 1));
    }
    CHECK_THAT(std::exp(rec.sorted_log_norms(spec.N - 1)),
               WithinRel(rec.instability_index, 1e-12));
    CHECK_THAT(std::exp(rec.sorted_log_norms((spec.N + 1) / 2 - 1)),
               WithinRel(rec.half_list_index, 1e-12));
  }
}

TEST_CASE("second-moment matrix of duplicated records has a rank-one spectrum", "[stats]") {
  std::vector<stats::RunRecord> records{record_with_logs({0.0, 1.0}),
                                        record_with_logs({0.0, 1.0})};
  const auto cov = stats::covariance_spectrum(records);
  CHECK(cov.used_records == 2);
  CHECK_FALSE(cov.centered);
  CHECK_THAT(cov.eigenvalues(0), WithinAbs(0.0, 1e-14));
  CHECK_THAT(cov.eigenvalues(1), WithinRel(1.0, 1e-12));
  CHECK_THAT(cov.mu, WithinAbs(0.0, 1e-14));
  CHECK_THAT(cov.leading(0), WithinAbs(0.0, 1e-7));
  CHECK_THAT(cov.leading(1), WithinRel(1.0, 1e-7));
  CHECK_THAT(stats::leading_vector_shape(cov.leading), WithinRel(1.0, 1e-9));
}

TEST_CASE("second-moment matrix of proportional records", "[stats]") {
  std::vector<stats::RunRecord> records{record_with_logs({1.0, 2.0}),
                                        record_with_logs({2.0, 4.0})};
  const auto cov = stats::covariance_spectrum(records);
  // C = [[2.5, 5], [5, 10]], eigenvalues 0 and 12.5, leading (1, 2)/sqrt(5).
  CHECK_THAT(cov.eigenvalues(0), WithinAbs(0.0, 1e-12));
  CHECK_THAT(cov.eigenvalues(1), WithinRel(12.5, 1e-12));
  CHECK_THAT(cov.mu, WithinAbs(0.0, 1e-13));
  CHECK_THAT(cov.leading(0), WithinRel(1.0 / std::sqrt(5.0), 1e-10));
  CHECK_THAT(cov.leading(1), WithinRel(2.0 / std::sqrt(5.0), 1e-10));
}

TEST_CASE("centering removes the mean before the outer products", "[stats]") {
  std::vector<stats::RunRecord> records{record_with_logs({1.0, 2.0}),
                                        record_with_logs({3.0, 2.0})};
  const auto cov = stats::covariance_spectrum(records, true);
  CHECK(cov.centered);
  // Centered records are (-1, 0) and (1, 0): C = [[1, 0], [0, 0]].
  CHECK_THAT(cov.eigenvalues(1), WithinRel(1.0, 1e-12));
  CHECK_THAT(cov.eigenvalues(0), WithinAbs(0.0, 1e-14));
}

TEST_CASE("too few usable records is an error", "[stats]") {
  std::vector<stats::RunRecord> records{record_with_logs({1.0, 2.0})};
  CHECK_THROWS_AS(stats::covariance_spectrum(records), InsufficientDataError);
  records[0].excluded = true;
  CHECK_THROWS_AS(stats::covariance_spectrum(records), InsufficientDataError);
}

TEST_CASE("leading-vector shape statistic", "[stats]") {
  RealVector ramp(5);
  for (Index k = 0; k < 5; ++k) ramp(k) = static_cast<double>(k + 1);
  CHECK_THAT(stats::leading_vector_shape(ramp), WithinRel(1.0, 1e-14));
  CHECK_THAT(stats::leading_vector_shape(-ramp), WithinRel(-1.0, 1e-14));
  RealVector flat = RealVector::Constant(4, 0.7);
  CHECK(stats::leading_vector_shape(flat) == 0.0);
  CHECK(stats::leading_vector_shape(RealVector::Constant(1, 2.0)) == 0.0);
  CHECK_THROWS_AS(stats::leading_vector_shape(RealVector::Zero(3)), DegenerateInputError);
}

TEST_CASE("pooled median exponentiates and pools all norms", "[stats]") {
  std::vector<stats::RunRecord> records{
      record_with_logs({std::log(1.0), std::log(2.0), std::log(3.0)})};
  CHECK_THAT(stats::pooled_median(records), WithinRel(2.0, 1e-12));
  // Order across records must not matter.
  std::vector<stats::RunRecord> split{record_with_logs({std::log(3.0)}),
                                      record_with_logs({std::log(1.0)}),
                                      record_with_logs({std::log(2.0)})};
  CHECK_THAT(stats::pooled_median(split), WithinRel(2.0, 1e-12));
  CHECK_THROWS_AS(stats::pooled_median({}), EmptyInputError);
}

TEST_CASE("excluded records are counted and kept out of every statistic", "[stats]") {
  std::vector<stats::RunRecord> records{record_with_logs({0.0, std::log(2.0)}),
                                        record_with_logs({0.0, std::log(4.0)})};
  stats::RunRecord bad;
  bad.excluded = true;
  bad.reason = "degenerate";
  records.push_back(bad);
  stats::RunRecord worse;
  worse.excluded = true;
  worse.reason = "non_convergent";
  records.push_back(worse);

  models::EnsembleSpec spec;
  spec.N = 2;
  spec.M = 4;
  stats::ReportRequest req;
  req.percentiles = {50.0, 100.0};
  const auto report = stats::summarize_records(records, spec, req);
  CHECK(report.excluded_degenerate == 1);
  CHECK(report.excluded_non_convergent == 1);
  CHECK_THAT(report.percentiles.at(50.0), WithinRel(2.0, 1e-12));
  CHECK_THAT(report.percentiles.at(100.0), WithinRel(4.0, 1e-12));
  CHECK_THAT(report.pooled, WithinRel(1.0, 1e-12));
}

TEST_CASE("full report is deterministic and matches its parts", "[stats]") {
  models::EnsembleSpec spec;
  spec.N = 5;
  spec.M = 60;
  spec.seed = 21;
  stats::ReportRequest req;
  req.two_run = true;
  req.with_covariance = true;
  const auto report = stats::make_stats_report(spec, req, 2);
  const auto records = stats::run_ensemble(spec, 1);
  const auto direct = stats::summarize_records(records, spec, req, 1);
  CHECK(report.percentiles.at(50.0) == direct.percentiles.at(50.0));
  CHECK(report.percentiles.at(95.0) == direct.percentiles.at(95.0));
  CHECK(report.j_median == direct.j_median);
  CHECK(report.pooled == direct.pooled);
  REQUIRE(report.covariance.has_value());
  CHECK(report.covariance->eigenvalues == direct.covariance->eigenvalues);
  CHECK(report.leading_shape == direct.leading_shape);

  // The twin difference must equal the hand-combined percentiles of the two
  // seeds.
  models::EnsembleSpec twin = spec;
  twin.seed = spec.seed ^ 1ull;
  const double p1 = stats::percentile(stats::instability_values(records), 50.0);
  const double p2 =
      stats::percentile(stats::instability_values(stats::run_ensemble(twin, 1)), 50.0);
  CHECK_THAT(report.two_run_differences.at(50.0),
             WithinAbs(stats::relative_difference(p1, p2), 1e-15));
  CHECK(stats::two_run_difference(spec, 50.0) == report.two_run_differences.at(50.0));
}

TEST_CASE("covariance of a real ensemble has a dominant smooth mode", "[stats]") {
  models::EnsembleSpec spec;
  spec.N = 4;
  spec.M = 400;
  spec.seed = 9;
  const auto records = stats::run_ensemble(spec);
  const auto cov = stats::covariance_spectrum(records);
  CHECK(cov.used_records <= spec.M);
  CHECK(cov.used_records >= spec.N);
  CHECK(cov.eigenvalues(spec.N - 1) > 0.0);
  CHECK(cov.mu >= 0.0);
  CHECK(cov.mu < 1.0);
  CHECK(cov.leading.sum() >= 0.0);
  CHECK_THAT(cov.leading.norm(), WithinRel(1.0, 1e-12));
}
