#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include "speclab/io.hpp"
#include "speclab/sha256.hpp"
#include "speclab/version.hpp"

namespace speclab::io {

[[nodiscard]] inline std::string utc_now_iso() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

// Conventions that shape the numbers in the data files; recorded so a reader
// of the outputs does not have to reverse-engineer them from the code.
[[nodiscard]] inline Json convention_notes() {
  Json notes = Json::object();
  notes["percentile_rule"] =
      "1-based order statistic at index ceil(r*M/100), clamped to [1, M]";
  notes["half_list_rule"] =
      "projection norms sorted ascending; entry ceil(N/2) (1-based)";
  notes["covariance"] =
      "uncentered second-moment matrix E[X X^T] of ascending sorted log norms "
      "unless 'centered' is set";
  notes["leading_vector_sign"] = "flipped so that the component sum is positive";
  notes["two_run_rule"] = "comparison run uses seed XOR 1";
  notes["site_order_2d"] =
      "row-major over (m, n) in [-N, N]^2; flat id = (m+N)*(2N+1) + (n+N)";
  notes["rng"] =
      "counter-based splitmix64 chain over (seed, sample, entry); doubles take "
      "the top 53 bits";
  notes["csv_number_format"] = "printf %.17g, LF line endings";
  return notes;
}

// Written last so it can carry digests of every data file the command
// produced.  Timestamps and wall-clock duration live only here: the data
// files themselves are byte-reproducible for a fixed config and seed.
class RunManifest {
 public:
  RunManifest(std::string command, Json config_echo)
      : command_(std::move(command)),
        config_(std::move(config_echo)),
        started_(utc_now_iso()) {}

  void add_output(const std::filesystem::path& path) {
    outputs_.push_back({path.filename().string(), sha256_file(path)});
  }

  void set_extra(const std::string& key, Json value) { extra_[key] = std::move(value); }

  void set_error(const std::string& message) {
    status_ = "error";
    error_ = message;
  }

  void write(const std::filesystem::path& out_dir, double wall_seconds) const {
    Json j = Json::object();
    j["tool"] = std::string(kToolName);
    j["version"] = std::string(kVersion);
    j["command"] = command_;
    j["status"] = status_;
    if (!error_.empty()) j["error"] = error_;
    j["config"] = config_;
    j["started_utc"] = started_;
    j["finished_utc"] = utc_now_iso();
    j["wall_seconds"] = wall_seconds;
    Json files = Json::array();
    for (const auto& [name, digest] : outputs_) {
      Json f = Json::object();
      f["file"] = name;
      f["sha256"] = digest;
      files.push_back(std::move(f));
    }
    j["outputs"] = std::move(files);
    for (const auto& [key, value] : extra_.items()) j[key] = value;
    j["conventions"] = convention_notes();
    write_json_file(out_dir / "run_manifest.json", j);
  }

 private:
  struct OutputRecord {
    std::string name;
    std::string digest;
  };

  std::string command_;
  Json config_;
  std::string started_;
  std::string status_ = "ok";
  std::string error_;
  std::vector<OutputRecord> outputs_;
  Json extra_;
};

}  // namespace speclab::io
