#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "osc/analysis.hpp"
#include "osc/objectives.hpp"
#include "osc/quantifiers.hpp"
#include "osc/trace.hpp"

namespace osc {

/// Invalid or unresolvable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string algorithm;
  std::string objective;
  std::uint64_t n = 0;
  std::uint32_t trials = 20;
  std::uint64_t seed = 0;
  /// Half-width a of the Uniform(-a, a) noise.
  double noise = 0.0;

  SmoothnessFn::Kind smoothness_kind = SmoothnessFn::Kind::exponential;
  double nu1 = 1.0;
  double rho = 0.75;
  double c_num = 2.0;
  double p = 1.0;

  ConfidenceSchedule schedule;

  double rho_max = 0.9;
  std::uint32_t m = 4;

  /// 0 means ceil(n / 200).
  std::uint64_t checkpoint_stride = 0;
  std::string out = "results";
  /// Worker threads; 0 means one per hardware thread.
  unsigned threads = 0;

  SmoothnessFn smoothness() const;
  NoiseModel noise_model() const;
  std::uint64_t effective_stride() const;
};

const std::vector<std::string>& algorithm_names();

/// Parses a flat JSON object. Missing keys take defaults; unknown keys and
/// out-of-range values raise ConfigError naming the offending fields.
ExperimentConfig parse_config(std::string_view text);

/// Applies `key = value` style overrides as a JSON object fragment.
void apply_overrides(ExperimentConfig& cfg, std::string_view json_object);

/// Throws ConfigError describing the first invalid field.
void validate(const ExperimentConfig& cfg);

/// Canonical JSON text of the resolved config.
std::string to_json(const ExperimentConfig& cfg);

/// FNV-1a digest of the fields that define the experiment (everything except
/// seed, trial count, output location, checkpoint stride and threads).
std::string config_hash(const ExperimentConfig& cfg);

std::unique_ptr<Optimizer> make_optimizer(const ExperimentConfig& cfg, const Domain& domain);

/// Trial k runs with seed = cfg.seed + k.
RegretTrace run_trial(const ExperimentConfig& cfg, const ObjectiveSpec& objective,
                      std::uint32_t trial);

void write_trial_csv(std::ostream& out, const RegretTrace& trace, std::uint32_t trial);
void write_aggregate_csv(std::ostream& out, const AggregateCurve& curve);

struct ExperimentResult {
  std::vector<RegretTrace> traces;
  AggregateCurve curve;
  std::vector<std::filesystem::path> files;
};

/// Runs every trial (in parallel when threads allow), then aggregates in trial
/// order. When `write_files` is set, writes trial_<k>.csv, aggregate.csv and
/// config.json under cfg.out; I/O failures throw std::runtime_error with the
/// path.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files = true);

}  // namespace osc
