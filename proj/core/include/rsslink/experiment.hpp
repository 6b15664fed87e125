#ifndef RSSLINK_EXPERIMENT_HPP
#define RSSLINK_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rsslink/metrics.hpp"
#include "rsslink/simulate.hpp"
#include "rsslink/tracking.hpp"

namespace rsslink {

std::string model_name(TrackerConfig::Model m);
TrackerConfig::Model model_from_name(const std::string& name);

struct RunConfig {
  Scenario scenario;
  std::vector<TrackerConfig::Model> models{TrackerConfig::Model::ThreeState};
  int monte_carlo_runs{100};
  std::string out_dir;          // empty disables artifact files
  std::uint64_t seed{1};
  TrackerConfig tracker{};      // ellipse defaults overwritten from the scenario
  HmmModel hmm{HmmModel::defaults()};

  /// Table-style parameter overrides (n_particles, sigma_p, psi0, eps_r, eta,
  /// rho, A, B, shadow_a, wx, wy, noise_std).
  void apply_override(const std::string& key, double value);
};

/// Result of a single simulated run of one model.
struct SingleRun {
  TrackReport report;
  std::vector<double> times;
  std::vector<Point2D> truth;
  std::vector<Point2D> estimates;
  std::vector<std::vector<LinkState>> map_states;  // per step, per link
  std::vector<double> state_times;
};

SingleRun run_single(const Scenario& scenario, const TrackerConfig& tracker,
                     const HmmModel& hmm, std::uint64_t seed);

struct ModelSummary {
  TrackerConfig::Model model{};
  TrackReport mean;
  TrackReport stddev;
  int diverged_runs{0};
};

struct CampaignSummary {
  std::vector<ModelSummary> models;

  std::string to_json() const;
  std::string to_table() const;
};

/// Monte-Carlo campaign over all selected models, writing artifacts to
/// config.out_dir when set.
CampaignSummary run_experiment(const RunConfig& config);

struct SweepPoint {
  double value{0.0};
  std::vector<ModelSummary> models;
};

std::vector<SweepPoint> sweep_parameter(RunConfig config, const std::string& parameter,
                                        const std::vector<double>& grid);

std::string sweep_csv(const std::string& parameter, const std::vector<SweepPoint>& points);

}  // namespace rsslink

#endif
