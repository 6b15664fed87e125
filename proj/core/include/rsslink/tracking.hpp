#ifndef RSSLINK_TRACKING_HPP
#define RSSLINK_TRACKING_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rsslink/linkstate.hpp"
#include "rsslink/propagation.hpp"

namespace rsslink {

struct KinematicState {
  double px{0.0};
  double vx{0.0};
  double py{0.0};
  double vy{0.0};
};

struct TrackerConfig {
  int n_particles{1000};
  double process_noise_x{0.2};   // m/s^2, acceleration std along x
  double process_noise_y{0.6};   // m/s^2, acceleration std along y
  double sigma_p{1.5};           // dB, measurement noise std
  double ts{0.032};              // s, sampling interval
  HumanEllipse ellipse{};        // tracking ellipse, A = 0.11 m
  double shadow_half_width{0.2}; // m, shadowing model's own half-width
  ReflectionSearchOptions reflection_opts{64, 1e-5};
  // Post-resampling roughening: mean-zero jitter that restores particle
  // diversity after systematic resampling. Without it the sharply peaked
  // multi-channel likelihood collapses the cloud onto a single particle
  // within a few steps (sample impoverishment).
  double roughening_pos{0.03};   // m, position jitter std
  double roughening_vel{0.05};   // m/s, velocity jitter std

  /// Model used for the predicted observation.
  enum class Model { ThreeState, Exponential, ExponentialRayleigh };
  Model model{Model::ThreeState};
  BenchmarkParams benchmark{};

  void validate() const;
  HumanEllipse shadow_ellipse() const;
};

struct ParticleSet {
  std::vector<KinematicState> particles;
  std::vector<double> weights;
  std::mt19937_64 rng;
  bool diverged{false};
};

/// Per-link measurement vector: one dB value per channel, aligned with the
/// link's channel list.
using RssVector = std::vector<double>;

void predict(ParticleSet& ps, const TrackerConfig& cfg);
void weight_update(ParticleSet& ps, const std::vector<LinkGeometry>& links,
                   const std::vector<RssVector>& measurements, const TrackerConfig& cfg);
void resample(ParticleSet& ps);
KinematicState estimate(const ParticleSet& ps);

/// Particles uniform on the link's LoS segment, shifted by the ellipse
/// half-width opposite to the motion, v along the motion uniform in (0, 1].
/// `approach` is the unit direction of motion perpendicular to the link;
/// when absent, positions are unshifted and the velocity sign is random.
ParticleSet initialize(const LinkGeometry& link, std::optional<Point2D> approach,
                       const TrackerConfig& cfg, std::uint64_t seed);

/// Start/stop controller: starts on any s2->s3 transition when idle, runs the
/// filter while active, stops when every link reports s1.
class Tracker {
 public:
  Tracker(std::vector<LinkGeometry> links, TrackerConfig cfg, std::uint64_t seed);

  std::optional<KinematicState> step(const std::vector<LinkState>& map_states,
                                     const std::vector<RssVector>& measurements);

  bool active() const { return active_; }
  const ParticleSet& particles() const { return ps_; }
  bool diverged_once() const { return diverged_once_; }

 private:
  std::optional<Point2D> infer_approach(std::size_t link,
                                        const std::vector<LinkState>& map_states) const;

  std::vector<LinkGeometry> links_;
  TrackerConfig cfg_;
  std::uint64_t seed_;
  ParticleSet ps_;
  bool active_{false};
  bool diverged_once_{false};
  std::uint64_t reinits_{0};
  std::vector<LinkState> prev_states_;
};

}  // namespace rsslink

#endif
