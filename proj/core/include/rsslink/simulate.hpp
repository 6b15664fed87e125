#ifndef RSSLINK_SIMULATE_HPP
#define RSSLINK_SIMULATE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsslink/propagation.hpp"

namespace rsslink {

struct Waypoint {
  Point2D p{};
  double speed{0.5};  // m/s toward the next waypoint
};

struct Scenario {
  std::vector<LinkGeometry> links;
  HumanEllipse person{};              // tracking/reflection ellipse
  double shadow_half_width{0.2};      // m, shadowing model half-width
  std::vector<Waypoint> waypoints;
  double ts{0.032};                   // s, per-channel sampling interval
  int channel_count{16};
  double noise_std{0.38};             // dB
  double quantization_db{0.0};        // 0 disables quantization
  double reflection_delta_max{0.5};   // m, s2/s1 sensitivity threshold
  double baseline_offset_db{0.0};     // constant offset, exercises mean removal
  std::uint64_t seed{1};

  void validate() const;

  static Scenario from_json(const std::string& text);
  std::string to_json() const;
  static Scenario load(const std::string& path);
  void save(const std::string& path) const;

  HumanEllipse shadow_ellipse() const;
};

/// IEEE 802.15.4 channel list for the 2.4 GHz band: carriers at
/// 2405 + 5 (c - 1) MHz.
std::vector<Channel> ieee802154_channels(int count);

struct TrajectorySample {
  double t{0.0};
  Point2D pos{};
  Point2D vel{};
};

/// Piecewise-linear constant-speed interpolation sampled at ts / C.
std::vector<TrajectorySample> generate_trajectory(const Scenario& scenario);

/// Ground-truth state labeling rule: shadowing inside the shadow support of
/// the open segment, reflection while the excess path length is below the
/// sensitivity threshold, non-fading otherwise.
LinkState label_state(const LinkGeometry& link, Point2D center,
                      double shadow_half_width, double reflection_delta_max);

struct RssSample {
  double t{0.0};
  int link{0};
  int channel{0};
  double rss_db{0.0};
};

struct TruthSample {
  double t{0.0};
  Point2D pos{};
  Point2D vel{};
  std::vector<LinkState> states;  // one per link
};

struct GroundTruth {
  std::vector<TruthSample> samples;
  std::vector<std::vector<double>> crossings;  // per link: times the LoS line is crossed
};

struct SimResult {
  std::vector<RssSample> rss;
  GroundTruth truth;
};

/// Multi-channel RSS synthesis: channels visited round-robin, one sample per
/// ts / C slot, state-dependent gain plus white Gaussian noise, optional
/// quantization.
SimResult synthesize_rss(const Scenario& scenario);

/// Subtracts the mean of the first `calibration_samples` samples of each
/// (link, channel) stream.
void remove_baseline(std::vector<RssSample>& rss, int link_count, int channel_count,
                     int calibration_samples);

struct FilterSpec {
  double passband_hz{5.0};
  double stopband_hz{15.0};
  double stopband_atten_db{40.0};
  double passband_ripple_db{0.05};
};

struct FirFilter {
  std::vector<double> taps;
  double group_delay_s{0.0};

  std::vector<double> apply(const std::vector<double>& x) const;
  /// Magnitude response at frequency f for sample rate fs.
  double magnitude(double f, double fs) const;
};

/// Kaiser-window linear-phase FIR low-pass meeting the spec at rate fs.
FirFilter design_lowpass(const FilterSpec& spec, double fs);

void write_rss_csv(std::ostream& os, const std::vector<RssSample>& rss);
void write_truth_csv(std::ostream& os, const GroundTruth& truth);

}  // namespace rsslink

#endif
