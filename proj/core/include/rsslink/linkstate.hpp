#ifndef RSSLINK_LINKSTATE_HPP
#define RSSLINK_LINKSTATE_HPP

#include <array>
#include <optional>
#include <vector>

#include "rsslink/propagation.hpp"
#include "rsslink/stats.hpp"

namespace rsslink {

/// Three-state HMM over the link states. transition[j][i] is the probability
/// of moving to state i given the previous state was j (rows are source
/// states and sum to 1).
struct HmmModel {
  std::array<std::array<double, 3>, 3> transition;
  std::array<double, 3> initial;
  std::array<stats::StateDensity, 3> densities;

  /// Default transition matrix, initial distribution and per-state densities
  /// (log-normal / Weibull / gamma).
  static HmmModel defaults();

  void validate() const;
};

/// Scaled forward variables: gamma sums to 1, the accumulated log of the
/// normalization constants is kept so the unnormalized likelihood is
/// recoverable.
struct ForwardState {
  std::array<double, 3> gamma{};
  double scale_log{0.0};

  /// log of the total sequence likelihood observed so far.
  double log_likelihood() const { return scale_log; }
};

ForwardState forward_init(const HmmModel& model, double r_mw);
ForwardState forward_step(const ForwardState& state, const HmmModel& model, double r_mw);

/// MAP state; ties break toward the lower state index.
LinkState map_state(const ForwardState& state);

struct CrossingEvent {
  double t_cross{0.0};
  int direction{0};  // +1/-1 once inferred from cross-link ordering, 0 unknown
  int link_id{0};
};

/// One event per maximal contiguous shadowing run, at the run midpoint.
std::vector<CrossingEvent> detect_crossings(
    const std::vector<std::pair<double, LinkState>>& states, int link_id = 0);

/// +1 when `first` was shadowed before `second` (motion from first toward
/// second), -1 otherwise.
int infer_direction(const CrossingEvent& first, const CrossingEvent& second);

/// Signed velocity from two crossings of parallel links spaced `spacing` m
/// apart, positive in the first->second direction.
double estimate_velocity(const CrossingEvent& first, const CrossingEvent& second,
                         double spacing);

}  // namespace rsslink

#endif
