#include "rsslink/linkstate.hpp"

#include <cmath>
#include <stdexcept>

namespace rsslink {

HmmModel HmmModel::defaults() {
  return HmmModel{
      {{{0.95, 0.05, 0.0}, {0.025, 0.95, 0.025}, {0.0, 0.05, 0.95}}},
      {0.7, 0.2, 0.1},
      {stats::StateDensity::log_normal(0.0, 0.088),
       stats::StateDensity::weibull(1.242, 2.630),
       stats::StateDensity::gamma(0.919, 0.127)},
  };
}

void HmmModel::validate() const {
  double f0_sum = 0.0;
  for (int j = 0; j < 3; ++j) {
    double row = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (transition[j][i] < 0.0) throw std::invalid_argument("negative transition probability");
      row += transition[j][i];
    }
    if (std::abs(row - 1.0) > 1e-9) throw std::invalid_argument("transition rows must sum to 1");
    if (initial[j] < 0.0) throw std::invalid_argument("negative initial probability");
    f0_sum += initial[j];
  }
  if (std::abs(f0_sum - 1.0) > 1e-9) throw std::invalid_argument("f0 must sum to 1");
}

namespace {

ForwardState rescale(std::array<double, 3> gamma, double scale_log) {
  const double sum = gamma[0] + gamma[1] + gamma[2];
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw std::runtime_error("forward variables underflowed to zero");
  }
  for (double& g : gamma) g /= sum;
  return {gamma, scale_log + std::log(sum)};
}

}  // namespace

ForwardState forward_init(const HmmModel& model, double r_mw) {
  if (!(r_mw > 0.0)) throw std::invalid_argument("measurement must be positive linear power");
  std::array<double, 3> gamma;
  for (int i = 0; i < 3; ++i) {
    gamma[i] = model.initial[i] * model.densities[i].pdf(r_mw);
  }
  return rescale(gamma, 0.0);
}

ForwardState forward_step(const ForwardState& state, const HmmModel& model, double r_mw) {
  if (!(r_mw > 0.0)) throw std::invalid_argument("measurement must be positive linear power");
  std::array<double, 3> gamma;
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 3; ++j) acc += state.gamma[j] * model.transition[j][i];
    gamma[i] = acc * model.densities[i].pdf(r_mw);
  }
  return rescale(gamma, state.scale_log);
}

LinkState map_state(const ForwardState& state) {
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (state.gamma[i] > state.gamma[best]) best = i;
  }
  return static_cast<LinkState>(best);
}

std::vector<CrossingEvent> detect_crossings(
    const std::vector<std::pair<double, LinkState>>& states, int link_id) {
  std::vector<CrossingEvent> events;
  std::optional<double> run_start;
  double run_end = 0.0;
  auto flush = [&]() {
    if (run_start) {
      events.push_back({0.5 * (*run_start + run_end), 0, link_id});
      run_start.reset();
    }
  };
  for (const auto& [t, s] : states) {
    if (s == LinkState::Shadowing) {
      if (!run_start) run_start = t;
      run_end = t;
    } else {
      flush();
    }
  }
  flush();
  return events;
}

int infer_direction(const CrossingEvent& first, const CrossingEvent& second) {
  return first.t_cross <= second.t_cross ? +1 : -1;
}

double estimate_velocity(const CrossingEvent& first, const CrossingEvent& second,
                         double spacing) {
  const double dt = second.t_cross - first.t_cross;
  if (dt == 0.0) throw std::domain_error("identical crossing timestamps");
  return spacing / dt;
}

}  // namespace rsslink
