#include "rsslink/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rsslink {

void TrackerConfig::validate() const {
  if (n_particles < 1) throw std::invalid_argument("n_particles >= 1");
  if (!(process_noise_x > 0.0) || !(process_noise_y > 0.0))
    throw std::invalid_argument("process noise must be positive");
  if (!(sigma_p > 0.0)) throw std::invalid_argument("sigma_p must be positive");
  if (!(ts > 0.0)) throw std::invalid_argument("ts must be positive");
  if (!(shadow_half_width > 0.0)) throw std::invalid_argument("shadow width must be positive");
  if (roughening_pos < 0.0 || roughening_vel < 0.0)
    throw std::invalid_argument("roughening must be non-negative");
  ellipse.validate();
}

HumanEllipse TrackerConfig::shadow_ellipse() const {
  HumanEllipse s = ellipse;
  s.a_semi_minor = shadow_half_width;
  s.b_semi_major = std::max(ellipse.b_semi_major, shadow_half_width);
  return s;
}

void predict(ParticleSet& ps, const TrackerConfig& cfg) {
  std::normal_distribution<double> nx(0.0, cfg.process_noise_x);
  std::normal_distribution<double> ny(0.0, cfg.process_noise_y);
  const double ts = cfg.ts;
  const double half_ts2 = 0.5 * ts * ts;
  for (auto& p : ps.particles) {
    const double ax = nx(ps.rng);
    const double ay = ny(ps.rng);
    p.px += ts * p.vx + half_ts2 * ax;
    p.vx += ts * ax;
    p.py += ts * p.vy + half_ts2 * ay;
    p.vy += ts * ay;
  }
}

namespace {

// Per-particle log-likelihood of the stacked channel residuals (constant
// factor dropped).
double log_likelihood(Point2D pos, const std::vector<LinkGeometry>& links,
                      const std::vector<RssVector>& measurements,
                      const TrackerConfig& cfg, std::vector<double>& scratch) {
  const double inv_2var = 1.0 / (2.0 * cfg.sigma_p * cfg.sigma_p);
  double ll = 0.0;
  for (std::size_t l = 0; l < links.size(); ++l) {
    scratch.clear();
    if (cfg.model == TrackerConfig::Model::ThreeState) {
      GainPredictor pred{&links[l], cfg.ellipse, cfg.shadow_ellipse(), cfg.reflection_opts};
      pred.predict(pos, scratch);
    } else {
      const double g = benchmark_gain(excess_path_length(links[l], pos), cfg.benchmark);
      scratch.assign(links[l].channels().size(), g);
    }
    const RssVector& r = measurements[l];
    for (std::size_t c = 0; c < r.size(); ++c) {
      const double res = r[c] - scratch[c];
      ll -= res * res * inv_2var;
    }
  }
  return ll;
}

}  // namespace

void weight_update(ParticleSet& ps, const std::vector<LinkGeometry>& links,
                   const std::vector<RssVector>& measurements, const TrackerConfig& cfg) {
  if (links.size() != measurements.size()) {
    throw std::invalid_argument("measurement vector not aligned with links");
  }
  const std::size_t n = ps.particles.size();
  std::vector<double> ll(n);
  std::vector<double> scratch;
  double max_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    ll[i] = log_likelihood({ps.particles[i].px, ps.particles[i].py}, links, measurements,
                           cfg, scratch);
    max_ll = std::max(max_ll, ll[i]);
  }
  // Every particle is essentially impossible: reset instead of collapsing.
  // The threshold is generous (~25 dB rms residual per channel) so that a
  // merely poor fit keeps evolving and only a hopeless one is flagged.
  constexpr double kDivergedLogLik = -4500.0;
  if (!(max_ll > kDivergedLogLik)) {
    std::fill(ps.weights.begin(), ps.weights.end(), 1.0 / n);
    ps.diverged = true;
    return;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ps.weights[i] *= std::exp(ll[i] - max_ll);
    sum += ps.weights[i];
  }
  if (!(sum > 0.0)) {
    std::fill(ps.weights.begin(), ps.weights.end(), 1.0 / n);
    ps.diverged = true;
    return;
  }
  for (double& w : ps.weights) w /= sum;
}

void resample(ParticleSet& ps) {
  const std::size_t n = ps.particles.size();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double u0 = u01(ps.rng) / n;
  std::vector<KinematicState> out;
  out.reserve(n);
  double cum = ps.weights[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = u0 + static_cast<double>(i) / n;
    while (cum < u && j + 1 < n) {
      ++j;
      cum += ps.weights[j];
    }
    out.push_back(ps.particles[j]);
  }
  ps.particles = std::move(out);
  std::fill(ps.weights.begin(), ps.weights.end(), 1.0 / n);
}

KinematicState estimate(const ParticleSet& ps) {
  if (ps.particles.empty()) throw std::invalid_argument("empty particle set");
  KinematicState m;
  for (const auto& p : ps.particles) {
    m.px += p.px;
    m.vx += p.vx;
    m.py += p.py;
    m.vy += p.vy;
  }
  const double n = static_cast<double>(ps.particles.size());
  m.px /= n;
  m.vx /= n;
  m.py /= n;
  m.vy /= n;
  return m;
}

ParticleSet initialize(const LinkGeometry& link, std::optional<Point2D> approach,
                       const TrackerConfig& cfg, std::uint64_t seed) {
  ParticleSet ps;
  ps.rng.seed(seed);
  ps.particles.resize(cfg.n_particles);
  ps.weights.assign(cfg.n_particles, 1.0 / cfg.n_particles);

  const Point2D u = link.direction();
  std::uniform_real_distribution<double> along(0.0, link.los_distance());
  std::uniform_real_distribution<double> speed(std::numeric_limits<double>::min(), 1.0);
  std::bernoulli_distribution coin(0.5);

  Point2D motion{0.0, 0.0};
  if (approach) {
    const double n = norm(*approach);
    motion = {approach->x / n, approach->y / n};
  }
  for (auto& p : ps.particles) {
    Point2D pos = link.tx() + along(ps.rng) * u;
    if (approach) {
      // Shift against the motion to account for the person's extent.
      pos = pos - cfg.ellipse.a_semi_minor * motion;
    }
    Point2D dir = motion;
    if (!approach) {
      // Unknown direction: pick a side of the link at random.
      const double sign = coin(ps.rng) ? 1.0 : -1.0;
      dir = {sign * u.y, -sign * u.x};
    }
    const double s = speed(ps.rng);
    p.px = pos.x;
    p.py = pos.y;
    p.vx = s * dir.x;
    p.vy = s * dir.y;
  }
  return ps;
}

Tracker::Tracker(std::vector<LinkGeometry> links, TrackerConfig cfg, std::uint64_t seed)
    : links_(std::move(links)), cfg_(std::move(cfg)), seed_(seed) {
  cfg_.validate();
  prev_states_.assign(links_.size(), LinkState::NonFading);
}

std::optional<KinematicState> Tracker::step(const std::vector<LinkState>& map_states,
                                            const std::vector<RssVector>& measurements) {
  if (map_states.size() != links_.size()) {
    throw std::invalid_argument("one MAP state required per link");
  }
  std::optional<KinematicState> out;
  if (active_) {
    const bool all_idle = std::all_of(map_states.begin(), map_states.end(),
                                      [](LinkState s) { return s == LinkState::NonFading; });
    if (all_idle) {
      active_ = false;
    } else {
      predict(ps_, cfg_);
      weight_update(ps_, links_, measurements, cfg_);
      if (ps_.diverged) {
        // Track lost: no particle is consistent with the measurements.
        // Re-acquire from a link that is currently shadowed; if none is, go
        // idle and wait for the next crossing to restart the filter.
        diverged_once_ = true;
        std::size_t shadowed = links_.size();
        for (std::size_t l = 0; l < links_.size(); ++l) {
          if (map_states[l] == LinkState::Shadowing) {
            shadowed = l;
            break;
          }
        }
        if (shadowed < links_.size()) {
          ps_ = initialize(links_[shadowed], infer_approach(shadowed, map_states), cfg_,
                           seed_ + ++reinits_);
          out = estimate(ps_);
        } else {
          active_ = false;
        }
      } else {
        resample(ps_);
        out = estimate(ps_);
        if (cfg_.roughening_pos > 0.0) {
          std::normal_distribution<double> jp(0.0, cfg_.roughening_pos);
          for (auto& p : ps_.particles) {
            p.px += jp(ps_.rng);
            p.py += jp(ps_.rng);
          }
        }
        if (cfg_.roughening_vel > 0.0) {
          std::normal_distribution<double> jv(0.0, cfg_.roughening_vel);
          for (auto& p : ps_.particles) {
            p.vx += jv(ps_.rng);
            p.vy += jv(ps_.rng);
          }
        }
      }
    }
  } else {
    for (std::size_t l = 0; l < links_.size(); ++l) {
      if (map_states[l] == LinkState::Shadowing && prev_states_[l] != LinkState::Shadowing) {
        ps_ = initialize(links_[l], infer_approach(l, map_states), cfg_, seed_ + reinits_);
        active_ = true;
        break;
      }
    }
  }
  prev_states_ = map_states;
  return out;
}

std::optional<Point2D> Tracker::infer_approach(std::size_t link,
                                               const std::vector<LinkState>& map_states) const {
  std::optional<Point2D> approach;
  const Point2D mid_l = 0.5 * (links_[link].tx() + links_[link].rx());
  // Approach direction from the shadowing order of the other links: a link
  // that shadowed earlier lies behind the person.
  for (std::size_t m = 0; m < links_.size(); ++m) {
    if (m == link) continue;
    if (prev_states_[m] == LinkState::Shadowing || map_states[m] == LinkState::Shadowing) {
      const Point2D mid_m = 0.5 * (links_[m].tx() + links_[m].rx());
      const Point2D d = mid_l - mid_m;
      const double n = norm(d);
      if (n > 0.0) approach = {d.x / n, d.y / n};
      break;
    }
  }
  // First crossing of the array: the person enters over the outermost link,
  // so they are moving toward the nearest other link.
  if (!approach) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < links_.size(); ++m) {
      if (m == link) continue;
      const Point2D mid_m = 0.5 * (links_[m].tx() + links_[m].rx());
      const Point2D d = mid_m - mid_l;
      const double n = norm(d);
      if (n > 0.0 && n < best) {
        best = n;
        approach = {d.x / n, d.y / n};
      }
    }
  }
  return approach;
}

}  // namespace rsslink
