#include "rsslink/simulate.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rsslink {

using nlohmann::json;

void Scenario::validate() const {
  if (links.empty()) throw std::invalid_argument("scenario needs at least one link");
  if (waypoints.size() < 2) throw std::invalid_argument("scenario needs >= 2 waypoints");
  if (!(ts > 0.0)) throw std::invalid_argument("ts must be positive");
  if (channel_count < 1) throw std::invalid_argument("channel count >= 1");
  if (noise_std < 0.0) throw std::invalid_argument("noise std >= 0");
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    if (distance(waypoints[i].p, waypoints[i + 1].p) == 0.0) {
      throw std::invalid_argument("coincident consecutive waypoints");
    }
    if (!(waypoints[i].speed > 0.0)) throw std::invalid_argument("speeds must be positive");
  }
  person.validate();
}

HumanEllipse Scenario::shadow_ellipse() const {
  HumanEllipse s = person;
  s.a_semi_minor = shadow_half_width;
  s.b_semi_major = std::max(person.b_semi_major, shadow_half_width);
  return s;
}

std::vector<Channel> ieee802154_channels(int count) {
  constexpr double kSpeedOfLight = 299792458.0;
  std::vector<Channel> out;
  out.reserve(count);
  for (int c = 1; c <= count; ++c) {
    const double f_hz = (2405.0 + 5.0 * (c - 1)) * 1e6;
    out.push_back({c, kSpeedOfLight / f_hz});
  }
  return out;
}

Scenario Scenario::from_json(const std::string& text) {
  const json j = json::parse(text);
  Scenario s;
  s.channel_count = j.value("channels", 16);
  const auto channels = ieee802154_channels(s.channel_count);
  s.links.clear();
  for (const auto& jl : j.at("links")) {
    const auto tx = jl.at("tx");
    const auto rx = jl.at("rx");
    s.links.emplace_back(Point2D{tx[0], tx[1]}, Point2D{rx[0], rx[1]}, channels);
  }
  if (j.contains("person")) {
    const auto& jp = j["person"];
    s.person.a_semi_minor = jp.value("a", 0.11);
    s.person.b_semi_major = jp.value("b", 0.20);
    s.person.psi0 = jp.value("psi0", 0.5);
    s.person.eps_r = jp.value("eps_r", 1.5);
    s.person.eta = jp.value("eta", 2.0);
    s.person.rho = jp.value("rho", 53.0);
    s.person.orientation = jp.value("orientation", 0.0);
  }
  s.shadow_half_width = j.value("shadow_half_width", 0.2);
  for (const auto& jw : j.at("waypoints")) {
    const auto p = jw.at("p");
    s.waypoints.push_back({{p[0], p[1]}, jw.value("speed", 0.5)});
  }
  s.ts = j.value("ts", 0.032);
  s.noise_std = j.value("noise_std", 0.38);
  s.quantization_db = j.value("quantization_db", 0.0);
  s.reflection_delta_max = j.value("reflection_delta_max", 0.5);
  s.baseline_offset_db = j.value("baseline_offset_db", 0.0);
  s.seed = j.value("seed", 1);
  s.validate();
  return s;
}

std::string Scenario::to_json() const {
  json j;
  j["channels"] = channel_count;
  j["links"] = json::array();
  for (const auto& l : links) {
    j["links"].push_back({{"tx", {l.tx().x, l.tx().y}}, {"rx", {l.rx().x, l.rx().y}}});
  }
  j["person"] = {{"a", person.a_semi_minor}, {"b", person.b_semi_major},
                 {"psi0", person.psi0},      {"eps_r", person.eps_r},
                 {"eta", person.eta},        {"rho", person.rho},
                 {"orientation", person.orientation}};
  j["shadow_half_width"] = shadow_half_width;
  j["waypoints"] = json::array();
  for (const auto& w : waypoints) {
    j["waypoints"].push_back({{"p", {w.p.x, w.p.y}}, {"speed", w.speed}});
  }
  j["ts"] = ts;
  j["noise_std"] = noise_std;
  j["quantization_db"] = quantization_db;
  j["reflection_delta_max"] = reflection_delta_max;
  j["baseline_offset_db"] = baseline_offset_db;
  j["seed"] = seed;
  return j.dump(2);
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void Scenario::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << to_json() << "\n";
}

std::vector<TrajectorySample> generate_trajectory(const Scenario& scenario) {
  scenario.validate();
  const double dt = scenario.ts / scenario.channel_count;

  // Segment start times from path lengths and speeds.
  std::vector<double> seg_start{0.0};
  for (std::size_t i = 0; i + 1 < scenario.waypoints.size(); ++i) {
    const double len = distance(scenario.waypoints[i].p, scenario.waypoints[i + 1].p);
    seg_start.push_back(seg_start.back() + len / scenario.waypoints[i].speed);
  }
  const double total = seg_start.back();

  std::vector<TrajectorySample> out;
  std::size_t seg = 0;
  for (double t = 0.0; t <= total + 0.5 * dt; t += dt) {
    const double tc = std::min(t, total);
    while (seg + 2 < seg_start.size() && tc >= seg_start[seg + 1]) ++seg;
    const Point2D a = scenario.waypoints[seg].p;
    const Point2D b = scenario.waypoints[seg + 1].p;
    const double len = distance(a, b);
    const double u = std::clamp((tc - seg_start[seg]) * scenario.waypoints[seg].speed / len,
                                0.0, 1.0);
    const Point2D dir = (1.0 / len) * (b - a);
    out.push_back({t, a + (u * len) * dir, scenario.waypoints[seg].speed * dir});
  }
  return out;
}

LinkState label_state(const LinkGeometry& link, Point2D center,
                      double shadow_half_width, double reflection_delta_max) {
  const LinkFrame f = link_frame(link, center);
  if (std::abs(f.perp) <= shadow_half_width && f.along > 0.0 &&
      f.along < link.los_distance()) {
    return LinkState::Shadowing;
  }
  if (excess_path_length(link, center) <= reflection_delta_max) {
    return LinkState::Reflection;
  }
  return LinkState::NonFading;
}

SimResult synthesize_rss(const Scenario& scenario) {
  const auto traj = generate_trajectory(scenario);
  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> noise(0.0, scenario.noise_std);

  SimResult res;
  res.truth.crossings.resize(scenario.links.size());
  res.rss.reserve(traj.size() * scenario.links.size());
  res.truth.samples.reserve(traj.size());

  const HumanEllipse shadow = scenario.shadow_ellipse();
  std::vector<double> prev_perp(scenario.links.size(), 0.0);

  for (std::size_t m = 0; m < traj.size(); ++m) {
    const auto& ts = traj[m];
    const int c = static_cast<int>(m % scenario.channel_count);

    TruthSample truth{ts.t, ts.pos, ts.vel, {}};
    truth.states.reserve(scenario.links.size());

    for (std::size_t l = 0; l < scenario.links.size(); ++l) {
      const LinkGeometry& link = scenario.links[l];
      const LinkFrame f = link_frame(link, ts.pos);
      if (m > 0 && prev_perp[l] * f.perp < 0.0 && f.along > 0.0 &&
          f.along < link.los_distance()) {
        res.truth.crossings[l].push_back(ts.t);
      }
      prev_perp[l] = f.perp;

      const LinkState state = label_state(link, ts.pos, scenario.shadow_half_width,
                                          scenario.reflection_delta_max);
      truth.states.push_back(state);

      HumanEllipse e = (state == LinkState::Shadowing) ? shadow : scenario.person;
      e.center = ts.pos;
      double g = 0.0;
      const double lambda = link.channels()[c].wavelength_m;
      try {
        g = three_state_gain(link, e, lambda, state);
      } catch (const degenerate_geometry_error&) {
        g = 0.0;  // center exactly on the LoS line outside the segment
      }
      double rss = g + noise(rng) + scenario.baseline_offset_db;
      if (scenario.quantization_db > 0.0) {
        rss = std::round(rss / scenario.quantization_db) * scenario.quantization_db;
      }
      res.rss.push_back({ts.t, static_cast<int>(l), link.channels()[c].index, rss});
    }
    res.truth.samples.push_back(std::move(truth));
  }
  return res;
}

void remove_baseline(std::vector<RssSample>& rss, int link_count, int channel_count,
                     int calibration_samples) {
  if (calibration_samples <= 0) return;
  std::vector<std::vector<double>> sums(link_count, std::vector<double>(channel_count + 1, 0.0));
  std::vector<std::vector<int>> counts(link_count, std::vector<int>(channel_count + 1, 0));
  for (const auto& s : rss) {
    if (counts[s.link][s.channel] < calibration_samples) {
      sums[s.link][s.channel] += s.rss_db;
      counts[s.link][s.channel]++;
    }
  }
  for (auto& s : rss) {
    if (counts[s.link][s.channel] > 0) {
      s.rss_db -= sums[s.link][s.channel] / counts[s.link][s.channel];
    }
  }
}

namespace {

double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 100; ++k) {
    term *= q / (k * k);
    sum += term;
    if (term < sum * 1e-16) break;
  }
  return sum;
}

}  // namespace

FirFilter design_lowpass(const FilterSpec& spec, double fs) {
  if (!(spec.passband_hz > 0.0) || !(spec.stopband_hz > spec.passband_hz) ||
      spec.stopband_hz >= fs / 2.0) {
    throw std::invalid_argument("filter spec must satisfy 0 < passband < stopband < Nyquist");
  }
  // Kaiser design: the more demanding of the stopband and passband ripple
  // requirements sets the window, with a few dB of margin.
  const double rp = std::pow(10.0, spec.passband_ripple_db / 20.0);
  const double delta_p = (rp - 1.0) / (rp + 1.0);
  const double delta_s = std::pow(10.0, -spec.stopband_atten_db / 20.0);
  const double a = -20.0 * std::log10(std::min(delta_p, delta_s)) + 5.0;

  double beta = 0.0;
  if (a > 50.0) {
    beta = 0.1102 * (a - 8.7);
  } else if (a > 21.0) {
    beta = 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0);
  }
  const double d_omega = 2.0 * M_PI * (spec.stopband_hz - spec.passband_hz) / fs;
  int n = static_cast<int>(std::ceil((a - 7.95) / (2.285 * d_omega))) + 1;
  if (n % 2 == 0) ++n;

  const double fc = 0.5 * (spec.passband_hz + spec.stopband_hz) / fs;  // normalized
  const int mid = (n - 1) / 2;
  FirFilter filt;
  filt.taps.resize(n);
  const double i0b = bessel_i0(beta);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int k = i - mid;
    const double sinc = (k == 0) ? 2.0 * fc
                                 : std::sin(2.0 * M_PI * fc * k) / (M_PI * k);
    const double r = static_cast<double>(k) / mid;
    const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
    filt.taps[i] = sinc * w;
    sum += filt.taps[i];
  }
  for (double& t : filt.taps) t /= sum;  // exact unity DC gain
  filt.group_delay_s = mid / fs;
  return filt;
}

std::vector<double> FirFilter::apply(const std::vector<double>& x) const {
  std::vector<double> y(x.size(), 0.0);
  const int n = static_cast<int>(taps.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const long j = static_cast<long>(i) - k;
      if (j >= 0) acc += taps[k] * x[j];
    }
    y[i] = acc;
  }
  return y;
}

double FirFilter::magnitude(double f, double fs) const {
  double re = 0.0, im = 0.0;
  const double w = 2.0 * M_PI * f / fs;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    re += taps[k] * std::cos(w * k);
    im -= taps[k] * std::sin(w * k);
  }
  return std::hypot(re, im);
}

void write_rss_csv(std::ostream& os, const std::vector<RssSample>& rss) {
  os << "time_s,link_id,channel,rss_db\n";
  for (const auto& s : rss) {
    os << s.t << "," << s.link << "," << s.channel << "," << s.rss_db << "\n";
  }
}

void write_truth_csv(std::ostream& os, const GroundTruth& truth) {
  os << "time_s,px,py,vx,vy";
  const std::size_t n_links = truth.samples.empty() ? 0 : truth.samples[0].states.size();
  for (std::size_t l = 0; l < n_links; ++l) os << ",state_link" << l;
  os << "\n";
  for (const auto& s : truth.samples) {
    os << s.t << "," << s.pos.x << "," << s.pos.y << "," << s.vel.x << "," << s.vel.y;
    for (const auto st : s.states) os << "," << static_cast<int>(st);
    os << "\n";
  }
}

}  // namespace rsslink
