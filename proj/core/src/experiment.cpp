#include "rsslink/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rsslink/stats.hpp"

namespace rsslink {

using nlohmann::json;

std::string model_name(TrackerConfig::Model m) {
  switch (m) {
    case TrackerConfig::Model::ThreeState:
      return "three-state";
    case TrackerConfig::Model::Exponential:
      return "exponential";
    case TrackerConfig::Model::ExponentialRayleigh:
      return "exponential-rayleigh";
  }
  return "?";
}

TrackerConfig::Model model_from_name(const std::string& name) {
  if (name == "three-state") return TrackerConfig::Model::ThreeState;
  if (name == "exponential") return TrackerConfig::Model::Exponential;
  if (name == "exponential-rayleigh") return TrackerConfig::Model::ExponentialRayleigh;
  throw std::invalid_argument("unknown model: " + name);
}

void RunConfig::apply_override(const std::string& key, double value) {
  if (key == "n_particles") {
    tracker.n_particles = static_cast<int>(value);
  } else if (key == "sigma_p") {
    tracker.sigma_p = value;
  } else if (key == "psi0") {
    tracker.ellipse.psi0 = value;
  } else if (key == "eps_r") {
    tracker.ellipse.eps_r = value;
  } else if (key == "eta") {
    tracker.ellipse.eta = value;
  } else if (key == "rho") {
    tracker.ellipse.rho = value;
  } else if (key == "A") {
    tracker.shadow_half_width = value;
  } else if (key == "B") {
    tracker.ellipse.b_semi_major = value;
  } else if (key == "shadow_a") {
    tracker.shadow_half_width = value;
  } else if (key == "wx") {
    tracker.process_noise_x = value;
  } else if (key == "wy") {
    tracker.process_noise_y = value;
  } else if (key == "noise_std") {
    scenario.noise_std = value;
  } else {
    throw std::invalid_argument("unknown parameter: " + key);
  }
}

namespace {

double sensitivity_delta(TrackerConfig::Model m) {
  switch (m) {
    case TrackerConfig::Model::ThreeState:
      return 0.50;
    case TrackerConfig::Model::Exponential:
      return 0.06;
    case TrackerConfig::Model::ExponentialRayleigh:
      return 0.15;
  }
  return 0.0;
}

}  // namespace

SingleRun run_single(const Scenario& scenario, const TrackerConfig& tracker,
                     const HmmModel& hmm, std::uint64_t seed) {
  Scenario sc = scenario;
  sc.seed = seed;
  const SimResult sim = synthesize_rss(sc);

  const std::size_t n_links = sc.links.size();
  const int C = sc.channel_count;
  const std::size_t n_steps = sim.truth.samples.size() / C;

  Tracker trk(sc.links, tracker, seed);
  std::vector<ForwardState> fwd(n_links);
  bool fwd_ready = false;

  SingleRun out;
  std::vector<std::vector<Point2D>> particle_history;
  std::vector<HumanEllipse> ellipse_history;

  std::vector<RssVector> meas(n_links);
  for (std::size_t k = 0; k < n_steps; ++k) {
    for (auto& m : meas) m.assign(C, 0.0);
    for (int j = 0; j < C; ++j) {
      const std::size_t slot = k * C + j;
      for (std::size_t l = 0; l < n_links; ++l) {
        meas[l][j] = sim.rss[slot * n_links + l].rss_db;
      }
    }
    const std::size_t slot_end = k * C + C - 1;
    const TruthSample& truth = sim.truth.samples[slot_end];

    // HMM input: mean over the C channel measurements, in linear scale.
    std::vector<LinkState> states(n_links);
    for (std::size_t l = 0; l < n_links; ++l) {
      double mean_db = 0.0;
      for (double v : meas[l]) mean_db += v;
      mean_db /= C;
      const double r_mw = stats::db_to_linear(mean_db);
      fwd[l] = fwd_ready ? forward_step(fwd[l], hmm, r_mw) : forward_init(hmm, r_mw);
      states[l] = map_state(fwd[l]);
    }
    fwd_ready = true;

    out.state_times.push_back(truth.t);
    out.map_states.push_back(states);

    const auto est = trk.step(states, meas);
    if (est) {
      out.times.push_back(truth.t);
      out.truth.push_back(truth.pos);
      out.estimates.push_back({est->px, est->py});
      std::vector<Point2D> cloud;
      cloud.reserve(trk.particles().particles.size());
      for (const auto& p : trk.particles().particles) cloud.push_back({p.px, p.py});
      particle_history.push_back(std::move(cloud));
      HumanEllipse e = sc.person;
      e.center = truth.pos;
      ellipse_history.push_back(e);
    }
  }

  TrackReport rep;
  rep.diverged = trk.diverged_once();
  rep.sensitivity_area =
      sensitivity_area(sc.links.front().los_distance(), sensitivity_delta(tracker.model));
  if (!out.estimates.empty()) {
    std::tie(rep.eps_x, rep.eps_y) = mae(out.truth, out.estimates);
    std::tie(rep.sigma_x, rep.sigma_y) = error_std(out.truth, out.estimates);
    rep.eps_pct = particle_ratio(particle_history, ellipse_history);
  } else {
    rep.diverged = true;
  }
  out.report = rep;
  return out;
}

namespace {

void accumulate(TrackReport& mean, TrackReport& m2, const TrackReport& r, int n) {
  // Welford over the scalar fields.
  auto upd = [n](double& mu, double& acc, double x) {
    const double d = x - mu;
    mu += d / n;
    acc += d * (x - mu);
  };
  upd(mean.eps_x, m2.eps_x, r.eps_x);
  upd(mean.eps_y, m2.eps_y, r.eps_y);
  upd(mean.sigma_x, m2.sigma_x, r.sigma_x);
  upd(mean.sigma_y, m2.sigma_y, r.sigma_y);
  upd(mean.eps_pct, m2.eps_pct, r.eps_pct);
}

void finalize_std(TrackReport& m2, int n) {
  auto f = [n](double& v) { v = n > 0 ? std::sqrt(v / n) : 0.0; };
  f(m2.eps_x);
  f(m2.eps_y);
  f(m2.sigma_x);
  f(m2.sigma_y);
  f(m2.eps_pct);
}

void write_run_artifacts(const std::filesystem::path& dir, const std::string& model,
                         int run, const SingleRun& sr) {
  const std::string stem = model + "_run" + std::to_string(run);
  {
    std::ofstream os(dir / (stem + "_trajectory.csv"));
    os << "time_s,true_x,true_y,est_x,est_y\n";
    for (std::size_t i = 0; i < sr.times.size(); ++i) {
      os << sr.times[i] << "," << sr.truth[i].x << "," << sr.truth[i].y << ","
         << sr.estimates[i].x << "," << sr.estimates[i].y << "\n";
    }
  }
  {
    std::ofstream os(dir / (stem + "_report.json"));
    os << sr.report.to_json() << "\n";
  }
  {
    std::ofstream os(dir / (stem + "_states.csv"));
    os << "time_s";
    const std::size_t n_links = sr.map_states.empty() ? 0 : sr.map_states[0].size();
    for (std::size_t l = 0; l < n_links; ++l) os << ",state_link" << l;
    os << "\n";
    for (std::size_t k = 0; k < sr.state_times.size(); ++k) {
      os << sr.state_times[k];
      for (const auto s : sr.map_states[k]) os << "," << static_cast<int>(s);
      os << "\n";
    }
  }
}

}  // namespace

std::string CampaignSummary::to_json() const {
  json j = json::array();
  for (const auto& m : models) {
    json e;
    e["model"] = model_name(m.model);
    e["mean"] = json::parse(m.mean.to_json());
    e["std"] = json::parse(m.stddev.to_json());
    e["diverged_runs"] = m.diverged_runs;
    j.push_back(e);
  }
  return j.dump(2);
}

std::string CampaignSummary::to_table() const {
  std::vector<std::pair<std::string, TrackReport>> rows;
  for (const auto& m : models) rows.emplace_back(model_name(m.model), m.mean);
  return report_table(rows);
}

CampaignSummary run_experiment(const RunConfig& config) {
  if (config.monte_carlo_runs < 1) throw std::invalid_argument("runs >= 1");
  config.scenario.validate();
  config.hmm.validate();

  std::filesystem::path dir;
  const bool write = !config.out_dir.empty();
  if (write) {
    dir = config.out_dir;
    std::filesystem::create_directories(dir);
    config.scenario.save((dir / "scenario.json").string());
  }

  CampaignSummary summary;
  for (const auto model : config.models) {
    TrackerConfig tc = config.tracker;
    tc.model = model;
    tc.benchmark = model == TrackerConfig::Model::ExponentialRayleigh
                       ? BenchmarkParams::exponential_rayleigh()
                       : BenchmarkParams::exponential();

    ModelSummary ms;
    ms.model = model;
    TrackReport mean{}, m2{};
    int used = 0;
    for (int run = 0; run < config.monte_carlo_runs; ++run) {
      const SingleRun sr = run_single(config.scenario, tc, config.hmm,
                                      config.seed + static_cast<std::uint64_t>(run));
      if (sr.report.diverged) ++ms.diverged_runs;
      if (!sr.estimates.empty()) {
        ++used;
        accumulate(mean, m2, sr.report, used);
      }
      if (write) write_run_artifacts(dir, model_name(model), run, sr);
    }
    finalize_std(m2, used);
    mean.sensitivity_area = sensitivity_area(config.scenario.links.front().los_distance(),
                                             sensitivity_delta(model));
    ms.mean = mean;
    ms.stddev = m2;
    summary.models.push_back(ms);
  }

  // Enhancement with respect to the least accurate model in this campaign.
  if (summary.models.size() >= 2) {
    std::vector<double> ratios;
    for (const auto& m : summary.models) ratios.push_back(m.mean.eps_pct);
    // A zero baseline ratio makes the relative enhancement undefined; leave
    // the default of 0 in that case.
    if (*std::min_element(ratios.begin(), ratios.end()) > 0.0) {
      const auto enh = enhancement(ratios);
      for (std::size_t i = 0; i < enh.size(); ++i) summary.models[i].mean.eps_r = enh[i];
    }
  }

  if (write) {
    std::ofstream(dir / "summary.json") << summary.to_json() << "\n";
    std::ofstream(dir / "summary.txt") << summary.to_table();
  }
  return summary;
}

std::vector<SweepPoint> sweep_parameter(RunConfig config, const std::string& parameter,
                                        const std::vector<double>& grid) {
  static const std::vector<std::string> kAllowed{"sigma_p", "eps_r", "psi0", "rho", "A"};
  bool ok = false;
  for (const auto& k : kAllowed) ok = ok || k == parameter;
  if (!ok) throw std::invalid_argument("unknown sweep parameter: " + parameter);

  std::vector<SweepPoint> out;
  const std::string base_dir = config.out_dir;
  for (double v : grid) {
    RunConfig c = config;
    c.apply_override(parameter, v);
    if (!base_dir.empty()) {
      std::ostringstream os;
      os << base_dir << "/" << parameter << "_" << v;
      c.out_dir = os.str();
    }
    const CampaignSummary s = run_experiment(c);
    out.push_back({v, s.models});
  }
  return out;
}

std::string sweep_csv(const std::string& parameter, const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os << parameter << ",model,eps_x_m,eps_y_m,eps_pct,diverged_runs\n";
  for (const auto& p : points) {
    for (const auto& m : p.models) {
      os << p.value << "," << model_name(m.model) << "," << m.mean.eps_x << ","
         << m.mean.eps_y << "," << m.mean.eps_pct << "," << m.diverged_runs << "\n";
    }
  }
  return os.str();
}

}  // namespace rsslink
