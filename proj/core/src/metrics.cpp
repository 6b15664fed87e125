#include "rsslink/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rsslink {

using nlohmann::json;

std::string TrackReport::to_json() const {
  json j;
  j["eps_x_m"] = eps_x;
  j["eps_y_m"] = eps_y;
  j["sigma_x_m"] = sigma_x;
  j["sigma_y_m"] = sigma_y;
  j["eps_pct"] = eps_pct;
  j["eps_r_pct"] = eps_r;
  j["sensitivity_area_m2"] = sensitivity_area;
  j["diverged"] = diverged;
  return j.dump(2);
}

TrackReport TrackReport::from_json(const std::string& text) {
  const json j = json::parse(text);
  TrackReport r;
  r.eps_x = j.at("eps_x_m");
  r.eps_y = j.at("eps_y_m");
  r.sigma_x = j.at("sigma_x_m");
  r.sigma_y = j.at("sigma_y_m");
  r.eps_pct = j.at("eps_pct");
  r.eps_r = j.at("eps_r_pct");
  r.sensitivity_area = j.at("sensitivity_area_m2");
  r.diverged = j.at("diverged");
  return r;
}

std::pair<double, double> mae(const std::vector<Point2D>& truth,
                              const std::vector<Point2D>& estimates) {
  if (truth.size() != estimates.size()) throw std::invalid_argument("length mismatch");
  if (truth.empty()) throw std::invalid_argument("need at least one estimate");
  double ex = 0.0, ey = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    ex += std::abs(truth[k].x - estimates[k].x);
    ey += std::abs(truth[k].y - estimates[k].y);
  }
  return {ex / truth.size(), ey / truth.size()};
}

std::pair<double, double> error_std(const std::vector<Point2D>& truth,
                                    const std::vector<Point2D>& estimates) {
  const auto [mx, my] = mae(truth, estimates);
  double vx = 0.0, vy = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double dx = std::abs(truth[k].x - estimates[k].x) - mx;
    const double dy = std::abs(truth[k].y - estimates[k].y) - my;
    vx += dx * dx;
    vy += dy * dy;
  }
  return {std::sqrt(vx / truth.size()), std::sqrt(vy / truth.size())};
}

double particle_ratio(const std::vector<std::vector<Point2D>>& particle_history,
                      const std::vector<HumanEllipse>& ellipse_history) {
  if (particle_history.size() != ellipse_history.size()) {
    throw std::invalid_argument("misaligned histories");
  }
  long inside = 0;
  long total = 0;
  for (std::size_t k = 0; k < particle_history.size(); ++k) {
    for (const auto& p : particle_history[k]) {
      if (ellipse_history[k].contains(p)) ++inside;
    }
    total += static_cast<long>(particle_history[k].size());
  }
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(inside) / static_cast<double>(total);
}

std::vector<double> enhancement(const std::vector<double>& ratios) {
  if (ratios.empty()) throw std::invalid_argument("need at least one ratio");
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  std::vector<double> out;
  out.reserve(ratios.size());
  for (double r : ratios) out.push_back((r - lo) / lo * 100.0);
  return out;
}

double residual_sigma(const std::vector<double>& measurements,
                      const std::vector<double>& model_gains) {
  if (measurements.size() != model_gains.size()) throw std::invalid_argument("length mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < measurements.size(); ++k) {
    const double r = measurements[k] - model_gains[k];
    acc += r * r;
  }
  return std::sqrt(acc / measurements.size());
}

double sensitivity_area(double d_los, double delta_threshold) {
  if (!(d_los > 0.0) || !(delta_threshold > 0.0)) {
    throw std::invalid_argument("sensitivity_area requires positive arguments");
  }
  const double a = 0.5 * (d_los + delta_threshold);
  const double c = 0.5 * d_los;
  const double b = std::sqrt(a * a - c * c);
  return M_PI * a * b;
}

std::string report_table(const std::vector<std::pair<std::string, TrackReport>>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(28) << "Model" << std::right << std::setw(14) << "eps_x [cm]"
     << std::setw(14) << "eps_y [cm]" << std::setw(10) << "eps_%" << std::setw(10) << "eps_R"
     << std::setw(14) << "Area [m^2]" << "\n";
  os << std::string(90, '-') << "\n";
  os << std::fixed << std::setprecision(2);
  for (const auto& [label, r] : rows) {
    std::ostringstream ex, ey;
    ex << std::fixed << std::setprecision(2) << r.eps_x * 100.0 << " +- " << r.sigma_x * 100.0;
    ey << std::fixed << std::setprecision(2) << r.eps_y * 100.0 << " +- " << r.sigma_y * 100.0;
    os << std::left << std::setw(28) << label << std::right << std::setw(14) << ex.str()
       << std::setw(14) << ey.str() << std::setw(10) << r.eps_pct << std::setw(10) << r.eps_r
       << std::setw(14) << r.sensitivity_area << "\n";
  }
  return os.str();
}

}  // namespace rsslink
