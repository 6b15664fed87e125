#ifndef RSSLINK_METRICS_HPP
#define RSSLINK_METRICS_HPP

#include <string>
#include <vector>

#include "rsslink/geometry.hpp"

namespace rsslink {

struct TrackReport {
  double eps_x{0.0};            // m, MAE of the x coordinate
  double eps_y{0.0};            // m
  double sigma_x{0.0};          // m, std of |error|
  double sigma_y{0.0};          // m
  double eps_pct{0.0};          // % of particles inside the human ellipse
  double eps_r{0.0};            // % enhancement vs the least accurate model
  double sensitivity_area{0.0}; // m^2
  bool diverged{false};

  std::string to_json() const;
  static TrackReport from_json(const std::string& text);
};

/// Coordinate-wise mean absolute error.
std::pair<double, double> mae(const std::vector<Point2D>& truth,
                              const std::vector<Point2D>& estimates);

/// Coordinate-wise std of the absolute errors.
std::pair<double, double> error_std(const std::vector<Point2D>& truth,
                                    const std::vector<Point2D>& estimates);

/// Percentage of particles inside the human ellipse, summed over all steps.
/// particle_history[k] holds the particle positions at step k and
/// ellipse_history[k] the ellipse (centered at the true position).
double particle_ratio(const std::vector<std::vector<Point2D>>& particle_history,
                      const std::vector<HumanEllipse>& ellipse_history);

/// Enhancement of each model's ratio over the weakest one, in percent.
std::vector<double> enhancement(const std::vector<double>& ratios);

/// RMS of the residual about zero.
double residual_sigma(const std::vector<double>& measurements,
                      const std::vector<double>& model_gains);

/// Area of the sensitivity ellipse {p : excess path length <= delta} with
/// the transceivers at the foci.
double sensitivity_area(double d_los, double delta_threshold);

/// Aligned-column table with one row per (label, report).
std::string report_table(const std::vector<std::pair<std::string, TrackReport>>& rows);

}  // namespace rsslink

#endif
