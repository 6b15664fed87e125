#ifndef RSSLINK_STATS_HPP
#define RSSLINK_STATS_HPP

#include <span>
#include <stdexcept>

namespace rsslink::stats {

enum class DensityFamily { LogNormal, Weibull, Gamma };

/// Conditional density of the linear-scale RSS in one link state.
/// LogNormal carries (mu, sigma); Weibull and Gamma carry (scale a, shape b).
class StateDensity {
 public:
  static StateDensity log_normal(double mu, double sigma);
  static StateDensity weibull(double scale, double shape);
  static StateDensity gamma(double scale, double shape);

  DensityFamily family() const { return family_; }
  double p1() const { return p1_; }  // mu or scale
  double p2() const { return p2_; }  // sigma or shape

  double pdf(double r) const;
  double cdf(double r) const;

 private:
  StateDensity(DensityFamily f, double p1, double p2) : family_(f), p1_(p1), p2_(p2) {}
  DensityFamily family_;
  double p1_;
  double p2_;
};

struct KsResult {
  double statistic{0.0};
  double p_value{1.0};
  bool reject_h0{false};
};

class fit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 10^(r/10): dB to linear power ratio.
double db_to_linear(double r_db);

/// Maximum-likelihood fit; log-normal is closed form, Weibull and Gamma use
/// Newton iteration on the profiled shape likelihood.
StateDensity fit_mle(DensityFamily family, std::span<const double> samples);

/// One-sample Kolmogorov-Smirnov test against a fully specified density.
KsResult ks_test(std::span<const double> samples, const StateDensity& d, double alpha);

// Special functions used by the densities and fits.
double digamma(double x);
double trigamma(double x);
/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// CDF of the asymptotic Kolmogorov distribution, Q(t) = P(K > t).
double kolmogorov_q(double t);

}  // namespace rsslink::stats

#endif
