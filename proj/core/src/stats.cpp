#include "rsslink/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rsslink::stats {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(what);
}

}  // namespace

StateDensity StateDensity::log_normal(double mu, double sigma) {
  require_positive(sigma, "sigma must be > 0");
  return {DensityFamily::LogNormal, mu, sigma};
}

StateDensity StateDensity::weibull(double scale, double shape) {
  require_positive(scale, "scale must be > 0");
  require_positive(shape, "shape must be > 0");
  return {DensityFamily::Weibull, scale, shape};
}

StateDensity StateDensity::gamma(double scale, double shape) {
  require_positive(scale, "scale must be > 0");
  require_positive(shape, "shape must be > 0");
  return {DensityFamily::Gamma, scale, shape};
}

double StateDensity::pdf(double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("density requires r > 0");
  switch (family_) {
    case DensityFamily::LogNormal: {
      const double z = (std::log(r) - p1_) / p2_;
      return std::exp(-0.5 * z * z) / (r * p2_ * std::sqrt(2.0 * M_PI));
    }
    case DensityFamily::Weibull: {
      const double q = r / p1_;
      return p2_ / p1_ * std::pow(q, p2_ - 1.0) * std::exp(-std::pow(q, p2_));
    }
    case DensityFamily::Gamma: {
      return std::exp((p2_ - 1.0) * std::log(r) - r / p1_ - p2_ * std::log(p1_) -
                      std::lgamma(p2_));
    }
  }
  return 0.0;
}

double StateDensity::cdf(double r) const {
  if (r <= 0.0) return 0.0;
  switch (family_) {
    case DensityFamily::LogNormal: {
      const double z = (std::log(r) - p1_) / (p2_ * std::sqrt(2.0));
      return 0.5 * std::erfc(-z);
    }
    case DensityFamily::Weibull:
      return 1.0 - std::exp(-std::pow(r / p1_, p2_));
    case DensityFamily::Gamma:
      return gamma_p(p2_, r / p1_);
  }
  return 0.0;
}

double db_to_linear(double r_db) { return std::pow(10.0, r_db / 10.0); }

double digamma(double x) {
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
  return result;
}

double trigamma(double x) {
  double result = 0.0;
  while (x < 6.0) {
    result += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  result += inv * (1.0 + 0.5 * inv +
                   inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0))));
  return result;
}

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // Series representation.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Continued fraction for Q(a, x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * t * t);
    sum += (j % 2 == 1 ? term : -term);
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

StateDensity fit_log_normal(std::span<const double> x) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += std::log(v);
  mean /= n;
  double var = 0.0;
  for (double v : x) {
    const double d = std::log(v) - mean;
    var += d * d;
  }
  var /= n;
  // Rounding noise from summing identical samples leaves a tiny nonzero
  // variance; treat anything below it as degenerate.
  if (var <= 1e-20 * std::max(1.0, mean * mean)) {
    throw fit_error("degenerate fit: zero variance in log samples");
  }
  return StateDensity::log_normal(mean, std::sqrt(var));
}

StateDensity fit_weibull(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> lx(n);
  double mean_lx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    mean_lx += lx[i];
  }
  mean_lx /= n;
  bool constant = std::all_of(lx.begin(), lx.end(), [&](double v) { return v == lx[0]; });
  if (constant) throw fit_error("degenerate fit: constant samples");

  double b = 1.0;
  for (int it = 0; it < 200; ++it) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::exp(b * lx[i]);
      s0 += w;
      s1 += w * lx[i];
      s2 += w * lx[i] * lx[i];
    }
    const double m1 = s1 / s0;
    const double g = m1 - 1.0 / b - mean_lx;
    const double gp = s2 / s0 - m1 * m1 + 1.0 / (b * b);
    const double step = g / gp;
    b -= step;
    if (b <= 0.0) b = 1e-3;
    if (std::abs(step) < 1e-10) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::exp(b * lx[i]);
      return StateDensity::weibull(std::pow(s / n, 1.0 / b), b);
    }
  }
  throw fit_error("weibull fit did not converge after 200 iterations");
}

StateDensity fit_gamma(std::span<const double> x) {
  const std::size_t n = x.size();
  double mean = 0.0, mean_l = 0.0;
  for (double v : x) {
    mean += v;
    mean_l += std::log(v);
  }
  mean /= n;
  mean_l /= n;
  const double s = std::log(mean) - mean_l;
  if (s <= 0.0) throw fit_error("degenerate fit: non-positive log-moment gap");
  double b = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  for (int it = 0; it < 200; ++it) {
    const double h = std::log(b) - digamma(b) - s;
    const double hp = 1.0 / b - trigamma(b);
    const double step = h / hp;
    b -= step;
    if (b <= 0.0) b = 1e-6;
    if (std::abs(step) < 1e-10) return StateDensity::gamma(mean / b, b);
  }
  throw fit_error("gamma fit did not converge after 200 iterations");
}

}  // namespace

StateDensity fit_mle(DensityFamily family, std::span<const double> samples) {
  if (samples.size() < 30) throw std::invalid_argument("fit_mle requires >= 30 samples");
  for (double v : samples) {
    if (!(v > 0.0)) throw std::invalid_argument("fit_mle requires positive samples");
  }
  switch (family) {
    case DensityFamily::LogNormal:
      return fit_log_normal(samples);
    case DensityFamily::Weibull:
      return fit_weibull(samples);
    case DensityFamily::Gamma:
      return fit_gamma(samples);
  }
  throw std::invalid_argument("unknown family");
}

KsResult ks_test(std::span<const double> samples, const StateDensity& d, double alpha) {
  const std::size_t n = samples.size();
  if (n < 10) throw std::invalid_argument("ks_test requires >= 10 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double stat = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = d.cdf(sorted[i]);
    stat = std::max(stat, std::max((i + 1.0) / n - f, f - static_cast<double>(i) / n));
  }
  KsResult res;
  res.statistic = stat;
  res.p_value = kolmogorov_q(std::sqrt(static_cast<double>(n)) * stat);
  res.reject_h0 = res.p_value < alpha;
  return res;
}

}  // namespace rsslink::stats
