#ifndef RSSLINK_GEOMETRY_HPP
#define RSSLINK_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rsslink {

struct Point2D {
  double x{0.0};
  double y{0.0};
};

inline Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
inline Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
inline Point2D operator*(double s, Point2D p) { return {s * p.x, s * p.y}; }

inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2D a, Point2D b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2D p) { return std::hypot(p.x, p.y); }
inline double distance(Point2D a, Point2D b) { return norm(b - a); }

struct Channel {
  int index{0};
  double wavelength_m{0.0};
};

/// A single TX-RX pair and the carrier wavelengths it communicates on.
class LinkGeometry {
 public:
  LinkGeometry(Point2D tx, Point2D rx, std::vector<Channel> channels);

  Point2D tx() const { return tx_; }
  Point2D rx() const { return rx_; }
  double los_distance() const { return d_los_; }
  const std::vector<Channel>& channels() const { return channels_; }

  /// Unit vector pointing from TX to RX.
  Point2D direction() const { return (1.0 / d_los_) * (rx_ - tx_); }

 private:
  Point2D tx_;
  Point2D rx_;
  double d_los_;
  std::vector<Channel> channels_;
};

/// Position of a point expressed in the link-aligned frame: `along` is the
/// distance from TX measured along the LoS, `perp` the signed offset from
/// the LoS line (positive to the left of TX->RX).
struct LinkFrame {
  double along{0.0};
  double perp{0.0};
};

LinkFrame link_frame(const LinkGeometry& link, Point2D p);

/// Cross section of a person: axis-aligned ellipse (optionally rotated by
/// `orientation`) with uniform electrical properties.
struct HumanEllipse {
  Point2D center{};
  double a_semi_minor{0.11};   // m, half-width across the direction of travel
  double b_semi_major{0.20};   // m
  double psi0{0.5};            // empirical reflection coefficient
  double eps_r{1.5};           // relative permittivity (clothing)
  double eta{2.0};             // path loss exponent
  double rho{53.0};            // attenuation factor, dB/m
  double orientation{0.0};     // rad

  void validate() const;

  /// Boundary point at parameter t in [0, 2pi).
  Point2D boundary(double t) const;
  /// Unit tangent direction of the boundary at parameter t.
  Point2D tangent(double t) const;
  /// True if p lies inside or on the (rotated) ellipse.
  bool contains(Point2D p) const;
};

struct ReflectionSolution {
  Point2D point{};             // reflection point on the ellipse boundary
  double grazing_angle{0.0};   // rad, measured from the surface tangent
  double excess_path{0.0};     // m
};

class degenerate_geometry_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ||p_tx - p|| + ||p_rx - p|| - d_los; zero iff p is on the LoS segment.
double excess_path_length(const LinkGeometry& link, Point2D p);

/// Radius of the n-th Fresnel zone at distances d_tx, d_rx from the nodes.
double fresnel_radius(int n, double lambda_c, double d_tx, double d_rx);

struct ReflectionSearchOptions {
  int coarse_samples{256};
  double tolerance{1e-9};      // m, on the boundary parameter arc length
};

/// Finds the boundary point, on the ellipse-center side of the LoS line,
/// minimizing the excess path length of the single-bounce reflection.
/// Throws degenerate_geometry_error when the center lies on the LoS line.
ReflectionSolution reflection_point(const LinkGeometry& link,
                                    const HumanEllipse& ellipse,
                                    const ReflectionSearchOptions& opts = {});

}  // namespace rsslink

#endif
