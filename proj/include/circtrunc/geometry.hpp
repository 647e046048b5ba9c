#ifndef CIRCTRUNC_GEOMETRY_HPP
#define CIRCTRUNC_GEOMETRY_HPP

#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace circtrunc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces any real to [0, 2pi). Never returns -0 or 2pi.
double reduce_angle(double radians) noexcept;

/// A direction on the unit circle, stored as radians in [0, 2pi).
class Angle {
 public:
  constexpr Angle() noexcept = default;
  explicit Angle(double radians) noexcept : value_(reduce_angle(radians)) {}

  [[nodiscard]] constexpr double radians() const noexcept { return value_; }
  [[nodiscard]] double cos() const noexcept;
  [[nodiscard]] double sin() const noexcept;

  /// Counter-clockwise rotation, i.e. (theta + by) mod 2pi.
  [[nodiscard]] Angle rotated(double by) const noexcept { return Angle(value_ + by); }

  friend constexpr bool operator==(Angle, Angle) noexcept = default;

 private:
  double value_ = 0.0;
};

/// Counter-clockwise offset from `from` to `to`, in [0, 2pi).
double ccw_offset(Angle from, Angle to) noexcept;

/// Quadrant-aware inverse tangent of s/c taking values in [0, 2pi).
/// Throws UndefinedDirection when s = c = 0.
Angle atan2pi(double s, double c);

/// d(a, b) = 1 - cos(a - b); half the squared chord length.
double chord_metric(Angle a, Angle b) noexcept;

/// d1(a, b) = pi - |pi - |a - b||; shortest angular distance in [0, pi].
double arc_metric(Angle a, Angle b) noexcept;

/// Subset classes of the circle. Several can hold at once.
struct ConvexClass {
  bool convex = false;                  // C1
  bool strongly_convex = false;         // C2
  bool convex_not_strongly = false;     // C3 = C1 \ C2
  bool closed_arc = false;              // C4
  bool closed_convex = false;           // C5 = C1 and C4

  friend bool operator==(const ConvexClass&, const ConvexClass&) = default;
  [[nodiscard]] std::string to_string() const;
};

/// A circular interval.
///
/// `I` arcs cover lo..hi with lo <= hi as reals. `J` arcs cover
/// [0, lo) u (hi, 2pi), the positive-direction arc from hi round to lo; the
/// closure flags always refer to the finite endpoints lo and hi.
class Arc {
 public:
  enum class Kind { I, J, Full, Empty };

  static Arc I(double lo, double hi, bool lo_closed = true, bool hi_closed = true);
  static Arc J(double lo, double hi, bool lo_closed = true, bool hi_closed = true);
  static Arc full() noexcept;
  static Arc empty() noexcept;
  /// Closed arc starting at `start` and running counter-clockwise for `span` radians.
  static Arc closed_ccw(Angle start, double span);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] Angle lo() const noexcept { return lo_; }
  [[nodiscard]] Angle hi() const noexcept { return hi_; }
  [[nodiscard]] bool lo_closed() const noexcept { return lo_closed_; }
  [[nodiscard]] bool hi_closed() const noexcept { return hi_closed_; }

  /// Lebesgue measure, in [0, 2pi].
  [[nodiscard]] double length() const noexcept;
  [[nodiscard]] bool contains(Angle phi) const noexcept;
  [[nodiscard]] bool is_closed() const noexcept;
  [[nodiscard]] bool is_empty() const noexcept { return kind_ == Kind::Empty; }
  [[nodiscard]] bool is_full() const noexcept { return kind_ == Kind::Full; }

  /// First point met going counter-clockwise (hi for J arcs).
  [[nodiscard]] Angle start() const noexcept;
  /// Last point met going counter-clockwise (lo for J arcs).
  [[nodiscard]] Angle end() const noexcept;
  [[nodiscard]] bool start_closed() const noexcept;
  [[nodiscard]] bool end_closed() const noexcept;

  /// Image of the arc under theta -> theta + by.
  [[nodiscard]] Arc rotated(double by) const;
  /// Image of the arc under theta -> (axis - theta); orientation flips.
  [[nodiscard]] Arc reflected(double axis) const;
  /// Same point set with both endpoints included.
  [[nodiscard]] Arc closure() const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Arc&, const Arc&) = default;

 private:
  Arc(Kind kind, Angle lo, Angle hi, bool lo_closed, bool hi_closed) noexcept
      : kind_(kind), lo_(lo), hi_(hi), lo_closed_(lo_closed), hi_closed_(hi_closed) {}
  static Arc from_ccw(double start, double span, bool start_closed, bool end_closed);

  Kind kind_ = Kind::Empty;
  Angle lo_{};
  Angle hi_{};
  bool lo_closed_ = false;
  bool hi_closed_ = false;
};

/// K1[a, b]: the closed minor arc joining a and b. At separation exactly pi
/// the I-form is returned.
Arc minor_arc(Angle a, Angle b);

ConvexClass classify(const Arc& arc);

/// atan2pi(sum w_i sin phi_i, sum w_i cos phi_i). Weights must be
/// nonnegative and sum to one within 1e-12.
Angle weighted_mean_direction(std::span<const Angle> angles, std::span<const double> weights);

/// Nearest point of a closed arc under the chordal metric. On the single
/// equidistant point outside the arc, the endpoint stored as `lo` wins.
Angle project(Angle phi, const Arc& arc);

}  // namespace circtrunc

#endif  // CIRCTRUNC_GEOMETRY_HPP
