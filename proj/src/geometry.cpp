#include "circtrunc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "circtrunc/errors.hpp"

namespace circtrunc {

namespace {

constexpr double kLengthTolerance = 1e-12;
constexpr double kTieTolerance = 1e-12;
constexpr double kResultantFloor = 1e-12;
constexpr double kWeightSumTolerance = 1e-12;

std::string format_angle(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

double reduce_angle(double radians) noexcept {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  // fmod of tiny negatives lands on 2pi after the shift; also folds -0 to +0.
  if (r >= kTwoPi || r == 0.0) {
    r = 0.0;
  }
  return r;
}

double Angle::cos() const noexcept { return std::cos(value_); }
double Angle::sin() const noexcept { return std::sin(value_); }

double ccw_offset(Angle from, Angle to) noexcept {
  return reduce_angle(to.radians() - from.radians());
}

Angle atan2pi(double s, double c) {
  if (s == 0.0 && c == 0.0) {
    throw UndefinedDirection("atan2pi: s = c = 0");
  }
  if (c > 0.0 && s >= 0.0) {
    return Angle(std::atan(s / c));
  }
  if (c < 0.0) {
    return Angle(kPi + std::atan(s / c));
  }
  if (c == 0.0 && s > 0.0) {
    return Angle(kPi / 2.0);
  }
  // c >= 0, s < 0
  return Angle(kTwoPi + std::atan(s / c));
}

double chord_metric(Angle a, Angle b) noexcept {
  return 1.0 - std::cos(a.radians() - b.radians());
}

double arc_metric(Angle a, Angle b) noexcept {
  return kPi - std::abs(kPi - std::abs(a.radians() - b.radians()));
}

std::string ConvexClass::to_string() const {
  std::string out = "{";
  auto add = [&out](bool on, const char* tag) {
    if (!on) return;
    if (out.size() > 1) out += ",";
    out += tag;
  };
  add(convex, "C1");
  add(strongly_convex, "C2");
  add(convex_not_strongly, "C3");
  add(closed_arc, "C4");
  add(closed_convex, "C5");
  return out + "}";
}

// ---------------------------------------------------------------------------
// Arc

Arc Arc::I(double lo, double hi, bool lo_closed, bool hi_closed) {
  const Angle a(lo);
  const Angle b(hi);
  if (a.radians() > b.radians()) {
    throw InvalidParameter("I-arc requires lo <= hi, got lo=" + format_angle(lo) +
                           " hi=" + format_angle(hi));
  }
  return Arc(Kind::I, a, b, lo_closed, hi_closed);
}

Arc Arc::J(double lo, double hi, bool lo_closed, bool hi_closed) {
  const Angle a(lo);
  const Angle b(hi);
  if (a.radians() > b.radians()) {
    throw InvalidParameter("J-arc requires lo <= hi, got lo=" + format_angle(lo) +
                           " hi=" + format_angle(hi));
  }
  if (a == b && (lo_closed || hi_closed)) {
    return full();
  }
  return Arc(Kind::J, a, b, lo_closed, hi_closed);
}

Arc Arc::full() noexcept { return Arc(Kind::Full, Angle{}, Angle{}, true, true); }

Arc Arc::empty() noexcept { return Arc(Kind::Empty, Angle{}, Angle{}, true, true); }

Arc Arc::closed_ccw(Angle start, double span) {
  if (span < 0.0) {
    throw InvalidParameter("arc span must be nonnegative");
  }
  return from_ccw(start.radians(), span, true, true);
}

Arc Arc::from_ccw(double start, double span, bool start_closed, bool end_closed) {
  start = reduce_angle(start);
  if (span >= kTwoPi) {
    if (start_closed || end_closed) {
      return full();
    }
    return Arc(Kind::J, Angle(start), Angle(start), false, false);
  }
  const double end = start + span;
  if (end < kTwoPi) {
    return Arc(Kind::I, Angle(start), Angle(end), start_closed, end_closed);
  }
  return Arc(Kind::J, Angle(end - kTwoPi), Angle(start), end_closed, start_closed);
}

double Arc::length() const noexcept {
  switch (kind_) {
    case Kind::I:
      return hi_.radians() - lo_.radians();
    case Kind::J:
      return kTwoPi - (hi_.radians() - lo_.radians());
    case Kind::Full:
      return kTwoPi;
    case Kind::Empty:
      return 0.0;
  }
  return 0.0;
}

bool Arc::contains(Angle phi) const noexcept {
  const double x = phi.radians();
  const double a = lo_.radians();
  const double b = hi_.radians();
  const bool at_lo = x == a && lo_closed_;
  const bool at_hi = x == b && hi_closed_;
  switch (kind_) {
    case Kind::I:
      return (a < x && x < b) || at_lo || at_hi;
    case Kind::J:
      return x < a || x > b || at_lo || at_hi;
    case Kind::Full:
      return true;
    case Kind::Empty:
      return false;
  }
  return false;
}

bool Arc::is_closed() const noexcept {
  if (kind_ == Kind::Full || kind_ == Kind::Empty) {
    return true;
  }
  return lo_closed_ && hi_closed_;
}

Angle Arc::start() const noexcept { return kind_ == Kind::J ? hi_ : lo_; }
Angle Arc::end() const noexcept { return kind_ == Kind::J ? lo_ : hi_; }
bool Arc::start_closed() const noexcept { return kind_ == Kind::J ? hi_closed_ : lo_closed_; }
bool Arc::end_closed() const noexcept { return kind_ == Kind::J ? lo_closed_ : hi_closed_; }

Arc Arc::rotated(double by) const {
  if (kind_ == Kind::Full || kind_ == Kind::Empty) {
    return *this;
  }
  return from_ccw(start().radians() + by, length(), start_closed(), end_closed());
}

Arc Arc::reflected(double axis) const {
  if (kind_ == Kind::Full || kind_ == Kind::Empty) {
    return *this;
  }
  return from_ccw(axis - end().radians(), length(), end_closed(), start_closed());
}

Arc Arc::closure() const {
  if (kind_ == Kind::Full || kind_ == Kind::Empty) {
    return *this;
  }
  return from_ccw(start().radians(), length(), true, true);
}

std::string Arc::to_string() const {
  switch (kind_) {
    case Kind::Full:
      return "Full";
    case Kind::Empty:
      return "Empty";
    default:
      break;
  }
  std::string out = kind_ == Kind::I ? "I" : "J";
  out += lo_closed_ ? "[" : "(";
  out += format_angle(lo_.radians()) + ", " + format_angle(hi_.radians());
  out += hi_closed_ ? "]" : ")";
  return out;
}

// ---------------------------------------------------------------------------

Arc minor_arc(Angle a, Angle b) {
  const double x = std::min(a.radians(), b.radians());
  const double y = std::max(a.radians(), b.radians());
  if (y - x <= kPi) {
    return Arc::I(x, y);
  }
  return Arc::J(x, y);
}

ConvexClass classify(const Arc& arc) {
  ConvexClass out;
  if (arc.is_empty()) {
    out.closed_arc = true;
    out.closed_convex = true;
    return out;
  }
  if (arc.is_full()) {
    out.convex = true;
    out.convex_not_strongly = true;
    out.closed_arc = true;
    out.closed_convex = true;
    return out;
  }
  const double len = arc.length();
  const bool closed = arc.is_closed();
  out.closed_arc = closed;
  if (len <= kPi + kLengthTolerance) {
    out.convex = true;
    const bool closed_semicircle = closed && std::abs(len - kPi) <= kLengthTolerance;
    out.strongly_convex = !closed_semicircle;
    out.convex_not_strongly = closed_semicircle;
    out.closed_convex = closed;
  }
  return out;
}

Angle weighted_mean_direction(std::span<const Angle> angles, std::span<const double> weights) {
  if (angles.size() != weights.size()) {
    throw DimensionMismatch("weighted_mean_direction: " + std::to_string(angles.size()) +
                            " angles but " + std::to_string(weights.size()) + " weights");
  }
  if (angles.empty()) {
    throw InvalidParameter("weighted_mean_direction: empty sample");
  }
  double total = 0.0;
  double s = 0.0;
  double c = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!(weights[i] >= 0.0)) {
      throw InvalidParameter("weighted_mean_direction: negative weight");
    }
    total += weights[i];
    s += weights[i] * angles[i].sin();
    c += weights[i] * angles[i].cos();
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw InvalidParameter("weighted_mean_direction: weights must sum to 1");
  }
  if (std::hypot(s, c) < kResultantFloor) {
    throw UndefinedDirection("weighted_mean_direction: resultant is the zero vector");
  }
  return atan2pi(s, c);
}

Angle project(Angle phi, const Arc& arc) {
  if (arc.is_empty()) {
    throw EmptyArc("project: empty arc");
  }
  if (!arc.is_closed()) {
    throw InvalidParameter("project: arc must be closed, got " + arc.to_string());
  }
  if (arc.is_full() || arc.contains(phi)) {
    return phi;
  }
  const double span = arc.length();
  const double offset = ccw_offset(arc.start(), phi);
  if (offset <= span) {
    return phi;
  }
  const double tie = kPi + span / 2.0;
  if (std::abs(offset - tie) <= kTieTolerance) {
    return arc.lo();
  }
  return offset < tie ? arc.end() : arc.start();
}

}  // namespace circtrunc
