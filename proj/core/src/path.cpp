#include "langsov/path.hpp"

#include <algorithm>
#include <cmath>

namespace langsov {

cplx Segment::at(double s) const {
  if (kind == Kind::Line) return a + s * (b - a);
  return center + radius * std::exp(cplx(0.0, ang0 + s * sweep));
}

cplx Segment::deriv(double s) const {
  if (kind == Kind::Line) return b - a;
  return radius * sweep * cplx(0.0, 1.0) * std::exp(cplx(0.0, ang0 + s * sweep));
}

double Segment::length() const {
  if (kind == Kind::Line) return std::abs(b - a);
  return radius * std::abs(sweep);
}

PathSpec PathSpec::from(cplx start) {
  PathSpec p;
  Segment s;
  s.kind = Segment::Kind::Line;
  s.a = s.b = start;
  p.segments.push_back(s);  // zero-length anchor, replaced by first move
  return p;
}

PathSpec& PathSpec::line_to(cplx p) {
  cplx cur = end();
  if (segments.size() == 1 && segments[0].length() == 0.0) segments.clear();
  if (std::abs(p - cur) == 0.0) return *this;
  Segment s;
  s.kind = Segment::Kind::Line;
  s.a = cur;
  s.b = p;
  segments.push_back(s);
  return *this;
}

PathSpec& PathSpec::arc(cplx center, double radius, double ang0, double sweep) {
  if (segments.size() == 1 && segments[0].length() == 0.0) segments.clear();
  Segment s;
  s.kind = Segment::Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.ang0 = ang0;
  s.sweep = sweep;
  segments.push_back(s);
  return *this;
}

PathSpec PathSpec::reversed() const {
  PathSpec out;
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    Segment s = *it;
    if (s.kind == Segment::Kind::Line) {
      std::swap(s.a, s.b);
    } else {
      s.ang0 = s.ang0 + s.sweep;
      s.sweep = -s.sweep;
    }
    out.segments.push_back(s);
  }
  return out;
}

PathSpec PathSpec::then(const PathSpec& other) const {
  PathSpec out = *this;
  for (const auto& s : other.segments) out.segments.push_back(s);
  return out;
}

double PathSpec::min_distance_to(cplx p) const {
  double d = 1e300;
  for (const auto& s : segments) {
    if (s.kind == Segment::Kind::Line) {
      cplx ab = s.b - s.a;
      double L2 = std::norm(ab);
      double t = L2 > 0 ? std::clamp((std::conj(ab) * (p - s.a)).real() / L2, 0.0, 1.0) : 0.0;
      d = std::min(d, std::abs(p - (s.a + t * ab)));
    } else {
      // distance from p to the arc: radial gap if p's angle is inside the
      // sweep, else distance to an endpoint
      double dc = std::abs(p - s.center);
      double ang = std::arg(p - s.center);
      double rel = (ang - s.ang0) / (s.sweep == 0 ? 1.0 : s.sweep);
      // bring rel into representative windows
      bool inside = false;
      for (int kwind = -2; kwind <= 2 && !inside; ++kwind) {
        double r2 = rel + kwind * 2.0 * kPi / std::abs(s.sweep == 0 ? 1.0 : s.sweep);
        if (r2 >= 0.0 && r2 <= 1.0) inside = true;
      }
      if (inside)
        d = std::min(d, std::abs(dc - s.radius));
      else
        d = std::min(d, std::min(std::abs(p - s.start()), std::abs(p - s.end())));
    }
  }
  return d;
}

PathSpec PathSpec::circle(cplx center, double radius, double ang0, double turns) {
  PathSpec p;
  Segment s;
  s.kind = Segment::Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.ang0 = ang0;
  s.sweep = 2.0 * kPi * turns;
  p.segments.push_back(s);
  return p;
}

namespace {

// Detour a straight run around punctures, recursively.
void route_rec(cplx from, cplx to, const cvec& punctures, double clearance,
               PathSpec& out, int depth) {
  cplx ab = to - from;
  double L = std::abs(ab);
  if (L == 0.0) return;
  // find the blocking puncture closest to `from`
  int blk = -1;
  double blk_t = 2.0;
  for (size_t i = 0; i < punctures.size(); ++i) {
    cplx p = punctures[i];
    double t = std::clamp((std::conj(ab) * (p - from)).real() / (L * L), 0.0, 1.0);
    cplx foot = from + t * ab;
    if (std::abs(p - foot) < clearance && t > 1e-12 && t < 1.0 - 1e-12) {
      if (t < blk_t) {
        blk_t = t;
        blk = int(i);
      }
    }
  }
  if (blk < 0 || depth > 8) {
    out.line_to(to);
    return;
  }
  cplx p = punctures[blk];
  double r = clearance * 1.05;
  // chord/circle intersections: |from + t*ab - p| = r
  cplx w = from - p;
  double A = std::norm(ab), B = 2.0 * (std::conj(ab) * w).real(), C = std::norm(w) - r * r;
  double disc = B * B - 4 * A * C;
  if (disc <= 0) {  // tangential graze, nudge through
    out.line_to(to);
    return;
  }
  double t1 = (-B - std::sqrt(disc)) / (2 * A);
  double t2 = (-B + std::sqrt(disc)) / (2 * A);
  t1 = std::clamp(t1, 0.0, 1.0);
  t2 = std::clamp(t2, 0.0, 1.0);
  cplx q1 = from + t1 * ab, q2 = from + t2 * ab;
  route_rec(from, q1, punctures, clearance, out, depth + 1);
  double a1 = std::arg(q1 - p), a2 = std::arg(q2 - p);
  double sweep = a2 - a1;
  while (sweep > kPi) sweep -= 2 * kPi;
  while (sweep < -kPi) sweep += 2 * kPi;
  out.arc(p, std::abs(q1 - p), a1, sweep);
  route_rec(out.end(), q2, punctures, clearance, out, depth + 1);
  route_rec(q2, to, punctures, clearance, out, depth + 1);
}

}  // namespace

PathSpec route_segment(cplx from, cplx to, const cvec& punctures, double clearance) {
  PathSpec out = PathSpec::from(from);
  route_rec(from, to, punctures, clearance, out, 0);
  if (out.segments.size() == 1 && out.segments[0].length() == 0.0)
    out.line_to(to);  // degenerate zero-length request
  return out;
}

}  // namespace langsov
