#pragma once

#include "langsov/types.hpp"

namespace langsov {

// A path in the punctured plane: line segments and circular arcs.
// Arcs are stored as (center, radius, start angle, signed sweep);
// positive sweep is counterclockwise.
struct Segment {
  enum class Kind { Line, Arc };
  Kind kind;
  cplx a, b;       // line endpoints (Kind::Line)
  cplx center;     // arc data (Kind::Arc)
  double radius = 0.0, ang0 = 0.0, sweep = 0.0;

  cplx at(double s) const;      // position, s in [0,1]
  cplx deriv(double s) const;   // dy/ds
  cplx start() const { return kind == Kind::Line ? a : at(0.0); }
  cplx end() const { return kind == Kind::Line ? b : at(1.0); }
  double length() const;
};

struct PathSpec {
  std::vector<Segment> segments;

  cplx start() const { return segments.front().start(); }
  cplx end() const { return segments.back().end(); }

  PathSpec& line_to(cplx p);
  PathSpec& arc(cplx center, double radius, double ang0, double sweep);
  PathSpec reversed() const;
  PathSpec then(const PathSpec& other) const;  // this first, other second
  double min_distance_to(cplx p) const;

  static PathSpec from(cplx start);
  // Full circle around `center` through the point at angle `ang0`,
  // `turns` counterclockwise windings (negative = clockwise).
  static PathSpec circle(cplx center, double radius, double ang0, double turns = 1.0);
};

// Segment from `from` to `to` that keeps distance >= clearance from every
// puncture, inserting arc detours where the straight segment would not.
// Used for analytic continuation of single-valued data, where the detour
// side is immaterial.
PathSpec route_segment(cplx from, cplx to, const cvec& punctures, double clearance);

}  // namespace langsov
