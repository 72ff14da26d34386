#include "langsov/transport.hpp"

#include <cmath>

namespace langsov {
namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// embedded 4th order
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

struct Rhs {
  const PotentialFn& t_eval;
  const Segment& seg;
  Mat2 operator()(double s, const Mat2& phi) const {
    cplx y = seg.at(s);
    cplx dy = seg.deriv(s);
    cplx t = t_eval(y);
    Mat2 a;
    a << cplx(0), dy, -dy * t, cplx(0);
    return a * phi;
  }
};

Mat2 integrate_segment(const PotentialFn& t_eval, const Segment& seg, Mat2 phi,
                       double tol) {
  Rhs f{t_eval, seg};
  double s = 0.0;
  double h = 0.1;
  const double hmin = 1e-13;
  int rejects_in_row = 0;
  while (s < 1.0) {
    h = std::min(h, 1.0 - s);
    Mat2 k1 = f(s, phi);
    Mat2 k2 = f(s + c2 * h, phi + h * (a21 * k1));
    Mat2 k3 = f(s + c3 * h, phi + h * (a31 * k1 + a32 * k2));
    Mat2 k4 = f(s + c4 * h, phi + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Mat2 k5 = f(s + c5 * h, phi + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Mat2 k6 = f(s + h, phi + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Mat2 next = phi + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Mat2 k7 = f(s + h, next);
    Mat2 next4 = phi + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = (next - next4).cwiseAbs().maxCoeff();
    double scale = tol * (1.0 + next.cwiseAbs().maxCoeff());
    if (err <= scale) {
      s += h;
      phi = next;
      rejects_in_row = 0;
      double grow = err > 0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
      h *= std::min(5.0, std::max(0.2, grow));
    } else {
      h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.25));
      if (++rejects_in_row > 60) throw NumericError("ToleranceNotMet", "step control stalled");
    }
    if (h < hmin)
      throw NumericError("StepUnderflow", "step size underflow (singularity approached?)");
  }
  return phi;
}

}  // namespace

Mat2 transport_ode(const PotentialFn& t_eval, const PathSpec& path, double tol) {
  Mat2 phi = Mat2::Identity();
  for (const auto& seg : path.segments) {
    if (seg.length() == 0.0) continue;
    phi = integrate_segment(t_eval, seg, phi, tol);
  }
  return phi;
}

}  // namespace langsov
