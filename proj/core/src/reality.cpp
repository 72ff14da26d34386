#include "langsov/reality.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

namespace langsov {

double HermitianPairing::frobenius_norm() const { return H.norm(); }

HermitianPairing HermitianPairing::from_components(double h11, double h22, cplx h12) {
  HermitianPairing p;
  p.H << cplx(h11), h12, std::conj(h12), cplx(h22);
  return p;
}

const char* reality_class_name(RealityClass c) {
  switch (c) {
    case RealityClass::RealForm: return "real-form";
    case RealityClass::UnitaryForm: return "unitary-form";
    default: return "none";
  }
}

namespace {

// Orthonormal basis of the Hermitian 2x2 matrices for <A,B> = Re tr(A^dag B).
std::array<Mat2, 4> hermitian_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat2 b1, b2, b3, b4;
  b1 << 1, 0, 0, 0;
  b2 << 0, 0, 0, 1;
  b3 << 0, s, s, 0;
  b4 << 0, cplx(0, s), cplx(0, -s), 0;
  return {b1, b2, b3, b4};
}

double frob_inner(const Mat2& a, const Mat2& b) {
  return (a.adjoint() * b).trace().real();
}

}  // namespace

RealityReport reality_obstruction(const MonodromyRep& rep, double class_tol) {
  const auto basis = hermitian_basis();
  const auto& gens = rep.generators();
  const size_t m = gens.size();
  Eigen::MatrixXd L(4 * m, 4);
  for (size_t r = 0; r < m; ++r) {
    const Mat2& mat = gens[r];
    for (int k = 0; k < 4; ++k) {
      Mat2 img = mat.transpose() * basis[size_t(k)] * mat.conjugate() - basis[size_t(k)];
      for (int row = 0; row < 4; ++row)
        L(long(4 * r) + row, k) = frob_inner(basis[size_t(row)], img);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullV);
  RealityReport report;
  report.obstruction = svd.singularValues()(3);
  Eigen::Vector4d v = svd.matrixV().col(3);
  // deterministic sign: largest-magnitude coordinate positive
  int imax = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
  if (v(imax) < 0) v = -v;

  Mat2 h = Mat2::Zero();
  for (int k = 0; k < 4; ++k) h += v(k) * basis[size_t(k)];
  h /= h.norm();
  report.pairing.H = h;

  double det = h.determinant().real();  // Hermitian: real determinant
  if (std::abs(det) < class_tol)
    report.pairing.signature = HermitianPairing::Signature::Degenerate;
  else if (det < 0)
    report.pairing.signature = HermitianPairing::Signature::Indefinite;
  else
    report.pairing.signature = HermitianPairing::Signature::Definite;

  report.trace_imag_max = rep.trace_imag_max();
  if (report.obstruction < class_tol) {
    report.classification =
        report.pairing.signature == HermitianPairing::Signature::Indefinite
            ? RealityClass::RealForm
            : (report.pairing.signature == HermitianPairing::Signature::Definite
                   ? RealityClass::UnitaryForm
                   : RealityClass::None);
  } else {
    report.classification = RealityClass::None;
  }
  return report;
}

}  // namespace langsov
