#pragma once

#include <Eigen/Dense>
#include <complex>

#include "nuqrom/util.hpp"

namespace nuqrom {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline double sq_norm(const Vec& v) { return v.squaredNorm(); }

inline Vec random_unit_vector(Rng& rng, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cxd(g(rng), g(rng));
  double n = v.norm();
  if (n == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / n;
}

// Haar-ish random unitary: QR of a complex Gaussian matrix with the
// R-diagonal phases folded back in.
inline Mat random_unitary(Rng& rng, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cxd(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    cxd d = r(j, j);
    double m = std::abs(d);
    cxd phase = (m > 0) ? d / m : cxd(1, 0);
    q.col(j) *= phase;
  }
  return q;
}

inline bool is_unitary(const Mat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  Mat id = Mat::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff() <= tol;
}

inline double hermitian_defect(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace nuqrom
