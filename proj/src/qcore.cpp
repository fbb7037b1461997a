// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmeas/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmeas {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::NotHermitian: return "not Hermitian";
    case ErrorKind::InvalidSpec: return "invalid specification";
    case ErrorKind::OutOfLattice: return "index outside momentum lattice";
    case ErrorKind::SupportLeak: return "support leaves momentum lattice";
    case ErrorKind::NonIntegerShift: return "non-integer momentum shift";
    case ErrorKind::GridTooCoarse: return "coordinate grid too coarse";
    case ErrorKind::ParityViolation: return "parity condition violated";
    case ErrorKind::NotInImage: return "table not in Wigner image";
    case ErrorKind::ZeroProbability: return "zero-probability outcome";
    case ErrorKind::Parse: return "parse error";
  }
  return "unknown";
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a,
                            std::size_t dim_b, Keep keep) {
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  if (m.rows() != m.cols() || m.rows() != da * db || da == 0 || db == 0) {
    std::ostringstream msg;
    msg << "partial_trace: matrix is " << m.rows() << "x" << m.cols()
        << ", expected square of dimension " << dim_a << "*" << dim_b;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  if (keep == Keep::First) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        out(i, j) = m.block(i * db, j * db, db, db).trace();
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index i = 0; i < da; ++i) out += m.block(i * db, i * db, db, db);
  return out;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::DimensionMismatch, "hermiticity_defect: not square");
  return max_abs(m - m.adjoint());
}

std::vector<double> hermitian_spectrum(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch,
                "hermitian_spectrum: matrix must be square and non-empty");
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    std::ostringstream msg;
    msg << "hermitian_spectrum: anti-Hermitian part " << defect
        << " exceeds tolerance " << tol;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h,
                                                      Eigen::EigenvaluesOnly);
  const RealVector& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

DensityDefects density_defects(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch,
                "density operator must be square and non-empty");
  DensityDefects d;
  d.hermiticity = hermiticity_defect(m);
  d.trace = std::abs(m.trace() - Complex(1.0, 0.0));
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h,
                                                      Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

DensityOperator::DensityOperator(ComplexMatrix m, double tol)
    : m_(std::move(m)), tol_(tol), defects_(density_defects(m_)) {
  if (!defects_.acceptable(tol_)) {
    std::ostringstream msg;
    msg << "not a density operator: hermiticity defect " << defects_.hermiticity
        << ", trace defect " << defects_.trace << ", min eigenvalue "
        << defects_.min_eigenvalue << " (tol " << tol_ << ")";
    throw Error(ErrorKind::InvalidSpec, msg.str());
  }
}

}  // namespace qmeas
