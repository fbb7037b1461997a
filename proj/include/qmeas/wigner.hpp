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

#pragma once

#include "qmeas/measurement.hpp"

namespace qmeas {

/// Delta(eta) = sin(pi eta) / (pi eta) at eta = twice_eta / 2. Integer eta
/// gives a Kronecker delta; half-integer n + 1/2 gives (-1)^n / (pi (n + 1/2)).
double delta_kernel(long twice_eta);

/// Discrete Wigner function of an apparatus operator on the ring:
///
///   W(q, p_j) = L^-1 sum_{k,l} exp(2 pi i q (k - l) / L) Delta((k + l)/2 - j) A_kl
///
/// tabulated on a q grid for |j| <= K. Index differences k - l that are odd
/// spread over every j; the parts of the j sum beyond the table are kept
/// per grid point so the position marginal stays exact.
struct WignerTable {
  QGrid grid;
  int K = 0;
  double hbar = 1.0;
  Eigen::MatrixXcd values;      // (points, 2K+1), column j + K
  Eigen::VectorXcd tail_below;  // sum over j < -K, per grid point
  Eigen::VectorXcd tail_above;  // sum over j > K

  double L() const { return grid.L; }
  Lattice lattice() const { return Lattice{K}; }
  Complex at(std::size_t a, long j) const {
    return values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j + K));
  }
  double momentum(long j) const;
  /// max |Im W| over the table.
  double imaginary_defect() const;
};

/// Throws GridTooCoarse unless the grid has at least 4K+2 points and
/// SupportLeak if `op` is larger than the lattice.
WignerTable wigner(const ComplexMatrix& op, const ApparatusSpec& app, const QGrid& grid);

/// sum_j W(q, p_j) per grid point, tails included.
Eigen::VectorXcd position_marginal(const WignerTable& table);
/// integral of W(q, p_j) over q per lattice index, by exact grid quadrature.
Eigen::VectorXcd momentum_marginal(const WignerTable& table);

struct WignerInverse {
  ComplexMatrix op;
  double residual = 0.0;          // max |W[op] - table| on the grid
  double worst_condition = 1.0;   // largest condition number of odd-difference solves
};

/// Recovers the operator by Fourier analysis in q per index difference d,
/// then solving the Delta-kernel system in j. Even d is read off directly;
/// odd d is a least-squares solve. Throws NotInImage when the residual
/// exceeds `tol`.
WignerInverse wigner_inverse(const WignerTable& table, double tol = 1e-8);

/// A * B = L W^-1 (W[A] W[B]).
ComplexMatrix star(const ComplexMatrix& a, const ComplexMatrix& b, const ApparatusSpec& app,
                   double tol = 1e-8);

/// L sum_j integral W[G] W[rho] dq over all integer j: the grid window by
/// exact quadrature plus the closed-form contribution of |j| > K. Both
/// operators must be Hermitian.
double trace_pairing(const ComplexMatrix& g, const ComplexMatrix& rho, const ApparatusSpec& app,
                     const QGrid& grid);

struct ClassicalCollapse {
  WignerTable table;
  double weight = 0.0;  // w'_l
};

/// Conditional distribution W(q, p_j) theta_l(p_j) / w'_l.
ClassicalCollapse classical_collapse(const WignerTable& table, const PointerPartition& part,
                                     std::size_t l);

}  // namespace qmeas
