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

#include "qmeas/model.hpp"

namespace qmeas {

enum class IntegrationMethod { Analytic, Quadrature };

/// Momentum-representation matrices of the periodic coordinate
/// q(x) = x - L eta(x - c) on (-L/2, L/2], eta the unit step, and of q(x)^2.
struct SawtoothCoordinate {
  double c = 0.0;
  double L = 0.0;
  double hbar = 1.0;
  int K = 0;
  ComplexMatrix matrix;  // <p_k| q |p_l>
  ComplexMatrix square;  // <p_k| q^2 |p_l>, exact (not the truncated product)
};

/// Throws InvalidSpec unless 0 < c <= L/2. Quadrature uses composite
/// three-point Gauss-Legendre with `panels` panels on each side of the jump.
SawtoothCoordinate sawtooth_matrix(const ApparatusSpec& app, double c,
                                   IntegrationMethod method = IntegrationMethod::Analytic,
                                   std::size_t panels = 10000);

/// [p, q]_kl = (p_k - p_l) q_kl.
ComplexMatrix commutator_pq(const SawtoothCoordinate& sc);

/// -i hbar delta_kl + i hbar (-1)^(k-l), the c -> L/2 limit.
ComplexMatrix limiting_commutator(const ApparatusSpec& app);

/// i Tr(rho [p, q]) (real for Hermitian rho).
double mean_commutator(const ComplexMatrix& rho_a, const SawtoothCoordinate& sc);

struct RobertsonCheck {
  double var_q = 0.0;
  double var_p = 0.0;
  double lhs = 0.0;  // 4 var_q var_p
  double rhs = 0.0;  // (i <[q, p]>)^2
  bool satisfied = false;
  bool momentum_diagonal = false;
  /// |var_q from the coordinate distribution - var_q from q^2|, for
  /// momentum-diagonal states only.
  double route_defect = 0.0;
};

/// Central-moment Robertson inequality 4 <dq^2><dp^2> >= (i<[q,p]>)^2,
/// checked to within `tol`.
RobertsonCheck robertson_check(const ComplexMatrix& rho_a, const SawtoothCoordinate& sc,
                               double tol = 1e-10);

struct UncertaintyReport {
  double sigma_q_sigma_p = 0.0;
  double hbar_half = 0.0;
  bool naive_bound_violated = false;  // sigma_q sigma_p < hbar / 2
  double mean_commutator = 0.0;
  RobertsonCheck robertson;
};

/// Uncertainty bookkeeping for the apparatus initial state.
UncertaintyReport uncertainty_report(const ApparatusSpec& app, double c);

/// Same report, restricted to the sharp-momentum state m = 0 where
/// sigma_q sigma_p = 0. Throws InvalidSpec for m != 0.
UncertaintyReport heisenberg_violation_demo(const ApparatusSpec& app, double c);

}  // namespace qmeas
