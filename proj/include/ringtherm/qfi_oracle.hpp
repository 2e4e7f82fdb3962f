// Copyright 2026 The ringtherm Authors
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

// General-purpose QFI by full eigendecomposition. Desk-scale only; used to
// check the block formula in qfi.hpp.

#pragma once

#include <Eigen/Dense>

#include "ringtherm/dynamics.hpp"
#include "ringtherm/error.hpp"

namespace ringtherm {

/// Full (N+1)x(N+1) density matrix in the basis |-J>, ..., |J>.
inline Eigen::MatrixXcd embed_state(const ProbeState& s) {
    const int nl = s.params().n_levels();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(nl, nl);
    const auto pops = s.raw_populations();
    for (int k = 0; k < nl; ++k) rho(k, k) = pops[k];
    rho(0, nl - 1) += s.coherence();
    rho(nl - 1, 0) += std::conj(s.coherence());
    return rho;
}

inline Eigen::MatrixXcd embed_sensitivity(const ProbeParams& p, const SensitivityState& s) {
    const int nl = p.n_levels();
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(nl, nl);
    for (int k = 0; k < nl; ++k) d(k, k) = s.d_populations[k];
    d(0, nl - 1) += s.d_coherence;
    d(nl - 1, 0) += std::conj(s.d_coherence);
    return d;
}

/// Q = 2 sum_{j,k} |<psi_j|d rho|psi_k>|^2 / (p_j + p_k) over pairs with
/// p_j + p_k above `eps`. The default keeps every pair with a positive
/// denominator: thermal tails near 1e-16 still contribute ~1e-10.
inline double spectral_qfi_oracle(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& drho, double eps = 0.0) {
    const auto n = rho.rows();
    if (rho.cols() != n || drho.rows() != n || drho.cols() != n || n == 0) {
        throw Error(ErrorKind::NotDensityMatrix, "shape mismatch");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw Error(ErrorKind::NotDensityMatrix, "not Hermitian");
    }
    if (std::abs(rho.trace() - cplx{1.0, 0.0}) > 1e-8) {
        throw Error(ErrorKind::NotDensityMatrix, "trace is not one");
    }
    // long double: eigenvalue errors are absolute, and small populations
    // would otherwise lose ~1e-10 relative accuracy
    using MatL = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
    const MatL rho_l = rho.cast<std::complex<long double>>();
    const MatL drho_l = drho.cast<std::complex<long double>>();
    Eigen::SelfAdjointEigenSolver<MatL> es(rho_l);
    const auto& w = es.eigenvalues();
    if (w.minCoeff() < -1e-10L) {
        throw Error(ErrorKind::NotDensityMatrix, "negative eigenvalue");
    }
    const MatL& v = es.eigenvectors();
    const MatL m = v.adjoint() * drho_l * v;
    long double q = 0.0L;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const long double denom = std::max(0.0L, w(j)) + std::max(0.0L, w(k));
            if (!(denom > eps)) continue;
            q += 2.0L * std::norm(m(j, k)) / denom;
        }
    }
    return static_cast<double>(q);
}

} // namespace ringtherm
