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

// Quantum Fisher information of the probe with respect to the bath
// temperature.
//
// The reduced state is block diagonal: a 2x2 block on span{|-J>, |J>} and
// one-dimensional blocks for the interior levels. The QFI therefore splits
// into the spectral sum over the two eigenvectors of the corner block and a
// classical Fisher sum over the interior populations.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "ringtherm/dynamics.hpp"
#include "ringtherm/error.hpp"
#include "ringtherm/spectrum.hpp"

namespace ringtherm {

struct QfiResult {
    double total = 0.0;
    double block_part = 0.0;     // corner 2x2 block
    double diagonal_part = 0.0;  // interior levels
    bool degenerate_branch_used = false;
};

struct QfiOptions {
    /// Populations (or eigenvalue sums) below this are treated as empty.
    double eps_pop = 1e-15;
    /// Corner coherences below this are treated as exactly zero.
    double eps_coherence = 1e-14;
};

/// Eigen-decomposition of [[p_{-J}, c], [conj(c), p_J]]. Eigenvector k is
/// a_k |-J> + b_k |J>.
struct BlockSpectrum {
    double p_plus = 0.0;
    double p_minus = 0.0;
    double eta = 0.0;
    double chi_plus = 0.0;
    double chi_minus = 0.0;
    cplx a_plus{1.0, 0.0};
    cplx a_minus{0.0, 0.0};
    cplx b_plus{0.0, 0.0};
    cplx b_minus{1.0, 0.0};
    /// Set when |c| fell below the coherence threshold and basis vectors
    /// were used.
    bool degenerate = false;
};

namespace detail {

// Gibbs moments in extended precision; excitation energies keep the
// low-temperature weights accurate.
struct GibbsMoments {
    std::vector<long double> weights;
    std::vector<long double> excitation;
    long double mean = 0.0L;
    long double variance = 0.0L;
};

inline GibbsMoments gibbs_moments(const ProbeParams& p, double temperature) {
    require_positive_temperature(temperature);
    GibbsMoments m;
    long double z = 0.0L;
    for (int k = 0; k < p.n_levels(); ++k) {
        const long double e = excitation_energy(p, LevelIndex::from_offset(p, k));
        m.excitation.push_back(e);
        m.weights.push_back(std::exp(-e / static_cast<long double>(temperature)));
        z += m.weights.back();
    }
    for (auto& w : m.weights) w /= z;
    for (int k = 0; k < p.n_levels(); ++k) m.mean += m.weights[k] * m.excitation[k];
    for (int k = 0; k < p.n_levels(); ++k) {
        const long double d = m.excitation[k] - m.mean;
        m.variance += m.weights[k] * d * d;
    }
    return m;
}

} // namespace detail

/// Energy variance of the Gibbs state over T^4.
inline double equilibrium_qfi(const ProbeParams& p, double temperature) {
    const auto m = detail::gibbs_moments(p, temperature);
    const long double t2 = static_cast<long double>(temperature) * temperature;
    return static_cast<double>(m.variance / (t2 * t2));
}

/// d p_M / dT of the Gibbs state: p_M (E_M - <E>) / T^2.
inline SensitivityState gibbs_sensitivity(const ProbeParams& p, double temperature) {
    const auto m = detail::gibbs_moments(p, temperature);
    const long double t2 = static_cast<long double>(temperature) * temperature;
    SensitivityState s = SensitivityState::zero(p);
    for (int k = 0; k < p.n_levels(); ++k) {
        s.d_populations[k] = static_cast<double>(m.weights[k] * (m.excitation[k] - m.mean) / t2);
    }
    return s;
}

inline BlockSpectrum block_spectrum(const ProbeState& state, const QfiOptions& opts = {}) {
    const double lo = state.bottom();
    const double hi = state.top();
    const cplx c = state.coherence();
    const double c2 = std::norm(c);
    const double d = lo - hi;

    BlockSpectrum b;
    b.eta = std::sqrt(4.0 * c2 + d * d);
    b.p_plus = 0.5 * (lo + hi + b.eta);
    // det / p_plus avoids cancellation for nearly pure blocks
    b.p_minus = b.p_plus > 0.0 ? std::max(0.0, (lo * hi - c2) / b.p_plus) : 0.0;

    if (std::abs(c) < opts.eps_coherence) {
        b.degenerate = true;
        const bool bottom_larger = lo >= hi;
        b.a_plus = bottom_larger ? 1.0 : 0.0;
        b.b_plus = bottom_larger ? 0.0 : 1.0;
        b.a_minus = bottom_larger ? 0.0 : 1.0;
        b.b_minus = bottom_larger ? 1.0 : 0.0;
        b.chi_plus = b.chi_minus = 0.0;
        return b;
    }

    // p_J - p_plus = (-d - eta) / 2 and p_{-J} - p_minus = (d + eta) / 2,
    // rewritten without subtraction of nearly equal numbers.
    const double top_shift = d >= 0.0 ? -0.5 * (d + b.eta) : -2.0 * c2 / (b.eta - d);
    const double bottom_shift = d >= 0.0 ? 0.5 * (d + b.eta) : 2.0 * c2 / (b.eta - d);
    b.chi_plus = std::sqrt(c2 + top_shift * top_shift);
    b.chi_minus = std::sqrt(c2 + bottom_shift * bottom_shift);
    b.a_plus = top_shift / b.chi_plus;
    b.b_plus = -std::conj(c) / b.chi_plus;
    b.a_minus = -c / b.chi_minus;
    b.b_minus = bottom_shift / b.chi_minus;
    return b;
}

/// QFI of the reduced state from its temperature derivative.
inline QfiResult dynamical_qfi(const ProbeState& state, const SensitivityState& sens, const QfiOptions& opts = {}) {
    const ProbeParams& p = state.params();
    const int n = p.n_atoms;
    if (static_cast<int>(sens.d_populations.size()) != p.n_levels()) {
        throw Error(ErrorKind::InvalidArgument, "sensitivity does not match the state's ladder");
    }
    const BlockSpectrum bs = block_spectrum(state, opts);
    QfiResult r;
    r.degenerate_branch_used = bs.degenerate;

    const std::array<double, 2> eig{bs.p_plus, bs.p_minus};
    const std::array<cplx, 2> av{bs.a_plus, bs.a_minus};
    const std::array<cplx, 2> bv{bs.b_plus, bs.b_minus};
    const double d_lo = sens.d_populations[0];
    const double d_hi = sens.d_populations[n];
    const cplx dc = sens.d_coherence;

    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            const double denom = eig[j] + eig[k];
            const cplx elem = std::conj(av[j]) * av[k] * d_lo + std::conj(av[j]) * bv[k] * dc +
                              std::conj(bv[j]) * av[k] * std::conj(dc) + std::conj(bv[j]) * bv[k] * d_hi;
            // same 0/0 rule as the interior levels: a thermal tail near 1e-16
            // with a real derivative still carries ~1e-12 of QFI
            if (denom < opts.eps_pop) {
                if (std::abs(elem) < opts.eps_pop) {
                    continue;
                }
                if (denom <= 0.0) {
                    throw Error(ErrorKind::SingularTerm, "corner block eigenvalue is zero but its derivative is not");
                }
            }
            r.block_part += 2.0 / denom * std::norm(elem);
        }
    }

    for (int k = 1; k < n; ++k) {
        const double pop = state.population(k);
        const double dp = sens.d_populations[k];
        if (pop < opts.eps_pop) {
            if (std::abs(dp) < opts.eps_pop) {
                continue;
            }
            if (pop <= 0.0) {
                throw Error(ErrorKind::SingularTerm, "level offset " + std::to_string(k) +
                                                         " is empty but its temperature derivative is " +
                                                         std::to_string(dp));
            }
        }
        r.diagonal_part += dp * dp / pop;
    }
    r.total = r.block_part + r.diagonal_part;
    return r;
}

/// Lower bound on the standard deviation of any unbiased temperature
/// estimate from `repetitions` independent runs.
inline double cramer_rao_bound(double qfi, long long repetitions) {
    if (!(qfi > 0.0)) {
        throw Error(ErrorKind::NonpositiveQfi, "QFI must be positive, got " + std::to_string(qfi));
    }
    if (repetitions < 1) {
        throw Error(ErrorKind::InvalidArgument, "repetitions must be at least 1");
    }
    return 1.0 / std::sqrt(static_cast<double>(repetitions) * qfi);
}

} // namespace ringtherm
