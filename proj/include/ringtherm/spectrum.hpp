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

// Dicke-ladder spectrum of a ring of N dipole-coupled two-level atoms, plus
// the bath occupation factors that drive transitions along the ladder.
//
// Units: hbar = k_B = |d|^2 = 1. Energies are measured in the same unit as
// the bare transition frequency, which is conventionally 1.

#pragma once

#include <cassert>
#include <cmath>
#include <string>
#include <utility>

#include "ringtherm/error.hpp"

namespace ringtherm {

/// Validated model parameters. Construct through validate_params().
struct ProbeParams {
    int n_atoms = 2;
    double coupling = 0.0;         // dipole-dipole strength Omega
    double transition_freq = 1.0;  // omega_A

    /// Total angular momentum of the symmetric sector, N/2.
    [[nodiscard]] double j() const noexcept { return 0.5 * n_atoms; }
    /// Number of Dicke levels, N + 1.
    [[nodiscard]] int n_levels() const noexcept { return n_atoms + 1; }

    friend bool operator==(const ProbeParams&, const ProbeParams&) = default;
};

/// Dicke level |J, M>, stored as the integer offset k = M + J in [0, N].
class LevelIndex {
public:
    constexpr LevelIndex() = default;

    static LevelIndex from_offset(const ProbeParams& p, int offset) {
        if (offset < 0 || offset > p.n_atoms) {
            throw Error(ErrorKind::InvalidLevel, "offset " + std::to_string(offset) + " outside [0, " +
                                                     std::to_string(p.n_atoms) + "]");
        }
        return LevelIndex(offset);
    }

    /// `m` must be one of -J, -J+1, ..., J.
    static LevelIndex from_projection(const ProbeParams& p, double m) {
        const double shifted = m + p.j();
        const double rounded = std::round(shifted);
        if (std::abs(shifted - rounded) > 1e-9) {
            throw Error(ErrorKind::InvalidLevel, "M=" + std::to_string(m) + " is not on the ladder");
        }
        return from_offset(p, static_cast<int>(rounded));
    }

    static LevelIndex bottom(const ProbeParams&) noexcept { return LevelIndex(0); }
    static LevelIndex top(const ProbeParams& p) noexcept { return LevelIndex(p.n_atoms); }

    [[nodiscard]] constexpr int offset() const noexcept { return k_; }
    [[nodiscard]] double projection(const ProbeParams& p) const noexcept { return k_ - p.j(); }

    friend constexpr bool operator==(LevelIndex, LevelIndex) = default;

private:
    constexpr explicit LevelIndex(int k) : k_(k) {}
    int k_ = 0;
};

inline ProbeParams validate_params(int n_atoms, double coupling, double transition_freq = 1.0) {
    if (n_atoms < 2) {
        throw Error(ErrorKind::TooFewAtoms, "need at least 2 atoms, got " + std::to_string(n_atoms));
    }
    if (!(transition_freq > 0.0) || !std::isfinite(transition_freq)) {
        throw Error(ErrorKind::NonpositiveFrequency,
                    "transition frequency must be positive, got " + std::to_string(transition_freq));
    }
    if (!(std::abs(coupling) < 0.5 * transition_freq)) {
        throw Error(ErrorKind::CouplingOutOfRange,
                    "|coupling| must be below 0.5*transition_freq, got " + std::to_string(coupling));
    }
    return ProbeParams{n_atoms, coupling, transition_freq};
}

/// E_M = M w_A + Omega (J^2 - M^2) / (J - 1/2), written in the offset k.
inline double energy(const ProbeParams& p, LevelIndex level) noexcept {
    const int k = level.offset();
    const int n = p.n_atoms;
    const double m = k - 0.5 * n;
    // J^2 - M^2 = k (N - k) and J - 1/2 = (N - 1) / 2
    return m * p.transition_freq +
           2.0 * p.coupling * static_cast<double>(k) * static_cast<double>(n - k) / static_cast<double>(n - 1);
}

/// E_M - E_{-J}, evaluated without subtracting two energies. The bottom level
/// is the ground state for every valid coupling.
inline double excitation_energy(const ProbeParams& p, LevelIndex level) noexcept {
    const int k = level.offset();
    const int n = p.n_atoms;
    return k * p.transition_freq +
           2.0 * p.coupling * static_cast<double>(k) * static_cast<double>(n - k) / static_cast<double>(n - 1);
}

/// Transition frequency w_M = E_M - E_{M-1}.
inline double gap(const ProbeParams& p, LevelIndex level) {
    const int k = level.offset();
    if (k == 0) {
        throw Error(ErrorKind::NoLowerLevel, "the ground level has no transition below it");
    }
    // 4 Omega (M - 1/2) / (N - 1) with 2M - 1 = 2k - N - 1; the ratio is exactly +-1 at the edges
    const double ratio = static_cast<double>(2 * k - p.n_atoms - 1) / static_cast<double>(p.n_atoms - 1);
    const double w = p.transition_freq - 2.0 * p.coupling * ratio;
    assert(w > 0.0);
    return w;
}

/// Second-from-edge gaps (Delta E_H, Delta E_L). For N = 2 there are only the
/// two edge gaps, which are returned instead.
inline std::pair<double, double> extreme_gap_trends(const ProbeParams& p) {
    if (p.n_atoms < 3) {
        return {gap(p, LevelIndex::top(p)), gap(p, LevelIndex::from_offset(p, 1))};
    }
    return {gap(p, LevelIndex::from_offset(p, p.n_atoms - 1)), gap(p, LevelIndex::from_offset(p, 2))};
}

namespace detail {
// exp(x) overflows near 709.78
inline constexpr double kPlanckCutoff = 700.0;
} // namespace detail

/// Bose-Einstein occupation 1 / (exp(w/T) - 1). T = 0 gives the limit 0.
inline double planck_occupation(double freq, double temperature) noexcept {
    if (temperature <= 0.0) {
        return 0.0;
    }
    const double x = freq / temperature;
    if (x > detail::kPlanckCutoff) {
        return 0.0;
    }
    return 1.0 / std::expm1(x);
}

/// dN/dT = (w / T^2) N (N + 1).
inline double planck_derivative(double freq, double temperature) noexcept {
    if (temperature <= 0.0) {
        return 0.0;
    }
    const double n = planck_occupation(freq, temperature);
    return freq / (temperature * temperature) * n * (n + 1.0);
}

/// Collective emission weight Gamma_M = (4 w_M^3 / 3)(J - M + 1)(J + M).
inline double decay_weight(const ProbeParams& p, LevelIndex level) {
    const double w = gap(p, level);
    const int k = level.offset();
    // (J - M + 1)(J + M) = (N - k + 1) k
    return 4.0 * w * w * w / 3.0 * static_cast<double>(p.n_atoms - k + 1) * static_cast<double>(k);
}

} // namespace ringtherm
