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

// Test-only reference implementations. Nothing here calls into the library's
// spectrum, rate or integration code; levels are indexed by projection m.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "ringtherm/dynamics.hpp"

namespace ringtherm::oracle {

using cplx = std::complex<double>;

/// Level energy written in projection form.
inline double level_energy(int n, double coupling, double w, double m) {
    const double j = 0.5 * n;
    return m * w + coupling * (j * j - m * m) / (j - 0.5);
}

inline double bose(double w, double temperature) { return 1.0 / (std::exp(w / temperature) - 1.0); }

/// Emission weight for the channel m -> m-1 from the energy difference.
inline double emission_weight(int n, double coupling, double w, double m) {
    const double j = 0.5 * n;
    const double wm = level_energy(n, coupling, w, m) - level_energy(n, coupling, w, m - 1.0);
    return 4.0 * wm * wm * wm / 3.0 * (j - m + 1.0) * (j + m);
}

/// Full Lindblad generator on vec(rho) (column stacking), built from the
/// ladder jump operators |m-1><m| and their adjoints.
inline Eigen::MatrixXcd liouvillian(int n, double coupling, double w, double temperature) {
    const int d = n + 1;
    const double j = 0.5 * n;
    using Mat = Eigen::MatrixXcd;
    const Mat id = Mat::Identity(d, d);
    auto kron = [](const Mat& a, const Mat& b) {
        Mat out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        return out;
    };
    // vec(A X B) = (B^T kron A) vec(X)
    auto left = [&](const Mat& a) { return kron(id, a); };
    auto right = [&](const Mat& b) { return kron(b.transpose(), id); };

    Mat h = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) h(i, i) = level_energy(n, coupling, w, i - j);
    Mat gen = cplx{0.0, -1.0} * (left(h) - right(h));

    auto dissipator = [&](const Mat& a, double rate) {
        const Mat ad = a.adjoint();
        const Mat ada = ad * a;
        gen += rate * (kron(ad.transpose(), a) - 0.5 * left(ada) - 0.5 * right(ada));
    };
    for (int i = 1; i < d; ++i) {
        const double m = i - j;
        const double wm = level_energy(n, coupling, w, m) - level_energy(n, coupling, w, m - 1.0);
        const double g = emission_weight(n, coupling, w, m);
        const double occ = bose(wm, temperature);
        Mat lower = Mat::Zero(d, d);
        lower(i - 1, i) = 1.0;
        dissipator(lower, g * (occ + 1.0));
        dissipator(lower.adjoint(), g * occ);
    }
    return gen;
}

/// rho(t) = exp(L t) rho(0) on the full matrix.
inline Eigen::MatrixXcd evolve_full(int n, double coupling, double w, double temperature, const Eigen::MatrixXcd& rho0,
                                    double t) {
    const int d = n + 1;
    const Eigen::MatrixXcd prop = (liouvillian(n, coupling, w, temperature) * t).exp();
    const Eigen::VectorXcd v = prop * Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
}

/// |psi> = cos(phi)|bottom> + sin(phi)|top> as a density matrix.
inline Eigen::MatrixXcd ghz_matrix(int n, double phi) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n + 1);
    psi(0) = std::cos(phi);
    psi(n) = std::sin(phi);
    return psi * psi.adjoint();
}

struct Boltzmann {
    std::vector<double> p;
    std::vector<double> dp;  // d/dT
    double mean = 0.0;
    double variance = 0.0;
};

/// Direct Boltzmann sums (shifted by the ground energy) and the analytic
/// temperature derivative p (E - <E>) / T^2.
inline Boltzmann boltzmann(int n, double coupling, double w, double temperature) {
    const double j = 0.5 * n;
    std::vector<double> e(n + 1);
    for (int i = 0; i <= n; ++i) e[i] = level_energy(n, coupling, w, i - j);
    double emin = e[0];
    for (double v : e) emin = std::min(emin, v);
    Boltzmann b;
    double z = 0.0;
    for (double v : e) {
        b.p.push_back(std::exp(-(v - emin) / temperature));
        z += b.p.back();
    }
    for (auto& v : b.p) v /= z;
    for (int i = 0; i <= n; ++i) b.mean += b.p[i] * e[i];
    for (int i = 0; i <= n; ++i) b.variance += b.p[i] * (e[i] - b.mean) * (e[i] - b.mean);
    for (int i = 0; i <= n; ++i) b.dp.push_back(b.p[i] * (e[i] - b.mean) / (temperature * temperature));
    return b;
}

/// Random valid reduced state: Dirichlet populations, coherence inside the
/// 2x2 positivity disc scaled by `coherence_fill`.
inline ProbeState random_state(const ProbeParams& p, std::mt19937_64& rng, double coherence_fill = 0.95) {
    std::exponential_distribution<double> ex(1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> pops(p.n_levels());
    double total = 0.0;
    for (auto& v : pops) total += (v = ex(rng));
    for (auto& v : pops) v /= total;
    const double r = coherence_fill * u(rng) * std::sqrt(pops.front() * pops.back());
    const double arg = 2.0 * std::numbers::pi * u(rng);
    return ProbeState(p, pops, std::polar(r, arg));
}

/// Random sensitivity with zero trace.
inline SensitivityState random_sensitivity(const ProbeParams& p, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    SensitivityState s;
    s.d_populations.resize(p.n_levels());
    double mean = 0.0;
    for (auto& v : s.d_populations) mean += (v = g(rng));
    mean /= p.n_levels();
    for (auto& v : s.d_populations) v -= mean;
    s.d_coherence = {g(rng), g(rng)};
    return s;
}

/// Closed form for the extreme coherence under the ladder dynamics.
inline cplx coherence_closed_form(int n, double coupling, double w, double temperature, cplx c0, double t) {
    const double j = 0.5 * n;
    const double e_bottom = level_energy(n, coupling, w, -j);
    const double e_top = level_energy(n, coupling, w, j);
    const double w_top = e_top - level_energy(n, coupling, w, j - 1.0);
    const double w_bottom = level_energy(n, coupling, w, -j + 1.0) - e_bottom;
    const double decay = 0.5 * (emission_weight(n, coupling, w, j) * (bose(w_top, temperature) + 1.0) +
                                emission_weight(n, coupling, w, -j + 1.0) * bose(w_bottom, temperature));
    return c0 * std::exp(cplx{-decay * t, -(e_bottom - e_top) * t});
}

} // namespace ringtherm::oracle
