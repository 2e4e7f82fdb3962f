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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "ringtherm/qfi.hpp"
#include "ringtherm/qfi_oracle.hpp"
#include "oracles.hpp"

using namespace ringtherm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("equilibrium QFI of the two-atom ladder", "[qfi]") {
    const auto p = validate_params(2, 0.0);
    CHECK_THAT(equilibrium_qfi(p, 1.0), WithinRel(0.424404544689254450, 1e-13));
    CHECK(equilibrium_qfi(p, 1e4) < 1e-15);
    CHECK(equilibrium_qfi(p, 1e-3) == 0.0);
    CHECK_THROWS_AS(equilibrium_qfi(p, 0.0), Error);
}

TEST_CASE("equilibrium QFI matches direct Boltzmann sums and the spectral oracle", "[qfi][oracle]") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> c(-0.45, 0.45), t(0.05, 3.0);
    for (int i = 0; i < 100; ++i) {
        const int n = 2 + static_cast<int>(rng() % 12);
        const auto p = validate_params(n, c(rng));
        const double temp = t(rng);
        const auto b = oracle::boltzmann(n, p.coupling, 1.0, temp);
        const double qe = equilibrium_qfi(p, temp);
        CHECK(qe >= 0.0);
        CHECK_THAT(qe, WithinRel(b.variance / std::pow(temp, 4), 1e-10));

        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n + 1, n + 1), drho = rho;
        for (int k = 0; k <= n; ++k) {
            rho(k, k) = b.p[k];
            drho(k, k) = b.dp[k];
        }
        if (qe > 1e-300) CHECK_THAT(spectral_qfi_oracle(rho, drho), WithinRel(qe, 1e-10));
    }
}

TEST_CASE("lower coupling sharpens and cools the equilibrium peak", "[qfi]") {
    std::vector<double> temps;
    for (int i = 0; i <= 598; ++i) temps.push_back(0.01 + 0.005 * i);
    auto peak = [&](double c) {
        const auto p = validate_params(20, c);
        double best = 0.0, t_best = 0.0;
        for (double t : temps) {
            const double q = equilibrium_qfi(p, t);
            if (q > best) best = q, t_best = t;
        }
        return std::pair{best, t_best};
    };
    const auto [q_neg, t_neg] = peak(-0.45);
    const auto [q_zero, t_zero] = peak(0.0);
    const auto [q_pos, t_pos] = peak(0.45);
    CHECK(q_neg > q_zero);
    CHECK(t_neg < t_zero);
    CHECK(q_pos < q_zero);
}

TEST_CASE("block spectrum of simple blocks", "[qfi]") {
    const auto p = validate_params(3, 0.1);
    const ProbeState diag(p, {0.7, 0.0, 0.0, 0.3}, 0.0);
    const auto b = block_spectrum(diag);
    CHECK_THAT(b.eta, WithinAbs(0.4, 1e-15));
    CHECK_THAT(b.p_plus, WithinAbs(0.7, 1e-15));
    CHECK_THAT(b.p_minus, WithinAbs(0.3, 1e-15));
    CHECK(b.degenerate);
    CHECK(b.a_plus == cplx{1.0, 0.0});
    CHECK(b.b_minus == cplx{1.0, 0.0});

    const auto ghz = block_spectrum(ghz_like_state(p, std::numbers::pi / 4.0));
    CHECK_THAT(ghz.eta, WithinAbs(1.0, 1e-15));
    CHECK_THAT(ghz.p_plus, WithinAbs(1.0, 1e-15));
    CHECK_THAT(ghz.p_minus, WithinAbs(0.0, 1e-15));
    CHECK_FALSE(ghz.degenerate);
}

TEST_CASE("block spectrum agrees with a generic eigensolver", "[qfi][oracle][property]") {
    std::mt19937_64 rng(31);
    const auto p = validate_params(4, 0.2);
    for (int i = 0; i < 500; ++i) {
        const auto s = oracle::random_state(p, rng, 1.0);
        const auto b = block_spectrum(s);
        Eigen::Matrix2cd m;
        m << s.bottom(), s.coherence(), std::conj(s.coherence()), s.top();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
        CHECK_THAT(b.p_plus, WithinAbs(es.eigenvalues()(1), 1e-12));
        CHECK_THAT(b.p_minus, WithinAbs(es.eigenvalues()(0), 1e-12));
        CHECK_THAT(b.p_plus + b.p_minus, WithinAbs(s.bottom() + s.top(), 1e-15));
        CHECK(b.p_plus >= b.p_minus);
        CHECK(b.p_minus >= 0.0);
        CHECK_THAT(std::norm(b.a_plus) + std::norm(b.b_plus), WithinAbs(1.0, 1e-12));
        CHECK_THAT(std::norm(b.a_minus) + std::norm(b.b_minus), WithinAbs(1.0, 1e-12));
        // eigenvector equations
        const Eigen::Vector2cd vp(b.a_plus, b.b_plus), vm(b.a_minus, b.b_minus);
        CHECK((m * vp - b.p_plus * vp).norm() <= 1e-12);
        CHECK((m * vm - b.p_minus * vm).norm() <= 1e-12);
    }
}

TEST_CASE("dynamical QFI vanishes without a derivative", "[qfi]") {
    const auto p = validate_params(5, 0.3);
    const auto r = dynamical_qfi(ghz_like_state(p, std::numbers::pi / 4.0), SensitivityState::zero(p));
    CHECK(r.total == 0.0);
    const auto [s, ds] = evolve_with_sensitivity(p, 1.0, ghz_like_state(p, 0.4), 0.0);
    CHECK(dynamical_qfi(s, ds).total == 0.0);
}

TEST_CASE("dynamical QFI of a diagonal state is the classical Fisher information", "[qfi][oracle]") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 50; ++i) {
        const auto p = validate_params(2 + static_cast<int>(rng() % 6), 0.1);
        const auto s0 = oracle::random_state(p, rng, 0.0);
        const ProbeState s(p, std::vector<double>(s0.raw_populations().begin(), s0.raw_populations().end()), 0.0);
        auto ds = oracle::random_sensitivity(p, rng);
        ds.d_coherence = 0.0;
        double classical = 0.0;
        for (int k = 0; k < p.n_levels(); ++k) classical += ds.d_populations[k] * ds.d_populations[k] / s.population(k);
        const auto r = dynamical_qfi(s, ds);
        CHECK(r.degenerate_branch_used);
        CHECK_THAT(r.total, WithinRel(classical, 1e-12));
        CHECK_THAT(spectral_qfi_oracle(embed_state(s), embed_sensitivity(p, ds)), WithinRel(classical, 1e-10));
    }
}

TEST_CASE("dynamical QFI equals the spectral oracle on random inputs", "[qfi][oracle][property]") {
    std::mt19937_64 rng(51);
    for (int i = 0; i < 300; ++i) {
        const auto p = validate_params(2 + static_cast<int>(rng() % 5), 0.2);
        const auto s = oracle::random_state(p, rng);
        const auto ds = oracle::random_sensitivity(p, rng);
        const auto r = dynamical_qfi(s, ds);
        CHECK(r.total >= 0.0);
        CHECK_THAT(r.total, WithinAbs(r.block_part + r.diagonal_part, 1e-12 * r.total));
        CHECK_THAT(r.total, WithinRel(spectral_qfi_oracle(embed_state(s), embed_sensitivity(p, ds)), 1e-9));
    }
}

TEST_CASE("degenerate block keeps the coherence derivative", "[qfi][oracle]") {
    // c = 0 but dc != 0: the eigenbasis is the level basis and the
    // off-diagonal terms carry |dc|^2
    const auto p = validate_params(3, 0.0);
    const ProbeState s(p, {0.4, 0.1, 0.2, 0.3}, 0.0);
    SensitivityState ds{{0.1, -0.05, 0.02, -0.07}, cplx{0.03, -0.02}};
    const auto r = dynamical_qfi(s, ds);
    CHECK(r.degenerate_branch_used);
    CHECK_THAT(r.total, WithinRel(spectral_qfi_oracle(embed_state(s), embed_sensitivity(p, ds)), 1e-12));

    // equal corner populations with c = 0
    const ProbeState flat(p, {0.25, 0.25, 0.25, 0.25}, 0.0);
    CHECK_THAT(dynamical_qfi(flat, ds).total,
               WithinRel(spectral_qfi_oracle(embed_state(flat), embed_sensitivity(p, ds)), 1e-12));
}

TEST_CASE("empty interior levels", "[qfi]") {
    const auto p = validate_params(4, 0.1);
    const auto ghz = ghz_like_state(p, std::numbers::pi / 4.0);
    SensitivityState ds = SensitivityState::zero(p);
    ds.d_populations = {0.1, 0.0, 0.0, 0.0, -0.1};
    CHECK(dynamical_qfi(ghz, ds).diagonal_part == 0.0);

    ds.d_populations = {0.1, -0.1, 0.0, 0.0, 0.0};
    try {
        (void)dynamical_qfi(ghz, ds);
        FAIL("expected SingularTerm");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularTerm);
    }
}

TEST_CASE("dynamical QFI approaches the equilibrium value", "[qfi]") {
    const auto p = validate_params(5, 0.3);
    const auto [s, ds] = evolve_with_sensitivity(p, 1.0, ghz_like_state(p, std::numbers::pi / 4.0), 200.0);
    CHECK_THAT(dynamical_qfi(s, ds).total, WithinRel(equilibrium_qfi(p, 1.0), 1e-9));
}

TEST_CASE("spectral oracle basics", "[qfi][oracle]") {
    Eigen::MatrixXcd rho(2, 2), drho(2, 2);
    const double q = 0.3, qd = 0.7;
    rho << q, 0, 0, 1 - q;
    drho << qd, 0, 0, -qd;
    CHECK_THAT(spectral_qfi_oracle(rho, drho), WithinRel(qd * qd * (1 / q + 1 / (1 - q)), 1e-14));
    CHECK(spectral_qfi_oracle(rho, Eigen::MatrixXcd::Zero(2, 2)) == 0.0);

    Eigen::MatrixXcd bad = rho;
    bad(0, 0) = 0.5;
    CHECK_THROWS_AS(spectral_qfi_oracle(bad, drho), Error);
    bad = rho;
    bad(0, 1) = 0.1;
    CHECK_THROWS_AS(spectral_qfi_oracle(bad, drho), Error);
    bad << 1.2, 0, 0, -0.2;
    CHECK_THROWS_AS(spectral_qfi_oracle(bad, drho), Error);
}

TEST_CASE("Cramer-Rao bound", "[qfi]") {
    CHECK(cramer_rao_bound(4.0, 1) == 0.5);
    CHECK_THAT(cramer_rao_bound(4.0, 100), WithinRel(0.05, 1e-15));
    CHECK_THAT(cramer_rao_bound(0.4244, 1), WithinAbs(1.535, 5e-4));
    CHECK_THROWS_AS(cramer_rao_bound(0.0, 1), Error);
    CHECK_THROWS_AS(cramer_rao_bound(-1.0, 1), Error);
    CHECK_THROWS_AS(cramer_rao_bound(1.0, 0), Error);
}
