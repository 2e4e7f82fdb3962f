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

// Reduced dynamics of the probe under collective thermal dissipation.
//
// Starting from a GHZ-like state, the density matrix keeps the shape
//
//     rho = sum_M p_M |M><M| + c |-J><J| + conj(c) |J><-J|
//
// for all times: every jump operator |M-1><M| maps diagonals to diagonals,
// while the Hamiltonian and the anticommutator terms only rescale the corner
// element. The populations follow a birth-death chain along the ladder and
// the corner coherence decays and rotates at a constant complex rate, so the
// state is tracked as N+1 real populations plus one complex number.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "ringtherm/error.hpp"
#include "ringtherm/integrator.hpp"
#include "ringtherm/spectrum.hpp"

namespace ringtherm {

using cplx = std::complex<double>;

/// Populations over the Dicke ladder (index = offset k = M + J) plus the
/// extreme coherence c = rho_{-J,J}. rho_{J,-J} is conj(c).
class ProbeState {
public:
    ProbeState() = default;
    ProbeState(ProbeParams params, std::vector<double> populations, cplx coherence)
        : params_(params), populations_(std::move(populations)), coherence_(coherence) {
        if (static_cast<int>(populations_.size()) != params_.n_levels()) {
            throw Error(ErrorKind::InvalidArgument, "population vector does not match the ladder size");
        }
    }

    [[nodiscard]] const ProbeParams& params() const noexcept { return params_; }
    /// Raw integrator output; may carry round-off below zero.
    [[nodiscard]] std::span<const double> raw_populations() const noexcept { return populations_; }
    /// Population of level k, with negative round-off clamped to zero.
    [[nodiscard]] double population(int k) const noexcept { return std::max(0.0, populations_[k]); }
    [[nodiscard]] double population(LevelIndex level) const noexcept { return population(level.offset()); }
    [[nodiscard]] cplx coherence() const noexcept { return coherence_; }
    [[nodiscard]] double bottom() const noexcept { return population(0); }
    [[nodiscard]] double top() const noexcept { return population(params_.n_atoms); }

    [[nodiscard]] double trace() const noexcept {
        double s = 0.0;
        for (double p : populations_) s += p;
        return s;
    }

    friend bool operator==(const ProbeState&, const ProbeState&) = default;

private:
    ProbeParams params_{};
    std::vector<double> populations_;
    cplx coherence_{0.0, 0.0};
};

/// Elementwise temperature derivative of a ProbeState at fixed time.
struct SensitivityState {
    std::vector<double> d_populations;
    cplx d_coherence{0.0, 0.0};

    static SensitivityState zero(const ProbeParams& p) {
        return SensitivityState{std::vector<double>(p.n_levels(), 0.0), cplx{0.0, 0.0}};
    }

    friend bool operator==(const SensitivityState&, const SensitivityState&) = default;
};

/// Time derivative of the tracked elements.
struct StateRates {
    std::vector<double> populations;
    cplx coherence{0.0, 0.0};
};

inline ProbeState ghz_like_state(const ProbeParams& p, double phi) {
    if (!(phi >= 0.0 && phi <= std::numbers::pi / 2.0)) {
        throw Error(ErrorKind::PhiOutOfRange, "phi must lie in [0, pi/2], got " + std::to_string(phi));
    }
    std::vector<double> pops(p.n_levels(), 0.0);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    pops.front() = c * c;
    pops.back() = s * s;
    return ProbeState(p, std::move(pops), cplx{c * s, 0.0});
}

inline void require_positive_temperature(double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw Error(ErrorKind::NonpositiveTemperature,
                    "temperature must be positive and finite, got " + std::to_string(temperature));
    }
}

/// Boltzmann weights normalized after shifting by the ground energy.
inline ProbeState gibbs_state(const ProbeParams& p, double temperature) {
    require_positive_temperature(temperature);
    std::vector<double> w(p.n_levels());
    double z = 0.0;
    for (int k = 0; k < p.n_levels(); ++k) {
        w[k] = std::exp(-excitation_energy(p, LevelIndex::from_offset(p, k)) / temperature);
        z += w[k];
    }
    for (auto& v : w) v /= z;
    return ProbeState(p, std::move(w), cplx{0.0, 0.0});
}

/// Rates of the ladder master equation at fixed (params, T), and their
/// temperature derivatives. Channel k (1..N) couples levels k and k-1.
class LadderGenerator {
public:
    LadderGenerator(const ProbeParams& p, double temperature) : params_(p), temperature_(temperature) {
        require_positive_temperature(temperature);
        const int n = p.n_atoms;
        down_.assign(n + 1, 0.0);
        up_.assign(n + 1, 0.0);
        d_down_.assign(n + 1, 0.0);
        d_up_.assign(n + 1, 0.0);
        for (int k = 1; k <= n; ++k) {
            const auto level = LevelIndex::from_offset(p, k);
            const double w = gap(p, level);
            const double g = decay_weight(p, level);
            const double occ = planck_occupation(w, temperature);
            const double d_occ = planck_derivative(w, temperature);
            down_[k] = g * (occ + 1.0);
            up_[k] = g * occ;
            d_down_[k] = g * d_occ;
            d_up_[k] = g * d_occ;
        }
        const double splitting = energy(p, LevelIndex::bottom(p)) - energy(p, LevelIndex::top(p));
        coherence_rate_ = cplx{-0.5 * (down_[n] + up_[1]), -splitting};
        d_coherence_rate_ = cplx{-0.5 * (d_down_[n] + d_up_[1]), 0.0};

        double worst_out = 0.0;
        for (int k = 0; k <= n; ++k) worst_out = std::max(worst_out, outflow(down_, up_, k));
        spectral_bound_ = std::max(2.0 * worst_out, std::abs(coherence_rate_));
    }

    [[nodiscard]] const ProbeParams& params() const noexcept { return params_; }
    [[nodiscard]] double temperature() const noexcept { return temperature_; }
    [[nodiscard]] int n_levels() const noexcept { return params_.n_levels(); }
    /// Rate of the transition k -> k-1 (emission into the bath).
    [[nodiscard]] double down(int k) const noexcept { return down_[k]; }
    /// Rate of the transition k-1 -> k (absorption).
    [[nodiscard]] double up(int k) const noexcept { return up_[k]; }
    [[nodiscard]] cplx coherence_rate() const noexcept { return coherence_rate_; }
    [[nodiscard]] cplx d_coherence_rate() const noexcept { return d_coherence_rate_; }
    /// Gershgorin-type bound on the generator's spectral radius.
    [[nodiscard]] double spectral_bound() const noexcept { return spectral_bound_; }

    /// dp/dt for the birth-death chain with the given channel rates.
    static void chain(std::span<const double> down, std::span<const double> up, std::span<const double> pops,
                      std::span<double> out) noexcept {
        const int last = static_cast<int>(pops.size()) - 1;
        for (int k = 0; k <= last; ++k) {
            double r = -outflow(down, up, k) * pops[k];
            if (k < last) r += down[k + 1] * pops[k + 1];
            if (k > 0) r += up[k] * pops[k - 1];
            out[k] = r;
        }
    }

    void populations_rate(std::span<const double> pops, std::span<double> out) const noexcept {
        chain(down_, up_, pops, out);
    }

    /// Population rates of the T-derivative generator applied to `pops`.
    void populations_rate_dT(std::span<const double> pops, std::span<double> out) const noexcept {
        chain(d_down_, d_up_, pops, out);
    }

    /// Solves (I - alpha G) x = b for the population generator G. The matrix
    /// is tridiagonal and column diagonally dominant, so elimination without
    /// pivoting is stable. `work` needs as many entries as there are levels.
    void solve_shifted(double alpha, std::span<const double> b, std::span<double> x,
                       std::span<double> work) const noexcept {
        const int last = params_.n_atoms;
        // row k: -alpha up[k] x[k-1] + (1 + alpha out_k) x[k] - alpha down[k+1] x[k+1]
        double diag = 1.0 + alpha * outflow(down_, up_, 0);
        x[0] = b[0] / diag;
        for (int k = 1; k <= last; ++k) {
            work[k] = -alpha * down_[k] / diag;  // upper coefficient of row k-1, normalized
            diag = 1.0 + alpha * outflow(down_, up_, k) + alpha * up_[k] * work[k];
            x[k] = (b[k] + alpha * up_[k] * x[k - 1]) / diag;
        }
        for (int k = last - 1; k >= 0; --k) x[k] -= work[k + 1] * x[k + 1];
    }

private:
    static double outflow(std::span<const double> down, std::span<const double> up, int k) noexcept {
        const int last = static_cast<int>(down.size()) - 1;
        double r = 0.0;
        if (k > 0) r += down[k];
        if (k < last) r += up[k + 1];
        return r;
    }

    ProbeParams params_;
    double temperature_;
    std::vector<double> down_, up_, d_down_, d_up_;
    cplx coherence_rate_{};
    cplx d_coherence_rate_{};
    double spectral_bound_ = 0.0;
};

/// Right-hand side of the ladder master equation on the tracked elements.
inline StateRates master_rhs(const ProbeParams& p, double temperature, const ProbeState& state) {
    const LadderGenerator gen(p, temperature);
    StateRates r{std::vector<double>(p.n_levels()), gen.coherence_rate() * state.coherence()};
    gen.populations_rate(state.raw_populations(), r.populations);
    return r;
}

/// The same right-hand side assembled from collective operators J+ and J-
/// with a single rate Gamma_0 = 4 w_A^3 / 3. Only valid without coupling.
inline StateRates collective_rhs(const ProbeParams& p, double temperature, const ProbeState& state) {
    if (p.coupling != 0.0) {
        throw Error(ErrorKind::NonzeroCoupling, "the collective form requires zero coupling");
    }
    require_positive_temperature(temperature);
    const double j = p.j();
    const double w = p.transition_freq;
    const double gamma0 = 4.0 * w * w * w / 3.0;
    const double n_bar = planck_occupation(w, temperature);
    const int n = p.n_atoms;

    // |<M+1|J+|M>|^2 = (J - M)(J + M + 1) and |<M-1|J-|M>|^2 = (J + M)(J - M + 1)
    auto raise_sq = [j](double m) { return (j - m) * (j + m + 1.0); };
    auto lower_sq = [j](double m) { return (j + m) * (j - m + 1.0); };

    const auto pops = state.raw_populations();
    StateRates r{std::vector<double>(n + 1, 0.0), {}};
    for (int k = 0; k <= n; ++k) {
        const double m = k - j;
        // D[J-]: gain from M+1, loss through <M|J+J-|M>
        double emit = -lower_sq(m) * pops[k];
        if (k < n) emit += lower_sq(m + 1.0) * pops[k + 1];
        // D[J+]: gain from M-1, loss through <M|J-J+|M>
        double absorb = -raise_sq(m) * pops[k];
        if (k > 0) absorb += raise_sq(m - 1.0) * pops[k - 1];
        r.populations[k] = gamma0 * ((n_bar + 1.0) * emit + n_bar * absorb);
    }

    // rho_{-J,J}: H_s = w J_z gives -i(E_{-J} - E_J) = i N w; the jump terms
    // cannot reach the corner, the anticommutators contribute
    // -1/2 (<-J|A^dag A|-J> + <J|A^dag A|J>).
    const double m_lo = -j;
    const double m_hi = j;
    const double emit_loss = 0.5 * (lower_sq(m_lo) + lower_sq(m_hi));
    const double absorb_loss = 0.5 * (raise_sq(m_lo) + raise_sq(m_hi));
    const cplx rate{-gamma0 * ((n_bar + 1.0) * emit_loss + n_bar * absorb_loss), 2.0 * j * w};
    r.coherence = rate * state.coherence();
    return r;
}

namespace detail {

// Integrator state layout: [p_0..p_N, Re c, Im c] optionally followed by
// [dp_0..dp_N, Re dc, Im dc]. The coherence is carried in the frame rotating
// with the bottom-top splitting: only its decay is integrated, since the
// phase would otherwise force steps of a fraction of 1 / (N w_A). The
// splitting does not depend on T, so dc rotates with the same phase.
struct LadderOde {
    std::shared_ptr<const LadderGenerator> gen;
    bool with_sensitivity = false;

    [[nodiscard]] cplx frame_rate() const noexcept { return {gen->coherence_rate().real(), 0.0}; }

    void operator()(std::span<const double> y, std::span<double> dydt) const {
        const auto nl = static_cast<std::size_t>(gen->n_levels());
        gen->populations_rate(y.first(nl), dydt.first(nl));
        const cplx c{y[nl], y[nl + 1]};
        const cplx dc = frame_rate() * c;
        dydt[nl] = dc.real();
        dydt[nl + 1] = dc.imag();
        if (!with_sensitivity) {
            return;
        }
        const std::size_t off = nl + 2;
        const auto s = y.subspan(off, nl);
        auto ds = dydt.subspan(off, nl);
        gen->populations_rate(s, ds);
        scratch.resize(nl);
        gen->populations_rate_dT(y.first(nl), scratch);
        for (std::size_t k = 0; k < nl; ++k) ds[k] += scratch[k];
        const cplx sc{y[off + nl], y[off + nl + 1]};
        const cplx dsc = frame_rate() * sc + gen->d_coherence_rate() * c;
        dydt[off + nl] = dsc.real();
        dydt[off + nl + 1] = dsc.imag();
    }

    // (I - alpha A) x = b with A block lower triangular: the state block
    // first, then the sensitivity block driven by dA/dT applied to it.
    void solve_shifted(double alpha, std::span<const double> b, std::span<double> x) const {
        const auto nl = static_cast<std::size_t>(gen->n_levels());
        scratch.resize(2 * nl);
        const std::span<double> work(scratch.data() + nl, nl);
        gen->solve_shifted(alpha, b.first(nl), x.first(nl), work);
        const cplx shift = 1.0 - alpha * frame_rate();
        const cplx c = cplx{b[nl], b[nl + 1]} / shift;
        x[nl] = c.real();
        x[nl + 1] = c.imag();
        if (!with_sensitivity) {
            return;
        }
        const std::size_t off = nl + 2;
        const std::span<double> drive(scratch.data(), nl);
        gen->populations_rate_dT(x.first(nl), drive);
        for (std::size_t k = 0; k < nl; ++k) drive[k] = b[off + k] + alpha * drive[k];
        gen->solve_shifted(alpha, drive, x.subspan(off, nl), work);
        const cplx sc = (cplx{b[off + nl], b[off + nl + 1]} + alpha * gen->d_coherence_rate() * c) / shift;
        x[off + nl] = sc.real();
        x[off + nl + 1] = sc.imag();
    }


    mutable std::vector<double> scratch;
};

// Explicit steps stay stable for h * |lambda| below ~3.3 along the negative real axis.
inline constexpr double kStabilityMargin = 2.5;

} // namespace detail

/// A single trajectory that can be advanced forward in time and copied to
/// take snapshots (copies continue independently).
class Trajectory {
public:
    Trajectory(const ProbeParams& p, double temperature, const ProbeState& initial, IntegratorOptions opts,
               bool with_sensitivity)
        : params_(p),
          with_sensitivity_(with_sensitivity),
          gen_(std::make_shared<const LadderGenerator>(p, temperature)),
          stepper_(make_stepper(gen_, opts, with_sensitivity)) {
        if (initial.params() != p) {
            throw Error(ErrorKind::InvalidArgument, "initial state belongs to different parameters");
        }
        const auto nl = static_cast<std::size_t>(p.n_levels());
        y_.assign(with_sensitivity ? 2 * (nl + 2) : nl + 2, 0.0);
        const auto pops = initial.raw_populations();
        std::copy(pops.begin(), pops.end(), y_.begin());
        y_[nl] = initial.coherence().real();
        y_[nl + 1] = initial.coherence().imag();
        initial_ = initial;
    }

    [[nodiscard]] double time() const noexcept { return time_; }

    void advance_to(double t) {
        if (t < time_) {
            throw Error(ErrorKind::InvalidArgument, "trajectories only move forward");
        }
        std::visit([&](auto& st) { st.advance(y_, time_, t); }, stepper_);
        time_ = t;
    }

    [[nodiscard]] ProbeState state() const {
        if (time_ == 0.0) {
            return initial_;
        }
        const auto nl = static_cast<std::size_t>(params_.n_levels());
        return ProbeState(params_, std::vector<double>(y_.begin(), y_.begin() + nl), phase() * cplx{y_[nl], y_[nl + 1]});
    }

    [[nodiscard]] SensitivityState sensitivity() const {
        if (!with_sensitivity_) {
            throw Error(ErrorKind::InvalidArgument, "trajectory was built without sensitivities");
        }
        const auto nl = static_cast<std::size_t>(params_.n_levels());
        const std::size_t off = nl + 2;
        return SensitivityState{std::vector<double>(y_.begin() + off, y_.begin() + off + nl),
                                phase() * cplx{y_[off + nl], y_[off + nl + 1]}};
    }

    [[nodiscard]] const LadderGenerator& generator() const noexcept { return *gen_; }

private:
    using Stepper = std::variant<Sdirk43<detail::LadderOde>, Dopri5<detail::LadderOde>>;

    static Stepper make_stepper(const std::shared_ptr<const LadderGenerator>& gen, IntegratorOptions opts,
                                bool with_sensitivity) {
        detail::LadderOde ode{gen, with_sensitivity, {}};
        const std::size_t dim = static_cast<std::size_t>(gen->n_levels() + 2) * (with_sensitivity ? 2 : 1);
        if (opts.method == IntegratorMethod::Sdirk43) {
            return Sdirk43<detail::LadderOde>(std::move(ode), dim, opts);
        }
        opts.max_step = std::min(opts.max_step, detail::kStabilityMargin / gen->spectral_bound());
        return Dopri5<detail::LadderOde>(std::move(ode), dim, opts);
    }

    // rotating frame back to the lab frame
    [[nodiscard]] cplx phase() const { return std::polar(1.0, gen_->coherence_rate().imag() * time_); }

    ProbeParams params_;
    bool with_sensitivity_;
    std::shared_ptr<const LadderGenerator> gen_;
    Stepper stepper_;
    std::vector<double> y_;
    ProbeState initial_;
    double time_ = 0.0;
};

/// Rescales a state to unit trace and carries the derivative along
/// (d(p / tr) = dp / tr - p dtr / tr^2). Integration round-off drifts the
/// trace by ~1e-15, which at Q ~ 100 is already ~1e-13 of QFI.
inline std::pair<ProbeState, SensitivityState> unit_trace(const ProbeState& state, const SensitivityState& sens) {
    const double tr = state.trace();
    if (!(tr > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "state has no weight to normalize");
    }
    double dtr = 0.0;
    for (double v : sens.d_populations) dtr += v;
    const auto raw = state.raw_populations();
    std::vector<double> pops(raw.size());
    SensitivityState ds{std::vector<double>(raw.size()), {}};
    for (std::size_t k = 0; k < raw.size(); ++k) {
        pops[k] = raw[k] / tr;
        ds.d_populations[k] = (sens.d_populations[k] - pops[k] * dtr) / tr;
    }
    const cplx c = state.coherence() / tr;
    ds.d_coherence = (sens.d_coherence - c * dtr) / tr;
    return {ProbeState(state.params(), std::move(pops), c), std::move(ds)};
}

inline ProbeState evolve(const ProbeParams& p, double temperature, const ProbeState& state0, double horizon,
                         const IntegratorOptions& opts = {}) {
    if (!(horizon >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "horizon must be non-negative");
    }
    Trajectory traj(p, temperature, state0, opts, false);
    traj.advance_to(horizon);
    return traj.state();
}

inline std::pair<ProbeState, SensitivityState> evolve_with_sensitivity(const ProbeParams& p, double temperature,
                                                                       const ProbeState& state0, double horizon,
                                                                       const IntegratorOptions& opts = {}) {
    if (!(horizon >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "horizon must be non-negative");
    }
    Trajectory traj(p, temperature, state0, opts, true);
    traj.advance_to(horizon);
    return {traj.state(), traj.sensitivity()};
}

} // namespace ringtherm
