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

// Embedded Runge-Kutta integrators with step-size control: an explicit
// Dormand-Prince 5(4) pair and an L-stable singly diagonally implicit 4(3)
// pair for stiff linear systems.
//
// Steppers own their stage buffers and remember the last accepted step
// size, so a trajectory can be advanced segment by segment (t0 -> t1 -> t2)
// without re-probing the initial step. Every call lands exactly on the
// requested end time.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ringtherm/error.hpp"

namespace ringtherm {

enum class IntegratorMethod {
    /// Implicit SDIRK 4(3) for linear autonomous systems with a shifted solve.
    Sdirk43,
    /// Explicit Dormand-Prince 5(4).
    Dopri54,
};

struct IntegratorOptions {
    IntegratorMethod method = IntegratorMethod::Sdirk43;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Upper bound on the step; infinity means unbounded.
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 50'000'000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "integrator tolerances must be positive");
        }
        if (!(max_step > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "max_step must be positive");
        }
    }
};

namespace detail {

inline double scaled_max_norm(std::span<const double> v, std::span<const double> y0, std::span<const double> y1,
                              const IntegratorOptions& opts) {
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = std::abs(v[i]) / scale;
        if (!(r <= worst)) worst = r;  // NaN propagates
    }
    return std::isfinite(worst) ? worst : std::numeric_limits<double>::infinity();
}

} // namespace detail

/// `Rhs` is callable as rhs(std::span<const double> y, std::span<double> dydt).
/// The right-hand side is autonomous; every ODE in this library is.
template <class Rhs>
class Dopri5 {
public:
    Dopri5(Rhs rhs, std::size_t dim, IntegratorOptions opts)
        : rhs_(std::move(rhs)), opts_(opts), dim_(dim), y_stage_(dim), y_new_(dim), err_(dim) {
        opts_.validate();
        for (auto& k : k_) {
            k.assign(dim, 0.0);
        }
    }

    /// Advance `y` in place from t0 to t1 (t1 >= t0). Returns accepted steps.
    std::size_t advance(std::vector<double>& y, double t0, double t1) {
        if (t1 < t0) {
            throw Error(ErrorKind::InvalidArgument, "integration must move forward in time");
        }
        if (t1 == t0) {
            return 0;
        }
        double t = t0;
        rhs_(y, k_[0]);
        if (!(h_ > 0.0)) {
            h_ = initial_step(y, t1 - t0);
        }
        std::size_t accepted = 0;
        std::size_t attempts = 0;
        while (t < t1) {
            if (++attempts > opts_.max_steps) {
                throw IntegrationError("step budget exhausted", t);
            }
            double h = std::min(h_, opts_.max_step);
            bool last = false;
            if (t + h >= t1 || t + 1.01 * h >= t1) {
                h = t1 - t;
                last = true;
            }
            const double err = try_step(y, h);
            if (err <= 1.0) {
                std::swap(y, y_new_);
                std::swap(k_[0], k_[6]); // first-same-as-last
                t = last ? t1 : t + h;
                ++accepted;
                const double fac = err == 0.0 ? kMaxGrow : std::clamp(kSafety * std::pow(err, -0.2), kMinShrink, kMaxGrow);
                // a truncated final step says nothing about the natural step size
                if (!last || h >= h_) {
                    h_ = h * fac;
                }
            } else {
                h_ = h * std::max(kMinShrink, kSafety * std::pow(err, -0.2));
                if (h_ < 1e-14 * std::max(1.0, std::abs(t))) {
                    throw IntegrationError("step size collapsed", t);
                }
            }
        }
        return accepted;
    }

    [[nodiscard]] double last_step() const noexcept { return h_; }

private:
    static constexpr double kSafety = 0.9;
    static constexpr double kMinShrink = 0.2;
    static constexpr double kMaxGrow = 5.0;

    double scaled_norm(std::span<const double> v, std::span<const double> y0, std::span<const double> y1) const {
        return detail::scaled_max_norm(v, y0, y1, opts_);
    }

    // Hairer-Norsett-Wanner starting step heuristic.
    double initial_step(const std::vector<double>& y, double span) {
        const double d0 = scaled_norm(y, y, y);
        const double d1 = scaled_norm(k_[0], y, y);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min({h0, span, opts_.max_step});
        for (std::size_t i = 0; i < dim_; ++i) {
            y_stage_[i] = y[i] + h0 * k_[0][i];
        }
        rhs_(y_stage_, k_[1]);
        for (std::size_t i = 0; i < dim_; ++i) {
            err_[i] = k_[1][i] - k_[0][i];
        }
        const double d2 = scaled_norm(err_, y, y) / h0;
        const double dmax = std::max(d1, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, 1e-3 * h0) : std::pow(0.01 / dmax, 0.2);
        return std::min({100.0 * h0, h1, span});
    }

    double try_step(const std::vector<double>& y, double h) {
        static constexpr double a21 = 1.0 / 5.0;
        static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                                a54 = -212.0 / 729.0;
        static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                                a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
        static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                                b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                                e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

        auto& k1 = k_[0];
        auto& k2 = k_[1];
        auto& k3 = k_[2];
        auto& k4 = k_[3];
        auto& k5 = k_[4];
        auto& k6 = k_[5];
        auto& k7 = k_[6];
        const std::size_t n = dim_;

        for (std::size_t i = 0; i < n; ++i) y_stage_[i] = y[i] + h * a21 * k1[i];
        rhs_(y_stage_, k2);
        for (std::size_t i = 0; i < n; ++i) y_stage_[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs_(y_stage_, k3);
        for (std::size_t i = 0; i < n; ++i) y_stage_[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs_(y_stage_, k4);
        for (std::size_t i = 0; i < n; ++i)
            y_stage_[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs_(y_stage_, k5);
        for (std::size_t i = 0; i < n; ++i)
            y_stage_[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs_(y_stage_, k6);
        for (std::size_t i = 0; i < n; ++i)
            y_new_[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs_(y_new_, k7);
        for (std::size_t i = 0; i < n; ++i)
            err_[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        return scaled_norm(err_, y, y_new_);
    }

    Rhs rhs_;
    IntegratorOptions opts_;
    std::size_t dim_;
    std::array<std::vector<double>, 7> k_;
    std::vector<double> y_stage_;
    std::vector<double> y_new_;
    std::vector<double> err_;
    double h_ = 0.0;
};

/// Five-stage stiffly accurate SDIRK of order 4 with an embedded order 3
/// solution (gamma = 1/4), for linear autonomous systems y' = A y. Besides
/// rhs(y, dydt) = A y, `Rhs` provides rhs.solve_shifted(alpha, b, x) solving
/// (I - alpha A) x = b.
template <class Rhs>
class Sdirk43 {
public:
    Sdirk43(Rhs rhs, std::size_t dim, IntegratorOptions opts)
        : rhs_(std::move(rhs)), opts_(opts), dim_(dim), acc_(dim), work_(dim), y_new_(dim), err_(dim) {
        opts_.validate();
        for (auto& k : k_) k.assign(dim, 0.0);
    }

    std::size_t advance(std::vector<double>& y, double t0, double t1) {
        if (t1 < t0) {
            throw Error(ErrorKind::InvalidArgument, "integration must move forward in time");
        }
        if (t1 == t0) {
            return 0;
        }
        if (!(h_ > 0.0)) {
            h_ = initial_step(y, t1 - t0);
        }
        double t = t0;
        std::size_t accepted = 0;
        std::size_t attempts = 0;
        while (t < t1) {
            if (++attempts > opts_.max_steps) {
                throw IntegrationError("step budget exhausted", t);
            }
            double h = std::min(h_, opts_.max_step);
            bool last = false;
            if (t + 1.01 * h >= t1) {
                h = t1 - t;
                last = true;
            }
            const double err = try_step(y, h);
            if (err <= 1.0) {
                std::swap(y, y_new_);
                t = last ? t1 : t + h;
                ++accepted;
                const double fac =
                    err == 0.0 ? kMaxGrow : std::clamp(kSafety * std::pow(err, -0.25), kMinShrink, kMaxGrow);
                if (!last || h >= h_) {
                    h_ = h * fac;
                }
            } else {
                h_ = h * std::max(kMinShrink, kSafety * std::pow(err, -0.25));
                if (h_ < 1e-14 * std::max(1.0, std::abs(t))) {
                    throw IntegrationError("step size collapsed", t);
                }
            }
        }
        return accepted;
    }

    [[nodiscard]] double last_step() const noexcept { return h_; }

private:
    static constexpr double kSafety = 0.9;
    static constexpr double kMinShrink = 0.2;
    static constexpr double kMaxGrow = 5.0;
    static constexpr double kGamma = 0.25;
    static constexpr std::size_t kStages = 5;
    // strictly lower part of the Butcher matrix; the diagonal is kGamma
    static constexpr std::array<std::array<double, 4>, kStages> kA{{
        {0.0, 0.0, 0.0, 0.0},
        {1.0 / 2.0, 0.0, 0.0, 0.0},
        {17.0 / 50.0, -1.0 / 25.0, 0.0, 0.0},
        {371.0 / 1360.0, -137.0 / 2720.0, 15.0 / 544.0, 0.0},
        {25.0 / 24.0, -49.0 / 48.0, 125.0 / 16.0, -85.0 / 12.0},
    }};
    // b - b_hat, where b is the last row (stiffly accurate)
    static constexpr std::array<double, kStages> kErr{25.0 / 24.0 - 59.0 / 48.0, -49.0 / 48.0 + 17.0 / 96.0,
                                                      125.0 / 16.0 - 225.0 / 32.0, 0.0, 1.0 / 4.0};

    double initial_step(const std::vector<double>& y, double span) {
        rhs_(y, work_);
        const double d0 = detail::scaled_max_norm(y, y, y, opts_);
        const double d1 = detail::scaled_max_norm(work_, y, y, opts_);
        const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        return std::min({h0, span, opts_.max_step});
    }

    double try_step(const std::vector<double>& y, double h) {
        const std::size_t n = dim_;
        for (std::size_t i = 0; i < kStages; ++i) {
            for (std::size_t r = 0; r < n; ++r) {
                double v = y[r];
                for (std::size_t j = 0; j < i; ++j) v += h * kA[i][j] * k_[j][r];
                acc_[r] = v;
            }
            // k_i = A (acc + h gamma k_i)  <=>  (I - h gamma A) k_i = A acc
            rhs_(acc_, work_);
            rhs_.solve_shifted(h * kGamma, work_, k_[i]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            y_new_[r] = acc_[r] + h * kGamma * k_[kStages - 1][r];
            double e = 0.0;
            for (std::size_t j = 0; j < kStages; ++j) e += kErr[j] * k_[j][r];
            work_[r] = h * e;
        }
        // filtered estimate: stiff components do not dominate the control
        rhs_.solve_shifted(h * kGamma, work_, err_);
        return detail::scaled_max_norm(err_, y, y_new_, opts_);
    }

    Rhs rhs_;
    IntegratorOptions opts_;
    std::size_t dim_;
    std::array<std::vector<double>, kStages> k_;
    std::vector<double> acc_, work_, y_new_, err_;
    double h_ = 0.0;
};

} // namespace ringtherm
