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

// Thermometry studies built on the dynamics and QFI layers: temperature
// scans, time-resolved QFI surfaces, time-optimized QFI, equilibration
// times, optimal measurement times, initial-state optimization and power-law
// fits of times against the atom number.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringtherm/dynamics.hpp"
#include "ringtherm/error.hpp"
#include "ringtherm/parallel.hpp"
#include "ringtherm/qfi.hpp"
#include "ringtherm/spectrum.hpp"

namespace ringtherm {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Column-oriented result table. Failed rows keep their key columns, hold NaN
/// in the value columns, and carry the error tag in `status`.
struct ScanTable {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> status;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::pair<std::string, double>> summary;

    void add_row(std::vector<double> values, std::string row_status = "ok") {
        if (values.size() != columns.size()) {
            throw Error(ErrorKind::InvalidArgument, "row width does not match the column count");
        }
        rows.push_back(std::move(values));
        status.push_back(std::move(row_status));
    }

    [[nodiscard]] std::size_t column(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) {
            throw Error(ErrorKind::InvalidArgument, "table has no column '" + name + "'");
        }
        return static_cast<std::size_t>(it - columns.begin());
    }

    [[nodiscard]] std::optional<double> summary_value(const std::string& key) const {
        for (const auto& [k, v] : summary) {
            if (k == key) return v;
        }
        return std::nullopt;
    }

    [[nodiscard]] bool all_ok() const {
        return std::all_of(status.begin(), status.end(), [](const std::string& s) { return s == "ok"; });
    }

    friend bool operator==(const ScanTable& a, const ScanTable& b) {
        auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
        if (a.kind != b.kind || a.columns != b.columns || a.status != b.status || a.meta != b.meta ||
            a.rows.size() != b.rows.size() || a.summary.size() != b.summary.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            if (a.rows[i].size() != b.rows[i].size()) return false;
            for (std::size_t j = 0; j < a.rows[i].size(); ++j) {
                if (!same(a.rows[i][j], b.rows[i][j])) return false;
            }
        }
        for (std::size_t i = 0; i < a.summary.size(); ++i) {
            if (a.summary[i].first != b.summary[i].first || !same(a.summary[i].second, b.summary[i].second)) {
                return false;
            }
        }
        return true;
    }
};

/// Temperatures and times at which to sample Q_d.
struct ScanGrid {
    ProbeParams params;
    double phi = std::numbers::pi / 4.0;
    std::vector<double> temperature_values;
    std::vector<double> t_values;

    void validate() const {
        auto increasing = [](const std::vector<double>& v) {
            return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
        };
        if (temperature_values.empty() || !increasing(temperature_values) || temperature_values.front() <= 0.0) {
            throw Error(ErrorKind::InvalidArgument, "temperatures must be positive and strictly increasing");
        }
        if (t_values.empty() || !increasing(t_values) || t_values.front() < 0.0) {
            throw Error(ErrorKind::InvalidArgument, "times must be non-negative and strictly increasing");
        }
        if (!(phi >= 0.0 && phi <= std::numbers::pi / 2.0)) {
            throw Error(ErrorKind::PhiOutOfRange, "phi must lie in [0, pi/2]");
        }
    }
};

struct ExperimentOptions {
    IntegratorOptions integrator{};
    QfiOptions qfi{};
    /// Ratio between consecutive coarse samples when searching over time.
    double time_growth = 1.05;
    /// First coarse sample, in units of 1 / (generator spectral bound).
    double time_first = 0.05;
    /// Q_d counts as equilibrated once |Q_d - Q_e| <= equilibrium_rel * Q_e.
    double equilibrium_rel = 1e-10;
    /// Absolute slack added to that test; Q_d carries roughly this much
    /// rounding noise, so a vanishing Q_e could otherwise never be reached.
    double equilibrium_abs = 1e-13;
    /// A time maximum within this relative margin of Q_e is a plateau.
    double plateau_rel = 1e-9;
    /// Relative width at which golden-section refinement over t stops.
    double time_rel_tol = 1e-7;
    /// Relative width at which refinement over T (and phi) stops.
    double temperature_rel_tol = 1e-4;
    double phi_tol = 1e-5;
    /// Absolute |Q_d - Q_e| threshold that defines t_e.
    double te_criterion = 1e-12;
    /// Relative bisection tolerance on t_e.
    double te_rel_tol = 1e-3;
    double max_horizon = 1e6;
    std::size_t workers = 1;
};

namespace detail {

/// Golden-section maximization of f on [a, b]; returns the best point seen.
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double rel_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double best_x = a;
    double best_f = -std::numeric_limits<double>::infinity();
    auto track = [&](double x, double fx) {
        if (fx > best_f || (fx == best_f && x < best_x)) {
            best_f = fx;
            best_x = x;
        }
    };
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    track(x1, f1);
    track(x2, f2);
    while ((b - a) > rel_tol * std::max(std::abs(x1), std::numeric_limits<double>::min())) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
            track(x1, f1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
            track(x2, f2);
        }
    }
    return {best_x, best_f};
}

/// Index of the largest value; ties go to the smallest index. NaN entries
/// are ignored. Returns npos when there is no finite value.
inline std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::isnan(v[i])) continue;
        if (best == static_cast<std::size_t>(-1) || v[i] > v[best]) best = i;
    }
    return best;
}

inline double qd_at(const Trajectory& traj, const QfiOptions& qopts) {
    const auto [s, ds] = unit_trace(traj.state(), traj.sensitivity());
    return dynamical_qfi(s, ds, qopts).total;
}

inline void require_phi(double phi) {
    if (!(phi >= 0.0 && phi <= std::numbers::pi / 2.0)) {
        throw Error(ErrorKind::PhiOutOfRange, "phi must lie in [0, pi/2], got " + std::to_string(phi));
    }
}

inline void require_temperatures(const std::vector<double>& temps) {
    if (temps.empty()) {
        throw Error(ErrorKind::InvalidArgument, "no temperatures given");
    }
    for (double t : temps) require_positive_temperature(t);
}

} // namespace detail

/// Q_e over a list of temperatures, with the grid argmax as T_opt.
inline ScanTable equilibrium_scan(const ProbeParams& p, const std::vector<double>& temperatures,
                                  std::size_t workers = 1) {
    detail::require_temperatures(temperatures);
    const auto cells = parallel_map(temperatures.size(), workers,
                                    [&](std::size_t i) { return equilibrium_qfi(p, temperatures[i]); });
    ScanTable table;
    table.kind = "eq-scan";
    table.columns = {"T", "Q_e"};
    std::vector<double> values;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double q = cells[i].ok() ? *cells[i].value : kNaN;
        values.push_back(q);
        table.add_row({temperatures[i], q}, cells[i].ok() ? "ok" : cells[i].error);
    }
    if (const auto best = detail::argmax(values); best < values.size()) {
        table.summary = {{"T_opt", temperatures[best]}, {"peak", values[best]}};
    }
    return table;
}

/// Argmax over T of Q_e, refined by golden section around the best grid point.
inline std::pair<double, double> equilibrium_peak(const ProbeParams& p, const std::vector<double>& temperatures,
                                                  double rel_tol = 1e-8) {
    detail::require_temperatures(temperatures);
    std::vector<double> q(temperatures.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = equilibrium_qfi(p, temperatures[i]);
    const std::size_t i = detail::argmax(q);
    const double lo = temperatures[i == 0 ? 0 : i - 1];
    const double hi = temperatures[std::min(i + 1, q.size() - 1)];
    if (lo == hi) return {temperatures[i], q[i]};
    auto [t, v] = detail::golden_max([&](double x) { return equilibrium_qfi(p, x); }, lo, hi, rel_tol);
    if (q[i] > v) return {temperatures[i], q[i]};
    return {t, v};
}

/// Q_d on every (T, t) cell. Each temperature is one trajectory swept over
/// the sorted times.
inline ScanTable dynamic_scan(const ScanGrid& grid, const ExperimentOptions& opts = {}) {
    grid.validate();
    const ProbeParams& p = grid.params;
    const ProbeState initial = ghz_like_state(p, grid.phi);
    const auto cells = parallel_map(grid.temperature_values.size(), opts.workers, [&](std::size_t i) {
        const double temp = grid.temperature_values[i];
        Trajectory traj(p, temp, initial, opts.integrator, true);
        std::vector<Cell<double>> column(grid.t_values.size());
        for (std::size_t j = 0; j < grid.t_values.size(); ++j) {
            try {
                traj.advance_to(grid.t_values[j]);
                column[j].value = detail::qd_at(traj, opts.qfi);
            } catch (const Error& e) {
                column[j].error = std::string(to_string(e.kind()));
                if (e.kind() == ErrorKind::IntegrationFailure) {
                    // later times are unreachable once the trajectory stalls
                    for (std::size_t r = j + 1; r < column.size(); ++r) column[r].error = column[j].error;
                    break;
                }
            }
        }
        return column;
    });

    ScanTable table;
    table.kind = "dyn-scan";
    table.columns = {"T", "t", "Q_d"};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double temp = grid.temperature_values[i];
        for (std::size_t j = 0; j < grid.t_values.size(); ++j) {
            if (!cells[i].ok()) {
                table.add_row({temp, grid.t_values[j], kNaN}, cells[i].error);
                continue;
            }
            const auto& c = (*cells[i].value)[j];
            table.add_row({temp, grid.t_values[j], c.ok() ? *c.value : kNaN}, c.ok() ? "ok" : c.error);
        }
    }
    return table;
}

/// Largest Q_d over time at one temperature.
struct TimePeak {
    double t = 0.0;
    double qfi = 0.0;
    double equilibrium_qfi = 0.0;
    /// The maximum is the equilibrium plateau, not an interior peak; `t` is
    /// then the earliest coarse sample on the plateau.
    bool equilibrated = false;
};

/// Maximizes Q_d(T; t) over t >= 0: geometric coarse sampling until the
/// probe has equilibrated, then golden-section refinement on the bracketed
/// peak, restarted from the stored trajectory snapshot.
inline TimePeak time_peak(const ProbeParams& p, double phi, double temperature, const ExperimentOptions& opts = {}) {
    detail::require_phi(phi);
    const double q_e = equilibrium_qfi(p, temperature);
    const LadderGenerator gen(p, temperature);
    const double t_first = opts.time_first / gen.spectral_bound();

    Trajectory traj(p, temperature, ghz_like_state(p, phi), opts.integrator, true);
    std::vector<double> times{0.0};
    std::vector<double> values{0.0};
    Trajectory previous = traj;
    std::optional<Trajectory> best_left;
    std::size_t best = 0;
    double settled_since = -1.0;

    for (double t = t_first;; t *= opts.time_growth) {
        if (t > opts.max_horizon) {
            throw Error(ErrorKind::DidNotEquilibrate, "no equilibrium before t=" + std::to_string(opts.max_horizon));
        }
        traj.advance_to(t);
        const double q = detail::qd_at(traj, opts.qfi);
        times.push_back(t);
        values.push_back(q);
        if (q > values[best]) {
            best = values.size() - 1;
            best_left = previous;
        }
        previous = traj;

        const bool settled = std::abs(q - q_e) <= opts.equilibrium_rel * q_e + opts.equilibrium_abs;
        if (!settled) {
            settled_since = -1.0;
        } else if (settled_since < 0.0) {
            settled_since = t;
        } else if (t >= 2.0 * settled_since && best + 1 < values.size()) {
            break;
        }
    }

    TimePeak out;
    out.equilibrium_qfi = q_e;
    const double q_best = values[best];
    if (q_best <= q_e * (1.0 + opts.plateau_rel)) {
        out.equilibrated = true;
        out.qfi = q_best;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] >= q_best * (1.0 - opts.plateau_rel)) {
                out.t = times[i];
                break;
            }
        }
        return out;
    }

    const double lo = times[best - 1];
    const double hi = times[best + 1];
    const Trajectory& left = *best_left;
    auto eval = [&](double x) {
        Trajectory probe = left;
        probe.advance_to(x);
        return detail::qd_at(probe, opts.qfi);
    };
    auto [t_star, q_star] = detail::golden_max(eval, lo, hi, opts.time_rel_tol);
    if (q_best >= q_star) {
        out.t = times[best];
        out.qfi = q_best;
    } else {
        out.t = t_star;
        out.qfi = q_star;
    }
    return out;
}

/// Q_M(T) = max_t Q_d(T; t) per temperature, plus the grid optimum.
inline ScanTable time_optimized_qfi(const ProbeParams& p, double phi, const std::vector<double>& temperatures,
                                    const ExperimentOptions& opts = {}) {
    detail::require_phi(phi);
    detail::require_temperatures(temperatures);
    const auto cells =
        parallel_map(temperatures.size(), opts.workers, [&](std::size_t i) { return time_peak(p, phi, temperatures[i], opts); });
    ScanTable table;
    table.kind = "time-opt";
    table.columns = {"T", "Q_M", "t_star", "Q_e", "equilibrated"};
    std::vector<double> peaks;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].ok()) {
            const TimePeak& tp = *cells[i].value;
            table.add_row({temperatures[i], tp.qfi, tp.t, tp.equilibrium_qfi, tp.equilibrated ? 1.0 : 0.0});
            peaks.push_back(tp.qfi);
        } else {
            table.add_row({temperatures[i], kNaN, kNaN, kNaN, kNaN}, cells[i].error);
            peaks.push_back(kNaN);
        }
    }
    if (const auto best = detail::argmax(peaks); best < peaks.size()) {
        table.summary = {{"T_opt", temperatures[best]},
                         {"t_opt", table.rows[best][2]},
                         {"peak", peaks[best]},
                         {"equilibrated", table.rows[best][4]}};
    }
    return table;
}

/// Shortest t with |Q_d(T; t) - Q_e(T)| below the criterion: horizon doubling,
/// bisection on the first crossing, then re-checks at 1.5x and 2x the
/// candidate to reject transient crossings.
inline double equilibration_time(const ProbeParams& p, double phi, double temperature,
                                 const ExperimentOptions& opts = {}) {
    detail::require_phi(phi);
    const double q_e = equilibrium_qfi(p, temperature);
    auto converged = [&](const Trajectory& tr) {
        return std::abs(detail::qd_at(tr, opts.qfi) - q_e) < opts.te_criterion;
    };

    // an absolute 1e-12 criterion on Q_d needs the state well below the
    // default tolerances, otherwise t_e drifts by about a percent
    IntegratorOptions integ = opts.integrator;
    integ.rel_tol = std::min(integ.rel_tol, 1e-12);
    integ.abs_tol = std::min(integ.abs_tol, 1e-15);

    const LadderGenerator gen(p, temperature);
    Trajectory lo_traj(p, temperature, ghz_like_state(p, phi), integ, true);
    double step = 1.0 / gen.spectral_bound();

    for (;;) {
        // doubling from the current lower bracket
        Trajectory hi_traj = lo_traj;
        double hi = lo_traj.time() + step;
        for (;;) {
            if (hi > opts.max_horizon) {
                throw Error(ErrorKind::DidNotEquilibrate,
                            "criterion not met before t=" + std::to_string(opts.max_horizon));
            }
            hi_traj.advance_to(hi);
            if (converged(hi_traj)) break;
            lo_traj = hi_traj;
            hi *= 2.0;
        }

        // bisection: lo_traj violates, hi satisfies
        while (hi - lo_traj.time() > opts.te_rel_tol * hi) {
            const double mid = 0.5 * (lo_traj.time() + hi);
            Trajectory probe = lo_traj;
            probe.advance_to(mid);
            if (converged(probe)) {
                hi = mid;
                hi_traj = std::move(probe);
            } else {
                lo_traj = std::move(probe);
            }
        }

        Trajectory check = hi_traj;
        check.advance_to(1.5 * hi);
        const bool ok_mid = converged(check);
        if (ok_mid) {
            check.advance_to(2.0 * hi);
            if (converged(check)) return hi;
        }
        // transient crossing: resume the search from the violating point
        lo_traj = std::move(check);
        step = lo_traj.time();
    }
}

/// Global optimum of Q_d over (T, t).
struct OptimalPoint {
    double t_opt = 0.0;
    double temperature_opt = 0.0;
    double qfi = 0.0;
    double equilibrium_qfi = 0.0;
    /// True when the optimum is the equilibrium plateau; t_opt is then the
    /// equilibration boundary of the coarse time grid.
    bool equilibrated = false;
};

/// time_optimized_qfi over the grid, then golden-section refinement in T
/// around the best grid temperature (each evaluation refines t as well).
inline OptimalPoint optimal_measurement_time(const ProbeParams& p, double phi, const std::vector<double>& temperatures,
                                             const ExperimentOptions& opts = {}) {
    const ScanTable table = time_optimized_qfi(p, phi, temperatures, opts);
    std::vector<double> peaks;
    for (const auto& row : table.rows) peaks.push_back(row[1]);
    const std::size_t i = detail::argmax(peaks);
    if (i >= peaks.size()) {
        throw Error(ErrorKind::InvalidArgument, "every temperature in the scan failed");
    }
    auto to_point = [](double temp, const TimePeak& tp) {
        return OptimalPoint{tp.t, temp, tp.qfi, tp.equilibrium_qfi, tp.equilibrated};
    };
    OptimalPoint best = to_point(temperatures[i], TimePeak{table.rows[i][2], table.rows[i][1], table.rows[i][3],
                                                          table.rows[i][4] != 0.0});
    const double lo = temperatures[i == 0 ? 0 : i - 1];
    const double hi = temperatures[std::min(i + 1, peaks.size() - 1)];
    if (lo == hi) return best;

    auto eval = [&](double temp) {
        const TimePeak tp = time_peak(p, phi, temp, opts);
        const OptimalPoint cand = to_point(temp, tp);
        if (cand.qfi > best.qfi) best = cand;
        return tp.qfi;
    };
    detail::golden_max(eval, lo, hi, opts.temperature_rel_tol);
    return best;
}

struct PhiOptimum {
    double phi = 0.0;
    OptimalPoint point;
    ScanTable table;
};

/// argmax over phi of the optimal QFI: grid search, then golden section on
/// the bracket around the best grid angle.
inline PhiOptimum optimize_phi(const ProbeParams& p, const std::vector<double>& temperatures,
                               const std::vector<double>& phi_grid, const ExperimentOptions& opts = {}) {
    if (phi_grid.empty()) {
        throw Error(ErrorKind::InvalidArgument, "empty phi grid");
    }
    for (double phi : phi_grid) detail::require_phi(phi);
    if (std::adjacent_find(phi_grid.begin(), phi_grid.end(), std::greater_equal<>()) != phi_grid.end()) {
        throw Error(ErrorKind::InvalidArgument, "phi grid must be strictly increasing");
    }

    // The per-phi optimizations run in parallel; the inner scans stay serial.
    ExperimentOptions inner = opts;
    inner.workers = 1;
    const auto cells = parallel_map(phi_grid.size(), opts.workers, [&](std::size_t i) {
        return optimal_measurement_time(p, phi_grid[i], temperatures, inner);
    });

    PhiOptimum out;
    out.table.kind = "phi-opt";
    out.table.columns = {"phi", "Q_opt", "T_opt", "t_opt"};
    std::vector<double> peaks;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].ok()) {
            const OptimalPoint& op = *cells[i].value;
            out.table.add_row({phi_grid[i], op.qfi, op.temperature_opt, op.t_opt});
            peaks.push_back(op.qfi);
        } else {
            out.table.add_row({phi_grid[i], kNaN, kNaN, kNaN}, cells[i].error);
            peaks.push_back(kNaN);
        }
    }
    const std::size_t i = detail::argmax(peaks);
    if (i >= peaks.size()) {
        throw Error(ErrorKind::InvalidArgument, "every phi in the grid failed");
    }
    out.phi = phi_grid[i];
    out.point = *cells[i].value;
    const double lo = phi_grid[i == 0 ? 0 : i - 1];
    const double hi = phi_grid[std::min(i + 1, peaks.size() - 1)];
    if (lo < hi) {
        auto eval = [&](double phi) {
            const OptimalPoint op = optimal_measurement_time(p, phi, temperatures, inner);
            if (op.qfi > out.point.qfi) {
                out.point = op;
                out.phi = phi;
            }
            return op.qfi;
        };
        // absolute tolerance: golden_max works with relative widths
        detail::golden_max(eval, lo, hi, opts.phi_tol / std::max(hi, 1e-12));
    }
    out.table.summary = {{"phi_opt", out.phi}, {"Q_opt", out.point.qfi}, {"T_opt", out.point.temperature_opt},
                         {"t_opt", out.point.t_opt}};
    return out;
}

struct ScalingFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double residual = 0.0;  // RMS residual in log space
};

/// Least-squares line through (log x, log y): y ~ prefactor * x^exponent.
inline ScalingFit scaling_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw Error(ErrorKind::DegenerateFit, "need at least 3 (x, y) pairs");
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw Error(ErrorKind::DegenerateFit, "log-log fit needs positive data");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0.0) {
        throw Error(ErrorKind::DegenerateFit, "all x values coincide");
    }
    ScalingFit fit;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.prefactor = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = ly[i] - (intercept + fit.exponent * lx[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

/// Fit over two named columns of a table, skipping failed rows.
inline ScalingFit scaling_fit(const ScanTable& table, const std::string& x_column, const std::string& y_column) {
    const std::size_t cx = table.column(x_column);
    const std::size_t cy = table.column(y_column);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.status[i] != "ok") continue;
        x.push_back(table.rows[i][cx]);
        y.push_back(table.rows[i][cy]);
    }
    return scaling_fit(x, y);
}

} // namespace ringtherm
