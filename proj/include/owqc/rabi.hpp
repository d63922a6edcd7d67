// Copyright 2026 The owqc Authors
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
/**
 * @file
 * Two coupled quantum Rabi systems driven through a shared flux: spectra,
 * the effective two-level-per-site model and its interaction-picture
 * propagator, compared with the exchange Hamiltonian that yields U^Bell.
 *
 * QRS basis states are ordered by energy (|0> = ground). Two-site kets put
 * site 1 in the most significant bit.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gates.hpp"
#include "linalg.hpp"

namespace owqc {

struct RabiSiteParams {
    double omega_q = 1.0;
    double omega_r = 1.0;
    double g = 0.3;
    int fock_cutoff = 30;

    void validate() const {
        if (!(omega_q > 0.0) || !(omega_r > 0.0)) throw ValidationError("QRS: frequencies must be positive");
        if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("QRS: coupling must be >= 0");
        if (fock_cutoff < 10) throw ValidationError("QRS: fock_cutoff must be >= 10");
    }
};

struct QrsSpectrum {
    Eigen::VectorXd eigenvalues;   ///< lowest levels, ascending
    std::array<double, 2> z{};     ///< <j|(a+a^dag)^2|j>, j = 0, 1
    double chi_01 = 0.0;           ///< |<0|(a+a^dag)|1>|
    double convergence_change = 0; ///< max relative change under cutoff + 10

    double anharmonicity() const { return (eigenvalues(2) - eigenvalues(1)) - (eigenvalues(1) - eigenvalues(0)); }
};

inline constexpr int kReportedLevels = 6;
inline constexpr double kSpectrumTol = 1e-8;

namespace detail {

/// Spectrum at a fixed cutoff; basis index = qubit * (cutoff+1) + n with
/// sigma^z = diag(1, -1).
inline QrsSpectrum qrs_spectrum_at(const RabiSiteParams &p, int cutoff) {
    const int nf = cutoff + 1;
    const int dim = 2 * nf;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim); // a + a^dag on the cavity
    for (int s = 0; s < 2; ++s) {
        const double sz = s == 0 ? 1.0 : -1.0;
        for (int n = 0; n < nf; ++n) {
            h(s * nf + n, s * nf + n) = p.omega_q * sz / 2.0 + p.omega_r * n;
            if (n + 1 < nf) {
                const double amp = std::sqrt(static_cast<double>(n + 1));
                x(s * nf + n + 1, s * nf + n) = amp;
                x(s * nf + n, s * nf + n + 1) = amp;
            }
        }
    }
    // g sigma^x (a + a^dag): flips the qubit index
    for (int n = 0; n < nf; ++n) {
        for (int m = 0; m < nf; ++m) {
            const double v = x(n, m);
            if (v == 0.0) continue;
            h(n, nf + m) += p.g * v;
            h(nf + n, m) += p.g * v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw ConvergenceError("QRS: eigensolver failed");
    QrsSpectrum sp;
    const int levels = std::min(kReportedLevels, dim);
    sp.eigenvalues = es.eigenvalues().head(levels);
    const Eigen::VectorXd v0 = es.eigenvectors().col(0), v1 = es.eigenvectors().col(1);
    const Eigen::MatrixXd x2 = x * x;
    sp.z = {v0.dot(x2 * v0), v1.dot(x2 * v1)};
    sp.chi_01 = std::abs(v0.dot(x * v1));
    return sp;
}

inline double relative_change(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

} // namespace detail

/**
 * Diagonalises omega_q sigma^z/2 + omega_r a^dag a + g sigma^x (a + a^dag)
 * and checks that the reported quantities move by less than 1e-8
 * (relative) when the cutoff grows by 10.
 */
inline QrsSpectrum diagonalize_qrs(const RabiSiteParams &p) {
    p.validate();
    QrsSpectrum a = detail::qrs_spectrum_at(p, p.fock_cutoff);
    const QrsSpectrum b = detail::qrs_spectrum_at(p, p.fock_cutoff + 10);
    double change = 0.0;
    for (Eigen::Index i = 0; i < a.eigenvalues.size(); ++i) {
        change = std::max(change, detail::relative_change(a.eigenvalues(i), b.eigenvalues(i)));
    }
    change = std::max({change, detail::relative_change(a.z[0], b.z[0]), detail::relative_change(a.z[1], b.z[1]),
                       detail::relative_change(a.chi_01, b.chi_01)});
    a.convergence_change = change;
    if (change > kSpectrumTol) {
        std::ostringstream os;
        os << "QRS spectrum not converged at cutoff " << p.fock_cutoff << ": relative change " << change
           << " under cutoff+10 (g=" << p.g << ", omega_q=" << p.omega_q << ", omega_r=" << p.omega_r
           << "); raise fock_cutoff";
        throw ConvergenceError(os.str());
    }
    return a;
}

// --------------------------------------------------------------------------
// Effective two-site model
// --------------------------------------------------------------------------

struct TwoSiteEffective {
    std::array<std::array<double, 2>, 2> eta{}; ///< eta[site][level] = lambda + 2 P z
    std::array<std::array<double, 2>, 2> z{};
    std::array<double, 2> chi{};
    std::array<double, 2> P{};
    std::array<double, 2> Q{};
    double coupling_static = 0.0; ///< -2 chi1 chi2 sqrt(P1 P2)
    double coupling_drive = 0.0;  ///< -2 chi1 chi2 sqrt(Q1 Q2), multiplies the flux
    double Delta = 0.0;
    double delta = 0.0;
    bool near_degenerate = false; ///< Delta ~ 0 or |Delta| ~ |delta|
};

inline TwoSiteEffective build_two_site(const QrsSpectrum &s1, const QrsSpectrum &s2, std::array<double, 2> P,
                                       std::array<double, 2> Q) {
    for (double v : {P[0], P[1], Q[0], Q[1]}) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("two-site model: P and Q must be >= 0");
    }
    TwoSiteEffective e;
    const std::array<const QrsSpectrum *, 2> sp{&s1, &s2};
    for (int l = 0; l < 2; ++l) {
        e.z[l] = sp[l]->z;
        e.chi[l] = sp[l]->chi_01;
        for (int k = 0; k < 2; ++k) e.eta[l][k] = sp[l]->eigenvalues(k) + 2.0 * P[l] * sp[l]->z[k];
    }
    e.P = P;
    e.Q = Q;
    e.coupling_static = -2.0 * e.chi[0] * e.chi[1] * std::sqrt(P[0] * P[1]);
    e.coupling_drive = -2.0 * e.chi[0] * e.chi[1] * std::sqrt(Q[0] * Q[1]);
    const double g1 = e.eta[0][0] - e.eta[0][1];
    const double g2 = e.eta[1][0] - e.eta[1][1];
    e.Delta = g1 - g2;
    e.delta = g1 + g2;
    const double scale = std::max(std::abs(e.Delta), std::abs(e.delta));
    e.near_degenerate = std::abs(e.Delta) < 1e-9 * std::max(1.0, scale) ||
                        std::abs(std::abs(e.Delta) - std::abs(e.delta)) < 1e-6 * std::max(1.0, scale);
    return e;
}

/// Default working point: two ultrastrong sites detuned by 5% in omega_q.
struct RabiWorkingPoint {
    RabiSiteParams site1{1.0, 1.0, 0.3, 30};
    RabiSiteParams site2{1.05, 1.0, 0.3, 30};
    std::array<double, 2> P{1e-5, 1e-5};
    std::array<double, 2> Q{1e-3, 1e-3};
    double J1 = 1.25;
    double J2 = 1.0;
};

inline TwoSiteEffective build_two_site(const RabiWorkingPoint &wp) {
    return build_two_site(diagonalize_qrs(wp.site1), diagonalize_qrs(wp.site2), wp.P, wp.Q);
}

/// gamma_+- = xi (J1 +- s J2) / (chi1 chi2 sqrt(Q1 Q2)), s = +1 for the
/// standard J2 sign. Zero when J1 = J2 = 0.
inline std::array<double, 2> flux_gammas(const TwoSiteEffective &e, double J1, double J2, double xi,
                                         const ConventionChoice &c) {
    if (J1 == 0.0 && J2 == 0.0) return {0.0, 0.0};
    const double denom = e.chi[0] * e.chi[1] * std::sqrt(e.Q[0] * e.Q[1]);
    if (!(denom > 0.0)) throw ArgumentError("driven model: the flux drive needs chi and Q > 0 on both sites");
    const double s = c.j2 == J2Sign::standard ? 1.0 : -1.0;
    return {xi * (J1 + s * J2) / denom, xi * (J1 - s * J2) / denom};
}

// --------------------------------------------------------------------------
// Driven propagation
// --------------------------------------------------------------------------

struct DrivenPropagator {
    CMatrix qrs_basis;  ///< over |00>,|01>,|10>,|11> of the QRS levels
    CMatrix logical;    ///< relabelled to the exchange-Hamiltonian convention
    long steps = 0;
    double step_change = 0.0; ///< max |U_S - U_2S|
    double tau = 0.0;
    double rwa_ratio = 0.0;   ///< xi / min(|Delta|, |delta|)
};

inline constexpr int kDefaultStepsPerPeriod = 32;
inline constexpr double kStepConvergenceTol = 1e-6;

namespace detail {

using Block = Eigen::Matrix2cd;

/// exp(-i K) for Hermitian 2x2 K.
inline Block expm_block(const Block &k) {
    const cplx a0 = 0.5 * (k(0, 0) + k(1, 1));
    const double az = 0.5 * std::real(k(0, 0) - k(1, 1));
    const cplx off = k(1, 0); // ax + i ay
    const double r = std::sqrt(az * az + std::norm(off));
    Block out;
    const double c = std::cos(r);
    const cplx s = r > 0.0 ? cplx{0.0, -std::sin(r) / r} : cplx{0.0, -1.0}; // sin(r)/r -> 1
    // -i sin(r)/r * (a . sigma) with a . sigma = [[az, conj(off)], [off, -az]]
    out(0, 0) = c + s * az;
    out(1, 1) = c - s * az;
    out(0, 1) = s * std::conj(off);
    out(1, 0) = s * off;
    return std::exp(-kI * std::real(a0)) * out;
}

struct DriveModel {
    const TwoSiteEffective *e;
    double gp, gm;

    /// Even block over (|00>, |11>) and odd block over (|01>, |10>).
    void blocks(double t, Block &even, Block &odd) const {
        const double phi = gp * std::sin(e->Delta * t) - gm * std::sin(e->delta * t);
        const double c = e->coupling_static + e->coupling_drive * phi;
        const cplx w_odd = c * std::polar(1.0, -e->Delta * t);  // <10|H|01>
        const cplx w_even = c * std::polar(1.0, -e->delta * t); // <11|H|00>
        auto diag = [&](int b1, int b2) { return 2.0 * phi * (e->Q[0] * e->z[0][b1] + e->Q[1] * e->z[1][b2]); };
        even << diag(0, 0), std::conj(w_even), w_even, diag(1, 1);
        odd << diag(0, 1), std::conj(w_odd), w_odd, diag(1, 0);
    }
};

/// Fourth-order Magnus with Gauss-Legendre nodes.
inline CMatrix propagate(const DriveModel &m, double tau, long n_steps) {
    const double h = tau / static_cast<double>(n_steps);
    const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double kc = std::sqrt(3.0) / 12.0 * h * h;
    Block ue = Block::Identity(), uo = Block::Identity();
    Block e1, o1, e2, o2;
    for (long i = 0; i < n_steps; ++i) {
        const double t = h * static_cast<double>(i);
        m.blocks(t + c1 * h, e1, o1);
        m.blocks(t + c2 * h, e2, o2);
        const Block ke = 0.5 * h * (e1 + e2) - kI * kc * (e2 * e1 - e1 * e2);
        const Block ko = 0.5 * h * (o1 + o2) - kI * kc * (o2 * o1 - o1 * o2);
        ue = expm_block(ke) * ue;
        uo = expm_block(ko) * uo;
    }
    CMatrix u = CMatrix::Zero(4, 4);
    u(0, 0) = ue(0, 0);
    u(0, 3) = ue(0, 1);
    u(3, 0) = ue(1, 0);
    u(3, 3) = ue(1, 1);
    u(1, 1) = uo(0, 0);
    u(1, 2) = uo(0, 1);
    u(2, 1) = uo(1, 0);
    u(2, 2) = uo(1, 1);
    return u;
}

} // namespace detail

/**
 * Relabels a QRS-basis two-site operator into the logical basis of the
 * exchange Hamiltonian under convention `c`: levels are inverted (logical
 * |0> = excited) when sigma^y has the standard sign, and sites are swapped
 * for the kj ordering.
 */
inline CMatrix qrs_to_logical(const CMatrix &u, const ConventionChoice &c) {
    auto phys = [&](int logical) {
        int b0 = (logical >> 1) & 1, b1 = logical & 1;
        if (c.sigma_y == SigmaYSign::standard) {
            b0 ^= 1;
            b1 ^= 1;
        }
        if (c.order == QubitOrder::kj) std::swap(b0, b1);
        return (b0 << 1) | b1;
    };
    CMatrix v(4, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) v(a, b) = u(phys(a), phys(b));
    }
    return v;
}

/**
 * Integrates the interaction-picture Hamiltonian with flux
 * gamma_+ sin(Delta t) - gamma_- sin(delta t) over tau = pi / xi. The step
 * is 1/steps_per_period of the fastest period (frequency 2 max(|Delta|,
 * |delta|)); the run is repeated with half the step and must agree to 1e-6.
 */
inline DrivenPropagator integrate_driven(const TwoSiteEffective &e, double J1, double J2, double xi,
                                         int steps_per_period = kDefaultStepsPerPeriod,
                                         const ConventionChoice &c = selected_convention()) {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw ArgumentError("integrate_driven: xi must be positive");
    if (steps_per_period < 4) throw ArgumentError("integrate_driven: steps_per_period must be >= 4");
    if (e.near_degenerate && (J1 != 0.0 || J2 != 0.0)) {
        throw ArgumentError("integrate_driven: Delta and delta are not well separated; detune the sites");
    }
    const auto g = flux_gammas(e, J1, J2, xi, c);
    const detail::DriveModel model{&e, g[0], g[1]};
    DrivenPropagator out;
    out.tau = std::numbers::pi / xi;
    const double w_fast = 2.0 * std::max(std::abs(e.Delta), std::abs(e.delta));
    const double slow = std::min(std::abs(e.Delta), std::abs(e.delta));
    out.rwa_ratio = slow > 0.0 ? xi / slow : INFINITY;
    long n = 1;
    if (w_fast > 0.0) {
        const double period = 2.0 * std::numbers::pi / w_fast;
        n = std::max<long>(1, static_cast<long>(std::ceil(out.tau / period * steps_per_period)));
    }
    const CMatrix coarse = detail::propagate(model, out.tau, n);
    const CMatrix fine = detail::propagate(model, out.tau, 2 * n);
    out.steps = 2 * n;
    out.step_change = (coarse - fine).cwiseAbs().maxCoeff();
    if (out.step_change > kStepConvergenceTol) {
        std::ostringstream os;
        os << "integrate_driven: propagator changed by " << out.step_change << " on step halving (" << n
           << " -> " << 2 * n << " steps); raise steps_per_period";
        throw IntegrationError(os.str());
    }
    out.qrs_basis = fine;
    out.logical = qrs_to_logical(fine, c);
    return out;
}

/// exp(-i xi_tau (J1 s^x s^y - J2 s^y s^x)) under the selected convention;
/// the same code path as u_bell_from_xy.
inline CMatrix rwa_reference(double J1, double J2, double xi_tau, const ConventionChoice &c = selected_convention()) {
    return u_bell_from_xy({J1, J2, xi_tau}, c).matrix();
}

// --------------------------------------------------------------------------
// RWA validity sweep
// --------------------------------------------------------------------------

struct SweepRow {
    double xi = 0.0;
    double xi_over_Delta = 0.0;
    double Delta = 0.0;
    double delta = 0.0;
    double fidelity = 0.0;
    double unitarity_deviation = 0.0;
    double step_change = 0.0;
    long steps = 0;
    double wall_time = 0.0; ///< seconds
};

struct SweepReport {
    double J1 = 1.25;
    double J2 = 1.0;
    std::vector<SweepRow> rows;
    bool monotone = true;              ///< 1 - F shrinks with xi (ripple < 1e-5 allowed)
    bool largest_degraded = false;     ///< 1 - F at max xi > 10x that at min xi
    std::vector<std::string> anomalies;
};

inline constexpr double kSweepRipple = 1e-5;

inline SweepReport rwa_validity_sweep(const TwoSiteEffective &e, const std::vector<double> &xi_values, double J1 = 1.25,
                                      double J2 = 1.0, int steps_per_period = kDefaultStepsPerPeriod) {
    if (xi_values.empty()) throw ArgumentError("rwa_validity_sweep: no xi values");
    for (std::size_t i = 0; i < xi_values.size(); ++i) {
        if (!(xi_values[i] > 0.0)) throw ArgumentError("rwa_validity_sweep: xi values must be positive");
        if (i > 0 && !(xi_values[i] > xi_values[i - 1])) throw ArgumentError("rwa_validity_sweep: xi values must ascend");
    }
    SweepReport rep;
    rep.J1 = J1;
    rep.J2 = J2;
    const CMatrix target = rwa_reference(J1, J2, std::numbers::pi);
    for (double xi : xi_values) {
        const auto t0 = std::chrono::steady_clock::now();
        const DrivenPropagator u = integrate_driven(e, J1, J2, xi, steps_per_period);
        const auto t1 = std::chrono::steady_clock::now();
        SweepRow r;
        r.xi = xi;
        r.Delta = e.Delta;
        r.delta = e.delta;
        r.xi_over_Delta = e.Delta != 0.0 ? xi / std::abs(e.Delta) : INFINITY;
        r.fidelity = gate_fidelity(u.logical, target);
        r.unitarity_deviation = unitarity_deviation(u.qrs_basis);
        r.step_change = u.step_change;
        r.steps = u.steps;
        r.wall_time = std::chrono::duration<double>(t1 - t0).count();
        rep.rows.push_back(r);
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const double lo = 1.0 - rep.rows[i - 1].fidelity, hi = 1.0 - rep.rows[i].fidelity;
        if (hi < lo - kSweepRipple) {
            rep.monotone = false;
            std::ostringstream os;
            os << "infidelity drops from " << lo << " to " << hi << " as xi grows to " << rep.rows[i].xi;
            rep.anomalies.push_back(os.str());
        }
    }
    const double small = 1.0 - rep.rows.front().fidelity, large = 1.0 - rep.rows.back().fidelity;
    rep.largest_degraded = large > 10.0 * small;
    return rep;
}

inline nlohmann::json to_json(const QrsSpectrum &s) {
    return {{"eigenvalues", std::vector<double>(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size())},
            {"z", s.z},
            {"chi_01", s.chi_01},
            {"anharmonicity", s.anharmonicity()},
            {"convergence_change", s.convergence_change}};
}

inline nlohmann::json to_json(const TwoSiteEffective &e) {
    return {{"eta", e.eta},
            {"chi", e.chi},
            {"P", e.P},
            {"Q", e.Q},
            {"coupling_static", e.coupling_static},
            {"coupling_drive", e.coupling_drive},
            {"Delta", e.Delta},
            {"delta", e.delta},
            {"near_degenerate", e.near_degenerate}};
}

inline nlohmann::json to_json(const SweepReport &r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &x : r.rows) {
        rows.push_back({{"xi", x.xi},
                        {"xi_over_Delta", x.xi_over_Delta},
                        {"fidelity", x.fidelity},
                        {"infidelity", 1.0 - x.fidelity},
                        {"unitarity_deviation", x.unitarity_deviation},
                        {"step_change", x.step_change},
                        {"steps", x.steps}});
    }
    return {{"J1", r.J1}, {"J2", r.J2}, {"rows", rows}, {"monotone", r.monotone}, {"largest_degraded", r.largest_degraded}, {"anomalies", r.anomalies}};
}

/// xi, Delta, delta, fidelity, wall_time. The wall_time column is left
/// empty unless `with_timing`, so default output is reproducible.
inline std::string sweep_to_csv(const SweepReport &r, bool with_timing) {
    std::ostringstream os;
    os.precision(12);
    os << "xi,Delta,delta,fidelity,wall_time\n";
    for (const auto &x : r.rows) {
        os << x.xi << ',' << x.Delta << ',' << x.delta << ',' << x.fidelity << ',';
        if (with_timing) os << x.wall_time;
        os << '\n';
    }
    return os.str();
}

} // namespace owqc
