#include "sicprob/sic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <string>

namespace sicprob {

namespace {

// Unit-modulus phase tables for one dimension: omega^k and tau^m with
// tau = -exp(i pi/d), which has order 2d.
struct PhaseTables {
    int d;
    std::vector<std::complex<double>> omega;  // omega^k, k in [0, d)
    std::vector<std::complex<double>> tau;    // tau^m,   m in [0, 2d)

    explicit PhaseTables(int d_) : d(d_), omega(d_), tau(2 * d_) {
        for (int k = 0; k < d; ++k) omega[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / d);
        for (int m = 0; m < 2 * d; ++m) {
            std::complex<double> t = std::polar(1.0, std::numbers::pi * m / d);
            tau[m] = (m % 2 == 0) ? t : -t;
        }
    }

    std::complex<double> tau_pq(int p, int q) const { return tau[(p * q) % (2 * d)]; }
};

// out_k = tau^{pq} omega^{q(k-p)} psi_{(k-p) mod d}; p, q already in [0, d).
void apply_displacement_tables(const PhaseTables& t, const ComplexVector& psi, int p, int q,
                               ComplexVector& out) {
    const int d = t.d;
    const std::complex<double> phase = t.tau_pq(p, q);
    int e = (d - (q * p) % d) % d;  // q*(k-p) mod d at k = 0
    for (int k = 0; k < d; ++k) {
        int src = k - p;
        if (src < 0) src += d;
        out(k) = phase * t.omega[e] * psi(src);
        e += q;
        if (e >= d) e -= d;
    }
}

// G(psi) for unit psi; `work` is scratch of size d.
double centered_value(const PhaseTables& t, const ComplexVector& psi, ComplexVector& work) {
    const int d = t.d;
    const double target = 1.0 / (d + 1.0);
    double g = 0.0;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            if (p == 0 && q == 0) continue;
            apply_displacement_tables(t, psi, p, q, work);
            const double dev = std::norm(psi.dot(work)) - target;
            g += dev * dev;
        }
    return g;
}

// G(psi) and its Wirtinger gradient d G / d conj(psi). Because the label grid
// is closed under inversion and |c_{-g}| = |c_g|, the two chain-rule terms
// coincide and the gradient collapses to sum_g 4 (|c_g|^2 - t) conj(c_g) D_g psi.
double centered_value_and_grad(const PhaseTables& t, const ComplexVector& psi, ComplexVector& grad,
                               ComplexVector& work) {
    const int d = t.d;
    const double target = 1.0 / (d + 1.0);
    double g = 0.0;
    grad.setZero();
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            if (p == 0 && q == 0) continue;
            apply_displacement_tables(t, psi, p, q, work);
            const std::complex<double> c = psi.dot(work);
            const double dev = std::norm(c) - target;
            g += dev * dev;
            grad += (4.0 * dev * std::conj(c)) * work;
        }
    return g;
}

// Residual vector f_g = |<psi|D_g psi>|^2 / s^2 - 1/(d+1) over g != 0 and its
// Jacobian in packed real coordinates (Re psi_0, Im psi_0, ...). The potential
// is scale-invariant, so the coordinates are unconstrained.
void residual_system(const PhaseTables& t, const ComplexVector& psi, Eigen::VectorXd& f,
                     Eigen::MatrixXd& jac) {
    const int d = t.d;
    const double target = 1.0 / (d + 1.0);
    const double s = psi.squaredNorm();
    ComplexVector v(d), w(d);
    int row = 0;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            if (p == 0 && q == 0) continue;
            apply_displacement_tables(t, psi, p, q, v);
            const std::complex<double> phase = t.tau_pq(p, q);
            for (int k = 0; k < d; ++k)
                w(k) = std::conj(phase * t.omega[(q * k) % d]) * psi((k + p) % d);
            const std::complex<double> c = psi.dot(v);
            const double x = std::norm(c) / (s * s);
            f(row) = x - target;
            for (int k = 0; k < d; ++k) {
                const std::complex<double> dk =
                    (std::conj(c) * v(k) + c * w(k)) / (s * s) - (2.0 * x / s) * psi(k);
                jac(row, 2 * k) = 2.0 * dk.real();
                jac(row, 2 * k + 1) = 2.0 * dk.imag();
            }
            ++row;
        }
}

// Levenberg-Marquardt on the overlap residuals. First-order steps crawl once
// the iterate enters a degenerate valley (d = 3 has a whole curve of minima),
// while damped Gauss-Newton contracts it superlinearly. Returns evaluations
// used; psi stays unit-norm and g tracks its centered potential.
int lm_polish(const PhaseTables& t, ComplexVector& psi, double& g, int budget, double g_stop,
              ComplexVector& work) {
    const int d = t.d;
    const int m = d * d - 1;
    Eigen::VectorXd f(m);
    Eigen::MatrixXd jac(m, 2 * d);
    Eigen::MatrixXd a(2 * d, 2 * d);
    Eigen::VectorXd rhs(2 * d), delta(2 * d);
    double lambda = -1.0;
    bool refresh = true;
    int used = 0;
    while (used < budget && g > g_stop) {
        if (refresh) {
            residual_system(t, psi, f, jac);
            a.noalias() = jac.transpose() * jac;
            rhs.noalias() = -(jac.transpose() * f);
            if (lambda < 0.0) lambda = 1e-3 * std::max(a.diagonal().maxCoeff(), 1e-30);
            refresh = false;
        }
        Eigen::MatrixXd damped = a;
        damped.diagonal().array() += lambda;
        delta = damped.ldlt().solve(rhs);
        ++used;
        if (!delta.allFinite() || delta.norm() < 1e-17) break;
        ComplexVector trial(d);
        for (int k = 0; k < d; ++k)
            trial(k) = psi(k) + std::complex<double>(delta(2 * k), delta(2 * k + 1));
        trial.normalize();
        const double g_trial = centered_value(t, trial, work);
        if (g_trial < g) {
            psi = trial;
            g = g_trial;
            lambda = std::max(lambda / 3.0, 1e-30);
            refresh = true;
        } else {
            lambda *= 10.0;
            if (lambda > 1e30) break;
        }
    }
    return used;
}

struct RestartResult {
    ComplexVector psi;
    RestartDiagnostics diag;
};

RestartResult run_restart(const PhaseTables& tables, int d, uint64_t seed, int restart,
                          int max_iter, double g_stop) {
    RestartResult result;
    result.diag.restart = restart;
    result.diag.stream_seed = splitmix64(splitmix64(seed) ^ splitmix64(restart));

    Rng rng = make_stream_rng(seed, static_cast<uint64_t>(restart));
    ComplexVector psi = random_pure_state(d, rng).amplitudes();

    ComplexVector grad(d), work(d), tangent(d), psi_prev(d), tangent_prev(d);
    double g = centered_value_and_grad(tables, psi, grad, work);
    std::deque<double> history{g};
    bool have_prev = false;
    double alpha = 0.0;
    int it = 0;

    // Stagnation watch: if a 500-iteration window fails to cut the best value
    // by at least 30%, first-order progress has collapsed and the polish stage
    // below is the better use of the budget.
    double window_best = std::numeric_limits<double>::infinity();
    double prev_window_best = std::numeric_limits<double>::infinity();
    int since_checkpoint = 0;
    bool stagnant = false;

    for (; it < max_iter && g > g_stop && !stagnant; ++it) {
        tangent = grad - psi * psi.dot(grad);
        const double gn2 = tangent.squaredNorm();
        if (gn2 < 1e-64) break;  // critical point to machine precision

        if (have_prev) {
            // Barzilai-Borwein step from the previous iterate, under the real
            // inner product Re<.,.>; fall back to a safe scale when s.y <= 0.
            const ComplexVector s = psi - psi_prev;
            const ComplexVector y = tangent - tangent_prev;
            const double sy = s.dot(y).real();
            alpha = (sy > 1e-300) ? s.squaredNorm() / sy : 2.0 * alpha;
        } else {
            alpha = 0.5 / (std::sqrt(gn2) + 1e-12);
        }
        alpha = std::clamp(alpha, 1e-16, 1e6);

        // Non-monotone Armijo: accept against the worst of the last few
        // values, the usual pairing that lets BB steps breathe.
        const double reference = *std::max_element(history.begin(), history.end());
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            ComplexVector trial = psi - alpha * tangent;
            trial.normalize();
            const double g_trial = centered_value(tables, trial, work);
            if (g_trial <= reference - 1e-4 * alpha * gn2) {
                psi_prev = psi;
                tangent_prev = tangent;
                have_prev = true;
                psi = trial;
                accepted = true;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-18) break;
        }
        if (!accepted) break;  // line search stalled; this basin is done

        g = centered_value_and_grad(tables, psi, grad, work);
        history.push_back(g);
        if (history.size() > 10) history.pop_front();

        window_best = std::min(window_best, g);
        if (++since_checkpoint >= 500) {
            if (window_best > 0.7 * prev_window_best) stagnant = true;
            prev_window_best = window_best;
            window_best = std::numeric_limits<double>::infinity();
            since_checkpoint = 0;
        }
    }

    if (g > g_stop && it < max_iter)
        it += lm_polish(tables, psi, g, std::min(300, max_iter - it), g_stop, work);

    result.psi = std::move(psi);
    result.diag.iterations = it;
    result.diag.final_residual = g;
    result.diag.final_potential = frame_potential(result.psi, d);
    result.diag.converged = g <= g_stop;
    return result;
}

}  // namespace

Fiducial::Fiducial(int d, ComplexVector vector, Provenance provenance)
    : d_(d), vector_(std::move(vector)), provenance_(std::move(provenance)) {
    if (d_ < 2) throw std::domain_error("fiducial: d >= 2 required");
    if (vector_.size() != d_)
        throw shape_error("fiducial: vector has " + std::to_string(vector_.size()) +
                          " entries, expected " + std::to_string(d_));
    if (!vector_.allFinite()) throw validation_error("fiducial: non-finite amplitude");
    if (std::abs(vector_.norm() - 1.0) > kNormTol)
        throw validation_error("fiducial: norm deviates from 1 beyond 1e-12");
}

DensityOperator Fiducial::projector() const {
    return DensityOperator(vector_ * vector_.adjoint());
}

SicSet::SicSet(int d, std::vector<ComplexMatrix> projectors, Provenance provenance)
    : d_(d), projectors_(std::move(projectors)), provenance_(std::move(provenance)) {
    if (d_ < 2) throw std::domain_error("sic set: d >= 2 required");
    const size_t expected = static_cast<size_t>(d_) * d_;
    if (projectors_.size() != expected)
        throw shape_error("sic set: " + std::to_string(projectors_.size()) +
                          " projectors, expected d^2 = " + std::to_string(expected));
    constexpr double tol = 1e-10;
    ComplexMatrix sum = ComplexMatrix::Zero(d_, d_);
    for (size_t i = 0; i < projectors_.size(); ++i) {
        const ComplexMatrix& pi = projectors_[i];
        if (pi.rows() != d_ || pi.cols() != d_)
            throw shape_error("sic set: projector " + std::to_string(i) + " has wrong shape");
        if (!pi.allFinite())
            throw validation_error("sic set: projector " + std::to_string(i) + " non-finite");
        if (!is_hermitian(pi, tol))
            throw validation_error("sic set: projector " + std::to_string(i) + " not Hermitian");
        if (std::abs(pi.trace().real() - 1.0) > tol || std::abs(pi.trace().imag()) > tol)
            throw validation_error("sic set: projector " + std::to_string(i) + " trace != 1");
        if (max_abs(pi * pi - pi) > tol)
            throw validation_error("sic set: projector " + std::to_string(i) + " not idempotent");
        sum += pi;
    }
    sum /= static_cast<double>(d_);
    sum -= ComplexMatrix::Identity(d_, d_);
    if (max_abs(sum) > tol)
        throw validation_error("sic set: effects do not resolve the identity within 1e-10");
}

Povm SicSet::povm() const {
    std::vector<ComplexMatrix> effects;
    effects.reserve(projectors_.size());
    for (const auto& pi : projectors_) effects.push_back(pi / static_cast<double>(d_));
    return Povm(d_, std::move(effects));
}

UnitaryOperator displacement(int d, int p, int q) {
    if (d < 2) throw std::domain_error("displacement: d >= 2 required");
    p = ((p % d) + d) % d;
    q = ((q % d) + d) % d;
    const PhaseTables t(d);
    const std::complex<double> phase = t.tau_pq(p, q);
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) m((k + p) % d, k) = phase * t.omega[(q * k) % d];
    return UnitaryOperator(std::move(m));
}

ComplexVector apply_displacement(const ComplexVector& psi, int d, int p, int q) {
    if (d < 2) throw std::domain_error("displacement: d >= 2 required");
    if (psi.size() != d) throw shape_error("apply_displacement: vector size != d");
    p = ((p % d) + d) % d;
    q = ((q % d) + d) % d;
    const PhaseTables t(d);
    ComplexVector out(d);
    apply_displacement_tables(t, psi, p, q, out);
    return out;
}

std::vector<ComplexVector> orbit_vectors(const Fiducial& fiducial) {
    const int d = fiducial.d();
    const PhaseTables t(d);
    std::vector<ComplexVector> states;
    states.reserve(static_cast<size_t>(d) * d);
    ComplexVector out(d);
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            apply_displacement_tables(t, fiducial.vector(), p, q, out);
            states.push_back(out);
        }
    return states;
}

SicSet orbit(const Fiducial& fiducial) {
    std::vector<ComplexVector> states = orbit_vectors(fiducial);
    std::vector<ComplexMatrix> projectors;
    projectors.reserve(states.size());
    for (const auto& v : states) projectors.push_back(v * v.adjoint());
    return SicSet(fiducial.d(), std::move(projectors), fiducial.provenance());
}

double frame_potential(const ComplexVector& psi, int d) {
    if (d < 2) throw std::domain_error("frame_potential: d >= 2 required");
    if (psi.size() != d) throw shape_error("frame_potential: vector size != d");
    const double s = psi.squaredNorm();
    if (s <= 0.0 || !psi.allFinite())
        throw validation_error("frame_potential: vector not normalizable");
    const PhaseTables t(d);
    ComplexVector work(d);
    double f = 0.0;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            if (p == 0 && q == 0) continue;
            apply_displacement_tables(t, psi, p, q, work);
            const double x = std::norm(psi.dot(work)) / (s * s);
            f += x * x;
        }
    return f;
}

double frame_potential(const Fiducial& fiducial) {
    return frame_potential(fiducial.vector(), fiducial.d());
}

double centered_potential(const ComplexVector& psi, int d) {
    if (d < 2) throw std::domain_error("centered_potential: d >= 2 required");
    if (psi.size() != d) throw shape_error("centered_potential: vector size != d");
    const double n = psi.norm();
    if (n <= 0.0 || !psi.allFinite())
        throw validation_error("centered_potential: vector not normalizable");
    const PhaseTables t(d);
    ComplexVector unit = psi / n;
    ComplexVector work(d);
    return centered_value(t, unit, work);
}

RealVector frame_potential_gradient(const ComplexVector& v, int d) {
    if (d < 2) throw std::domain_error("frame_potential_gradient: d >= 2 required");
    if (v.size() != d) throw shape_error("frame_potential_gradient: vector size != d");
    const double s = v.squaredNorm();
    if (s <= 0.0 || !v.allFinite())
        throw validation_error("frame_potential_gradient: vector not normalizable");
    const PhaseTables t(d);
    ComplexVector work(d);
    ComplexVector wirtinger = ComplexVector::Zero(d);
    double f = 0.0;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            if (p == 0 && q == 0) continue;
            apply_displacement_tables(t, v, p, q, work);
            const std::complex<double> u = v.dot(work);
            const double x = std::norm(u) / (s * s);
            f += x * x;
            // Same inversion-symmetry collapse as in the search objective.
            wirtinger += (4.0 * x * std::conj(u) / (s * s)) * work;
        }
    wirtinger -= (4.0 * f / s) * v;
    RealVector packed(2 * d);
    for (int k = 0; k < d; ++k) {
        packed(2 * k) = 2.0 * wirtinger(k).real();
        packed(2 * k + 1) = 2.0 * wirtinger(k).imag();
    }
    return packed;
}

SearchOutcome search_fiducial(int d, uint64_t seed, const SearchOptions& options) {
    if (d < 2) throw std::domain_error("search_fiducial: d >= 2 required");
    if (options.restarts < 1) throw std::domain_error("search_fiducial: restarts >= 1 required");
    if (options.max_iter < 1) throw std::domain_error("search_fiducial: max_iter >= 1 required");
    if (!(options.tol > 0.0)) throw std::domain_error("search_fiducial: tol must be positive");

    // A centered residual of G guarantees every overlap deviation <= sqrt(G),
    // so stopping an order of magnitude below tol^2 certifies with margin.
    const double g_stop = std::max(0.01 * options.tol * options.tol, 1e-26);

    const PhaseTables tables(d);
    SearchReport report;
    report.d = d;
    report.seed = seed;

    ComplexVector best_psi;
    for (int r = 0; r < options.restarts; ++r) {
        RestartResult res = run_restart(tables, d, seed, r, options.max_iter, g_stop);
        report.restarts.push_back(res.diag);
        if (report.best_restart < 0 || res.diag.final_residual < report.best_residual) {
            report.best_restart = r;
            report.best_residual = res.diag.final_residual;
            report.best_potential = res.diag.final_potential;
            best_psi = std::move(res.psi);
        }
    }

    Provenance prov;
    prov.method = "frame-potential-search";
    prov.seed = seed;
    prov.restart = report.best_restart;
    prov.iterations = report.restarts[report.best_restart].iterations;

    Fiducial fiducial(d, std::move(best_psi), prov);
    report.verification = verify_sic(orbit(fiducial), options.tol);
    report.converged = report.verification.passed;

    prov.residual = report.verification.max_overlap_deviation;
    Fiducial stamped(d, fiducial.vector(), prov);
    return SearchOutcome{std::move(stamped), std::move(report)};
}

VerificationReport verify_sic(const SicSet& candidate, double tol) {
    const int d = candidate.d();
    const int n = d * d;
    VerificationReport report;
    report.dim = d;
    report.tolerance = tol;

    const double target = 1.0 / (d + 1.0);
    RealMatrix gram(n, n);
    double max_dev = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double overlap = (candidate.projector(i) * candidate.projector(j)).trace().real();
            gram(i, j) = overlap;
            gram(j, i) = overlap;
            if (i != j) max_dev = std::max(max_dev, std::abs(overlap - target));
        }
    }
    report.max_overlap_deviation = max_dev;

    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < n; ++i) sum += candidate.effect(i);
    report.identity_residual = max_abs(sum - ComplexMatrix::Identity(d, d));

    Eigen::BDCSVD<RealMatrix> svd(gram);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > 1e-8) ++rank;
    report.gram_rank = rank;

    report.passed = report.max_overlap_deviation <= tol && report.identity_residual <= tol &&
                    report.gram_rank == n;
    return report;
}

}  // namespace sicprob
