#include "sicprob/qbrep.hpp"

#include <cmath>
#include <string>

namespace sicprob {

namespace {

constexpr double kEntryFloor = -1e-12;
constexpr double kSumTol = 1e-10;
constexpr double kColumnTol = 1e-10;

// ltp[j] = sum_i p[i] * r(j, i), in fixed index order. Both the urgleichung
// and the generalized rule go through here so their arithmetic is identical.
RealVector ltp_kernel(const RealVector& p, const RealMatrix& r) {
    RealVector ltp = RealVector::Zero(r.rows());
    for (Eigen::Index j = 0; j < r.rows(); ++j)
        for (Eigen::Index i = 0; i < r.cols(); ++i) ltp(j) += p(i) * r(j, i);
    return ltp;
}

RealVector affine_kernel(const RealVector& ltp, double alpha, double beta) {
    RealVector q(ltp.size());
    for (Eigen::Index j = 0; j < ltp.size(); ++j) q(j) = alpha * ltp(j) - beta;
    return q;
}

void check_distribution(const RealVector& p, const char* what) {
    if (!p.allFinite()) throw validation_error(std::string(what) + ": non-finite entry");
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) < kEntryFloor)
            throw validation_error(std::string(what) + ": entry " + std::to_string(i) +
                                   " is negative beyond 1e-12");
    if (std::abs(p.sum() - 1.0) > kSumTol)
        throw validation_error(std::string(what) + ": sum deviates from 1 beyond 1e-10");
}

void check_column_stochastic(const RealMatrix& r, const char* what) {
    if (r.rows() < 1 || r.cols() < 1) throw shape_error(std::string(what) + ": empty matrix");
    if (!r.allFinite()) throw validation_error(std::string(what) + ": non-finite entry");
    for (Eigen::Index j = 0; j < r.rows(); ++j)
        for (Eigen::Index i = 0; i < r.cols(); ++i)
            if (r(j, i) < kEntryFloor || r(j, i) > 1.0 - kEntryFloor)
                throw validation_error(std::string(what) + ": entry (" + std::to_string(j) + "," +
                                       std::to_string(i) + ") outside [0,1]");
    for (Eigen::Index i = 0; i < r.cols(); ++i)
        if (std::abs(r.col(i).sum() - 1.0) > kColumnTol)
            throw validation_error(std::string(what) + ": column " + std::to_string(i) +
                                   " sums to " + std::to_string(r.col(i).sum()));
}

}  // namespace

ProbVector::ProbVector(int d, RealVector p) : d_(d), p_(std::move(p)) {
    if (d_ < 2) throw std::domain_error("prob vector: d >= 2 required");
    if (p_.size() != static_cast<Eigen::Index>(d_) * d_)
        throw shape_error("prob vector: " + std::to_string(p_.size()) +
                          " entries, expected d^2 = " + std::to_string(d_ * d_));
    check_distribution(p_, "prob vector");
}

ProbVector ProbVector::uniform(int d) {
    if (d < 2) throw std::domain_error("prob vector: d >= 2 required");
    return ProbVector(d, RealVector::Constant(static_cast<Eigen::Index>(d) * d, 1.0 / (d * d)));
}

ConditionalMatrix::ConditionalMatrix(int d, RealMatrix r) : d_(d), r_(std::move(r)) {
    if (d_ < 2) throw std::domain_error("conditional matrix: d >= 2 required");
    if (r_.cols() != static_cast<Eigen::Index>(d_) * d_)
        throw shape_error("conditional matrix: " + std::to_string(r_.cols()) +
                          " columns, expected d^2 = " + std::to_string(d_ * d_));
    check_column_stochastic(r_, "conditional matrix");
}

const char* to_string(PathLabel label) { return label == PathLabel::E1 ? "E1" : "E2"; }

GeneralizedParams GeneralizedParams::from(int q, int d) {
    if (q < 0) throw std::domain_error("generalized params: q >= 0 required");
    if (d < 2) throw std::domain_error("generalized params: d >= 2 required");
    GeneralizedParams out;
    out.q = q;
    out.d = d;
    out.n = q * d * (d - 1) / 2 + d;  // d(d-1) is even, so this is exact
    out.alpha = 0.5 * q * d + 1.0;
    out.beta = 0.5 * q;
    return out;
}

GeneralizedParams GeneralizedParams::from(int q, int d, int n) {
    GeneralizedParams out = from(q, d);
    if (n != out.n)
        throw validation_error("generalized params: n = " + std::to_string(n) +
                               " inconsistent with q = " + std::to_string(q) +
                               ", d = " + std::to_string(d) + " (expected " +
                               std::to_string(out.n) + ")");
    return out;
}

ProbVector rho_to_prob(const DensityOperator& rho, const SicSet& sic) {
    if (rho.dim() != sic.d()) throw shape_error("rho_to_prob: state and SIC dimension mismatch");
    RealVector p = born_probs(rho, sic.povm());
    const double bound = 1.0 / sic.d() + 1e-12;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > bound)
            throw validation_error("rho_to_prob: entry " + std::to_string(i) +
                                   " exceeds the pure-state maximum 1/d");
    return ProbVector(sic.d(), std::move(p));
}

ComplexMatrix prob_to_rho(const ProbVector& p, const SicSet& sic) {
    if (p.d() != sic.d()) throw shape_error("prob_to_rho: vector and SIC dimension mismatch");
    const int d = sic.d();
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < sic.size(); ++i)
        rho += ((d + 1.0) * p.p()(i) - 1.0 / d) * sic.projector(i);
    return rho;
}

ValidityReport validity_check(const ProbVector& p, const SicSet& sic, double tol) {
    ValidityReport report;
    report.min_eigenvalue = min_eigenvalue(prob_to_rho(p, sic));
    report.valid = report.min_eigenvalue >= -tol;
    return report;
}

ConditionalMatrix conditional_matrix(const SicSet& sic, const Povm& ground) {
    if (ground.dim() != sic.d())
        throw shape_error("conditional_matrix: SIC and ground dimension mismatch");
    const int n = sic.size();
    RealMatrix r(ground.outcomes(), n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < ground.outcomes(); ++j)
            r(j, i) = (sic.projector(i) * ground.effect(j)).trace().real();
    // Each column sums to tr(Pi_i) = 1 whenever the ground effects are
    // complete; anything else means a broken measurement.
    for (int i = 0; i < n; ++i)
        if (std::abs(r.col(i).sum() - 1.0) > kColumnTol)
            throw validation_error("conditional_matrix: ground effects incomplete (column " +
                                   std::to_string(i) + " sums to " +
                                   std::to_string(r.col(i).sum()) + ")");
    return ConditionalMatrix(sic.d(), std::move(r));
}

UrgleichungResult urgleichung(const ProbVector& p, const ConditionalMatrix& r, int d) {
    if (p.d() != d || r.d() != d) throw shape_error("urgleichung: dimension mismatch");
    if (r.rows() != d)
        throw shape_error("urgleichung: ground must have d outcomes (an orthonormal basis), got " +
                          std::to_string(r.rows()));
    UrgleichungResult out;
    out.ltp = ltp_kernel(p.p(), r.r());
    out.q_of_d = affine_kernel(out.ltp, d + 1.0, 1.0);
    for (Eigen::Index j = 0; j < out.q_of_d.size(); ++j)
        if (out.q_of_d(j) < -1e-10 || out.q_of_d(j) > 1.0 + 1e-10)
            throw validation_error(
                "urgleichung: Q(D_" + std::to_string(j) + ") = " + std::to_string(out.q_of_d(j)) +
                " outside [0,1]; p is not a valid state for this ground measurement");
    return out;
}

UrgleichungChecked urgleichung_checked(const ProbVector& p, const SicSet& sic,
                                       const Povm& ground) {
    if (ground.outcomes() != sic.d())
        throw shape_error("urgleichung: ground must have d outcomes (an orthonormal basis)");
    UrgleichungChecked out;
    out.result = urgleichung(p, conditional_matrix(sic, ground), sic.d());
    // The identity behind the formula: (d+1) LTP(j) - 1 = tr(rho E_j) with rho
    // the reconstruction of p. Pure linear algebra, so it holds whether or not
    // p is a valid state.
    const ComplexMatrix rho = prob_to_rho(p, sic);
    for (int j = 0; j < ground.outcomes(); ++j) {
        const double direct = (rho * ground.effect(j)).trace().real();
        out.identity_residual =
            std::max(out.identity_residual, std::abs(out.result.q_of_d(j) - direct));
    }
    if (out.identity_residual > 1e-12)
        throw validation_error("urgleichung: Born-rule identity violated (residual " +
                               std::to_string(out.identity_residual) + ")");
    return out;
}

ProbVector urgleichung_unitary(const ProbVector& p, const UnitaryOperator& u, const SicSet& sic) {
    const int d = sic.d();
    if (p.d() != d || u.dim() != d) throw shape_error("urgleichung_unitary: dimension mismatch");

    // Ground effects D_j = (1/d) U Pi_j U^dag form a POVM; the conditional
    // matrix against them feeds the same LTP kernel as the basis case.
    std::vector<ComplexMatrix> effects;
    effects.reserve(sic.size());
    for (int j = 0; j < sic.size(); ++j)
        effects.push_back(u.matrix() * sic.effect(j) * u.matrix().adjoint());
    const Povm ground(d, std::move(effects));

    RealMatrix r(sic.size(), sic.size());
    for (int i = 0; i < sic.size(); ++i)
        for (int j = 0; j < sic.size(); ++j)
            r(j, i) = (sic.projector(i) * ground.effect(j)).trace().real();

    const RealVector ltp = ltp_kernel(p.p(), r);
    RealVector q = affine_kernel(ltp, d + 1.0, 1.0 / d);

    // Identity check: the output must be the SIC representation of the state
    // evolved by U^dag.
    const ComplexMatrix rho = prob_to_rho(p, sic);
    const ComplexMatrix evolved = u.matrix().adjoint() * rho * u.matrix();
    double residual = 0.0;
    for (int j = 0; j < sic.size(); ++j) {
        const double direct = (evolved * sic.effect(j)).trace().real();
        residual = std::max(residual, std::abs(q(j) - direct));
    }
    if (residual > 1e-12)
        throw validation_error("urgleichung_unitary: evolution identity violated (residual " +
                               std::to_string(residual) + ")");
    return ProbVector(d, std::move(q));
}

RealVector general_rule(const GeneralizedParams& params, const RealVector& p,
                        const RealMatrix& r) {
    GeneralizedParams::from(params.q, params.d, params.n);  // re-validate the triple
    if (p.size() != params.n)
        throw shape_error("general_rule: p has " + std::to_string(p.size()) +
                          " entries, expected n = " + std::to_string(params.n));
    if (r.cols() != params.n)
        throw shape_error("general_rule: r has " + std::to_string(r.cols()) +
                          " columns, expected n = " + std::to_string(params.n));
    check_distribution(p, "general_rule p");
    check_column_stochastic(r, "general_rule r");
    return affine_kernel(ltp_kernel(p, r), params.alpha, params.beta);
}

DimensionBounds dimension_bounds(int d) {
    if (d < 2) throw std::domain_error("dimension_bounds: d >= 2 required");
    return DimensionBounds{1.0 / (d + 1.0), 2.0 / (d + 1.0)};
}

}  // namespace sicprob
