#include "sicprob/qcore.hpp"

#include <cmath>
#include <string>

namespace sicprob {

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.adjoint()) <= tol;
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

namespace {

void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) throw validation_error(std::string(what) + ": non-finite entry");
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
        throw shape_error("density operator: square matrix required");
    require_finite(matrix_, "density operator");
    if (!is_hermitian(matrix_, kHermitianTol))
        throw validation_error("density operator: not Hermitian within 1e-12");
    if (std::abs(matrix_.trace().real() - 1.0) > kTraceTol ||
        std::abs(matrix_.trace().imag()) > kTraceTol)
        throw validation_error("density operator: trace deviates from 1 beyond 1e-12");
    if (min_eigenvalue(matrix_) < -kPsdTol)
        throw validation_error("density operator: negative eigenvalue beyond 1e-10");
}

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) throw shape_error("pure state: empty amplitude vector");
    if (!amplitudes_.allFinite()) throw validation_error("pure state: non-finite amplitude");
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTol)
        throw validation_error("pure state: norm deviates from 1 beyond 1e-12");
}

DensityOperator PureState::projector() const {
    return DensityOperator(amplitudes_ * amplitudes_.adjoint());
}

UnitaryOperator::UnitaryOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
        throw shape_error("unitary: square matrix required");
    require_finite(matrix_, "unitary");
    ComplexMatrix gram = matrix_.adjoint() * matrix_;
    gram -= ComplexMatrix::Identity(matrix_.rows(), matrix_.cols());
    if (max_abs(gram) > kUnitaryTol)
        throw validation_error("unitary: U^dag U deviates from identity beyond 1e-10");
}

Povm::Povm(int dim, std::vector<ComplexMatrix> effects) : dim_(dim), effects_(std::move(effects)) {
    if (dim_ < 1) throw std::domain_error("povm: dimension must be positive");
    if (effects_.empty()) throw shape_error("povm: at least one effect required");
    ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& e : effects_) {
        if (e.rows() != dim_ || e.cols() != dim_) throw shape_error("povm: effect dimension mismatch");
        require_finite(e, "povm effect");
        if (!is_hermitian(e, kPsdTol)) throw validation_error("povm: effect not Hermitian");
        if (min_eigenvalue(e) < -kPsdTol)
            throw validation_error("povm: effect has negative eigenvalue beyond 1e-10");
        sum += e;
    }
    sum -= ComplexMatrix::Identity(dim_, dim_);
    if (max_abs(sum) > kUnitaryTol)
        throw validation_error("povm: effects do not sum to identity within 1e-10");
}

Povm Povm::computational_basis(int dim) {
    return from_basis(ComplexMatrix::Identity(dim, dim));
}

Povm Povm::from_basis(const ComplexMatrix& basis) {
    const int d = static_cast<int>(basis.rows());
    if (basis.cols() != d) throw shape_error("povm basis: square matrix of columns required");
    std::vector<ComplexMatrix> effects;
    effects.reserve(d);
    for (int j = 0; j < d; ++j) effects.push_back(basis.col(j) * basis.col(j).adjoint());
    return Povm(d, std::move(effects));
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, int max_dim) {
    require_finite(a, "tensor lhs");
    require_finite(b, "tensor rhs");
    const long rows = static_cast<long>(a.rows()) * b.rows();
    const long cols = static_cast<long>(a.cols()) * b.cols();
    if (rows > max_dim || cols > max_dim)
        throw size_error("tensor: product dimension " + std::to_string(std::max(rows, cols)) +
                         " exceeds cap " + std::to_string(max_dim));
    ComplexMatrix out(rows, cols);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b, int max_dim) {
    const long n = static_cast<long>(a.size()) * b.size();
    if (n > max_dim)
        throw size_error("tensor: product dimension " + std::to_string(n) + " exceeds cap " +
                         std::to_string(max_dim));
    ComplexVector out(n);
    for (int i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep) {
    if (dim_a < 1 || dim_b < 1) throw std::domain_error("partial_trace: dims must be positive");
    const long n = static_cast<long>(dim_a) * dim_b;
    if (m.rows() != n || m.cols() != n)
        throw shape_error("partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected " + std::to_string(n) + " square");
    if (keep == Subsystem::A) {
        ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_a; ++j)
                for (int b = 0; b < dim_b; ++b) out(i, j) += m(i * dim_b + b, j * dim_b + b);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
    for (int i = 0; i < dim_b; ++i)
        for (int j = 0; j < dim_b; ++j)
            for (int a = 0; a < dim_a; ++a) out(i, j) += m(a * dim_b + i, a * dim_b + j);
    return out;
}

RealVector born_probs(const DensityOperator& rho, const Povm& povm) {
    if (rho.dim() != povm.dim()) throw shape_error("born_probs: state and povm dimension mismatch");
    RealVector p(povm.outcomes());
    for (int i = 0; i < povm.outcomes(); ++i) {
        const std::complex<double> t = (rho.matrix() * povm.effect(i)).trace();
        double v = t.real();
        if (v < -kPsdTol || v > 1.0 + kPsdTol)
            throw validation_error("born_probs: probability " + std::to_string(v) + " at outcome " +
                                   std::to_string(i) + " outside [0,1] beyond tolerance");
        if (v < 0.0) v = 0.0;
        if (v > 1.0) v = 1.0;
        p(i) = v;
    }
    if (std::abs(p.sum() - 1.0) > kUnitaryTol)
        throw validation_error("born_probs: probabilities sum to " + std::to_string(p.sum()));
    return p;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
    if (a.dim() != b.dim()) throw shape_error("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix() - b.matrix(),
                                                        Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

namespace {

ComplexMatrix ginibre(int dim, Rng& rng) {
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = complex_normal(rng);
    return g;
}

}  // namespace

DensityOperator random_density(int dim, Rng& rng) {
    if (dim < 1) throw std::domain_error("random_density: dimension must be positive");
    ComplexMatrix g = ginibre(dim, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    // Symmetrize away the last bits of rounding noise.
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityOperator(std::move(rho));
}

UnitaryOperator random_unitary(int dim, Rng& rng) {
    if (dim < 1) throw std::domain_error("random_unitary: dimension must be positive");
    ComplexMatrix g = ginibre(dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const std::complex<double> rjj = r(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= (mag == 0.0) ? 1.0 : rjj / mag;
    }
    return UnitaryOperator(std::move(q));
}

PureState random_pure_state(int dim, Rng& rng) {
    if (dim < 1) throw std::domain_error("random_pure_state: dimension must be positive");
    ComplexVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = complex_normal(rng);
    v.normalize();
    return PureState(std::move(v));
}

WignerCycle wigner_cycle(const DensityOperator& friend_state, const PureState& system,
                         const UnitaryOperator& u) {
    const int df = friend_state.dim();
    const int ds = system.dim();
    if (u.dim() != df * ds)
        throw shape_error("wigner_cycle: unitary dim " + std::to_string(u.dim()) +
                          " is not friend dim x system dim = " + std::to_string(df * ds));
    const ComplexMatrix initial =
        tensor(friend_state.matrix(), ComplexMatrix(system.amplitudes() * system.amplitudes().adjoint()));
    ComplexMatrix joint = u.matrix() * initial * u.matrix().adjoint();
    joint = 0.5 * (joint + joint.adjoint().eval());
    ComplexMatrix reversed = u.matrix().adjoint() * joint * u.matrix();
    reversed = 0.5 * (reversed + reversed.adjoint().eval());

    WignerCycle out{DensityOperator(joint), DensityOperator(reversed),
                    DensityOperator(partial_trace(joint, df, ds, Subsystem::A)),
                    DensityOperator(partial_trace(joint, df, ds, Subsystem::B)), 0.0};
    out.reversal_distance = trace_distance(out.reversed, DensityOperator(initial));
    return out;
}

}  // namespace sicprob
