#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "sicprob/qcore.hpp"

using namespace sicprob;

namespace {

const std::complex<double> kI(0.0, 1.0);

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

DensityOperator basis_projector(int dim, int k) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return DensityOperator(std::move(m));
}

PureState plus_state() {
    ComplexVector v(2);
    v << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
    return PureState(std::move(v));
}

// |f, s> -> |f xor s, s>: the entangler controlled on the right qubit.
UnitaryOperator cnot_on_system() {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1.0;
    m(3, 1) = 1.0;
    m(2, 2) = 1.0;
    m(1, 3) = 1.0;
    return UnitaryOperator(std::move(m));
}

}  // namespace

TEST_CASE("tensor product matches the hand expansion of X (x) Z") {
    const ComplexMatrix t = tensor(pauli_x(), pauli_z());
    REQUIRE(t.rows() == 4);
    REQUIRE(t.cols() == 4);
    ComplexMatrix expected(4, 4);
    expected << 0, 0, 1, 0,
                0, 0, 0, -1,
                1, 0, 0, 0,
                0, -1, 0, 0;
    CHECK(max_abs(t - expected) == 0.0);
}

TEST_CASE("tensor is associative with exact equality on integer entries") {
    ComplexMatrix a(2, 2), b(2, 2), c(2, 2);
    a << 1, 2, 3, 4;
    b << 0, 1, -1, 2;
    c << 2, 0, 5, -3;
    const ComplexMatrix left = tensor(tensor(a, b), c);
    const ComplexMatrix right = tensor(a, tensor(b, c));
    REQUIRE(left.rows() == 8);
    CHECK(max_abs(left - right) == 0.0);
}

TEST_CASE("tensor of vectors stacks amplitudes in row-major order") {
    ComplexVector a(2), b(2);
    a << 1.0, kI;
    b << 2.0, 3.0;
    const ComplexVector t = tensor(a, b);
    REQUIRE(t.size() == 4);
    CHECK(t(0) == std::complex<double>(2.0, 0.0));
    CHECK(t(1) == std::complex<double>(3.0, 0.0));
    CHECK(t(2) == std::complex<double>(0.0, 2.0));
    CHECK(t(3) == std::complex<double>(0.0, 3.0));
}

TEST_CASE("tensor refuses products beyond the dimension cap") {
    const ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    const ComplexMatrix b = ComplexMatrix::Identity(3, 3);
    CHECK_THROWS_AS(tensor(a, b, 8), size_error);
    CHECK_NOTHROW(tensor(a, b, 9));
}

TEST_CASE("partial traces of a product state recover both factors") {
    Rng rng = make_rng(31);
    for (const auto& [da, db] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
        const DensityOperator rho = random_density(da, rng);
        const DensityOperator sigma = random_density(db, rng);
        const ComplexMatrix joint = tensor(rho.matrix(), sigma.matrix());
        CHECK(max_abs(partial_trace(joint, da, db, Subsystem::A) - rho.matrix()) <= 1e-12);
        CHECK(max_abs(partial_trace(joint, da, db, Subsystem::B) - sigma.matrix()) <= 1e-12);
    }
}

TEST_CASE("partial trace preserves the trace on entangled input") {
    Rng rng = make_rng(32);
    const DensityOperator joint = random_density(6, rng);
    const ComplexMatrix a = partial_trace(joint.matrix(), 2, 3, Subsystem::A);
    const ComplexMatrix b = partial_trace(joint.matrix(), 2, 3, Subsystem::B);
    CHECK(std::abs(a.trace().real() - 1.0) <= 1e-12);
    CHECK(std::abs(b.trace().real() - 1.0) <= 1e-12);
    CHECK(a.rows() == 2);
    CHECK(b.rows() == 3);
}

TEST_CASE("partial trace validates the factor dimensions") {
    const ComplexMatrix m = ComplexMatrix::Identity(6, 6);
    CHECK_THROWS_AS(partial_trace(m, 2, 2, Subsystem::A), shape_error);
}

TEST_CASE("born probabilities of the computational basis read the diagonal") {
    Rng rng = make_rng(5);
    const DensityOperator rho = random_density(4, rng);
    const RealVector probs = born_probs(rho, Povm::computational_basis(4));
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(probs(k) - rho.matrix()(k, k).real()) <= 1e-14);
    CHECK(std::abs(probs.sum() - 1.0) <= 1e-10);
}

TEST_CASE("born probabilities sum to one for random measurements") {
    Rng rng = make_rng(6);
    for (int trial = 0; trial < 25; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 3);
        const DensityOperator rho = random_density(dim, rng);
        const Povm povm = Povm::from_basis(random_unitary(dim, rng).matrix());
        const RealVector probs = born_probs(rho, povm);
        CHECK(std::abs(probs.sum() - 1.0) <= 1e-10);
        CHECK(probs.minCoeff() >= 0.0);
    }
}

TEST_CASE("povm construction rejects invalid effect lists") {
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;

    SUBCASE("effects must sum to the identity") {
        CHECK_THROWS_AS(Povm(2, {p0, 0.5 * p1}), validation_error);
    }
    SUBCASE("effects must be positive") {
        CHECK_THROWS_AS(Povm(2, {2.0 * p0, ComplexMatrix::Identity(2, 2) - 2.0 * p0}),
                        validation_error);
    }
    SUBCASE("effects must be square of the right dimension") {
        CHECK_THROWS_AS(Povm(3, {p0, p1}), shape_error);
    }
    SUBCASE("a valid resolution passes") { CHECK_NOTHROW(Povm(2, {p0, p1})); }
}

TEST_CASE("from_basis on the identity equals the computational basis") {
    const Povm a = Povm::from_basis(ComplexMatrix::Identity(3, 3));
    const Povm b = Povm::computational_basis(3);
    REQUIRE(a.outcomes() == b.outcomes());
    for (int k = 0; k < 3; ++k) CHECK(max_abs(a.effect(k) - b.effect(k)) == 0.0);
}

TEST_CASE("density operator construction enforces its invariants") {
    SUBCASE("non-hermitian is rejected") {
        ComplexMatrix m(2, 2);
        m << 1, 1, 0, 0;
        CHECK_THROWS_AS(DensityOperator{m}, validation_error);
    }
    SUBCASE("wrong trace is rejected") {
        CHECK_THROWS_AS(DensityOperator(ComplexMatrix::Identity(2, 2)), validation_error);
    }
    SUBCASE("negative eigenvalue is rejected") {
        ComplexMatrix m(2, 2);
        m << 0.6, 0.5, 0.5, 0.4;
        CHECK_THROWS_AS(DensityOperator{m}, validation_error);
    }
    SUBCASE("a projector passes") { CHECK_NOTHROW(basis_projector(3, 1)); }
}

TEST_CASE("pure states require unit norm, unitaries require unitarity") {
    ComplexVector v(2);
    v << 0.9, 0.0;
    CHECK_THROWS_AS(PureState{v}, validation_error);
    ComplexMatrix m(2, 2);
    m << 1, 0, 1, 1;
    CHECK_THROWS_AS(UnitaryOperator{m}, validation_error);
    CHECK_NOTHROW(UnitaryOperator(pauli_x()));
}

TEST_CASE("min_eigenvalue matches known spectra") {
    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    CHECK(std::abs(min_eigenvalue(diag) - 0.3) <= 1e-14);
    CHECK(std::abs(min_eigenvalue(pauli_x()) - (-1.0)) <= 1e-14);
}

TEST_CASE("trace distance separates orthogonal states and vanishes on equals") {
    const DensityOperator zero = basis_projector(2, 0);
    const DensityOperator one = basis_projector(2, 1);
    CHECK(std::abs(trace_distance(zero, one) - 1.0) <= 1e-14);
    CHECK(trace_distance(zero, zero) <= 1e-15);
    // For pure states the distance is sqrt(1 - overlap); here overlap = 1/2.
    CHECK(std::abs(trace_distance(zero, plus_state().projector()) - 1.0 / std::numbers::sqrt2) <=
          1e-12);
}

TEST_CASE("random ensembles are deterministic per seed and satisfy invariants") {
    for (int dim : {2, 3, 4}) {
        Rng a = make_rng(91);
        Rng b = make_rng(91);
        for (int draw = 0; draw < 1000; ++draw) {
            const DensityOperator rho = random_density(dim, a);
            const DensityOperator rho2 = random_density(dim, b);
            CHECK(max_abs(rho.matrix() - rho2.matrix()) == 0.0);
            const UnitaryOperator u = random_unitary(dim, a);
            const UnitaryOperator u2 = random_unitary(dim, b);
            CHECK(max_abs(u.matrix() - u2.matrix()) == 0.0);
        }
    }
}

TEST_CASE("stream rngs separate substreams of one seed") {
    Rng s0 = make_stream_rng(17, 0);
    Rng s1 = make_stream_rng(17, 1);
    CHECK(s0() != s1());
    Rng again = make_stream_rng(17, 0);
    Rng base = make_stream_rng(17, 0);
    CHECK(again() == base());
    Rng u = make_rng(17);
    for (int i = 0; i < 100; ++i) {
        const double x = uniform01(u);
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("wigner cycle with the identity returns the product state") {
    Rng rng = make_rng(44);
    const DensityOperator f = random_density(2, rng);
    const PureState s = random_pure_state(3, rng);
    const WignerCycle cycle =
        wigner_cycle(f, s, UnitaryOperator(ComplexMatrix::Identity(6, 6)));
    const ComplexMatrix product = tensor(f.matrix(), s.projector().matrix());
    CHECK(max_abs(cycle.joint.matrix() - product) <= 1e-14);
    CHECK(cycle.reversal_distance <= 1e-14);
}

TEST_CASE("wigner cycle on the CNOT instance produces the Bell state") {
    const WignerCycle cycle =
        wigner_cycle(basis_projector(2, 0), plus_state(), cnot_on_system());

    ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    CHECK(max_abs(cycle.joint.matrix() - bell) <= 1e-14);

    const ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
    CHECK(max_abs(cycle.friend_marginal.matrix() - half) <= 1e-12);
    CHECK(max_abs(cycle.system_marginal.matrix() - half) <= 1e-12);
    CHECK(cycle.reversal_distance <= 1e-12);
}

TEST_CASE("wigner cycle reversal distance vanishes on random instances") {
    Rng rng = make_rng(45);
    for (const auto& [df, ds] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
        for (int trial = 0; trial < 10; ++trial) {
            const DensityOperator f = random_density(df, rng);
            const PureState s = random_pure_state(ds, rng);
            const UnitaryOperator u = random_unitary(df * ds, rng);
            CHECK(wigner_cycle(f, s, u).reversal_distance <= 1e-12);
        }
    }
}

TEST_CASE("wigner cycle rejects mismatched dimensions") {
    Rng rng = make_rng(46);
    const DensityOperator f = random_density(2, rng);
    const PureState s = random_pure_state(2, rng);
    CHECK_THROWS_AS(wigner_cycle(f, s, random_unitary(6, rng)), shape_error);
}
