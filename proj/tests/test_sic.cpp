#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "sicprob/sic.hpp"

using namespace sicprob;
using sicprob::testing::searched_sic;
using sicprob::testing::tetrahedron_fiducial;

namespace {

const std::complex<double> kI(0.0, 1.0);

ComplexVector basis_vector(int d, int k) {
    ComplexVector v = ComplexVector::Zero(d);
    v(k) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("d=2 displacements reproduce the Pauli matrices under the tau convention") {
    ComplexMatrix x(2, 2), z(2, 2), y(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    // tau = -exp(i pi/2) = -i, so D_{1,1} = -i XZ = -sigma_y.
    y << 0, kI, -kI, 0;
    CHECK(max_abs(displacement(2, 1, 0).matrix() - x) <= 1e-15);
    CHECK(max_abs(displacement(2, 0, 1).matrix() - z) <= 1e-15);
    CHECK(max_abs(displacement(2, 1, 1).matrix() - y) <= 1e-15);
    CHECK(max_abs(displacement(2, 0, 0).matrix() - ComplexMatrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("displacement labels are periodic mod d") {
    CHECK(max_abs(displacement(3, -1, -2).matrix() - displacement(3, 2, 1).matrix()) == 0.0);
    CHECK(max_abs(displacement(5, 7, 9).matrix() - displacement(5, 2, 4).matrix()) == 0.0);
}

TEST_CASE("apply_displacement agrees with the dense operator") {
    Rng rng = make_rng(71);
    for (int d : {2, 3, 5}) {
        const ComplexVector psi = random_pure_state(d, rng).amplitudes();
        for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q) {
                const ComplexVector fast = apply_displacement(psi, d, p, q);
                const ComplexVector dense = displacement(d, p, q).matrix() * psi;
                CHECK((fast - dense).cwiseAbs().maxCoeff() <= 1e-14);
                CHECK(std::abs(fast.norm() - 1.0) <= 1e-13);
            }
    }
}

TEST_CASE("the analytic tetrahedron fiducial verifies at 1e-12") {
    const Fiducial fid = tetrahedron_fiducial();
    const VerificationReport report = verify_sic(orbit(fid), 1e-12);
    CHECK(report.dim == 2);
    CHECK(report.max_overlap_deviation <= 1e-12);
    CHECK(report.identity_residual <= 1e-12);
    CHECK(report.gram_rank == 4);
    CHECK(report.passed);
    CHECK(std::abs(frame_potential(fid) - 1.0 / 3.0) <= 1e-12);
}

TEST_CASE("frame potential of a basis vector is d - 1") {
    for (int d : {2, 3, 4}) {
        const ComplexVector e0 = basis_vector(d, 0);
        CHECK(std::abs(frame_potential(e0, d) - (d - 1.0)) <= 1e-12);
    }
}

TEST_CASE("centered potential subtracts the analytic floor exactly") {
    Rng rng = make_rng(72);
    for (int d : {2, 3, 4}) {
        const double floor = (d - 1.0) / (d + 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            const ComplexVector psi = random_pure_state(d, rng).amplitudes();
            CHECK(std::abs(centered_potential(psi, d) - (frame_potential(psi, d) - floor)) <=
                  1e-12);
        }
    }
}

TEST_CASE("frame potential respects the analytic floor on random vectors") {
    Rng rng = make_rng(73);
    for (int d : {2, 3, 4}) {
        const double floor = (d - 1.0) / (d + 1.0);
        double min_seen = 1e300;
        for (int trial = 0; trial < 10000; ++trial) {
            const ComplexVector psi = random_pure_state(d, rng).amplitudes();
            min_seen = std::min(min_seen, frame_potential(psi, d));
        }
        CHECK(min_seen >= floor - 1e-12);
    }
}

TEST_CASE("frame potential gradient matches central finite differences") {
    Rng rng = make_rng(74);
    const double h = 1e-5;
    for (int d : {2, 3, 4}) {
        for (int trial = 0; trial < 20; ++trial) {
            // A generic non-normalized point; the gradient is defined on raw
            // vectors with the normalization folded into the objective.
            ComplexVector v(d);
            for (int k = 0; k < d; ++k) v(k) = complex_normal(rng);
            v *= 0.8 + 0.4 * uniform01(rng);
            const RealVector grad = frame_potential_gradient(v, d);
            for (int k = 0; k < d; ++k) {
                for (int part = 0; part < 2; ++part) {
                    ComplexVector lo = v, hi = v;
                    const std::complex<double> step =
                        part == 0 ? std::complex<double>(h, 0.0) : std::complex<double>(0.0, h);
                    hi(k) += step;
                    lo(k) -= step;
                    const double fd =
                        (frame_potential(hi, d) - frame_potential(lo, d)) / (2.0 * h);
                    const double an = grad(2 * k + part);
                    CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
                }
            }
        }
    }
}

TEST_CASE("orbit ordering: index i = p*d + q, fiducial first bit for bit") {
    const Fiducial fid = tetrahedron_fiducial();
    const std::vector<ComplexVector> states = orbit_vectors(fid);
    REQUIRE(states.size() == 4);
    CHECK((states[0] - fid.vector()).cwiseAbs().maxCoeff() == 0.0);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            const ComplexVector direct = apply_displacement(fid.vector(), 2, p, q);
            CHECK((states[p * 2 + q] - direct).cwiseAbs().maxCoeff() == 0.0);
        }
}

TEST_CASE("displacements permute a SIC orbit's projectors") {
    const SicSet sic = searched_sic(3);
    const ComplexMatrix d12 = displacement(3, 1, 2).matrix();
    for (int i = 0; i < sic.size(); ++i) {
        const ComplexMatrix moved = d12 * sic.projector(i) * d12.adjoint();
        double best = 1e300;
        for (int j = 0; j < sic.size(); ++j)
            best = std::min(best, max_abs(moved - sic.projector(j)));
        CHECK(best <= 1e-9);
    }
}

TEST_CASE("verify_sic flags the basis orbit as informationally incomplete") {
    const Fiducial e0(2, basis_vector(2, 0));
    const VerificationReport report = verify_sic(orbit(e0), 1e-10);
    CHECK(std::abs(report.max_overlap_deviation - 2.0 / 3.0) <= 1e-12);
    CHECK(report.identity_residual <= 1e-12);
    CHECK(report.gram_rank == 2);
    CHECK_FALSE(report.passed);
}

TEST_CASE("fiducial construction validates dimension, shape and norm") {
    CHECK_THROWS_AS(Fiducial(1, basis_vector(1, 0)), std::domain_error);
    CHECK_THROWS_AS(Fiducial(3, basis_vector(2, 0)), shape_error);
    ComplexVector off(2);
    off << 0.9, 0.0;
    CHECK_THROWS_AS(Fiducial(2, off), validation_error);
}

TEST_CASE("sic set construction enforces structural invariants only") {
    const SicSet good = searched_sic(2);

    SUBCASE("wrong projector count") {
        std::vector<ComplexMatrix> three(good.projectors().begin(),
                                         good.projectors().end() - 1);
        CHECK_THROWS_AS(SicSet(2, three), shape_error);
    }
    SUBCASE("non-idempotent entry") {
        std::vector<ComplexMatrix> projectors = good.projectors();
        projectors[1] = 0.5 * ComplexMatrix::Identity(2, 2);
        CHECK_THROWS_AS(SicSet(2, projectors), validation_error);
    }
    SUBCASE("projectors that do not resolve the identity") {
        std::vector<ComplexMatrix> projectors(4, good.projector(0));
        CHECK_THROWS_AS(SicSet(2, projectors), validation_error);
    }
    SUBCASE("a non-equiangular orbit is still constructible") {
        CHECK_NOTHROW(orbit(Fiducial(2, basis_vector(2, 0))));
    }
}

TEST_CASE("search is deterministic per seed and stamps provenance") {
    const SearchOutcome a = search_fiducial(2, 7);
    const SearchOutcome b = search_fiducial(2, 7);
    CHECK((a.fiducial.vector() - b.fiducial.vector()).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.report.restarts.size() == 10);
    for (size_t r = 0; r < a.report.restarts.size(); ++r) {
        CHECK(a.report.restarts[r].stream_seed == b.report.restarts[r].stream_seed);
        CHECK(a.report.restarts[r].final_residual == b.report.restarts[r].final_residual);
    }
    CHECK(a.fiducial.provenance().method == "frame-potential-search");
    CHECK(a.fiducial.provenance().seed == 7);
    CHECK(a.fiducial.provenance().residual == a.report.verification.max_overlap_deviation);
}

TEST_CASE("search converges for d in {2,3,4,5}") {
    for (int d : {2, 3, 4, 5}) {
        const SearchOutcome outcome = search_fiducial(d, 3);
        CHECK(outcome.report.converged);
        CHECK(outcome.report.verification.passed);
        CHECK(outcome.report.verification.gram_rank == d * d);
        CHECK(std::abs(outcome.report.best_potential - (d - 1.0) / (d + 1.0)) <= 1e-10);
    }
}

TEST_CASE("non-convergence is reported, not thrown") {
    SearchOptions options;
    options.restarts = 1;
    options.max_iter = 1;
    const SearchOutcome outcome = search_fiducial(4, 11, options);
    CHECK_FALSE(outcome.report.converged);
    CHECK_FALSE(outcome.report.verification.passed);
    CHECK(std::abs(outcome.fiducial.vector().norm() - 1.0) <= 1e-12);
    CHECK(outcome.report.restarts.size() == 1);
}

TEST_CASE("search rejects invalid options") {
    CHECK_THROWS_AS(search_fiducial(1, 0), std::domain_error);
    SearchOptions bad;
    bad.restarts = 0;
    CHECK_THROWS_AS(search_fiducial(2, 0, bad), std::domain_error);
    bad.restarts = 1;
    bad.tol = 0.0;
    CHECK_THROWS_AS(search_fiducial(2, 0, bad), std::domain_error);
}
