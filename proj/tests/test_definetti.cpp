#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "sicprob/definetti.hpp"

using namespace sicprob;
using sicprob::testing::searched_sic;

namespace {

DensityOperator basis_projector(int dim, int k) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return DensityOperator(std::move(m));
}

DensityOperator plus_projector() {
    ComplexMatrix m = ComplexMatrix::Constant(2, 2, 0.5);
    return DensityOperator(std::move(m));
}

Mixture orthogonal_pair() {
    return Mixture({{0.5, basis_projector(2, 0)}, {0.5, basis_projector(2, 1)}});
}

// Permutation operator on n factors of dimension d: |i_0 ... i_{n-1}> ->
// |i_{perm^{-1}(0)} ...>, built by composing adjacent swaps so the test only
// trusts the library's generator.
ComplexMatrix permutation_operator(int n, int d, std::vector<int> perm) {
    int dim = 1;
    for (int k = 0; k < n; ++k) dim *= d;
    ComplexMatrix result = ComplexMatrix::Identity(dim, dim);
    // Bubble the permutation into the identity with adjacent transpositions.
    for (int pass = 0; pass + 1 < n; ++pass)
        for (int a = 0; a + 1 < n; ++a)
            if (perm[a] > perm[a + 1]) {
                std::swap(perm[a], perm[a + 1]);
                result = adjacent_swap(n, d, a) * result;
            }
    return result;
}

}  // namespace

TEST_CASE("mixture construction validates weights and dimensions") {
    CHECK_NOTHROW(orthogonal_pair());
    CHECK_THROWS_AS(Mixture({}), shape_error);
    CHECK_THROWS_AS(Mixture({{0.5, basis_projector(2, 0)}, {0.6, basis_projector(2, 1)}}),
                    validation_error);
    CHECK_THROWS_AS(Mixture({{-0.1, basis_projector(2, 0)}, {1.1, basis_projector(2, 1)}}),
                    validation_error);
    CHECK_THROWS_AS(Mixture({{0.5, basis_projector(2, 0)}, {0.5, basis_projector(3, 0)}}),
                    shape_error);
    const Mixture m = orthogonal_pair();
    CHECK(m.dim() == 2);
    CHECK(m.size() == 2);
    CHECK(m.weights()(0) == 0.5);
}

TEST_CASE("adjacent swap is the expected permutation matrix") {
    const ComplexMatrix swap2 = adjacent_swap(2, 2, 0);
    ComplexMatrix expected(4, 4);
    expected << 1, 0, 0, 0,
                0, 0, 1, 0,
                0, 1, 0, 0,
                0, 0, 0, 1;
    CHECK(max_abs(swap2 - expected) == 0.0);

    const ComplexMatrix s0 = adjacent_swap(3, 2, 0);
    const ComplexMatrix s1 = adjacent_swap(3, 2, 1);
    CHECK(max_abs(s0 * s0 - ComplexMatrix::Identity(8, 8)) == 0.0);
    CHECK(max_abs(s1 * s1 - ComplexMatrix::Identity(8, 8)) == 0.0);
    CHECK(max_abs(s0 - s1) > 0.5);  // they act on different factor pairs

    CHECK_THROWS_AS(adjacent_swap(2, 2, 1), std::domain_error);
    CHECK_THROWS_AS(adjacent_swap(1, 2, 0), std::domain_error);
}

TEST_CASE("extension matches the hand-built two-copy mixture") {
    Rng rng = make_rng(1300);
    const DensityOperator rho1 = random_density(2, rng);
    const DensityOperator rho2 = random_density(2, rng);
    const Mixture m({{0.6, rho1}, {0.4, rho2}});
    const ExchangeableState ext = extend(m, 2);
    const ComplexMatrix expected = 0.6 * tensor(rho1.matrix(), rho1.matrix()) +
                                   0.4 * tensor(rho2.matrix(), rho2.matrix());
    CHECK(max_abs(ext.op().matrix() - expected) <= 1e-14);
    CHECK(ext.n() == 2);
    CHECK(ext.d() == 2);
}

TEST_CASE("extensions are invariant under every factor permutation") {
    Rng rng = make_rng(1400);
    const Mixture m({{0.3, random_density(2, rng)},
                     {0.3, random_density(2, rng)},
                     {0.4, random_density(2, rng)}});
    for (int n : {2, 3}) {
        const ExchangeableState ext = extend(m, n);
        std::vector<int> perm(n);
        for (int k = 0; k < n; ++k) perm[k] = k;
        do {
            const ComplexMatrix p = permutation_operator(n, 2, perm);
            CHECK(max_abs(p * ext.op().matrix() * p.adjoint() - ext.op().matrix()) <= 1e-10);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("exchangeable state construction rejects asymmetric operators") {
    Rng rng = make_rng(1500);
    const DensityOperator a = basis_projector(2, 0);
    const DensityOperator b = basis_projector(2, 1);
    const ComplexMatrix asym = tensor(a.matrix(), b.matrix());
    CHECK_THROWS_AS(ExchangeableState(2, 2, DensityOperator(asym)), validation_error);
    CHECK_THROWS_AS(ExchangeableState(2, 2, random_density(3, rng)), shape_error);
    CHECK_NOTHROW(ExchangeableState(2, 2, DensityOperator(extend(orthogonal_pair(), 2).op())));
}

TEST_CASE("extension respects the dimension cap") {
    CHECK_THROWS_AS(extend(orthogonal_pair(), 3, 4), size_error);
    CHECK_NOTHROW(extend(orthogonal_pair(), 2, 4));
}

TEST_CASE("bayes update reweights by outcome likelihood") {
    const Mixture m({{0.5, basis_projector(2, 0)}, {0.5, plus_projector()}});
    const Povm basis = Povm::computational_basis(2);

    const Mixture after0 = bayes_update(m, basis, 0);
    CHECK(std::abs(after0.weights()(0) - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(after0.weights()(1) - 1.0 / 3.0) <= 1e-12);
    // Component states are untouched: the update concerns beliefs only.
    CHECK(max_abs(after0.component(0).state.matrix() - m.component(0).state.matrix()) == 0.0);

    const Mixture after1 = bayes_update(m, basis, 1);
    CHECK(std::abs(after1.weights()(0) - 0.0) <= 1e-12);
    CHECK(std::abs(after1.weights()(1) - 1.0) <= 1e-12);
}

TEST_CASE("conditioning on an impossible outcome is an error") {
    const Mixture m({{1.0, basis_projector(2, 1)}});
    CHECK_THROWS_AS(bayes_update(m, Povm::computational_basis(2), 0), conditioning_error);
    CHECK_THROWS_AS(bayes_update(m, Povm::computational_basis(2), 5), std::domain_error);
}

TEST_CASE("sequential bayes updates are order invariant") {
    const SicSet& sic = searched_sic(2);
    const Povm povm = sic.povm();
    const Mixture prior({{0.5, basis_projector(2, 0)}, {0.5, plus_projector()}});
    const std::vector<int> outcomes{0, 2, 1, 1, 3, 0};
    std::vector<int> shuffled{1, 3, 0, 0, 1, 2};

    Mixture forward = prior;
    for (int o : outcomes) forward = bayes_update(forward, povm, o);
    Mixture reordered = prior;
    for (int o : shuffled) reordered = bayes_update(reordered, povm, o);
    CHECK((forward.weights() - reordered.weights()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("tomography is deterministic per seed and concentrates on the truth") {
    const SicSet& sic = searched_sic(2);
    const Mixture m = orthogonal_pair();
    const TomographyTrajectory a = simulate_tomography(0, m, sic.povm(), 200, 42);
    const TomographyTrajectory b = simulate_tomography(0, m, sic.povm(), 200, 42);
    REQUIRE(a.outcomes.size() == 200);
    REQUIRE(a.weights.size() == 201);
    CHECK(a.outcomes == b.outcomes);
    CHECK((a.weights.back() - b.weights.back()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.weights.front()(0) == 0.5);  // the prior leads the trajectory
    CHECK(a.weights.back()(0) >= 0.99);

    const TomographyTrajectory other = simulate_tomography(1, m, sic.povm(), 200, 42);
    CHECK(other.weights.back()(1) >= 0.99);
}

TEST_CASE("tomography validates its arguments") {
    const Mixture m = orthogonal_pair();
    const Povm basis = Povm::computational_basis(2);
    CHECK_THROWS_AS(simulate_tomography(2, m, basis, 10, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_tomography(-1, m, basis, 10, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_tomography(0, m, basis, -1, 1), std::domain_error);
    const TomographyTrajectory empty = simulate_tomography(0, m, basis, 0, 1);
    CHECK(empty.outcomes.empty());
    REQUIRE(empty.weights.size() == 1);
    CHECK(empty.weights[0](0) == 0.5);
}
