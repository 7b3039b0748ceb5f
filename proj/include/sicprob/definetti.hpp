#pragma once

// Quantum de Finetti machinery over discrete mixtures: exchangeable n-copy
// extensions, Bayes-rule weight updates for measurement outcomes, and a
// seeded tomography simulation that tracks the posterior trajectory.

#include <vector>

#include "sicprob/qcore.hpp"
#include "sicprob/rng.hpp"

namespace sicprob {

struct MixtureComponent {
    double weight = 0.0;
    DensityOperator state;
};

// A discrete prior over states of a common dimension: the desk-scale stand-in
// for a probability measure on state space.
class Mixture {
  public:
    explicit Mixture(std::vector<MixtureComponent> components);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(components_.size()); }
    const MixtureComponent& component(int k) const { return components_.at(k); }
    const std::vector<MixtureComponent>& components() const { return components_; }
    RealVector weights() const;

  private:
    int dim_;
    std::vector<MixtureComponent> components_;
};

// An n-copy state invariant under permutations of its factors. Construction
// checks invariance under all adjacent transpositions for n <= 4 (the check
// is quadratic in the full dimension, so it stays a construction-time
// invariant only at small n).
class ExchangeableState {
  public:
    ExchangeableState(int n, int d, DensityOperator op);

    int n() const { return n_; }
    int d() const { return d_; }
    const DensityOperator& op() const { return op_; }

  private:
    int n_;
    int d_;
    DensityOperator op_;
};

// The permutation matrix swapping tensor factors `a` and `a+1` of n factors
// of dimension d. Exposed for the permutation-invariance tests.
ComplexMatrix adjacent_swap(int n, int d, int a);

// sum_k w_k rho_k^{ox n}: the exchangeable extension of the mixture.
ExchangeableState extend(const Mixture& m, int n, int max_dim = kDefaultMaxDim);

// Posterior after observing `outcome`: w_k' proportional to w_k tr(rho_k E).
// Component states are untouched -- the update is over beliefs about which
// state obtains. Conditioning on an outcome of predicted probability below
// 1e-15 is an error, not a silent renormalization.
Mixture bayes_update(const Mixture& m, const Povm& povm, int outcome);

struct TomographyTrajectory {
    std::vector<int> outcomes;        // sampled outcome per step
    std::vector<RealVector> weights;  // prior first, then posterior after each step
};

// Draw `samples` i.i.d. outcomes from born_probs of the true component and
// apply bayes_update sequentially. Deterministic per seed.
TomographyTrajectory simulate_tomography(int truth, const Mixture& m, const Povm& povm,
                                         int samples, uint64_t seed);

}  // namespace sicprob
