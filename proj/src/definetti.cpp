#include "sicprob/definetti.hpp"

#include <cmath>
#include <string>

namespace sicprob {

Mixture::Mixture(std::vector<MixtureComponent> components) : components_(std::move(components)) {
    if (components_.empty()) throw shape_error("mixture: at least one component required");
    dim_ = components_.front().state.dim();
    double sum = 0.0;
    for (size_t k = 0; k < components_.size(); ++k) {
        const auto& c = components_[k];
        if (c.state.dim() != dim_)
            throw shape_error("mixture: component " + std::to_string(k) + " dimension mismatch");
        if (!std::isfinite(c.weight) || c.weight < 0.0 || c.weight > 1.0 + 1e-12)
            throw validation_error("mixture: component " + std::to_string(k) +
                                   " weight outside [0,1]");
        sum += c.weight;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw validation_error("mixture: weights sum to " + std::to_string(sum));
}

RealVector Mixture::weights() const {
    RealVector w(size());
    for (int k = 0; k < size(); ++k) w(k) = components_[k].weight;
    return w;
}

ComplexMatrix adjacent_swap(int n, int d, int a) {
    if (n < 2 || d < 1) throw std::domain_error("adjacent_swap: n >= 2 and d >= 1 required");
    if (a < 0 || a > n - 2) throw std::domain_error("adjacent_swap: factor index out of range");
    long long dim = 1;
    for (int i = 0; i < n; ++i) dim *= d;
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    // Factor 0 is the leftmost tensor slot, i.e. the most significant base-d
    // digit of the index.
    std::vector<int> digits(n);
    for (long long idx = 0; idx < dim; ++idx) {
        long long rest = idx;
        for (int i = n - 1; i >= 0; --i) {
            digits[i] = static_cast<int>(rest % d);
            rest /= d;
        }
        std::swap(digits[a], digits[a + 1]);
        long long out = 0;
        for (int i = 0; i < n; ++i) out = out * d + digits[i];
        p(out, idx) = 1.0;
    }
    return p;
}

ExchangeableState::ExchangeableState(int n, int d, DensityOperator op)
    : n_(n), d_(d), op_(std::move(op)) {
    if (n_ < 1 || d_ < 1) throw std::domain_error("exchangeable state: n >= 1, d >= 1 required");
    long long dim = 1;
    for (int i = 0; i < n_; ++i) {
        dim *= d_;
        if (dim > (1 << 30)) throw size_error("exchangeable state: dimension overflow");
    }
    if (op_.dim() != dim)
        throw shape_error("exchangeable state: operator dim " + std::to_string(op_.dim()) +
                          " is not d^n = " + std::to_string(dim));
    if (n_ <= 4) {
        for (int a = 0; a + 1 < n_; ++a) {
            const ComplexMatrix p = adjacent_swap(n_, d_, a);
            if (max_abs(p * op_.matrix() * p.adjoint() - op_.matrix()) > 1e-10)
                throw validation_error("exchangeable state: not invariant under swapping factors " +
                                       std::to_string(a) + " and " + std::to_string(a + 1));
        }
    }
}

ExchangeableState extend(const Mixture& m, int n, int max_dim) {
    if (n < 1) throw std::domain_error("extend: n >= 1 required");
    long long dim = 1;
    for (int i = 0; i < n; ++i) {
        dim *= m.dim();
        if (dim > max_dim)
            throw size_error("extend: d^n = " + std::to_string(dim) + " exceeds cap " +
                             std::to_string(max_dim));
    }
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const auto& c : m.components()) {
        ComplexMatrix power = c.state.matrix();
        for (int i = 1; i < n; ++i) power = tensor(power, c.state.matrix(), max_dim);
        sum += c.weight * power;
    }
    return ExchangeableState(n, m.dim(), DensityOperator(std::move(sum)));
}

Mixture bayes_update(const Mixture& m, const Povm& povm, int outcome) {
    if (povm.dim() != m.dim()) throw shape_error("bayes_update: mixture and povm dim mismatch");
    if (outcome < 0 || outcome >= povm.outcomes())
        throw std::domain_error("bayes_update: outcome index out of range");
    const ComplexMatrix& effect = povm.effect(outcome);
    std::vector<double> likelihood(m.size());
    double predicted = 0.0;
    for (int k = 0; k < m.size(); ++k) {
        // tr(rho E) is nonnegative up to rounding dust; clamp the dust.
        likelihood[k] = std::max(0.0, (m.component(k).state.matrix() * effect).trace().real());
        predicted += m.component(k).weight * likelihood[k];
    }
    if (predicted <= 1e-15)
        throw conditioning_error("bayes_update: outcome " + std::to_string(outcome) +
                                 " has predicted probability " + std::to_string(predicted));
    std::vector<MixtureComponent> posterior;
    posterior.reserve(m.size());
    for (int k = 0; k < m.size(); ++k)
        posterior.push_back(
            {m.component(k).weight * likelihood[k] / predicted, m.component(k).state});
    return Mixture(std::move(posterior));
}

TomographyTrajectory simulate_tomography(int truth, const Mixture& m, const Povm& povm,
                                         int samples, uint64_t seed) {
    if (truth < 0 || truth >= m.size())
        throw std::domain_error("simulate_tomography: truth index out of range");
    if (samples < 0) throw std::domain_error("simulate_tomography: samples >= 0 required");

    const RealVector p = born_probs(m.component(truth).state, povm);
    Rng rng = make_rng(seed);

    TomographyTrajectory trajectory;
    trajectory.outcomes.reserve(samples);
    trajectory.weights.reserve(samples + 1);
    trajectory.weights.push_back(m.weights());

    Mixture current = m;
    for (int s = 0; s < samples; ++s) {
        const double u = uniform01(rng);
        double cumulative = 0.0;
        int outcome = static_cast<int>(p.size()) - 1;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            cumulative += p(i);
            if (u < cumulative) {
                outcome = static_cast<int>(i);
                break;
            }
        }
        current = bayes_update(current, povm, outcome);
        trajectory.outcomes.push_back(outcome);
        trajectory.weights.push_back(current.weights());
    }
    return trajectory;
}

}  // namespace sicprob
