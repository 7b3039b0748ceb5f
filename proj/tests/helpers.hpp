#pragma once

// Shared fixtures for the test suites: the analytic d=2 fiducial and a cache
// of searched SIC sets, so each suite pays for at most one search per
// dimension.

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "sicprob/sic.hpp"

namespace sicprob::testing {

// Bloch vector (1,1,1)/sqrt(3): cos(theta) = 1/sqrt(3), phi = pi/4. The
// displacement orbit is the regular tetrahedron, the known d=2 solution.
inline Fiducial tetrahedron_fiducial() {
    const double theta = std::acos(1.0 / std::sqrt(3.0));
    ComplexVector psi(2);
    psi(0) = std::cos(theta / 2.0);
    psi(1) = std::polar(std::sin(theta / 2.0), std::numbers::pi / 4.0);
    Provenance prov;
    prov.method = "analytic";
    return Fiducial(2, std::move(psi), prov);
}

inline const SicSet& searched_sic(int d) {
    static std::map<int, SicSet> cache;
    auto it = cache.find(d);
    if (it == cache.end()) {
        // A certification tolerance two decades below the default: conversion
        // tests bound round trips at 1e-12, which needs overlap quality well
        // beyond what a 1e-10 certificate guarantees.
        SearchOutcome outcome =
            search_fiducial(d, 20260816u + static_cast<uint64_t>(d), {10, 25000, 1e-12});
        if (!outcome.report.converged)
            throw std::runtime_error("test fixture: SIC search failed for d = " +
                                     std::to_string(d));
        it = cache.emplace(d, orbit(outcome.fiducial)).first;
    }
    return it->second;
}

}  // namespace sicprob::testing
