#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace sicprob {

// All randomized operations take an explicit engine with value semantics, so
// a fixed seed replays the exact same stream on every platform.
using Rng = std::mt19937_64;

uint64_t splitmix64(uint64_t x);

// Engine seeded through a splitmix64 warm-up (raw small seeds correlate badly
// as mt19937_64 state).
Rng make_rng(uint64_t seed);

// Derive the engine for an independent sub-stream (restart r, trajectory r, ...).
// Pure function of (seed, stream), so work can be partitioned in any order.
Rng make_stream_rng(uint64_t seed, uint64_t stream);

// Uniform on [0, 1). Uses the top 53 bits of one engine draw; never touches
// std::uniform_real_distribution, whose mapping is implementation-defined.
double uniform01(Rng& rng);

// Standard complex normal: Re and Im independent N(0,1). Box-Muller on two
// engine draws, so the stream layout is fixed by this header alone.
std::complex<double> complex_normal(Rng& rng);

}  // namespace sicprob
