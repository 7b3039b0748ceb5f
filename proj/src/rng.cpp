#include "sicprob/rng.hpp"

#include <cmath>
#include <numbers>

namespace sicprob {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng make_rng(uint64_t seed) { return Rng(splitmix64(seed)); }

Rng make_stream_rng(uint64_t seed, uint64_t stream) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream * 0xd1342543de82ef95ULL + 1)));
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::complex<double> complex_normal(Rng& rng) {
    // u1 in (0,1] keeps the log finite.
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

}  // namespace sicprob
