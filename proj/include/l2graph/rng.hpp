#ifndef L2GRAPH_RNG_HPP
#define L2GRAPH_RNG_HPP

#include <cstdint>
#include <random>

namespace l2graph {

// splitmix64 finalizer (Vigna).  Used to decorrelate (seed, stream index)
// pairs before feeding them to the mt19937_64 constructor, so per-sample /
// per-instance substreams are independent of processing order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic substream for a given (seed, index).  Substream draws do
// not depend on how many values other substreams have consumed, which is
// what makes per-sample randomness commute with column permutations.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) + index));
}

} // namespace l2graph

#endif
