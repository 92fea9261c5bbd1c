#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace npcure {

// Counter-based substream derivation, scheme version 1.
//
// Every randomized routine derives its generator as
//   substream(master_seed, {id0, id1, ...})
// where the ids identify the work item (replication index, bootstrap
// replicate, attempt, ...). Results are therefore independent of the order
// and parallelism with which work items are executed. Changing this scheme
// is a breaking change to golden files.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t s = mix64(master);
    for (std::uint64_t id : ids) s = mix64(s ^ mix64(id));
    return s;
}

// splitmix64: small, portable, statistically sound for Monte Carlo work.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  private:
    std::uint64_t state_;
};

inline Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
    return Rng(derive_seed(master, ids));
}

}  // namespace npcure
