// Deterministic random streams. The generator is splitmix64; substreams are
// derived through its finalizer so that every (run, round, agent, rumor)
// event owns an independent stream position regardless of iteration order.
// All integer-to-float conversions are spelled out here, so identical seeds
// produce identical draw sequences on every platform.
#ifndef SHIMR_RNG_HPP
#define SHIMR_RNG_HPP

#include <cstdint>

namespace shimr {

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    // splitmix64 finalizer; bijective on 64-bit words.
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    // Child seed: injective in tag for a fixed parent seed.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
        return mix(seed ^ ((tag + 1) * 0x9e3779b97f4a7c15ULL));
    }

    static RngStream for_run(std::uint64_t master_seed, std::uint64_t run_index) {
        return RngStream(derive(master_seed, run_index));
    }

    // Stream for one (round, agent, rumor) evaluation within a run.
    static RngStream for_event(std::uint64_t run_seed, std::uint64_t round,
                               std::uint64_t agent, std::uint64_t rumor) {
        return RngStream(derive(derive(derive(run_seed, round), agent), rumor));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform on [0,1), 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1): both endpoints excluded.
    double next_uniform_open() {
        return static_cast<double>((next_u64() >> 11) | 1ULL) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes exactly two draws.
    double next_normal();

private:
    std::uint64_t state_;
};

}  // namespace shimr

#endif  // SHIMR_RNG_HPP
