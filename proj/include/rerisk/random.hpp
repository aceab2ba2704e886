#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rerisk {

/// splitmix64 finaliser. Used to derive independent child seeds from a root
/// seed and a stream index, so that replication b of a bootstrap gets the
/// same numbers regardless of how replications are spread over threads.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t root, std::uint64_t stream) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded stream: std::mt19937_64 (fully specified by the standard) with
/// hand-rolled transforms so that draws do not depend on the standard
/// library's distribution implementations.
///
///   uniform:  top 53 bits of one engine output, scaled to [0, 1)
///   normal:   Box-Muller on two uniforms, both variates used in order
class Rng {
public:
    explicit Rng(std::uint64_t seed) : root_(seed), engine_(mix_seed(seed, 0)) {}

    /// Independent stream `stream` under this generator's seed; does not
    /// depend on how many numbers this generator has already produced.
    [[nodiscard]] Rng child(std::uint64_t stream) const { return Rng(mix_seed(root_, stream + 1)); }
    [[nodiscard]] std::uint64_t seed() const { return root_; }

    std::uint64_t next_u64() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    double exponential(double mean) { return -mean * std::log(uniform_open()); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::uint64_t root_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rerisk
