#pragma once

#include <cstdint>

namespace genlab {

// Deterministic random stream: xoshiro256** seeded through splitmix64,
// gaussians via Box-Muller. Streams are values, never shared between
// threads -- derive independent children with split().
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    // uniform on (0,1] -- safe to feed into log()
    double uniform();
    double gaussian();
    double gaussian(double sigma);
    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n);

    std::uint64_t seed() const { return seed_; }
    Rng split(std::uint64_t child) const;
    static const char* algorithm() { return "xoshiro256** / Box-Muller"; }

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace genlab
