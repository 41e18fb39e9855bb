#pragma once

#include <array>
#include <cstdint>

namespace netsde {

/// Philox 4x32-10 counter-based generator. Every draw is addressed by
/// (seed, path, step, node), so parallel paths need no shared state and the
/// output is independent of scheduling order.
namespace philox {

std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                   const std::array<std::uint32_t, 2>& key);

} // namespace philox

std::uint64_t splitmix64(std::uint64_t x);

/// Addressed Gaussian stream: normal(step, node) is a deterministic standard
/// normal variate, independent across distinct addresses.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t path);

    double normal(std::uint64_t step, std::uint64_t node) const;
    double uniform(std::uint64_t step, std::uint64_t node) const; // in (0,1)

private:
    std::array<std::uint32_t, 4> raw(std::uint64_t step, std::uint64_t node) const;

    std::array<std::uint32_t, 2> key_;
};

} // namespace netsde
