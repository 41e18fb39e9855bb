#include "netsde/rng.hpp"

#include <cmath>
#include <numbers>

namespace netsde {

namespace philox {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
} // namespace

std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                   const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

} // namespace philox

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t path) {
    const std::uint64_t mixed = splitmix64(splitmix64(seed) ^
                                           (0x517CC1B727220A95ull * (path + 1)));
    key_ = {static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32)};
}

std::array<std::uint32_t, 4> CounterRng::raw(std::uint64_t step, std::uint64_t node) const {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
        static_cast<std::uint32_t>(node), static_cast<std::uint32_t>(node >> 32)};
    return philox::block(counter, key_);
}

double CounterRng::uniform(std::uint64_t step, std::uint64_t node) const {
    const auto words = raw(step, node);
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t step, std::uint64_t node) const {
    const auto words = raw(step, node);
    const std::uint64_t bits0 =
        (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    const std::uint64_t bits1 =
        (static_cast<std::uint64_t>(words[2]) << 32) | words[3];
    const double u1 = (static_cast<double>(bits0 >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(bits1 >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace netsde
