#include "xsc/rng.hpp"

namespace xsc {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed) : key_(seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
}

RandomStream RandomStream::substream(std::uint64_t label) const {
    // Mix key and label through two splitmix rounds so that nearby labels
    // land far apart in seed space.
    std::uint64_t x = key_ ^ (label * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL);
    std::uint64_t child = splitmix64(x);
    child ^= splitmix64(x);
    return RandomStream(child);
}

RandomStream RandomStream::substream(std::string_view label) const {
    return substream(fnv1a(label));
}

std::uint64_t RandomStream::next_u64() {
    // xoshiro256**
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::next_open01() {
    // 52 random bits centered in their cell: never exactly 0 or 1.
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

} // namespace xsc
