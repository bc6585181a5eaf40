#include "selectica/rng.hpp"

namespace selectica {

namespace {

inline std::uint64_t fnv1a_byte(std::uint64_t h, unsigned char b) {
    return (h ^ b) * 1099511628211ull;
}

inline std::uint64_t fnv1a_u64(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h = fnv1a_byte(h, static_cast<unsigned char>(v & 0xff));
        v >>= 8;
    }
    return h;
}

inline std::uint64_t fnv1a_str(std::uint64_t h, std::string_view s) {
    for (unsigned char b : s) h = fnv1a_byte(h, b);
    return h;
}

}  // namespace

RngStream RngStream::derive(std::uint64_t master_seed, std::uint64_t replicate,
                            std::string_view label) {
    std::uint64_t h = 1469598103934665603ull;
    h = fnv1a_u64(h, master_seed);
    h = fnv1a_u64(h, replicate);
    h = fnv1a_str(h, label);
    return RngStream(h);
}

std::uint64_t RngStream::next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double RngStream::uniform01() {
    double u = 0.0;
    do {
        u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    } while (u == 0.0);
    return u;
}

}  // namespace selectica
