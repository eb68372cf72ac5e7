#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ergomet {

// Counter-based uniform stream: value at (seed, stream, index) is a pure
// function of its arguments, so orbit windows can be evaluated in any order.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return mix64(mix64(mix64(seed) ^ stream * 0xd1342543de82ef95ULL) ^ index * 0x2545f4914f6cdd1dULL);
}

// Uniform in [0, 1).
inline double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return static_cast<double>(hash3(seed, stream, index) >> 11) * 0x1.0p-53;
}

// Fixed-precision number rendering so report files are byte-stable.
inline std::string fmt_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace ergomet
