#pragma once

#include <cstdint>
#include <random>

namespace ptcure {

/// All sampling in the library draws from this generator so that a given seed
/// yields the same stream on every platform: mt19937_64 output is fixed by
/// the standard, and the draw routines below avoid std::*_distribution, whose
/// streams are implementation-defined. Callers own their generator; routines
/// taking an Rng& are safe to use concurrently as long as each thread has
/// its own.
using Rng = std::mt19937_64;

/// Uniform on [0, 1) with 53 random mantissa bits: one generator word per draw.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace ptcure
