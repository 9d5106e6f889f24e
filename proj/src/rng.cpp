#include "shimr/rng.hpp"

#include <cmath>
#include <numbers>

namespace shimr {

double RngStream::next_normal() {
    // First draw mapped to (0,1] so the log argument never vanishes.
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace shimr
