#include "fpkit/rng.hpp"

#include <cmath>

namespace fpkit {

double SeededRng::normal() {
    double u1 = uniform_double();
    double u2 = uniform_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

SeededRng derive_item_rng(std::uint64_t global_seed, std::uint64_t item_index) {
    return SeededRng(global_seed, item_index);
}

} // namespace fpkit
