#pragma once

#include <cmath>

#include "cascade/errors.hpp"

namespace cascade {

// Composite Hilbert space of one junction mode tensored with one cavity mode.
// Basis ordering is junction-slow / cavity-fast: the flat index of
// |junction j, cavity n> is j * cavity_dim + n.  All index arithmetic lives
// here; nothing else in the library computes flat indices by hand.
struct HilbertSpace {
    int cavity_dim = 0;
    int junction_dim = 3;

    HilbertSpace() = default;
    HilbertSpace(int cavity, int junction) : cavity_dim(cavity), junction_dim(junction) {
        if (cavity_dim < 1 || junction_dim < 1)
            throw InvalidDimension("HilbertSpace: dimensions must be >= 1");
    }

    int dim() const { return cavity_dim * junction_dim; }

    int index(int junction, int cavity) const {
        if (junction < 0 || junction >= junction_dim || cavity < 0 || cavity >= cavity_dim)
            throw InvalidDimension("HilbertSpace::index: level out of range");
        return junction * cavity_dim + cavity;
    }

    int cavity_of(int flat) const { return flat % cavity_dim; }
    int junction_of(int flat) const { return flat / cavity_dim; }

    bool operator==(const HilbertSpace& o) const {
        return cavity_dim == o.cavity_dim && junction_dim == o.junction_dim;
    }
    bool operator!=(const HilbertSpace& o) const { return !(*this == o); }
};

// Truncation rule used by the scenario layer: large enough for states with
// mean photon number |alpha|^2 to have negligible support at the edge.
inline int default_cavity_dim(double alpha_abs) {
    int by_alpha = static_cast<int>(std::ceil(8.0 * alpha_abs * alpha_abs));
    return by_alpha > 20 ? by_alpha : 20;
}

} // namespace cascade
