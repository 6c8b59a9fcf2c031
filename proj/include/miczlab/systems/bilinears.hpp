#pragma once

// Pauli bilinears a sigma_i b over generic scalars. Convention:
//   a sigma b = sum_{ab} a_a (sigma)_{ab} b_b,  sigma_3 = diag(1, -1).

#include "miczlab/core/algebra.hpp"
#include "miczlab/core/state.hpp"

namespace micz {

template <class S>
Cx<S> bil(int i, const std::array<Cx<S>, 2>& a, const std::array<Cx<S>, 2>& b) {
    switch (i) {
        case 0: return a[0] * b[0] + a[1] * b[1];
        case 1: return a[0] * b[1] + a[1] * b[0];
        case 2: return times_i(a[1] * b[0] - a[0] * b[1]);
        default: return a[0] * b[0] - a[1] * b[1];
    }
}

template <class S>
std::array<Cx<S>, 2> bar(const std::array<Cx<S>, 2>& a) {
    return {conj(a[0]), conj(a[1])};
}

// z zbar and z sigma_3 zbar are manifestly real.
template <class S>
S zsz3(const Phase4<S>& x) {
    return abs2(x.z[0]) - abs2(x.z[1]);
}

}  // namespace micz
