// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace oral {

/// Path-length limits shared by both miners.
struct PathLimits {
    std::size_t mspl = 3; // subject condition paths
    std::size_t mrpl = 3; // resource condition paths
    std::size_t sped = 0; // extra subject constraint path length over the shortest
    std::size_t rped = 0; // extra resource constraint path length over the shortest
    std::size_t mtpl = 4; // total constraint path length
};

} // namespace oral
