#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>

namespace egress {

// Grid coordinate. x is the column (0 at the left), y is the row (0 at the
// top). All agent positions and map queries use this type.
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

// |dx| + |dy|. The distance metric for every range check in the model.
inline int manhattan(Cell a, Cell b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

struct CellHash {
    std::size_t operator()(const Cell& c) const noexcept {
        std::uint64_t k = (std::uint64_t(std::uint32_t(c.x)) << 32) | std::uint32_t(c.y);
        return std::hash<std::uint64_t>{}(k);
    }
};

// Neighbor offsets in the canonical tie-break order: up, right, down, left.
inline constexpr Cell kNeighborOrder[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};

} // namespace egress
