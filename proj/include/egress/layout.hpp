#pragma once

#include "egress/geometry.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace egress {

inline constexpr std::int16_t kNoRoom = -1;

enum class CellType : std::uint8_t { Wall, Floor, Door, Exit };

// One grid cell. Floor cells inside a room carry the room id; hallway floor
// has room_id == kNoRoom. Exit cells carry their exit id (scan order).
struct CellKind {
    CellType type = CellType::Wall;
    std::int16_t room_id = kNoRoom;
    std::int16_t exit_id = -1;

    bool wall() const { return type == CellType::Wall; }
    bool walkable() const { return type != CellType::Wall; }
    bool room_floor() const { return type == CellType::Floor && room_id != kNoRoom; }
    bool hallway() const { return type == CellType::Floor && room_id == kNoRoom; }

    friend bool operator==(const CellKind&, const CellKind&) = default;
};

// Maximal 4-connected region of same-letter floor cells.
struct Room {
    int id = 0;
    char glyph = 'a';
    std::vector<Cell> cells; // scan order
};

// Thrown for malformed map text. Line/column are 1-based file coordinates.
struct MapSyntaxError : std::runtime_error {
    MapSyntaxError(int line, int column, const std::string& what);
    int line;
    int column;
};

// Thrown when a map parses but violates a structural rule (no exits, a room
// with no path to an exit, ...).
struct MapValidationError : std::runtime_error {
    explicit MapValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Immutable grid world. Safe to share across threads once constructed.
class FloorLayout {
public:
    FloorLayout() = default;

    // Builds a layout from raw cells, deriving room and exit inventories by
    // enumeration. Performs no structural validation; parse_layout() does.
    static FloorLayout from_cells(int width, int height, std::vector<CellKind> cells,
                                  std::string name);

    int width() const { return width_; }
    int height() const { return height_; }
    const std::string& name() const { return name_; }

    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }
    std::size_t index(Cell c) const { return std::size_t(c.y) * width_ + c.x; }
    const CellKind& at(Cell c) const { return cells_[index(c)]; }
    const CellKind& at(int x, int y) const { return cells_[std::size_t(y) * width_ + x]; }

    const std::vector<CellKind>& cells() const { return cells_; }
    const std::vector<Room>& rooms() const { return rooms_; }
    // Exit coordinates in scan order; the vector index is the exit id.
    const std::vector<Cell>& exits() const { return exits_; }
    // Hallway floor cells in scan order (room-less Floor cells).
    const std::vector<Cell>& hallway_cells() const { return hallway_cells_; }
    // All room floor cells in scan order.
    const std::vector<Cell>& room_cells() const { return room_cells_; }

    bool same_grid(const FloorLayout& other) const {
        return width_ == other.width_ && height_ == other.height_ && cells_ == other.cells_;
    }

private:
    friend FloorLayout parse_layout(const std::string&, std::string);

    int width_ = 0;
    int height_ = 0;
    std::string name_;
    std::vector<CellKind> cells_;
    std::vector<Room> rooms_;
    std::vector<Cell> exits_;
    std::vector<Cell> hallway_cells_;
    std::vector<Cell> room_cells_;
};

// Counts recomputed from the grid by enumeration.
struct LayoutStats {
    int room_count = 0;
    int exit_count = 0;
    int floor_cell_count = 0;
};

// Parses the ASCII map format:
//   first non-comment line  "WxH"
//   then H rows of exactly W glyphs
//   '#' wall, '.' hallway floor, 'a'..'z'/'A'..'Z' room floor, '+' door,
//   'E' exit; lines starting with ';' are comments.
// Throws MapSyntaxError / MapValidationError.
FloorLayout parse_layout(const std::string& source, std::string name = "");

// Canonical text form: dimension line plus glyph rows. Room cells keep the
// glyph their region was parsed with, so parse(serialize(x)) == x.
std::string serialize_layout(const FloorLayout& layout);

LayoutStats layout_stats(const FloorLayout& layout);

// Every cell the closed segment between the two cell centers touches,
// including cells grazed exactly at a lattice corner. Ordered from a to b.
std::vector<Cell> supercover_ray(Cell a, Cell b);

// True iff no Wall cell touches the segment between the cell centers.
// Doors and exits are transparent.
bool line_of_sight(const FloorLayout& layout, Cell a, Cell b);

} // namespace egress
