#include "homesim/geometry.hpp"

#include <sstream>

namespace homesim {

const char* to_string(Direction d) {
    switch (d) {
        case Direction::North: return "north";
        case Direction::East: return "east";
        case Direction::South: return "south";
        case Direction::West: return "west";
    }
    return "north";
}

std::optional<Direction> direction_from_string(std::string_view s) {
    if (s == "north" || s == "n") return Direction::North;
    if (s == "east" || s == "e") return Direction::East;
    if (s == "south" || s == "s") return Direction::South;
    if (s == "west" || s == "w") return Direction::West;
    return std::nullopt;
}

std::optional<Direction> direction_between(Cell a, Cell b) {
    for (Direction d : kDirectionOrder)
        if (a + delta(d) == b) return d;
    return std::nullopt;
}

std::string to_string(const GridEdge& e) {
    auto [a, b] = e.cells();
    std::ostringstream os;
    os << "(" << a.x << "," << a.y << ")-(" << b.x << "," << b.y << ")";
    return os.str();
}

}  // namespace homesim
