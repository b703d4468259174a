#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string_view>

namespace kgr {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend constexpr auto operator<=>(const Triple&, const Triple&) = default;
};

// Which argument of a query triple is unknown. kHead answers (?, r, t),
// kTail answers (h, r, ?).
enum class Direction : std::uint8_t { kHead = 0, kTail = 1 };

constexpr Direction opposite(Direction d) noexcept {
  return d == Direction::kHead ? Direction::kTail : Direction::kHead;
}

constexpr std::string_view to_string(Direction d) noexcept {
  return d == Direction::kHead ? "head" : "tail";
}

bool parse_direction(std::string_view text, Direction& out) noexcept;

// Key for the per-(relation, direction) groupings used throughout.
struct RelationDirection {
  RelationId relation = 0;
  Direction direction = Direction::kHead;

  friend constexpr auto operator<=>(const RelationDirection&,
                                    const RelationDirection&) = default;
};

}  // namespace kgr

template <>
struct std::hash<kgr::Triple> {
  std::size_t operator()(const kgr::Triple& t) const noexcept {
    std::uint64_t x = (static_cast<std::uint64_t>(t.head) << 32) ^ t.tail;
    x ^= static_cast<std::uint64_t>(t.relation) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 29;
    return static_cast<std::size_t>(x);
  }
};
