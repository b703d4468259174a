#include "kgr/vocabulary.hpp"

#include "kgr/error.hpp"
#include "kgr/types.hpp"

namespace kgr {

std::uint32_t Dictionary::intern(std::string_view name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> Dictionary::find(std::string_view name) const {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

const std::string& Dictionary::name(std::uint32_t id) const {
  if (id >= names_.size()) {
    throw DomainError("unknown id " + std::to_string(id));
  }
  return names_[id];
}

bool parse_direction(std::string_view text, Direction& out) noexcept {
  if (text == "head") {
    out = Direction::kHead;
    return true;
  }
  if (text == "tail") {
    out = Direction::kTail;
    return true;
  }
  return false;
}

}  // namespace kgr
