#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace conjorder {

// Interned name. Two symbols are equal iff their spellings are equal.
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view text);

  // Rebuilds a symbol from id(); the id must come from an interned symbol.
  static Symbol from_id(std::uint32_t id) { return Symbol(id); }

  const std::string& str() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;  // 0 is the empty string
};

}  // namespace conjorder

template <>
struct std::hash<conjorder::Symbol> {
  std::size_t operator()(conjorder::Symbol s) const noexcept { return s.id(); }
};
