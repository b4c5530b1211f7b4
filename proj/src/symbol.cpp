#include "conjorder/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace conjorder {
namespace {

struct Table {
  std::shared_mutex mutex;
  std::deque<std::string> names{std::string()};
  std::unordered_map<std::string_view, std::uint32_t> ids{{std::string_view(), 0}};
};

Table& table() {
  static Table t;
  return t;
}

}  // namespace

Symbol Symbol::intern(std::string_view text) {
  Table& t = table();
  {
    std::shared_lock lock(t.mutex);
    auto it = t.ids.find(text);
    if (it != t.ids.end()) return Symbol(it->second);
  }
  std::unique_lock lock(t.mutex);
  auto it = t.ids.find(text);
  if (it != t.ids.end()) return Symbol(it->second);
  const auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(text);
  t.ids.emplace(t.names.back(), id);
  return Symbol(id);
}

const std::string& Symbol::str() const {
  Table& t = table();
  std::shared_lock lock(t.mutex);
  return t.names[id_];  // deque never relocates elements
}

}  // namespace conjorder
