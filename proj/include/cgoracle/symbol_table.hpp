#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace cgoracle {

/// Dense interned id. The tag keeps function ids and file ids from mixing.
template <class Tag>
struct SymbolId {
  std::uint32_t value = 0;

  friend constexpr bool operator==(SymbolId, SymbolId) = default;
  friend constexpr auto operator<=>(SymbolId, SymbolId) = default;
};

struct FunctionTag {};
struct FileTag {};
using FunctionId = SymbolId<FunctionTag>;
using FileId = SymbolId<FileTag>;

/// Bijective string <-> id map. Ids are assigned densely in insertion order
/// and strings are stored once; views handed out stay valid for the table's
/// lifetime.
template <class Id>
class SymbolTable {
 public:
  SymbolTable() = default;
  SymbolTable(const SymbolTable& other) {
    index_.reserve(other.size());
    for (const auto& s : other.strings_) intern(s);
  }
  SymbolTable& operator=(const SymbolTable& other) {
    if (this != &other) *this = SymbolTable(other);
    return *this;
  }
  // deque moves keep element addresses, so the views in index_ stay valid.
  SymbolTable(SymbolTable&&) noexcept = default;
  SymbolTable& operator=(SymbolTable&&) noexcept = default;

  Id intern(std::string_view text) {
    if (auto it = index_.find(text); it != index_.end()) return it->second;
    const Id id{static_cast<std::uint32_t>(strings_.size())};
    const std::string& stored = strings_.emplace_back(text);
    index_.emplace(std::string_view(stored), id);
    bytes_ += stored.size();
    return id;
  }

  std::optional<Id> find(std::string_view text) const {
    if (auto it = index_.find(text); it != index_.end()) return it->second;
    return std::nullopt;
  }

  std::string_view text(Id id) const { return strings_.at(id.value); }

  std::size_t size() const { return strings_.size(); }
  bool empty() const { return strings_.empty(); }

  /// Approximate heap footprint, used for bench memory estimates.
  std::size_t memory_bytes() const {
    return bytes_ + strings_.size() * (sizeof(std::string) + 2 * sizeof(void*) + sizeof(Id) +
                                       sizeof(std::string_view));
  }

  void reserve(std::size_t n) { index_.reserve(n); }

 private:
  std::deque<std::string> strings_;
  std::unordered_map<std::string_view, Id> index_;
  std::size_t bytes_ = 0;
};

}  // namespace cgoracle

template <class Tag>
struct std::hash<cgoracle::SymbolId<Tag>> {
  std::size_t operator()(cgoracle::SymbolId<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
