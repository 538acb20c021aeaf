#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace obsfn {

using ElementId = std::size_t;

/// Subset of a structure with at most 64 members, stored as a bitmask.
class ElementSet {
 public:
  static constexpr std::size_t kCapacity = 64;

  constexpr ElementSet() = default;
  constexpr explicit ElementSet(std::uint64_t bits) : bits_(bits) {}

  static ElementSet singleton(ElementId e) { return ElementSet(std::uint64_t{1} << e); }
  static ElementSet first_n(std::size_t n) {
    return ElementSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static ElementSet from(const std::vector<ElementId>& ids) {
    ElementSet s;
    for (auto e : ids) s.insert(e);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  bool contains(ElementId e) const { return (bits_ >> e) & 1U; }
  void insert(ElementId e) { bits_ |= std::uint64_t{1} << e; }
  void erase(ElementId e) { bits_ &= ~(std::uint64_t{1} << e); }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

  bool is_subset_of(ElementSet o) const { return (bits_ & ~o.bits_) == 0; }
  ElementSet operator&(ElementSet o) const { return ElementSet(bits_ & o.bits_); }
  ElementSet operator|(ElementSet o) const { return ElementSet(bits_ | o.bits_); }
  ElementSet minus(ElementSet o) const { return ElementSet(bits_ & ~o.bits_); }
  ElementSet& operator&=(ElementSet o) { bits_ &= o.bits_; return *this; }
  ElementSet& operator|=(ElementSet o) { bits_ |= o.bits_; return *this; }

  /// Members in increasing index order.
  std::vector<ElementId> members() const {
    std::vector<ElementId> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<ElementId>(std::countr_zero(b)));
    }
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      f(static_cast<ElementId>(std::countr_zero(b)));
    }
  }

  friend bool operator==(ElementSet, ElementSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Canonical order: by size, then lexicographically by the sorted member list.
inline bool canonical_less(ElementSet a, ElementSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  auto ma = a.members();
  auto mb = b.members();
  return ma < mb;
}

}  // namespace obsfn
