#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>

#include <boost/container/small_vector.hpp>

namespace conjorder {

// Dynamic bitset over local variable ids; inline up to 128 bits.
class VarBits {
 public:
  VarBits() = default;
  explicit VarBits(std::size_t nbits) : w_((nbits + 63) / 64, 0) {}

  std::size_t words() const { return w_.size(); }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

  VarBits& operator|=(const VarBits& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  friend VarBits operator|(VarBits a, const VarBits& b) { return a |= b; }

  bool intersects(const VarBits& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }
  // (this & o) has a bit outside `mask`.
  bool intersects_outside(const VarBits& o, const VarBits& mask) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k] & ~mask.w_[k]) return true;
    return false;
  }
  bool subset_of(const VarBits& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }
  bool none() const {
    for (std::uint64_t x : w_)
      if (x) return false;
    return true;
  }
  VarBits intersect(const VarBits& o) const {
    VarBits r = *this;
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
    return r;
  }

  friend bool operator==(const VarBits& a, const VarBits& b) { return a.w_ == b.w_; }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (std::uint64_t x : w_) h = (h ^ x) * 0x100000001b3ull;
    return h;
  }

 private:
  boost::container::small_vector<std::uint64_t, 2> w_;
};

}  // namespace conjorder
