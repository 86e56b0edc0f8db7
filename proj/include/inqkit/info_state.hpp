#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace inqkit {

// Models are limited to 64 worlds; world i is bit i.
inline constexpr std::size_t kMaxWorlds = 64;

// A set of worlds of one model, by dense world index.
class InfoState {
public:
  constexpr InfoState() = default;
  constexpr explicit InfoState(std::uint64_t bits) : bits_(bits) {}

  static constexpr InfoState singleton(std::size_t w) { return InfoState(std::uint64_t{1} << w); }
  static constexpr InfoState full(std::size_t n) {
    return InfoState(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t w) const { return (bits_ >> w) & 1u; }
  constexpr bool subset_of(InfoState other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr InfoState operator|(InfoState o) const { return InfoState(bits_ | o.bits_); }
  constexpr InfoState operator&(InfoState o) const { return InfoState(bits_ & o.bits_); }
  constexpr InfoState minus(InfoState o) const { return InfoState(bits_ & ~o.bits_); }
  InfoState& operator|=(InfoState o) { bits_ |= o.bits_; return *this; }
  InfoState with(std::size_t w) const { return InfoState(bits_ | (std::uint64_t{1} << w)); }

  constexpr bool operator==(const InfoState&) const = default;

  // Canonical order: by size, then by the sorted list of member indices.
  std::strong_ordering operator<=>(const InfoState& o) const {
    if (auto c = size() <=> o.size(); c != 0) return c;
    std::uint64_t a = bits_, b = o.bits_;
    while (a != 0 && b != 0) {
      auto la = std::countr_zero(a), lb = std::countr_zero(b);
      if (la != lb) return la <=> lb;
      a &= a - 1;
      b &= b - 1;
    }
    return std::strong_ordering::equal;
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint64_t m = bits_; m != 0; m &= m - 1)
      out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
  }

  template <class F> void for_each(F&& f) const {
    for (std::uint64_t m = bits_; m != 0; m &= m - 1)
      f(static_cast<std::size_t>(std::countr_zero(m)));
  }

  // Visits every subset of this state (including the empty one and itself).
  template <class F> void for_each_subset(F&& f) const {
    std::uint64_t sub = bits_;
    while (true) {
      f(InfoState(sub));
      if (sub == 0) break;
      sub = (sub - 1) & bits_;
    }
  }

private:
  std::uint64_t bits_ = 0;
};

} // namespace inqkit

template <> struct std::hash<inqkit::InfoState> {
  std::size_t operator()(const inqkit::InfoState& s) const noexcept {
    return std::hash<std::uint64_t>{}(s.bits());
  }
};
