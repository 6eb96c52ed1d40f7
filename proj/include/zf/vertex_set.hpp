#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace zf {

using Vertex = int;

/// Dense set over vertex ids 0..n-1, stored as a packed bitmask.
///
/// Every colored set, fort, forcing set and separator in the library is a
/// VertexSet. Two sets are only comparable when they share the same universe
/// size.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int universe) : n_(universe), words_(word_count(universe), 0) {
    if (universe < 0) throw std::invalid_argument("VertexSet: negative universe");
  }
  VertexSet(int universe, std::initializer_list<Vertex> members) : VertexSet(universe) {
    for (Vertex v : members) insert(v);
  }
  template <typename Range>
  static VertexSet from_range(int universe, const Range& members) {
    VertexSet s(universe);
    for (auto v : members) s.insert(static_cast<Vertex>(v));
    return s;
  }
  static VertexSet full(int universe) {
    VertexSet s(universe);
    s.fill();
    return s;
  }

  int universe() const { return n_; }
  std::size_t word_size() const { return words_.size(); }
  const std::uint64_t* words() const { return words_.data(); }
  std::uint64_t* words() { return words_.data(); }

  bool contains(Vertex v) const {
    return v >= 0 && v < n_ && ((words_[v >> 6] >> (v & 63)) & 1u);
  }
  void insert(Vertex v) {
    check(v);
    words_[v >> 6] |= std::uint64_t{1} << (v & 63);
  }
  void erase(Vertex v) {
    check(v);
    words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }
  void fill() {
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    trim();
  }

  int size() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool is_full() const { return size() == n_; }

  VertexSet& operator|=(const VertexSet& o) {
    same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) {
    same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  /// Set difference.
  VertexSet& operator-=(const VertexSet& o) {
    same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  VertexSet complement() const {
    VertexSet c(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) c.words_[i] = ~words_[i];
    c.trim();
    return c;
  }
  bool intersects(const VertexSet& o) const {
    same(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  bool is_subset_of(const VertexSet& o) const {
    same(o);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  /// Lowest member, or -1 when empty.
  Vertex first() const { return next(0); }
  /// Lowest member >= from, or -1.
  Vertex next(Vertex from) const {
    if (from >= n_) return -1;
    std::size_t wi = static_cast<std::size_t>(from) >> 6;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (w) return static_cast<Vertex>(wi * 64 + std::countr_zero(w));
      if (++wi == words_.size()) return -1;
      w = words_[wi];
    }
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        f(static_cast<Vertex>(wi * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }
  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(n_);
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  /// Orders by universe, then by the packed words from the highest word down
  /// (for n <= 64 this is numeric order of the bitmask).
  friend bool operator<(const VertexSet& a, const VertexSet& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
    return false;
  }

  std::string to_string() const;

  static std::size_t word_count(int universe) {
    return static_cast<std::size_t>((universe + 63) / 64);
  }

 private:
  void check(Vertex v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("VertexSet: vertex " + std::to_string(v) + " outside universe");
  }
  void same(const VertexSet& o) const {
    if (o.n_ != n_) throw std::invalid_argument("VertexSet: universe mismatch");
  }
  void trim() {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

inline std::string VertexSet::to_string() const {
  std::string s = "{";
  bool first_item = true;
  for_each([&](Vertex v) {
    if (!first_item) s += ",";
    s += std::to_string(v);
    first_item = false;
  });
  return s + "}";
}

}  // namespace zf

template <>
struct std::hash<zf::VertexSet> {
  std::size_t operator()(const zf::VertexSet& s) const noexcept { return s.hash(); }
};
