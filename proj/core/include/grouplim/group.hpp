#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace grouplim {

using Int = std::int64_t;

/// Element of a finitely generated abelian group, always in reduced form:
/// coordinate j lies in [0, m_j) for a finite factor Z_{m_j} and is an
/// arbitrary integer for an infinite factor Z (m_j = 0).
struct Elem {
  std::vector<Int> coords;

  Elem() = default;
  explicit Elem(std::vector<Int> c) : coords(std::move(c)) {}
  Elem(std::initializer_list<Int> c) : coords(c) {}

  std::size_t size() const noexcept { return coords.size(); }
  Int operator[](std::size_t j) const { return coords[j]; }

  friend bool operator==(const Elem&, const Elem&) = default;
  friend auto operator<=>(const Elem&, const Elem&) = default;
};

std::string to_string(const Elem& g);

/// Z^r x prod Z_{m_j}, encoded as a moduli vector (0 = infinite cyclic factor).
class GroupSpec {
 public:
  /// Throws ValidationError on an empty list or a negative modulus.
  explicit GroupSpec(std::vector<Int> moduli);

  std::span<const Int> moduli() const noexcept { return moduli_; }
  Int modulus(std::size_t j) const { return moduli_[j]; }
  std::size_t rank() const noexcept { return moduli_.size(); }
  bool is_finite() const noexcept { return finite_; }
  /// Number of elements. Throws UnsupportedError for infinite groups.
  std::size_t order() const;

  /// Reduce an arbitrary integer vector into canonical form.
  Elem reduce(std::vector<Int> coords) const;
  bool contains(const Elem& g) const;

  /// Mixed-radix indexing (last coordinate fastest). Finite groups only.
  std::size_t index_of(const Elem& g) const;
  Elem element_at(std::size_t index) const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.moduli_ == b.moduli_; }

 private:
  std::vector<Int> moduli_;
  bool finite_ = true;
  std::size_t order_ = 1;
};

std::string to_string(const GroupSpec& g);

GroupSpec make_group(std::vector<Int> moduli);

Elem zero(const GroupSpec& G);
Elem add(const Elem& g, const Elem& h, const GroupSpec& G);
Elem neg(const Elem& g, const GroupSpec& G);
Elem sub(const Elem& g, const Elem& h, const GroupSpec& G);
Elem scale(Int c, const Elem& g, const GroupSpec& G);
bool is_zero(const Elem& g, const GroupSpec& G);

/// sum_i c_i * g_i in G.
Elem signed_combination(std::span<const Int> coeffs, std::span<const Elem> elems, const GroupSpec& G);

/// Forward range over the elements of a finite group in index order.
class ElementRange {
 public:
  class iterator {
   public:
    using value_type = Elem;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    iterator(const GroupSpec* G, std::size_t i) : G_(G), i_(i) {}
    Elem operator*() const { return G_->element_at(i_); }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    iterator operator++(int) {
      auto tmp = *this;
      ++i_;
      return tmp;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.i_ == b.i_; }

   private:
    const GroupSpec* G_ = nullptr;
    std::size_t i_ = 0;
  };

  explicit ElementRange(const GroupSpec& G);
  iterator begin() const { return {&G_, 0}; }
  iterator end() const { return {&G_, n_}; }
  std::size_t size() const noexcept { return n_; }

 private:
  GroupSpec G_;
  std::size_t n_;
};

/// Throws UnsupportedError for infinite groups.
ElementRange enumerate(const GroupSpec& G);

/// Index-level arithmetic on a finite group, for inner loops that would
/// otherwise allocate an Elem per operation.
class FiniteIndexer {
 public:
  explicit FiniteIndexer(const GroupSpec& G);

  std::size_t order() const noexcept { return n_; }
  std::size_t add(std::size_t i, std::size_t j) const;
  std::size_t neg(std::size_t i) const;
  std::size_t scale(Int c, std::size_t i) const;
  /// Table t with t[i] = index of c * element_at(i).
  std::vector<std::uint32_t> scale_table(Int c) const;

 private:
  std::vector<Int> moduli_;
  std::vector<std::size_t> strides_;
  std::size_t n_;
  bool cyclic_;
  std::vector<std::uint32_t> add_table_;  // filled for small groups
};

struct ElemHash {
  std::size_t operator()(const Elem& g) const noexcept;
};

}  // namespace grouplim
