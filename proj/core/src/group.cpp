#include "grouplim/group.hpp"

#include <limits>
#include <sstream>

#include "grouplim/error.hpp"

namespace grouplim {
namespace {

Int floor_mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

void require_same_rank(const Elem& g, const GroupSpec& G) {
  if (g.size() != G.rank()) {
    throw ValidationError("element " + to_string(g) + " has " + std::to_string(g.size()) +
                          " coordinates, group " + to_string(G) + " has rank " +
                          std::to_string(G.rank()));
  }
}

// Small enough that an order^2 addition table is cheap.
constexpr std::size_t kAddTableLimit = 1024;

}  // namespace

std::string to_string(const Elem& g) {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < g.size(); ++j) os << (j ? "," : "") << g[j];
  os << ')';
  return os.str();
}

GroupSpec::GroupSpec(std::vector<Int> moduli) : moduli_(std::move(moduli)) {
  if (moduli_.empty()) throw ValidationError("group needs at least one cyclic factor");
  for (Int m : moduli_) {
    if (m < 0) throw ValidationError("negative modulus " + std::to_string(m));
    if (m == 0) {
      finite_ = false;
      continue;
    }
    if (order_ > std::numeric_limits<std::size_t>::max() / 4 / static_cast<std::size_t>(m)) {
      throw ValidationError("group order overflows");
    }
    order_ *= static_cast<std::size_t>(m);
  }
}

std::size_t GroupSpec::order() const {
  if (!finite_) throw UnsupportedError("group " + to_string(*this) + " is infinite");
  return order_;
}

Elem GroupSpec::reduce(std::vector<Int> coords) const {
  if (coords.size() != moduli_.size()) {
    throw ValidationError("expected " + std::to_string(moduli_.size()) + " coordinates, got " +
                          std::to_string(coords.size()));
  }
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (moduli_[j] > 0) coords[j] = floor_mod(coords[j], moduli_[j]);
  }
  return Elem(std::move(coords));
}

bool GroupSpec::contains(const Elem& g) const {
  if (g.size() != moduli_.size()) return false;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (moduli_[j] > 0 && (g[j] < 0 || g[j] >= moduli_[j])) return false;
  }
  return true;
}

std::size_t GroupSpec::index_of(const Elem& g) const {
  if (!finite_) throw UnsupportedError("indexing requires a finite group");
  require_same_rank(g, *this);
  std::size_t idx = 0;
  for (std::size_t j = 0; j < moduli_.size(); ++j) {
    idx = idx * static_cast<std::size_t>(moduli_[j]) +
          static_cast<std::size_t>(floor_mod(g[j], moduli_[j]));
  }
  return idx;
}

Elem GroupSpec::element_at(std::size_t index) const {
  if (!finite_) throw UnsupportedError("indexing requires a finite group");
  if (index >= order_) throw ValidationError("element index out of range");
  std::vector<Int> c(moduli_.size());
  for (std::size_t j = moduli_.size(); j-- > 0;) {
    auto m = static_cast<std::size_t>(moduli_[j]);
    c[j] = static_cast<Int>(index % m);
    index /= m;
  }
  return Elem(std::move(c));
}

std::string to_string(const GroupSpec& G) {
  std::ostringstream os;
  for (std::size_t j = 0; j < G.rank(); ++j) {
    if (j) os << " x ";
    if (G.modulus(j) == 0) {
      os << "Z";
    } else {
      os << "Z_" << G.modulus(j);
    }
  }
  return os.str();
}

GroupSpec make_group(std::vector<Int> moduli) { return GroupSpec(std::move(moduli)); }

Elem zero(const GroupSpec& G) { return Elem(std::vector<Int>(G.rank(), 0)); }

Elem add(const Elem& g, const Elem& h, const GroupSpec& G) {
  require_same_rank(g, G);
  require_same_rank(h, G);
  std::vector<Int> c(G.rank());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = g[j] + h[j];
  return G.reduce(std::move(c));
}

Elem neg(const Elem& g, const GroupSpec& G) {
  require_same_rank(g, G);
  std::vector<Int> c(G.rank());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = -g[j];
  return G.reduce(std::move(c));
}

Elem sub(const Elem& g, const Elem& h, const GroupSpec& G) { return add(g, neg(h, G), G); }

Elem scale(Int k, const Elem& g, const GroupSpec& G) {
  require_same_rank(g, G);
  std::vector<Int> c(G.rank());
  for (std::size_t j = 0; j < c.size(); ++j) {
    Int m = G.modulus(j);
    c[j] = m > 0 ? floor_mod(floor_mod(k, m) * g[j], m) : k * g[j];
  }
  return G.reduce(std::move(c));
}

bool is_zero(const Elem& g, const GroupSpec& G) {
  require_same_rank(g, G);
  for (std::size_t j = 0; j < g.size(); ++j) {
    Int m = G.modulus(j);
    if ((m > 0 ? floor_mod(g[j], m) : g[j]) != 0) return false;
  }
  return true;
}

Elem signed_combination(std::span<const Int> coeffs, std::span<const Elem> elems, const GroupSpec& G) {
  if (coeffs.size() != elems.size()) {
    throw ValidationError("signed_combination: " + std::to_string(coeffs.size()) + " coefficients for " +
                          std::to_string(elems.size()) + " elements");
  }
  Elem acc = zero(G);
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc = add(acc, scale(coeffs[i], elems[i], G), G);
  return acc;
}

ElementRange::ElementRange(const GroupSpec& G) : G_(G), n_(G.order()) {}

ElementRange enumerate(const GroupSpec& G) {
  if (!G.is_finite()) throw UnsupportedError("cannot enumerate infinite group " + to_string(G));
  return ElementRange(G);
}

FiniteIndexer::FiniteIndexer(const GroupSpec& G)
    : moduli_(G.moduli().begin(), G.moduli().end()), strides_(G.rank()), n_(G.order()), cyclic_(G.rank() == 1) {
  std::size_t s = 1;
  for (std::size_t j = moduli_.size(); j-- > 0;) {
    strides_[j] = s;
    s *= static_cast<std::size_t>(moduli_[j]);
  }
  if (!cyclic_ && n_ <= kAddTableLimit) {
    add_table_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < n_; ++k) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < moduli_.size(); ++j) {
          auto m = static_cast<std::size_t>(moduli_[j]);
          std::size_t a = (i / strides_[j]) % m;
          std::size_t b = (k / strides_[j]) % m;
          idx += ((a + b) % m) * strides_[j];
        }
        add_table_[i * n_ + k] = static_cast<std::uint32_t>(idx);
      }
    }
  }
}

std::size_t FiniteIndexer::add(std::size_t i, std::size_t k) const {
  if (cyclic_) {
    std::size_t s = i + k;
    return s >= n_ ? s - n_ : s;
  }
  if (!add_table_.empty()) return add_table_[i * n_ + k];
  std::size_t idx = 0;
  for (std::size_t j = 0; j < moduli_.size(); ++j) {
    auto m = static_cast<std::size_t>(moduli_[j]);
    std::size_t a = (i / strides_[j]) % m;
    std::size_t b = (k / strides_[j]) % m;
    std::size_t s = a + b;
    idx += (s >= m ? s - m : s) * strides_[j];
  }
  return idx;
}

std::size_t FiniteIndexer::neg(std::size_t i) const {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < moduli_.size(); ++j) {
    auto m = static_cast<std::size_t>(moduli_[j]);
    std::size_t a = (i / strides_[j]) % m;
    idx += ((m - a) % m) * strides_[j];
  }
  return idx;
}

std::size_t FiniteIndexer::scale(Int c, std::size_t i) const {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < moduli_.size(); ++j) {
    Int m = moduli_[j];
    auto a = static_cast<Int>((i / strides_[j]) % static_cast<std::size_t>(m));
    idx += static_cast<std::size_t>(floor_mod(floor_mod(c, m) * a, m)) * strides_[j];
  }
  return idx;
}

std::vector<std::uint32_t> FiniteIndexer::scale_table(Int c) const {
  std::vector<std::uint32_t> t(n_);
  for (std::size_t i = 0; i < n_; ++i) t[i] = static_cast<std::uint32_t>(scale(c, i));
  return t;
}

std::size_t ElemHash::operator()(const Elem& g) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (Int c : g.coords) {
    h ^= std::hash<Int>{}(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace grouplim
