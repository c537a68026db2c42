#include "grouplim/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "grouplim/error.hpp"

namespace grouplim {
namespace {

Int floor_mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

struct BudgetExhausted {};

struct WorkCounter {
  std::uint64_t used = 0;
  std::uint64_t budget = std::numeric_limits<std::uint64_t>::max();
  void tick() {
    if (++used > budget) throw BudgetExhausted{};
  }
};

// Relation bookkeeping for a growing list of pairs (g_i, h_i). Elements are
// flattened into contiguous coordinate arrays so the inner walk does not
// allocate.
class RelationChecker {
 public:
  RelationChecker(const GroupSpec& G1, const GroupSpec& G2, int weight, WorkCounter& work)
      : mod1_(G1.moduli().begin(), G1.moduli().end()),
        mod2_(G2.moduli().begin(), G2.moduli().end()),
        weight_(weight),
        work_(work),
        acc1_(static_cast<std::size_t>(weight + 2) * mod1_.size()),
        acc2_(static_cast<std::size_t>(weight + 2) * mod2_.size()) {
    if (G1.is_finite() && G2.is_finite() && G1.order() <= kHomLimit) {
      ix1_.emplace(G1);
      ix2_.emplace(G2);
      G1_.emplace(G1);
      G2_.emplace(G2);
    }
  }

  void push(const Elem& g, const Elem& h) {
    dom_.insert(dom_.end(), g.coords.begin(), g.coords.end());
    img_.insert(img_.end(), h.coords.begin(), h.coords.end());
    if (ix1_) {
      gi_.push_back(G1_->index_of(g));
      hi_.push_back(G2_->index_of(h));
    }
    ++count_;
  }
  void pop() {
    dom_.resize(dom_.size() - mod1_.size());
    img_.resize(img_.size() - mod2_.size());
    if (ix1_) {
      gi_.pop_back();
      hi_.pop_back();
    }
    --count_;
    if (hom_.size() > count_) hom_.resize(count_);
  }

  // True when the pairs so far extend to an injective homomorphism of the
  // generated subgroup; then no relation of any length can break.
  bool last_certified() {
    hom_.resize(count_, false);
    const bool parent = count_ < 2 || hom_[count_ - 2];
    hom_[count_ - 1] = parent && ix1_ && extends_to_injective_hom();
    return hom_[count_ - 1];
  }

  // Every relation vector c with c_last > 0 and sum |c_i| <= weight is
  // either a relation on both sides or on neither. Vectors with c_last < 0
  // are negatives of these.
  bool last_consistent() {
    if (count_ == 0) return true;
    if (last_certified()) return true;
    const std::size_t last = count_ - 1;
    Int* a1 = level1(0);
    Int* a2 = level2(0);
    std::fill(a1, a1 + mod1_.size(), 0);
    std::fill(a2, a2 + mod2_.size(), 0);
    for (int c = 1; c <= weight_; ++c) {
      add_multiple(a1, dom(last), 1, mod1_);
      add_multiple(a2, img(last), 1, mod2_);
      if (!walk(0, last, weight_ - c, 0)) return false;
    }
    return true;
  }

 private:
  // Checks the vector stored at `depth`, then extends it by a nonzero
  // coefficient on one of the pairs in [next, limit).
  bool walk(std::size_t next, std::size_t limit, int remaining, std::size_t depth) {
    work_.tick();
    const Int* a1 = level1(depth);
    const Int* a2 = level2(depth);
    if (is_zero(a1, mod1_.size()) != is_zero(a2, mod2_.size())) return false;
    if (remaining == 0) return true;
    Int* b1 = level1(depth + 1);
    Int* b2 = level2(depth + 1);
    for (std::size_t i = next; i < limit; ++i) {
      for (Int sign : {Int{1}, Int{-1}}) {
        std::copy(a1, a1 + mod1_.size(), b1);
        std::copy(a2, a2 + mod2_.size(), b2);
        for (int c = 1; c <= remaining; ++c) {
          add_multiple(b1, dom(i), sign, mod1_);
          add_multiple(b2, img(i), sign, mod2_);
          if (!walk(i + 1, limit, remaining - c, depth + 1)) return false;
        }
      }
    }
    return true;
  }

  static void add_multiple(Int* acc, const Int* g, Int c, const std::vector<Int>& mod) {
    for (std::size_t j = 0; j < mod.size(); ++j) {
      Int v = acc[j] + c * g[j];
      acc[j] = mod[j] > 0 ? floor_mod(v, mod[j]) : v;
    }
  }
  static bool is_zero(const Int* a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] != 0) return false;
    }
    return true;
  }

  const Int* dom(std::size_t i) const { return dom_.data() + i * mod1_.size(); }
  const Int* img(std::size_t i) const { return img_.data() + i * mod2_.size(); }
  Int* level1(std::size_t d) { return acc1_.data() + d * mod1_.size(); }
  Int* level2(std::size_t d) { return acc2_.data() + d * mod2_.size(); }

  bool extends_to_injective_hom() {
    work_.tick();
    const std::size_t n1 = ix1_->order();
    image_.assign(n1, kNone);
    hit_.assign(ix2_->order(), false);
    queue_.clear();
    image_[0] = 0;
    hit_[0] = true;
    queue_.push_back(0);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::size_t x = queue_[head];
      const std::size_t y = image_[x];
      for (std::size_t i = 0; i < gi_.size(); ++i) {
        const std::size_t x2 = ix1_->add(x, gi_[i]);
        const std::size_t y2 = ix2_->add(y, hi_[i]);
        if (image_[x2] != kNone) {
          if (image_[x2] != y2) return false;
          continue;
        }
        if (hit_[y2]) return false;  // not injective
        image_[x2] = y2;
        hit_[y2] = true;
        queue_.push_back(x2);
      }
    }
    return true;
  }

  static constexpr std::size_t kHomLimit = 1u << 16;
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::vector<Int> mod1_, mod2_;
  int weight_;
  WorkCounter& work_;
  std::vector<Int> dom_, img_;
  std::vector<Int> acc1_, acc2_;
  std::size_t count_ = 0;

  std::optional<GroupSpec> G1_, G2_;
  std::optional<FiniteIndexer> ix1_, ix2_;
  std::vector<std::size_t> gi_, hi_;
  std::vector<bool> hom_;
  std::vector<std::size_t> image_, queue_;
  std::vector<bool> hit_;
};

struct Entry {
  Elem elem;
  Complex value;
  double magnitude;
};

std::vector<Entry> stored_entries(const SparseFn& f) {
  std::vector<Entry> out;
  out.reserve(f.size());
  for (const auto& [g, v] : f.entries()) out.push_back({g, v, std::abs(v)});
  return out;
}

// Candidate lists: for each query value, the indices of `pool` whose value
// lies within `tol`, ordered by distance then by element.
class ValueBuckets {
 public:
  ValueBuckets(const std::vector<Entry>& pool, double tol) : pool_(pool), tol_(tol) {
    for (std::size_t i = 0; i < pool.size(); ++i) cells_[cell_of(pool[i].value)].push_back(i);
  }

  std::vector<std::size_t> near(Complex v, const std::function<bool(std::size_t)>& admit) const {
    std::vector<std::pair<double, std::size_t>> hits;
    const auto [cx, cy] = cell_of(v);
    for (Int dx = -2; dx <= 2; ++dx) {
      for (Int dy = -2; dy <= 2; ++dy) {
        auto it = cells_.find({cx + dx, cy + dy});
        if (it == cells_.end()) continue;
        for (std::size_t i : it->second) {
          const double d = std::abs(v - pool_[i].value);
          if (d <= tol_ && admit(i)) hits.emplace_back(d, i);
        }
      }
    }
    std::sort(hits.begin(), hits.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return pool_[a.second].elem < pool_[b.second].elem;
    });
    std::vector<std::size_t> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back(h.second);
    return out;
  }

 private:
  std::pair<Int, Int> cell_of(Complex v) const {
    if (tol_ <= 0.0) return {0, 0};
    auto clampi = [](double x) {
      constexpr double kMax = 1e15;
      return static_cast<Int>(std::floor(std::clamp(x, -kMax, kMax)));
    };
    return {clampi(v.real() / tol_), clampi(v.imag() / tol_)};
  }

  const std::vector<Entry>& pool_;
  double tol_;
  std::map<std::pair<Int, Int>, std::vector<std::size_t>> cells_;
};

// Backtracking over matchings. Every index in required1 must be matched to a
// distinct entry of f2; afterwards every index in required2 that is still
// uncovered must receive a distinct preimage among the remaining entries of
// f1. Values of matched pairs differ by at most tol. `accept` is consulted
// on every complete matching.
class MatchingSearch {
 public:
  MatchingSearch(const SparseFn& f1, const SparseFn& f2, std::vector<Entry> e1, std::vector<Entry> e2,
                 std::vector<std::size_t> required1, std::vector<std::size_t> required2, double tol, int weight,
                 WorkCounter& work)
      : e1_(std::move(e1)),
        e2_(std::move(e2)),
        req2_(std::move(required2)),
        used1_(e1_.size(), false),
        used2_(e2_.size(), false),
        in_req1_(e1_.size(), false),
        weight_(weight),
        work_(work),
        checker_(f1.group(), f2.group(), weight, work) {
    for (std::size_t i : required1) in_req1_[i] = true;
    ValueBuckets into2(e2_, tol);
    std::vector<std::pair<std::vector<std::size_t>, std::size_t>> slots;
    for (std::size_t i : required1) slots.emplace_back(into2.near(e1_[i].value, [](std::size_t) { return true; }), i);
    // Fail-first: fewest candidates, then larger values, then element order.
    std::sort(slots.begin(), slots.end(), [&](const auto& a, const auto& b) {
      if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
      if (e1_[a.second].magnitude != e1_[b.second].magnitude) {
        return e1_[a.second].magnitude > e1_[b.second].magnitude;
      }
      return e1_[a.second].elem < e1_[b.second].elem;
    });
    for (auto& s : slots) {
      domain_.push_back(s.second);
      domain_candidates_.push_back(std::move(s.first));
    }
    ValueBuckets into1(e1_, tol);
    for (std::size_t j : req2_) {
      padding_candidates_[j] = into1.near(e2_[j].value, [this](std::size_t i) { return !in_req1_[i]; });
    }
    std::sort(req2_.begin(), req2_.end(), [&](std::size_t a, std::size_t b) {
      if (e2_[a].magnitude != e2_[b].magnitude) return e2_[a].magnitude > e2_[b].magnitude;
      return e2_[a].elem < e2_[b].elem;
    });
  }

  bool run(const std::function<bool(const PartialIso&)>& accept) {
    accept_ = &accept;
    for (const auto& c : domain_candidates_) {
      if (c.empty()) return false;
    }
    return assign_domain(0);
  }

  const PartialIso& result() const { return result_; }

 private:
  bool assign_domain(std::size_t k) {
    if (k == domain_.size()) return assign_padding(0);
    const std::size_t i = domain_[k];
    for (std::size_t j : domain_candidates_[k]) {
      if (used2_[j]) continue;
      work_.tick();
      if (try_pair(i, j, [&] { return assign_domain(k + 1); })) return true;
    }
    return false;
  }

  bool assign_padding(std::size_t t) {
    while (t < req2_.size() && used2_[req2_[t]]) ++t;
    if (t == req2_.size()) {
      PartialIso phi;
      phi.weight = weight_;
      for (auto [i, j] : pairs_) phi.pairs.emplace_back(e1_[i].elem, e2_[j].elem);
      if ((*accept_)(phi)) {
        result_ = std::move(phi);
        return true;
      }
      return false;
    }
    const std::size_t j = req2_[t];
    for (std::size_t i : padding_candidates_.at(j)) {
      if (used1_[i]) continue;
      work_.tick();
      if (try_pair(i, j, [&] { return assign_padding(t + 1); })) return true;
    }
    return false;
  }

  template <class Next>
  bool try_pair(std::size_t i, std::size_t j, Next&& next) {
    used1_[i] = used2_[j] = true;
    pairs_.emplace_back(i, j);
    checker_.push(e1_[i].elem, e2_[j].elem);
    bool ok = checker_.last_consistent() && next();
    if (!ok) {
      checker_.pop();
      pairs_.pop_back();
      used1_[i] = used2_[j] = false;
    }
    return ok;
  }

  std::vector<Entry> e1_, e2_;
  std::vector<std::size_t> domain_;
  std::vector<std::vector<std::size_t>> domain_candidates_;
  std::vector<std::size_t> req2_;
  std::map<std::size_t, std::vector<std::size_t>> padding_candidates_;
  std::vector<bool> used1_, used2_, in_req1_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  int weight_;
  WorkCounter& work_;
  RelationChecker checker_;
  const std::function<bool(const PartialIso&)>* accept_ = nullptr;
  PartialIso result_;
};

// Extends phi along the Cayley graph of <S1>. Succeeds iff phi extends to
// an injective homomorphism <S1> -> G2 within `limit` elements.
bool extends_to_injective_hom(const PartialIso& phi, const GroupSpec& G1, const GroupSpec& G2, std::size_t limit) {
  std::unordered_map<Elem, Elem, ElemHash> image;
  std::queue<Elem> frontier;
  image.emplace(zero(G1), zero(G2));
  frontier.push(zero(G1));
  while (!frontier.empty()) {
    Elem x = std::move(frontier.front());
    frontier.pop();
    const Elem y = image.at(x);
    for (const auto& [g, h] : phi.pairs) {
      Elem x2 = add(x, g, G1);
      Elem y2 = add(y, h, G2);
      auto it = image.find(x2);
      if (it != image.end()) {
        if (it->second != y2) return false;
        continue;
      }
      if (image.size() >= limit) return false;
      image.emplace(x2, std::move(y2));
      frontier.push(std::move(x2));
    }
  }
  std::unordered_set<Elem, ElemHash> seen;
  for (const auto& [x, y] : image) {
    if (!seen.insert(y).second) return false;
  }
  return true;
}

std::vector<double> critical_values(const std::vector<Entry>& e1, const std::vector<Entry>& e2, int weight_cap,
                                    double floor_eps, double diameter) {
  std::vector<double> c;
  auto keep = [&](double v) {
    if (v > floor_eps && v <= diameter && v > 0.0) c.push_back(v);
  };
  for (int m = 1; m <= weight_cap; ++m) keep(1.0 / m);
  for (const auto& a : e1) keep(a.magnitude);
  for (const auto& b : e2) keep(b.magnitude);
  for (const auto& a : e1) {
    for (const auto& b : e2) keep(std::abs(a.value - b.value));
  }
  keep(diameter);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

}  // namespace

int iso_weight(double eps) {
  if (!(eps > 0.0)) throw ValidationError("epsilon must be positive");
  const double inv = 1.0 / eps;
  // 1.0 / (1.0 / m) may round to m + ulp; do not let that bump the ceiling.
  const double r = std::round(inv);
  const double w = std::abs(inv - r) <= 1e-12 * std::max(1.0, r) ? r : std::ceil(inv);
  if (w > static_cast<double>(std::numeric_limits<int>::max() / 2)) return std::numeric_limits<int>::max() / 2;
  return std::max(1, static_cast<int>(w));
}

std::vector<Elem> supp_eps(const SparseFn& f, double eps) {
  if (!(eps > f.truncation_threshold()) || !(eps > 0.0)) {
    throw PrecisionError("epsilon " + std::to_string(eps) + " is not above the truncation threshold " +
                         std::to_string(f.truncation_threshold()));
  }
  std::vector<Elem> out;
  for (const auto& [g, v] : f.entries()) {
    if (std::abs(v) > eps) out.push_back(g);
  }
  const double norm = f.l2_norm();
  const double bound = norm * norm / (eps * eps);
  if (static_cast<double>(out.size()) > bound * (1.0 + 1e-9) + 1e-9) {
    throw InternalError("support bound violated: |supp_eps| = " + std::to_string(out.size()) + " > " +
                        std::to_string(bound));
  }
  return out;
}

bool check_partial_iso(const PartialIso& phi, const GroupSpec& G1, const GroupSpec& G2) {
  if (phi.weight < 1) return false;
  std::set<Elem> left, right;
  for (const auto& [g, h] : phi.pairs) {
    if (!G1.contains(g) || !G2.contains(h)) return false;
    if (!left.insert(g).second || !right.insert(h).second) return false;
  }
  WorkCounter work;
  RelationChecker checker(G1, G2, phi.weight, work);
  for (const auto& [g, h] : phi.pairs) {
    checker.push(g, h);
    if (!checker.last_consistent()) return false;
  }
  return true;
}

IsoSearch search_eps_iso(const SparseFn& f1, const SparseFn& f2, double eps, const DhatOptions& opts) {
  if (!(eps > 0.0)) throw ValidationError("epsilon must be positive");
  if (opts.weight_cap < 1) throw ValidationError("weight cap must be at least 1");
  IsoSearch out;
  const int full = iso_weight(eps);
  out.weight = std::min(full, opts.weight_cap);
  out.weight_capped = full > opts.weight_cap;

  const auto s1 = supp_eps(f1, eps);
  const auto s2 = supp_eps(f2, eps);
  auto e1 = stored_entries(f1);
  auto e2 = stored_entries(f2);
  std::vector<std::size_t> req1, req2;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    if (e1[i].magnitude > eps) req1.push_back(i);
  }
  for (std::size_t j = 0; j < e2.size(); ++j) {
    if (e2[j].magnitude > eps) req2.push_back(j);
  }
  if (req1.size() != s1.size() || req2.size() != s2.size()) throw InternalError("support bookkeeping mismatch");
  if (req1.size() > e2.size() || req2.size() > e1.size()) {
    out.status = SearchStatus::none;
    return out;
  }

  WorkCounter work;
  work.budget = opts.node_budget;
  try {
    MatchingSearch search(f1, f2, std::move(e1), std::move(e2), std::move(req1), std::move(req2), eps, out.weight,
                          work);
    if (search.run([](const PartialIso&) { return true; })) {
      out.status = SearchStatus::found;
      out.iso = search.result();
    } else {
      out.status = SearchStatus::none;
    }
  } catch (const BudgetExhausted&) {
    out.status = SearchStatus::budget_exceeded;
  }
  out.nodes = work.used;
  return out;
}

std::optional<PartialIso> exists_eps_iso(const SparseFn& f1, const SparseFn& f2, double eps, const DhatOptions& opts) {
  IsoSearch s = search_eps_iso(f1, f2, eps, opts);
  if (s.status == SearchStatus::budget_exceeded) {
    throw BudgetError("eps-isomorphism search exceeded " + std::to_string(opts.node_budget) + " nodes at eps=" +
                      std::to_string(eps));
  }
  return s.iso;
}

std::optional<PartialIso> find_isomorphism(const SparseFn& f1, const SparseFn& f2, const DhatOptions& opts) {
  if (f1.size() != f2.size()) return std::nullopt;
  auto e1 = stored_entries(f1);
  auto e2 = stored_entries(f2);
  double scale = 1.0;
  for (const auto& e : e1) scale = std::max(scale, e.magnitude);
  std::vector<std::size_t> all1(e1.size()), all2(e2.size());
  for (std::size_t i = 0; i < all1.size(); ++i) all1[i] = all2[i] = i;
  const std::size_t limit = static_cast<std::size_t>(std::min<std::uint64_t>(opts.node_budget, 1u << 20));
  WorkCounter work;
  work.budget = opts.node_budget;
  try {
    MatchingSearch search(f1, f2, std::move(e1), std::move(e2), std::move(all1), std::move(all2), 1e-12 * scale,
                          opts.weight_cap, work);
    auto certify = [&](const PartialIso& phi) { return extends_to_injective_hom(phi, f1.group(), f2.group(), limit); };
    if (search.run(certify)) return search.result();
  } catch (const BudgetExhausted&) {
  }
  return std::nullopt;
}

DistBracket dhat(const SparseFn& f1, const SparseFn& f2, const DhatOptions& opts) {
  if (opts.weight_cap < 1) throw ValidationError("weight cap must be at least 1");
  DistBracket out;
  if (f1 == f2) {
    PartialIso id;
    id.weight = opts.weight_cap;
    for (const auto& [g, v] : f1.entries()) id.pairs.emplace_back(g, g);
    out.witness = std::move(id);
    out.exact = true;
    return out;
  }
  const auto e1 = stored_entries(f1);
  const auto e2 = stored_entries(f2);
  double diameter = 0.0;
  for (const auto& e : e1) diameter = std::max(diameter, e.magnitude);
  for (const auto& e : e2) diameter = std::max(diameter, e.magnitude);
  if (diameter == 0.0) {
    out.witness = PartialIso{{}, opts.weight_cap};
    out.exact = true;
    return out;
  }
  const double floor_eps = std::max(f1.truncation_threshold(), f2.truncation_threshold());
  const auto cand = critical_values(e1, e2, opts.weight_cap, floor_eps, diameter);

  enum class Probe { untested, feasible, infeasible, unknown };
  std::vector<Probe> status(cand.size(), Probe::untested);
  std::vector<bool> capped(cand.size(), false);
  std::vector<std::optional<PartialIso>> witness(cand.size());

  // eps = diameter empties both supports, so the empty map works.
  const std::size_t top = cand.size() - 1;
  status[top] = Probe::feasible;
  witness[top] = PartialIso{{}, iso_weight(cand[top])};

  std::ptrdiff_t lo_idx = -1;
  std::size_t hi_idx = top;
  for (;;) {
    std::vector<std::size_t> open;
    for (std::size_t i = static_cast<std::size_t>(lo_idx + 1); i < hi_idx; ++i) {
      if (status[i] == Probe::untested) open.push_back(i);
    }
    if (open.empty()) break;
    const std::size_t mid = open[open.size() / 2];
    IsoSearch s = search_eps_iso(f1, f2, cand[mid], opts);
    ++out.probes;
    out.nodes += s.nodes;
    capped[mid] = s.weight_capped;
    switch (s.status) {
      case SearchStatus::found:
        status[mid] = Probe::feasible;
        witness[mid] = std::move(s.iso);
        hi_idx = mid;
        break;
      case SearchStatus::none:
        status[mid] = Probe::infeasible;
        lo_idx = static_cast<std::ptrdiff_t>(mid);
        break;
      case SearchStatus::budget_exceeded:
        status[mid] = Probe::unknown;
        break;
    }
  }
  for (std::size_t i = static_cast<std::size_t>(lo_idx + 1); i < hi_idx; ++i) {
    if (status[i] == Probe::unknown) out.budget_exceeded = true;
  }

  out.hi = cand[hi_idx];
  out.lo = lo_idx >= 0 ? cand[static_cast<std::size_t>(lo_idx)] : 0.0;
  out.witness = witness[hi_idx];
  out.weight_capped = capped[hi_idx];

  if (lo_idx < 0 && !out.budget_exceeded) {
    if (auto iso = find_isomorphism(f1, f2, opts)) {
      out.lo = out.hi = 0.0;
      out.witness = std::move(iso);
      out.weight_capped = false;
    }
  }
  out.exact = !out.weight_capped && !out.budget_exceeded && out.hi - out.lo <= 1e-12;
  return out;
}

DistBracket d_metric(const DenseFn& f1, const DenseFn& f2, const DhatOptions& opts) {
  return dhat(dft(f1), dft(f2), opts);
}

DistBracket dprime(const DenseFn& f1, const DenseFn& f2, const DhatOptions& opts) {
  DistBracket b = d_metric(f1, f2, opts);
  const double gap = std::abs(f1.l2_norm() - f2.l2_norm());
  b.lo += gap;
  b.hi += gap;
  return b;
}

}  // namespace grouplim
