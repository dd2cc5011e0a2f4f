#pragma once

// Finite groups given by multiplication tables.

#include <algorithm>
#include <map>
#include <memory>
#include <queue>
#include <string>
#include <vector>

#include "rigid/checked.hpp"

namespace rigid {

class FiniteGroup {
 public:
  FiniteGroup(std::size_t order, std::vector<std::size_t> table, std::string name = "")
      : n_(order), table_(std::move(table)), name_(std::move(name)) {
    if (n_ == 0) throw PreconditionError("FiniteGroup: order must be positive");
    if (table_.size() != n_ * n_) throw PreconditionError("FiniteGroup: table must have order^2 entries");
    for (auto x : table_)
      if (x >= n_) throw PreconditionError("FiniteGroup: table entry out of range");
    find_identity();
    check_axioms();
    gens_ = minimal_generators();
  }

  static FiniteGroup cyclic(std::size_t n) {
    std::vector<std::size_t> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a * n + b] = (a + b) % n;
    FiniteGroup g(n, std::move(t), "Z/" + std::to_string(n));
    g.gens_.clear();
    if (n > 1) g.gens_.push_back(1);
    return g;
  }

  /// Closure of permutations of {0..d-1}; element 0 is the identity and the
  /// given generators come next in order (duplicates dropped).
  static FiniteGroup from_permutations(const std::vector<std::vector<std::size_t>>& gens, std::string name = "") {
    if (gens.empty()) throw PreconditionError("from_permutations: need at least one generator");
    const std::size_t d = gens[0].size();
    using Perm = std::vector<std::size_t>;
    auto compose = [](const Perm& p, const Perm& q) {  // (p q)(x) = p(q(x))
      Perm r(q.size());
      for (std::size_t x = 0; x < q.size(); ++x) r[x] = p[q[x]];
      return r;
    };
    Perm id(d);
    for (std::size_t i = 0; i < d; ++i) id[i] = i;
    std::vector<Perm> elems{id};
    std::map<Perm, std::size_t> index{{id, 0}};
    for (const auto& g : gens) {
      if (g.size() != d) throw PreconditionError("from_permutations: generators of different degree");
      std::vector<bool> seen(d, false);
      for (auto x : g) {
        if (x >= d || seen[x]) throw PreconditionError("from_permutations: not a permutation");
        seen[x] = true;
      }
      if (!index.count(g)) {
        index[g] = elems.size();
        elems.push_back(g);
      }
    }
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (const auto& g : gens) {
        Perm p = compose(elems[i], g);
        if (!index.count(p)) {
          index[p] = elems.size();
          elems.push_back(p);
        }
      }
    const std::size_t n = elems.size();
    std::vector<std::size_t> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a * n + b] = index.at(compose(elems[a], elems[b]));
    FiniteGroup G(n, std::move(t), std::move(name));
    G.gens_.clear();
    for (const auto& g : gens)
      if (index.at(g) != 0 && std::find(G.gens_.begin(), G.gens_.end(), index.at(g)) == G.gens_.end())
        G.gens_.push_back(index.at(g));
    return G;
  }

  /// S_3 with element 1 a transposition and element 2 a 3-cycle.
  static FiniteGroup symmetric3() { return from_permutations({{1, 0, 2}, {1, 2, 0}}, "S3"); }

  static FiniteGroup klein() { return direct_product(cyclic(2), cyclic(2)); }

  /// Element (a, b) has index a * |B| + b.
  static FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B) {
    const std::size_t n = A.order() * B.order();
    std::vector<std::size_t> t(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        t[x * n + y] = A.mul(x / B.order(), y / B.order()) * B.order() + B.mul(x % B.order(), y % B.order());
    FiniteGroup G(n, std::move(t), A.name_ + " x " + B.name_);
    G.gens_.clear();
    for (auto g : A.gens_) G.gens_.push_back(g * B.order() + B.identity());
    for (auto g : B.gens_) G.gens_.push_back(A.identity() * B.order() + g);
    return G;
  }

  std::size_t order() const { return n_; }
  std::size_t identity() const { return e_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * n_ + b]; }
  std::size_t inv(std::size_t a) const { return inv_[a]; }
  std::size_t power(std::size_t a, Int k) const {
    if (k < 0) return power(inv(a), -k);
    std::size_t r = e_;
    for (Int i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }
  std::size_t element_order(std::size_t a) const {
    std::size_t k = 1;
    for (std::size_t x = a; x != e_; x = mul(x, a)) ++k;
    return k;
  }
  const std::vector<std::size_t>& generators() const { return gens_; }
  const std::vector<std::size_t>& table() const { return table_; }
  const std::string& name() const { return name_; }

  bool is_abelian() const {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  /// Number of i-tuples and lexicographic (first slot most significant) coding.
  std::size_t tuple_count(std::size_t i) const {
    std::size_t c = 1;
    for (std::size_t k = 0; k < i; ++k) c *= n_;
    return c;
  }
  std::vector<std::size_t> decode(std::size_t idx, std::size_t i) const {
    std::vector<std::size_t> g(i);
    for (std::size_t k = i; k-- > 0;) {
      g[k] = idx % n_;
      idx /= n_;
    }
    return g;
  }
  std::size_t encode(const std::vector<std::size_t>& g) const {
    std::size_t idx = 0;
    for (auto x : g) idx = idx * n_ + x;
    return idx;
  }

  /// Verifies associativity, identity and inverses exhaustively.
  void check_axioms() const {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        for (std::size_t c = 0; c < n_; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw PreconditionError("FiniteGroup: table is not associative");
  }

 private:
  void find_identity() {
    e_ = n_;
    for (std::size_t a = 0; a < n_ && e_ == n_; ++a) {
      bool ok = true;
      for (std::size_t b = 0; b < n_ && ok; ++b) ok = mul(a, b) == b && mul(b, a) == b;
      if (ok) e_ = a;
    }
    if (e_ == n_) throw PreconditionError("FiniteGroup: no identity element");
    inv_.assign(n_, n_);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (mul(a, b) == e_ && mul(b, a) == e_) inv_[a] = b;
    for (auto x : inv_)
      if (x == n_) throw PreconditionError("FiniteGroup: element without inverse");
  }

  std::vector<std::size_t> minimal_generators() const {
    std::vector<std::size_t> gens;
    std::vector<bool> in(n_, false);
    in[e_] = true;
    std::size_t count = 1;
    for (std::size_t cand = 0; cand < n_ && count < n_; ++cand) {
      if (in[cand]) continue;
      gens.push_back(cand);
      // close up
      std::queue<std::size_t> q;
      for (std::size_t x = 0; x < n_; ++x)
        if (in[x]) q.push(x);
      while (!q.empty()) {
        std::size_t x = q.front();
        q.pop();
        for (auto g : gens) {
          std::size_t y = mul(x, g);
          if (!in[y]) {
            in[y] = true;
            ++count;
            q.push(y);
          }
        }
      }
    }
    return gens;
  }

  std::size_t n_;
  std::vector<std::size_t> table_;
  std::string name_;
  std::size_t e_ = 0;
  std::vector<std::size_t> inv_;
  std::vector<std::size_t> gens_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr make_group(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

/// A surjective homomorphism of finite groups, given by its table.
class GroupSurjection {
 public:
  GroupSurjection(GroupPtr source, GroupPtr target, std::vector<std::size_t> map)
      : src_(std::move(source)), tgt_(std::move(target)), map_(std::move(map)) {
    if (map_.size() != src_->order()) throw PreconditionError("GroupSurjection: table has wrong length");
    std::vector<bool> hit(tgt_->order(), false);
    for (std::size_t a = 0; a < src_->order(); ++a) {
      if (map_[a] >= tgt_->order()) throw PreconditionError("GroupSurjection: value out of range");
      hit[map_[a]] = true;
      for (std::size_t b = 0; b < src_->order(); ++b)
        if (map_[src_->mul(a, b)] != tgt_->mul(map_[a], map_[b]))
          throw PreconditionError("GroupSurjection: not a homomorphism");
    }
    for (bool h : hit)
      if (!h) throw PreconditionError("GroupSurjection: not surjective");
  }

  static GroupSurjection identity(GroupPtr g) {
    std::vector<std::size_t> m(g->order());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = i;
    return GroupSurjection(g, g, std::move(m));
  }
  /// Z/m -> Z/n by reduction, n | m.
  static GroupSurjection cyclic_reduction(std::size_t m, std::size_t n) {
    if (n == 0 || m % n != 0) throw PreconditionError("cyclic_reduction: n must divide m");
    std::vector<std::size_t> t(m);
    for (std::size_t i = 0; i < m; ++i) t[i] = i % n;
    return GroupSurjection(make_group(FiniteGroup::cyclic(m)), make_group(FiniteGroup::cyclic(n)), std::move(t));
  }

  const GroupPtr& source() const { return src_; }
  const GroupPtr& target() const { return tgt_; }
  std::size_t operator()(std::size_t a) const { return map_[a]; }
  const std::vector<std::size_t>& table() const { return map_; }

 private:
  GroupPtr src_, tgt_;
  std::vector<std::size_t> map_;
};

/// Sign character of a permutation group realized by from_permutations is not
/// recoverable from the table alone, so the S_3 -> Z/2 sign map is computed
/// from element orders: elements of order 2 are the odd ones.
inline GroupSurjection s3_sign() {
  auto s3 = make_group(FiniteGroup::symmetric3());
  std::vector<std::size_t> t(6);
  for (std::size_t a = 0; a < 6; ++a) t[a] = s3->element_order(a) == 2 ? 1 : 0;
  return GroupSurjection(s3, make_group(FiniteGroup::cyclic(2)), std::move(t));
}

}  // namespace rigid
