#pragma once

// Modules over a finite group and their cohomology in degrees -1 .. 2.
//
// Cochains of degree i are tables over G^i in lexicographic tuple order
// (FiniteGroup::encode), each entry a vector in the module's generator
// coordinates. Degree 0 and the Tate degrees use tables with a single entry.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rigid/abgroup.hpp"
#include "rigid/finite_group.hpp"

namespace rigid {

using CochainTable = std::vector<IntVec>;

class GammaModule {
 public:
  /// One action matrix per group element, in element order.
  GammaModule(GroupPtr G, FinAb M, std::vector<IntMatrix> actions)
      : G_(std::move(G)), M_(std::move(M)), act_(std::move(actions)) {
    validate();
  }

  /// Extends the actions of G's generators to the whole group.
  static GammaModule from_generators(GroupPtr G, FinAb M, const std::vector<IntMatrix>& gen_actions) {
    const auto& gens = G->generators();
    if (gen_actions.size() != gens.size())
      throw PreconditionError("GammaModule::from_generators: need one matrix per group generator");
    const std::size_t n = M.ngens();
    std::vector<IntMatrix> act(G->order());
    std::vector<bool> known(G->order(), false);
    act[G->identity()] = IntMatrix::identity(n);
    known[G->identity()] = true;
    std::vector<std::size_t> frontier{G->identity()};
    while (!frontier.empty()) {
      std::vector<std::size_t> next;
      for (auto x : frontier)
        for (std::size_t k = 0; k < gens.size(); ++k) {
          std::size_t y = G->mul(x, gens[k]);
          if (known[y]) continue;
          act[y] = reduce_matrix(M, act[x] * gen_actions[k]);
          known[y] = true;
          next.push_back(y);
        }
      frontier = std::move(next);
    }
    return GammaModule(std::move(G), std::move(M), std::move(act));
  }

  static GammaModule trivial(GroupPtr G, FinAb M) {
    std::vector<IntMatrix> act(G->order(), IntMatrix::identity(M.ngens()));
    return GammaModule(std::move(G), std::move(M), std::move(act));
  }

  /// Z with the generator(s) acting through a sign character given per element.
  static GammaModule sign(GroupPtr G, const std::vector<int>& signs) {
    std::vector<IntMatrix> act;
    for (int s : signs) act.push_back(IntMatrix{{static_cast<Int>(s)}});
    return GammaModule(std::move(G), FinAb::free(1), std::move(act));
  }

  /// (Z/d)[G] with left multiplication; d = 0 gives Z[G].
  static GammaModule regular(GroupPtr G, Int d = 0) {
    const std::size_t N = G->order();
    std::vector<IntMatrix> act;
    for (std::size_t g = 0; g < N; ++g) {
      IntMatrix m(N, N);
      for (std::size_t h = 0; h < N; ++h) m(G->mul(g, h), h) = 1;
      act.push_back(m);
    }
    std::vector<Int> inv(N, d);
    return GammaModule(std::move(G), FinAb::from_invariants(inv), std::move(act));
  }

  /// A lattice Z^r with the given action on G's generators.
  static GammaModule lattice(GroupPtr G, const std::vector<IntMatrix>& gen_actions) {
    std::size_t r = gen_actions.empty() ? 0 : gen_actions[0].rows();
    return from_generators(std::move(G), FinAb::free(r), gen_actions);
  }

  const GroupPtr& group_ptr() const { return G_; }
  const FiniteGroup& group() const { return *G_; }
  const FinAb& module() const { return M_; }
  std::size_t ngens() const { return M_.ngens(); }
  const IntMatrix& act(std::size_t g) const { return act_.at(g); }
  const std::vector<IntMatrix>& actions() const { return act_; }
  IntVec apply(std::size_t g, const IntVec& x) const { return act_.at(g) * x; }

  IntMatrix norm_matrix() const {
    IntMatrix s(ngens(), ngens());
    for (const auto& a : act_) s = s + a;
    return s;
  }
  AbHom norm_map() const { return AbHom(M_, M_, norm_matrix()); }

  /// Generators (g - 1) e_j for all g and all generators e_j.
  std::vector<IntVec> augmentation_generators() const {
    std::vector<IntVec> out;
    IntMatrix I = IntMatrix::identity(ngens());
    for (std::size_t g = 0; g < G_->order(); ++g) {
      if (g == G_->identity()) continue;
      IntMatrix d = act_[g] - I;
      for (std::size_t j = 0; j < ngens(); ++j) {
        IntVec c = d.column(j);
        if (!vec_is_zero(c)) out.push_back(c);
      }
    }
    return out;
  }
  SubGroup augmentation_submodule() const { return generated_subgroup(M_, augmentation_generators()); }

  /// Lattice in Z^n of vectors whose class is G-invariant.
  std::vector<IntVec> invariant_lattice() const {
    const auto& gens = G_->generators();
    const std::size_t n = ngens();
    if (gens.empty() || n == 0) {
      std::vector<IntVec> all;
      for (std::size_t j = 0; j < n; ++j) all.push_back(IntMatrix::identity(n).column(j));
      return all;
    }
    IntMatrix stack(0, n);
    for (auto g : gens) stack = vcat(stack, act_[g] - IntMatrix::identity(n));
    std::vector<IntVec> rel;
    for (std::size_t k = 0; k < gens.size(); ++k)
      for (const auto& r : M_.relation_columns()) {
        IntVec c(n * gens.size(), 0);
        std::copy(r.begin(), r.end(), c.begin() + static_cast<std::ptrdiff_t>(k * n));
        rel.push_back(c);
      }
    return preimage(stack, rel);
  }
  SubGroup invariants() const { return generated_subgroup(M_, invariant_lattice()); }

  FinAb coinvariants() const {
    auto rel = M_.relation_columns();
    auto aug = augmentation_generators();
    rel.insert(rel.end(), aug.begin(), aug.end());
    return FinAb(ngens(), IntMatrix::from_columns(ngens(), rel));
  }

  bool is_invariant(const IntVec& x) const {
    for (auto g : G_->generators())
      if (!M_.equal(apply(g, x), x)) return false;
    return true;
  }

  /// f : this -> target commutes with every group element.
  bool is_equivariant(const IntMatrix& f, const GammaModule& target) const {
    if (f.rows() != target.ngens() || f.cols() != ngens()) return false;
    for (const auto& r : M_.relation_columns())
      if (!target.module().is_zero(f * r)) return false;
    for (std::size_t g = 0; g < G_->order(); ++g) {
      IntMatrix a = f * act_[g], b = target.act(g) * f;
      for (std::size_t j = 0; j < ngens(); ++j)
        if (!target.module().equal(a.column(j), b.column(j))) return false;
    }
    return true;
  }

  /// The module viewed over a larger group through a surjection onto G.
  GammaModule inflate(const GroupSurjection& pi) const {
    if (pi.target().get() != G_.get() && pi.target()->table() != G_->table())
      throw PreconditionError("GammaModule::inflate: surjection does not land in the module's group");
    std::vector<IntMatrix> act;
    for (std::size_t g = 0; g < pi.source()->order(); ++g) act.push_back(act_[pi(g)]);
    return GammaModule(pi.source(), M_, std::move(act));
  }

  struct Canonical {
    std::shared_ptr<const GammaModule> module;
    IntMatrix to_original, from_original;
  };
  /// The same module on its invariant factor generators.
  Canonical canonical() const {
    auto c = M_.canonical_presentation();
    std::vector<IntMatrix> act;
    for (const auto& a : act_) act.push_back(reduce_matrix(*c.group, c.from_original * a * c.to_original));
    return {std::make_shared<const GammaModule>(G_, *c.group, std::move(act)), c.to_original, c.from_original};
  }

  /// Submodule on the given subgroup; its generators must span a G-stable subgroup.
  GammaModule submodule(const SubGroup& H) const {
    const std::size_t k = H.group.ngens();
    auto rel = M_.relation_columns();
    IntMatrix BR = hcat(H.basis, IntMatrix::from_columns(ngens(), rel));
    LatticeSolver solver(BR);
    std::vector<IntMatrix> act;
    for (std::size_t g = 0; g < G_->order(); ++g) {
      IntMatrix m(k, k);
      for (std::size_t j = 0; j < k; ++j) {
        auto z = solver(act_[g] * H.basis.column(j));
        if (!z) throw PreconditionError("GammaModule::submodule: subgroup is not stable");
        for (std::size_t i = 0; i < k; ++i) m(i, j) = (*z)[i];
      }
      act.push_back(m);
    }
    return GammaModule(G_, H.group, std::move(act));
  }

  /// Quotient by the submodule generated (as a group) by the given stable set.
  GammaModule quotient(const std::vector<IntVec>& gens) const {
    auto rel = M_.relation_columns();
    rel.insert(rel.end(), gens.begin(), gens.end());
    return GammaModule(G_, FinAb(ngens(), IntMatrix::from_columns(ngens(), rel)), act_);
  }

  static IntMatrix reduce_matrix(const FinAb& M, const IntMatrix& a) {
    IntMatrix out(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
      IntVec c = M.reduce(a.column(j));
      for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = c[i];
    }
    return out;
  }

 private:
  void validate() const {
    const std::size_t n = M_.ngens();
    if (act_.size() != G_->order()) throw PreconditionError("GammaModule: need one action matrix per group element");
    for (const auto& a : act_) {
      if (a.rows() != n || a.cols() != n) throw PreconditionError("GammaModule: action matrix has wrong shape");
      for (const auto& r : M_.relation_columns())
        if (!M_.is_zero(a * r)) throw PreconditionError("GammaModule: action does not preserve relations");
    }
    auto same = [&](const IntMatrix& a, const IntMatrix& b) {
      for (std::size_t j = 0; j < n; ++j)
        if (!M_.equal(a.column(j), b.column(j))) return false;
      return true;
    };
    if (!same(act_[G_->identity()], IntMatrix::identity(n)))
      throw PreconditionError("GammaModule: identity does not act trivially");
    for (std::size_t g = 0; g < G_->order(); ++g)
      for (std::size_t h = 0; h < G_->order(); ++h)
        if (!same(act_[G_->mul(g, h)], act_[g] * act_[h]))
          throw PreconditionError("GammaModule: action is not multiplicative");
  }

  GroupPtr G_;
  FinAb M_;
  std::vector<IntMatrix> act_;
};

/// A cohomology group with maps between classes and cocycle tables.
struct ClassGroup {
  int degree = 0;
  FinAb group;
  /// Class coordinates -> cocycle table in the module's original coordinates.
  std::function<CochainTable(const IntVec&)> representative;
  /// Cocycle table -> reduced class coordinates in `group`'s generators.
  std::function<IntVec(const CochainTable&)> reduce;

  Int order() const { return group.order(); }
  std::string structure() const { return group.structure(); }
  bool is_zero_class(const CochainTable& f) const { return group.is_zero(reduce(f)); }
};

namespace detail {

/// Inhomogeneous differential on full tables.
inline CochainTable bar_differential(const GammaModule& A, const CochainTable& f, std::size_t i) {
  const FiniteGroup& G = A.group();
  const std::size_t n = A.ngens();
  if (f.size() != G.tuple_count(i)) throw PreconditionError("bar_differential: table size does not match degree");
  CochainTable out(G.tuple_count(i + 1), IntVec(n, 0));
  std::vector<std::size_t> sub(i);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    auto g = G.decode(idx, i + 1);
    IntVec acc(n, 0);
    // g1 f(g2..)
    std::copy(g.begin() + 1, g.end(), sub.begin());
    acc = vec_add(acc, A.apply(g[0], f[G.encode(sub)]));
    for (std::size_t k = 0; k < i; ++k) {
      for (std::size_t t = 0, s = 0; t < i + 1; ++t) {
        if (t == k) {
          sub[s++] = G.mul(g[k], g[k + 1]);
          ++t;
        } else {
          sub[s++] = g[t];
        }
      }
      const IntVec& v = f[G.encode(sub)];
      acc = (k % 2 == 0) ? vec_sub(acc, v) : vec_add(acc, v);
    }
    std::copy(g.begin(), g.end() - 1, sub.begin());
    const IntVec& last = f[G.encode(sub)];
    acc = (i % 2 == 0) ? vec_sub(acc, last) : vec_add(acc, last);
    out[idx] = acc;
  }
  return out;
}

/// Differential C^i_norm -> C^{i+1}_norm on cochains supported on non-identity tuples.
class NormalizedComplex {
 public:
  explicit NormalizedComplex(const GammaModule& A) : A_(A), G_(A.group()) {
    for (std::size_t g = 0; g < G_.order(); ++g)
      if (g != G_.identity()) nonid_.push_back(g);
    pos_.assign(G_.order(), SIZE_MAX);
    for (std::size_t k = 0; k < nonid_.size(); ++k) pos_[nonid_[k]] = k;
  }

  std::size_t tuples(std::size_t i) const {
    std::size_t c = 1;
    for (std::size_t k = 0; k < i; ++k) c *= nonid_.size();
    return c;
  }
  std::vector<std::size_t> decode(std::size_t idx, std::size_t i) const {
    std::vector<std::size_t> g(i);
    for (std::size_t k = i; k-- > 0;) {
      g[k] = nonid_[idx % nonid_.size()];
      idx /= nonid_.size();
    }
    return g;
  }
  /// Index of a tuple, or SIZE_MAX if some entry is the identity.
  std::size_t encode(const std::vector<std::size_t>& g) const {
    std::size_t idx = 0;
    for (auto x : g) {
      if (pos_[x] == SIZE_MAX) return SIZE_MAX;
      idx = idx * nonid_.size() + pos_[x];
    }
    return idx;
  }

  IntMatrix differential(std::size_t i) const {
    const std::size_t n = A_.ngens();
    const std::size_t rows = tuples(i + 1) * n, cols = tuples(i) * n;
    IntMatrix D(rows, cols);
    auto add_block = [&](std::size_t out, std::size_t in, const IntMatrix& blk, Int sign) {
      if (in == SIZE_MAX) return;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          D(out * n + a, in * n + b) = add_checked(D(out * n + a, in * n + b), sign * blk(a, b));
    };
    const IntMatrix I = IntMatrix::identity(n);
    std::vector<std::size_t> sub(i);
    for (std::size_t out = 0; out < tuples(i + 1); ++out) {
      auto g = decode(out, i + 1);
      std::copy(g.begin() + 1, g.end(), sub.begin());
      add_block(out, encode(sub), A_.act(g[0]), 1);
      for (std::size_t k = 0; k < i; ++k) {
        for (std::size_t t = 0, s = 0; t < i + 1; ++t) {
          if (t == k) {
            sub[s++] = G_.mul(g[k], g[k + 1]);
            ++t;
          } else {
            sub[s++] = g[t];
          }
        }
        add_block(out, encode(sub), I, (k % 2 == 0) ? -1 : 1);
      }
      std::copy(g.begin(), g.end() - 1, sub.begin());
      add_block(out, encode(sub), I, (i % 2 == 0) ? -1 : 1);
    }
    return D;
  }

  /// Relation lattice of C^i_norm = M^{tuples(i)}.
  std::vector<IntVec> relations(std::size_t i) const {
    const std::size_t n = A_.ngens();
    std::vector<IntVec> out;
    auto rel = A_.module().relation_columns();
    for (std::size_t t = 0; t < tuples(i); ++t)
      for (const auto& r : rel) {
        IntVec c(tuples(i) * n, 0);
        std::copy(r.begin(), r.end(), c.begin() + static_cast<std::ptrdiff_t>(t * n));
        out.push_back(c);
      }
    return out;
  }

  const std::vector<std::size_t>& nonidentity() const { return nonid_; }

 private:
  const GammaModule& A_;
  const FiniteGroup& G_;
  std::vector<std::size_t> nonid_;
  std::vector<std::size_t> pos_;
};

}  // namespace detail

inline CochainTable bar_differential(const GammaModule& A, const CochainTable& f, std::size_t i) {
  return detail::bar_differential(A, f, i);
}

/// Ĥ^{-1} = ker N / I M.
inline ClassGroup tate_minus1(const GammaModule& A) {
  const std::size_t n = A.ngens();
  auto rel = A.module().relation_columns();
  auto L1 = preimage(A.norm_matrix(), rel);
  auto L2 = A.augmentation_generators();
  L2.insert(L2.end(), rel.begin(), rel.end());
  L1.insert(L1.end(), rel.begin(), rel.end());
  auto sq = std::make_shared<Subquotient>(n, L1, L2);
  ClassGroup c;
  c.degree = -1;
  c.group = sq->group();
  c.representative = [sq](const IntVec& h) { return CochainTable{sq->include(h)}; };
  c.reduce = [sq](const CochainTable& f) { return sq->group().reduce(sq->coords(f.at(0))); };
  return c;
}

/// Ĥ^0 = M^G / N M.
inline ClassGroup tate_zero(const GammaModule& A) {
  const std::size_t n = A.ngens();
  auto rel = A.module().relation_columns();
  auto L1 = A.invariant_lattice();
  auto L2 = A.norm_matrix().columns();
  L2.insert(L2.end(), rel.begin(), rel.end());
  auto sq = std::make_shared<Subquotient>(n, L1, L2);
  ClassGroup c;
  c.degree = 0;
  c.group = sq->group();
  c.representative = [sq](const IntVec& h) { return CochainTable{sq->include(h)}; };
  c.reduce = [sq](const CochainTable& f) { return sq->group().reduce(sq->coords(f.at(0))); };
  return c;
}

/// Ordinary H^i for i = 1, 2 from the normalized bar complex.
inline ClassGroup cohomology(int degree, const GammaModule& A) {
  if (degree != 1 && degree != 2) throw PreconditionError("cohomology: only degrees 1 and 2 are supported");
  const std::size_t i = static_cast<std::size_t>(degree);
  auto canon = A.canonical();
  auto Ac = canon.module;
  auto cx = std::make_shared<detail::NormalizedComplex>(*Ac);
  const std::size_t r = Ac->ngens();
  const std::size_t dim = cx->tuples(i) * r;

  IntMatrix Di = cx->differential(i);
  // finite modules: the cocycles contain e Z^dim, so work mod the exponent
  const Int e = Ac->module().is_finite() ? Ac->module().exponent() : 0;
  auto Z = e ? preimage_mod(Di, cx->relations(i + 1), e) : preimage(Di, cx->relations(i + 1));
  auto B = cx->differential(i - 1).columns();
  auto rel = cx->relations(i);
  B.insert(B.end(), rel.begin(), rel.end());
  auto sq = std::make_shared<Subquotient>(dim, Z, B);

  const FiniteGroup& G = A.group();
  const std::size_t n = A.ngens();
  IntMatrix to = canon.to_original, from = canon.from_original;
  GroupPtr Gp = A.group_ptr();

  ClassGroup c;
  c.degree = degree;
  c.group = sq->group();
  c.representative = [sq, cx, Gp, to, i, r, n](const IntVec& h) {
    IntVec flat = sq->include(h);
    CochainTable f(Gp->tuple_count(i), IntVec(n, 0));
    for (std::size_t t = 0; t < cx->tuples(i); ++t) {
      IntVec v(flat.begin() + static_cast<std::ptrdiff_t>(t * r), flat.begin() + static_cast<std::ptrdiff_t>((t + 1) * r));
      f[Gp->encode(cx->decode(t, i))] = to * v;
    }
    return f;
  };
  c.reduce = [sq, cx, Ac, Gp, from, i, r](const CochainTable& f_orig) {
    const FiniteGroup& G = *Gp;
    if (f_orig.size() != G.tuple_count(i)) throw PreconditionError("cohomology reduce: table has wrong size");
    CochainTable f;
    for (const auto& v : f_orig) f.push_back(from * v);
    if (i == 2) {
      // subtract d b with b constant f(1,1) to normalize
      const IntVec c11 = f[G.encode({G.identity(), G.identity()})];
      for (std::size_t idx = 0; idx < f.size(); ++idx) {
        auto g = G.decode(idx, 2);
        f[idx] = vec_sub(f[idx], Ac->apply(g[0], c11));
      }
    }
    IntVec flat(cx->tuples(i) * r, 0);
    for (std::size_t t = 0; t < cx->tuples(i); ++t) {
      const IntVec& v = f[G.encode(cx->decode(t, i))];
      std::copy(v.begin(), v.end(), flat.begin() + static_cast<std::ptrdiff_t>(t * r));
    }
    return sq->group().reduce(sq->coords(flat));
  };
  (void)G;
  return c;
}

/// Ĥ^{-1}, Ĥ^0, H^1 or H^2.
inline ClassGroup tate(int degree, const GammaModule& A) {
  switch (degree) {
    case -1: return tate_minus1(A);
    case 0: return tate_zero(A);
    case 1:
    case 2: return cohomology(degree, A);
    default: throw PreconditionError("tate: degree must be in -1..2");
  }
}

/// True when the table satisfies the cocycle condition of its degree.
inline bool is_cocycle(const GammaModule& A, const CochainTable& f, std::size_t i) {
  for (const auto& v : bar_differential(A, f, i))
    if (!A.module().is_zero(v)) return false;
  return true;
}

/// The map on H^i induced by an equivariant module map f : A -> B.
inline AbHom induced_cohomology_map(const GammaModule& A, const GammaModule& B, const IntMatrix& f, int degree) {
  if (!A.is_equivariant(f, B)) throw PreconditionError("induced_cohomology_map: map is not equivariant");
  ClassGroup HA = tate(degree, A), HB = tate(degree, B);
  const std::size_t k = HA.group.ngens();
  IntMatrix m(HB.group.ngens(), k);
  for (std::size_t j = 0; j < k; ++j) {
    IntVec e(k, 0);
    e[j] = 1;
    CochainTable t = HA.representative(e);
    for (auto& v : t) v = f * v;
    IntVec img = HB.reduce(t);
    for (std::size_t i = 0; i < img.size(); ++i) m(i, j) = img[i];
  }
  return AbHom(HA.group, HB.group, m);
}

/// Inflation H^i(G, A) -> H^i(G', A) along a surjection G' -> G.
inline AbHom inflation_map(const GammaModule& A, const GroupSurjection& pi, int degree) {
  if (degree < 1) throw PreconditionError("inflation_map: degree must be 1 or 2");
  GammaModule Ainf = A.inflate(pi);
  ClassGroup HA = cohomology(degree, A), HB = cohomology(degree, Ainf);
  const std::size_t i = static_cast<std::size_t>(degree);
  const FiniteGroup& Gs = *pi.source();
  const FiniteGroup& Gt = *pi.target();
  const std::size_t k = HA.group.ngens();
  IntMatrix m(HB.group.ngens(), k);
  for (std::size_t j = 0; j < k; ++j) {
    IntVec e(k, 0);
    e[j] = 1;
    CochainTable t = HA.representative(e);
    CochainTable u(Gs.tuple_count(i));
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
      auto g = Gs.decode(idx, i);
      for (auto& x : g) x = pi(x);
      u[idx] = t[Gt.encode(g)];
    }
    IntVec img = HB.reduce(u);
    for (std::size_t q = 0; q < img.size(); ++q) m(q, j) = img[q];
  }
  return AbHom(HA.group, HB.group, m);
}

}  // namespace rigid
