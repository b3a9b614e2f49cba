#pragma once

// n-exact calculus inside an n-cluster tilting subcategory M of mod A.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nzext/homotopy.hpp"
#include "nzext/tilting.hpp"

namespace nzext {

/// One Hom-complex row of an exactness certificate.
struct HomRow {
  std::string member;
  Variance variance = Variance::Covariant;  // Hom(M', X) or Hom(X, M')
  std::vector<std::size_t> dims;            // node dimensions in sequence order
  std::vector<std::size_t> ranks;           // ranks of the maps between consecutive nodes
  std::optional<std::size_t> failure;       // first non-exact node
};

struct ExactnessCertificate {
  bool ok = true;
  std::string reason;
  std::vector<HomRow> rows;
};

namespace detail {

template <class F>
std::size_t flat_length(const Module<F>& a, const Module<F>& b) {
  std::size_t len = 0;
  for (std::size_t v = 0; v < a.dims().size(); ++v) len += a.dim(v) * b.dim(v);
  return len;
}

/// Rank of  Hom(t, d.source()) -> Hom(t, d.target())  (post) or  Hom(d.target(), t) -> Hom(d.source(), t).
template <class F>
std::size_t induced_rank(const Morphism<F>& d, const Module<F>& t, bool post) {
  std::vector<Morphism<F>> imgs;
  if (post) {
    for (const auto& h : hom_basis(t, d.source())) imgs.push_back(d * h);
    return rank(flat_columns(d.field(), flat_length(t, d.target()), imgs));
  }
  for (const auto& h : hom_basis(d.target(), t)) imgs.push_back(h * d);
  return rank(flat_columns(d.field(), flat_length(d.source(), t), imgs));
}

/// Hom row of x against t; exactness is checked at every node but the last.
template <class F>
HomRow hom_row(const Complex<F>& x, const Module<F>& t, Variance v) {
  HomRow row;
  row.member = t.name();
  row.variance = v;
  if (v == Variance::Covariant) {
    for (int k = x.lo(); k <= x.hi(); ++k) row.dims.push_back(hom_dim(t, x.term(k)));
    for (int k = x.lo(); k < x.hi(); ++k) row.ranks.push_back(induced_rank(x.d(k), t, true));
  } else {
    for (int k = x.hi(); k >= x.lo(); --k) row.dims.push_back(hom_dim(x.term(k), t));
    for (int k = x.hi() - 1; k >= x.lo(); --k) row.ranks.push_back(induced_rank(x.d(k), t, false));
  }
  for (std::size_t i = 0; i + 1 < row.dims.size(); ++i) {
    std::size_t in = i == 0 ? 0 : row.ranks[i - 1];
    if (in + row.ranks[i] != row.dims[i]) {
      row.failure = i;
      break;
    }
  }
  return row;
}

template <class F>
void add_rows(ExactnessCertificate& cert, const Complex<F>& x, const Subcategory<F>& m, Variance v) {
  for (const auto& t : m.members()) {
    auto row = hom_row(x, t, v);
    if (row.failure && cert.ok) {
      cert.ok = false;
      cert.reason = std::string(v == Variance::Covariant ? "Hom(" + t.name() + ", -)" : "Hom(-, " + t.name() + ")") +
                    " not exact at node " + std::to_string(*row.failure);
    }
    cert.rows.push_back(std::move(row));
  }
}

}  // namespace detail

/// Hom(-, M') exact at every node but Hom(X^lo, M'), for all members M'.
template <class F>
ExactnessCertificate right_n_exactness(const Complex<F>& x, const Subcategory<F>& m) {
  ExactnessCertificate c;
  detail::add_rows(c, x, m, Variance::Contravariant);
  return c;
}

/// Hom(M', -) exact at every node but Hom(M', X^hi), for all members M'.
template <class F>
ExactnessCertificate left_n_exactness(const Complex<F>& x, const Subcategory<F>& m) {
  ExactnessCertificate c;
  detail::add_rows(c, x, m, Variance::Covariant);
  return c;
}

/// Both Hom variances against every member, plus the shape and add M conditions.
template <class F>
ExactnessCertificate is_n_exact(const Complex<F>& x, const Subcategory<F>& m, std::size_t n) {
  ExactnessCertificate c;
  if (x.length() != n + 2) {
    c.ok = false;
    c.reason = "expected " + std::to_string(n + 2) + " terms, got " + std::to_string(x.length());
    return c;
  }
  for (int k = x.lo(); k <= x.hi(); ++k) {
    if (!in_add(m, x.term(k))) {
      c.ok = false;
      c.reason = "term " + std::to_string(k) + " (" + x.term(k).name() + ") is not in add M";
      return c;
    }
  }
  detail::add_rows(c, x, m, Variance::Covariant);
  detail::add_rows(c, x, m, Variance::Contravariant);
  return c;
}

/// 0 -> X^0 -> ... -> X^{n+1} -> 0 with all terms in add M, certified n-exact.
template <class F>
class NExactSeq {
 public:
  NExactSeq(Complex<F> x, Subcategory<F> m, std::size_t n) : x_(std::move(x)), m_(std::move(m)), n_(n) {
    cert_ = is_n_exact(x_, m_, n_);
    if (!cert_.ok) {
      int pos = x_.lo();
      for (const auto& r : cert_.rows)
        if (r.failure) {
          pos = r.variance == Variance::Covariant ? x_.lo() + static_cast<int>(*r.failure) : x_.hi() - static_cast<int>(*r.failure);
          break;
        }
      throw NotAnExtension("not an n-exact sequence: " + cert_.reason, pos);
    }
  }

  const Complex<F>& complex() const { return x_; }
  const Subcategory<F>& subcategory() const { return m_; }
  std::size_t n() const { return n_; }
  const ExactnessCertificate& certificate() const { return cert_; }
  const Module<F>& term(std::size_t k) const { return x_.term(x_.lo() + static_cast<int>(k)); }
  Morphism<F> d(std::size_t k) const { return x_.d(x_.lo() + static_cast<int>(k)); }
  const Module<F>& start() const { return x_.term(x_.lo()); }
  const Module<F>& end() const { return x_.term(x_.hi()); }

  /// The dual sequence over the opposite algebra.
  NExactSeq dual() const { return NExactSeq(nzext::dual(x_), m_.dual(), n_); }

 private:
  Complex<F> x_;
  Subcategory<F> m_;
  std::size_t n_;
  ExactnessCertificate cert_;
};

// ---------------------------------------------------------------------------
// Weak (co)kernels and n-(co)kernels

/// Cokernel followed by a minimal left add M-approximation.
template <class F>
Morphism<F> weak_cokernel(const Morphism<F>& d, const Subcategory<F>& m) {
  auto q = cokernel(d);
  return left_approximation(m, q.object).map * q.projection;
}

/// Minimal right add M-approximation followed by the kernel inclusion.
template <class F>
Morphism<F> weak_kernel(const Morphism<F>& d, const Subcategory<F>& m) {
  auto k = kernel(d);
  return k.inclusion * right_approximation(m, k.object).map;
}

/// d^1, ..., d^n: iterated weak cokernels of d0 closed by an honest cokernel in add M.
template <class F>
std::vector<Morphism<F>> n_cokernel(const Morphism<F>& d0, const Subcategory<F>& m, std::size_t n) {
  if (n == 0) throw InputError("n must be positive");
  std::vector<Morphism<F>> out;
  std::string trace = d0.source().name() + " -> " + d0.target().name();
  Morphism<F> cur = d0;
  for (std::size_t k = 1; k < n; ++k) {
    cur = weak_cokernel(cur, m);
    trace += " -> " + cur.target().name();
    out.push_back(cur);
  }
  auto q = cokernel(cur);
  if (!in_add(m, q.object)) {
    throw NotConstructible("n-cokernel leaves add M: cokernel of d^" + std::to_string(n - 1) + " is not in add M (trace: " + trace +
                           " -> cokernel of dims " + [&] {
                             std::string s;
                             for (auto d : q.object.dims()) s += std::to_string(d);
                             return s;
                           }() + ")");
  }
  out.push_back(q.projection);
  std::vector<Module<F>> terms{d0.source()};
  std::vector<Morphism<F>> diffs{d0};
  for (const auto& g : out) {
    terms.push_back(g.source());
    diffs.push_back(g);
  }
  terms.push_back(out.back().target());
  auto cert = right_n_exactness(Complex<F>(0, terms, diffs), m);
  if (!cert.ok) throw NotConstructible("n-cokernel fails Hom-exactness: " + cert.reason + " (trace: " + trace + ")");
  return out;
}

/// d^0, ..., d^{n-1} with d^{n-1} ... d^0 an n-kernel of dn, computed over the opposite algebra.
template <class F>
std::vector<Morphism<F>> n_kernel(const Morphism<F>& dn, const Subcategory<F>& m, std::size_t n) {
  auto op = n_cokernel(dual(dn), m.dual(), n);
  std::vector<Morphism<F>> out;
  for (auto it = op.rbegin(); it != op.rend(); ++it) out.push_back(dual(*it));
  return out;
}

// ---------------------------------------------------------------------------
// n-pushouts and n-pullbacks

template <class F>
struct NPushout {
  NExactSeq<F> seq;
  ChainMap<F> map;  // pushout: input -> seq; pullback: seq -> input
};

namespace detail {

template <class F>
Complex<F> truncate_last(const Complex<F>& x) {
  std::vector<Module<F>> terms(x.terms().begin(), x.terms().end() - 1);
  std::vector<Morphism<F>> diffs(x.diffs().begin(), x.diffs().end() - 1);
  return Complex<F>(Trusted{}, x.lo(), std::move(terms), std::move(diffs));
}

template <class F>
ChainMap<F> truncate_last(const ChainMap<F>& f) {
  std::vector<Morphism<F>> c(f.components().begin(), f.components().end() - 1);
  return ChainMap<F>(truncate_last(f.source()), truncate_last(f.target()), std::move(c));
}

}  // namespace detail

/// n-pushout of s along f : X^0 -> Y^0 (Y^0 in add M). The truncated cone is built as an
/// n-cokernel of [-d^0; f]: each step is a left approximation of the previous cokernel whose
/// X-component is forced to be -d_X. The result ends in X^{n+1} with the identity there.
template <class F>
NPushout<F> n_pushout(const NExactSeq<F>& s, const Morphism<F>& f) {
  const auto& m = s.subcategory();
  std::size_t n = s.n();
  if (!(f.source() == s.start())) throw DimensionMismatch("n-pushout: morphism does not start at X^0");
  if (!in_add(m, f.target())) throw InputError("n-pushout: target of the morphism is not in add M");
  const auto& alg = m.algebra();
  const auto& x = s.complex();

  std::vector<Module<F>> terms{f.target()};
  std::vector<Morphism<F>> diffs, comps{f};
  auto cur = direct_sum(alg, {s.term(1), f.target()});
  Morphism<F> c = cur.injections[0] * (-s.d(0)) + cur.injections[1] * f;
  std::string trace = cur.object.name();
  for (std::size_t k = 1; k < n; ++k) {
    auto q = cokernel(c);
    auto a = factor_through_epi(-s.d(k) * cur.projections[0], q.projection);
    auto l = left_approximation(m, q.object).map;
    auto lq = l * q.projection;
    comps.push_back(lq * cur.injections[0]);
    diffs.push_back(lq * cur.injections[1]);
    terms.push_back(l.target());
    auto next = direct_sum(alg, {s.term(k + 1), l.target()});
    c = next.injections[0] * a * q.projection + next.injections[1] * lq;
    cur = std::move(next);
    trace += " -> " + cur.object.name();
  }
  auto q = cokernel(c);
  if (!in_add(m, q.object)) throw NotConstructible("n-pushout leaves add M: last cokernel is not in add M (trace: " + trace + ")");
  comps.push_back(q.projection * cur.injections[0]);
  diffs.push_back(q.projection * cur.injections[1]);
  terms.push_back(q.object);

  auto e = cokernel(diffs.back());
  auto end = factor_through_epi(e.projection * comps.back(), s.d(n));
  if (!end.is_iso()) throw NotConstructible("n-pushout: induced map on the right end is not an isomorphism");
  diffs.push_back(inverse(end) * e.projection);
  terms.push_back(s.end());
  comps.push_back(Morphism<F>::identity(s.end()));

  Complex<F> y(x.lo(), terms, diffs);
  ChainMap<F> map(x, y, std::move(comps));
  auto cert = right_n_exactness(mapping_cone(detail::truncate_last(map)), m);
  if (!cert.ok) throw Error("internal: n-pushout cone is not right n-exact: " + cert.reason);
  return {NExactSeq<F>(std::move(y), m, n), std::move(map)};
}

/// n-pullback of s along g : Z -> X^{n+1}, the dual of an n-pushout over the opposite algebra.
/// The cone of the truncated chain map is certified left n-exact.
template <class F>
NPushout<F> n_pullback(const NExactSeq<F>& s, const Morphism<F>& g) {
  if (!(g.target() == s.end())) throw DimensionMismatch("n-pullback: morphism does not end at X^{n+1}");
  auto po = n_pushout(s.dual(), dual(g));
  auto map = dual(po.map);
  NExactSeq<F> seq(map.source(), s.subcategory(), s.n());
  // Truncation at the left end: drop X^0 = Y^0 and check Hom(M', -) on the cone.
  std::vector<Morphism<F>> c(map.components().begin() + 1, map.components().end());
  std::vector<Module<F>> st(seq.complex().terms().begin() + 1, seq.complex().terms().end());
  std::vector<Morphism<F>> sd(seq.complex().diffs().begin() + 1, seq.complex().diffs().end());
  std::vector<Module<F>> xt(s.complex().terms().begin() + 1, s.complex().terms().end());
  std::vector<Morphism<F>> xd(s.complex().diffs().begin() + 1, s.complex().diffs().end());
  ChainMap<F> trunc(Complex<F>(Trusted{}, 1, st, sd), Complex<F>(Trusted{}, 1, xt, xd), std::move(c));
  auto cert = left_n_exactness(mapping_cone(trunc), s.subcategory());
  if (!cert.ok) throw Error("internal: n-pullback cone is not left n-exact: " + cert.reason);
  return {std::move(seq), std::move(map)};
}

// ---------------------------------------------------------------------------
// Classes, Baer sums, nExt

template <class F>
ExtClass<F> yoneda_class(const NExactSeq<F>& s) {
  return class_of_extension(s.complex());
}

template <class F>
void require_same_ends(const NExactSeq<F>& a, const NExactSeq<F>& b) {
  if (a.n() != b.n()) throw InputError("sequences have different n");
  if (!(a.start() == b.start()) || !(a.end() == b.end())) throw InputError("sequences have different end terms");
}

/// Nabla (a + a') Delta: direct sum, n-pullback along the diagonal, n-pushout along the codiagonal.
template <class F>
NExactSeq<F> baer_sum(const NExactSeq<F>& a, const NExactSeq<F>& b) {
  require_same_ends(a, b);
  const auto& alg = a.subcategory().algebra();
  NExactSeq<F> sum(direct_sum(a.complex(), b.complex()), a.subcategory(), a.n());
  auto nn = direct_sum(alg, {a.end(), a.end()});
  auto ll = direct_sum(alg, {a.start(), a.start()});
  auto delta = nn.injections[0] + nn.injections[1];
  auto nabla = ll.projections[0] + ll.projections[1];
  auto pb = n_pullback(sum, delta);
  return n_pushout(pb.seq, nabla).seq;
}

/// The split n-exact sequence with ends (L, N):  L = L -> 0 -> ... -> 0 -> N = N  folded into n+2 terms.
template <class F>
NExactSeq<F> split_sequence(const Module<F>& l, const Module<F>& nmod, const Subcategory<F>& m, std::size_t n) {
  const auto& alg = m.algebra();
  auto z = Module<F>::zero(alg);
  std::vector<Module<F>> terms{l, l};
  std::vector<Morphism<F>> diffs{Morphism<F>::identity(l)};
  if (n == 1) {
    auto s = direct_sum(alg, {l, nmod});
    terms = {l, s.object, nmod};
    diffs = {s.injections[0], s.projections[1]};
    return NExactSeq<F>(Complex<F>(0, terms, diffs), m, n);
  }
  for (std::size_t k = 2; k < n; ++k) {
    diffs.push_back(Morphism<F>::zero(terms.back(), z));
    terms.push_back(z);
  }
  diffs.push_back(Morphism<F>::zero(terms.back(), nmod));
  terms.push_back(nmod);
  diffs.push_back(Morphism<F>::identity(nmod));
  terms.push_back(nmod);
  return NExactSeq<F>(Complex<F>(0, terms, diffs), m, n);
}

template <class F>
struct YonedaComparison {
  bool equivalent = false;
  std::optional<HomotopyEquivalence<F>> witness;
};

/// Equal classes; when equal, a fixed-ends homotopy equivalence is produced and required.
template <class F>
YonedaComparison<F> yoneda_equivalent(const NExactSeq<F>& a, const NExactSeq<F>& b, std::uint64_t seed = 0) {
  require_same_ends(a, b);
  YonedaComparison<F> out;
  out.equivalent = yoneda_class(a) == yoneda_class(b);
  if (!out.equivalent) return out;
  out.witness = homotopy_equivalent(a.complex(), b.complex(), true, seed);
  if (!out.witness) throw Error("internal: equal Yoneda classes but no homotopy equivalence was found");
  return out;
}

/// nExt^k_M(X, Y), identified with Ext^{kn}(X, Y).
template <class F>
struct NExtGroup {
  std::size_t n = 0, k = 0;
  Module<F> source, target;
  ExtGroupPtr<F> group;
  NZReport witness;  // the nZ certificate of M behind the identification

  std::size_t dim() const { return group->dim(); }
};

template <class F>
NExtGroup<F> next_group(std::size_t k, const Module<F>& x, const Module<F>& y, const Subcategory<F>& m, std::size_t n) {
  auto rep = is_nZ_cluster_tilting(m, n);
  if (!rep.ok) {
    std::string why = !rep.cluster_tilting.ok ? "M is not " + std::to_string(n) + "-cluster tilting (" + rep.cluster_tilting.condition + " at " +
                                                    rep.cluster_tilting.module + ")"
                                              : "Ext^" + std::to_string(rep.witness->degree) + " between members of M is nonzero outside nZ";
    throw Refused("nExt is identified with Ext^{kn} only for nZ-cluster tilting M: " + why);
  }
  if (!in_add(m, x) || !in_add(m, y)) throw InputError("nExt arguments must lie in add M");
  return {n, k, x, y, ext_group(k * n, x, y), rep};
}

}  // namespace nzext
