#pragma once

#include "tilecoh/abelian.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace tilecoh {

/// Bounded cochain complex of free abelian groups.  Degrees run over a
/// contiguous range; d_k maps C^k to C^{k+1} and d_{k+1} d_k = 0 is enforced
/// at construction.
class CochainComplex {
public:
    CochainComplex() : k_min_(0), ranks_{0} {}

    /// ranks[i] is the rank in degree k_min + i; d[i] maps degree k_min+i to
    /// k_min+i+1 (so d.size() == ranks.size() - 1).
    CochainComplex(int k_min, std::vector<std::size_t> ranks, std::vector<IntMatrix> d)
        : k_min_(k_min), ranks_(std::move(ranks)), d_(std::move(d)) {
        if (ranks_.empty()) ranks_ = {0};
        if (d_.size() + 1 != ranks_.size())
            throw std::invalid_argument("CochainComplex: need one differential per degree pair");
        for (std::size_t i = 0; i < d_.size(); ++i)
            if (d_[i].rows() != ranks_[i + 1] || d_[i].cols() != ranks_[i])
                throw std::invalid_argument("CochainComplex: differential shape mismatch");
        for (std::size_t i = 0; i + 1 < d_.size(); ++i)
            if (!(d_[i + 1] * d_[i]).is_zero())
                throw std::invalid_argument("CochainComplex: d after d is nonzero");
    }

    static CochainComplex zero() { return CochainComplex(); }

    int k_min() const { return k_min_; }
    int k_max() const { return k_min_ + static_cast<int>(ranks_.size()) - 1; }
    bool in_range(int k) const { return k >= k_min() && k <= k_max(); }

    std::size_t rank(int k) const {
        if (!in_range(k)) return 0;
        return ranks_[static_cast<std::size_t>(k - k_min_)];
    }

    /// d_k as a rank(k+1) x rank(k) matrix, zero outside the stored range.
    IntMatrix d(int k) const {
        if (in_range(k) && k < k_max()) return d_[static_cast<std::size_t>(k - k_min_)];
        return IntMatrix::zero(rank(k + 1), rank(k));
    }

    std::size_t total_rank() const {
        std::size_t t = 0;
        for (auto r : ranks_) t += r;
        return t;
    }

    bool operator==(const CochainComplex& o) const {
        return k_min_ == o.k_min_ && ranks_ == o.ranks_ && d_ == o.d_;
    }

private:
    int k_min_;
    std::vector<std::size_t> ranks_;
    std::vector<IntMatrix> d_;
};

/// Degree-zero map of cochain complexes; commutes with the differentials
/// (checked).  Matrices go from source cochains to target cochains.
class CochainMap {
public:
    CochainMap(CochainComplex source, CochainComplex target, std::map<int, IntMatrix> mats)
        : source_(std::move(source)), target_(std::move(target)) {
        int lo = std::min(source_.k_min(), target_.k_min());
        int hi = std::max(source_.k_max(), target_.k_max());
        for (int k = lo; k <= hi; ++k) {
            auto it = mats.find(k);
            IntMatrix m = it != mats.end() ? it->second
                                           : IntMatrix::zero(target_.rank(k), source_.rank(k));
            if (m.rows() != target_.rank(k) || m.cols() != source_.rank(k))
                throw std::invalid_argument("CochainMap: matrix shape mismatch in degree " +
                                            std::to_string(k));
            mats_[k] = std::move(m);
        }
        for (int k = lo; k < hi; ++k)
            if (target_.d(k) * matrix(k) != matrix(k + 1) * source_.d(k))
                throw std::invalid_argument("CochainMap: does not commute with d in degree " +
                                            std::to_string(k));
    }

    static CochainMap identity(const CochainComplex& c) {
        std::map<int, IntMatrix> mats;
        for (int k = c.k_min(); k <= c.k_max(); ++k) mats[k] = IntMatrix::identity(c.rank(k));
        return CochainMap(c, c, std::move(mats));
    }

    const CochainComplex& source() const { return source_; }
    const CochainComplex& target() const { return target_; }

    IntMatrix matrix(int k) const {
        auto it = mats_.find(k);
        if (it != mats_.end()) return it->second;
        return IntMatrix::zero(target_.rank(k), source_.rank(k));
    }

    /// Rank test per degree: does the map have full column rank everywhere?
    bool injective_on_cochains() const {
        int lo = std::min(source_.k_min(), target_.k_min());
        int hi = std::max(source_.k_max(), target_.k_max());
        for (int k = lo; k <= hi; ++k) {
            if (source_.rank(k) == 0) continue;
            if (rank(matrix(k)) != source_.rank(k)) return false;
        }
        return true;
    }

private:
    CochainComplex source_, target_;
    std::map<int, IntMatrix> mats_;
};

inline CochainMap compose(const CochainMap& g, const CochainMap& f) {
    if (!(f.target() == g.source()))
        throw NotComposable("compose: cochain map target/source mismatch");
    std::map<int, IntMatrix> mats;
    int lo = std::min(f.source().k_min(), g.target().k_min());
    int hi = std::max(f.source().k_max(), g.target().k_max());
    for (int k = lo; k <= hi; ++k) mats[k] = g.matrix(k) * f.matrix(k);
    return CochainMap(f.source(), g.target(), std::move(mats));
}

/// Cohomology of one degree with a tracked basis: the canonical group, cocycle
/// representatives for its generators, and the coordinate map used to express
/// arbitrary cocycles in that basis.
class CohomologyResult {
public:
    CohomologyResult(std::size_t ambient, IntMatrix cycle_basis, const IntMatrix& boundary_gens)
        : sub_(std::make_shared<Subquotient>(ambient, std::move(cycle_basis), boundary_gens)) {}

    const FgAbGroup& group() const { return sub_->group(); }

    /// Cocycle representative of the i-th canonical generator.
    std::vector<Int> representative(std::size_t i) const { return sub_->lift(i); }

    /// Coordinates of the class of a cocycle.
    CanonicalCoords class_of(const std::vector<Int>& cocycle) const {
        return sub_->express(cocycle);
    }

    bool is_cocycle(const std::vector<Int>& v) const { return sub_->contains(v); }

private:
    std::shared_ptr<Subquotient> sub_;
};

/// H^k(C) = ker d_k / im d_{k-1} with deterministic SNF-chosen basis.
inline CohomologyResult cohomology(const CochainComplex& c, int k) {
    if (!c.in_range(k)) throw DegreeOutOfRange("cohomology: degree " + std::to_string(k));
    IntMatrix cycles = kernel_basis(c.d(k));
    return CohomologyResult(c.rank(k), std::move(cycles), c.d(k - 1));
}

/// The induced map H^k(source) -> H^k(target) of a cochain map, expressed in
/// the tracked bases as a hom of canonical presentations.
inline AbHom induced_map(const CochainMap& f, int k) {
    CohomologyResult hs = cohomology(f.source(), k);
    CohomologyResult ht = cohomology(f.target(), k);
    IntMatrix m(ht.group().gens(), hs.group().gens());
    for (std::size_t j = 0; j < hs.group().gens(); ++j) {
        std::vector<Int> img = f.matrix(k) * hs.representative(j);
        CanonicalCoords cc = ht.class_of(img);
        for (std::size_t i = 0; i < cc.coords.size(); ++i) m.at(i, j) = cc.coords[i];
    }
    return AbHom(canonical_presentation(hs.group()), canonical_presentation(ht.group()),
                 std::move(m));
}

/// Algebraic mapping cone of f (viewed as the pullback of a quotient map):
/// degree k holds target^k + source^{k+1}, differential (a,b) |->
/// (d a + f b, -d b).  Works whether or not f is injective.
inline CochainComplex mapping_cone(const CochainMap& f) {
    const CochainComplex& a = f.target();
    const CochainComplex& b = f.source();
    int lo = std::min(a.k_min(), b.k_min() - 1);
    int hi = std::max(a.k_max(), b.k_max() - 1);
    std::vector<std::size_t> ranks;
    for (int k = lo; k <= hi; ++k) ranks.push_back(a.rank(k) + b.rank(k + 1));
    std::vector<IntMatrix> d;
    for (int k = lo; k < hi; ++k) {
        std::size_t ra0 = a.rank(k), rb0 = b.rank(k + 1);
        std::size_t ra1 = a.rank(k + 1), rb1 = b.rank(k + 2);
        IntMatrix m(ra1 + rb1, ra0 + rb0);
        IntMatrix da = a.d(k), fb = f.matrix(k + 1), db = b.d(k + 1);
        for (std::size_t i = 0; i < ra1; ++i) {
            for (std::size_t j = 0; j < ra0; ++j) m.at(i, j) = da.at(i, j);
            for (std::size_t j = 0; j < rb0; ++j) m.at(i, ra0 + j) = fb.at(i, j);
        }
        for (std::size_t i = 0; i < rb1; ++i)
            for (std::size_t j = 0; j < rb0; ++j) m.at(ra1 + i, ra0 + j) = -db.at(i, j);
        d.push_back(std::move(m));
    }
    return CochainComplex(lo, std::move(ranks), std::move(d));
}

/// Quotient cohomology of an injective cochain map, computed at the lattice
/// level: H^k of target/f(source) as the subquotient
///   { a : d a in im f_{k+1} } / ( im d_{k-1} + im f_k ).
/// This needs no freeness of the quotient cochain groups.
class QuotientCohomology {
public:
    QuotientCohomology(const CochainMap& f, int k) {
        const CochainComplex& a = f.target();
        // L = preimage of im f_{k+1} under d_k
        IntMatrix lat = preimage_of_image(a.d(k), f.matrix(k + 1));
        IntMatrix m_gens = IntMatrix::hstack(a.d(k - 1), f.matrix(k));
        sub_ = std::make_shared<Subquotient>(a.rank(k), std::move(lat), m_gens);
    }

    const FgAbGroup& group() const { return sub_->group(); }
    std::vector<Int> representative(std::size_t i) const { return sub_->lift(i); }
    CanonicalCoords class_of(const std::vector<Int>& rel_cocycle) const {
        return sub_->express(rel_cocycle);
    }
    bool is_relative_cocycle(const std::vector<Int>& v) const { return sub_->contains(v); }

private:
    /// Basis of { v : d v in column span of g }.
    static IntMatrix preimage_of_image(const IntMatrix& d, const IntMatrix& g) {
        IntMatrix stacked = IntMatrix::hstack(d, g);
        IntMatrix k = kernel_basis(stacked);
        IntMatrix proj(d.cols(), k.cols());
        for (std::size_t j = 0; j < k.cols(); ++j)
            for (std::size_t i = 0; i < d.cols(); ++i) proj.at(i, j) = k.at(i, j);
        return lattice_basis(proj);
    }

    std::shared_ptr<Subquotient> sub_;
};

inline void require_injective(const CochainMap& f, const char* who) {
    if (!f.injective_on_cochains())
        throw NotInjectiveOnCochains(std::string(who) + ": pullback is not injective on cochains");
}

struct QuotientComplexResult {
    CochainComplex complex;
    CochainMap projection; // target(f) -> quotient complex
};

/// Explicit free model of target/f(source), with the projection map.  Requires
/// f injective with free quotient in every degree (each cochain image a direct
/// summand); use QuotientCohomology when only groups are needed.
inline QuotientComplexResult quotient_complex(const CochainMap& f) {
    require_injective(f, "quotient_complex");
    const CochainComplex& a = f.target();
    const CochainComplex& b = f.source();
    int lo = a.k_min(), hi = a.k_max();

    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> proj;  // rows r..n-1 of U_k
    std::vector<IntMatrix> lift;  // cols r..n-1 of Uinv_k
    for (int k = lo; k <= hi; ++k) {
        SnfDecomposition s = smith_normal_form(f.matrix(k));
        for (std::size_t i = 0; i < s.rank; ++i)
            if (s.diag(i) != 1)
                throw NotFreeQuotient(
                    "quotient_complex: cochain quotient has torsion in degree " +
                    std::to_string(k));
        std::size_t n = a.rank(k), r = b.rank(k);
        ranks.push_back(n - r);
        IntMatrix p(n - r, n), l(n, n - r);
        for (std::size_t i = 0; i < n - r; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                p.at(i, j) = s.u.at(r + i, j);
                l.at(j, i) = s.uinv.at(j, r + i);
            }
        proj.push_back(std::move(p));
        lift.push_back(std::move(l));
    }
    std::vector<IntMatrix> dq;
    for (int k = lo; k < hi; ++k) {
        std::size_t i = static_cast<std::size_t>(k - lo);
        dq.push_back(proj[i + 1] * a.d(k) * lift[i]);
    }
    CochainComplex q(lo, ranks, std::move(dq));
    std::map<int, IntMatrix> pm;
    for (int k = lo; k <= hi; ++k) pm[k] = proj[static_cast<std::size_t>(k - lo)];
    CochainMap projection(a, q, std::move(pm));
    return {std::move(q), std::move(projection)};
}

/// One long exact sequence ... -> H^k(source) -> H^k(target) -> H^k_Q ->
/// H^{k+1}(source) -> ..., assembled with explicit connecting maps from the
/// snake construction and capped with zeros at both ends.
struct LongExactSequence {
    std::vector<AbHom> maps;
    // groups[i] is the i-th node; groups.front() and groups.back() are 0
    std::vector<FgAbGroup> groups;
    // degree-tagged accessors into the node list
    std::map<int, std::size_t> index_h_source, index_h_target, index_h_q;
};

inline LongExactSequence long_exact_sequence(const CochainMap& f) {
    require_injective(f, "long_exact_sequence");
    const CochainComplex& a = f.target();
    const CochainComplex& b = f.source();
    int lo = std::min(a.k_min(), b.k_min());
    int hi = std::max(a.k_max(), b.k_max());

    std::map<int, CohomologyResult> ha, hb;
    std::map<int, QuotientCohomology> hq;
    auto h_of = [&](const CochainComplex& c, int k) {
        IntMatrix cycles = kernel_basis(c.d(k));
        return CohomologyResult(c.rank(k), std::move(cycles), c.d(k - 1));
    };
    for (int k = lo; k <= hi + 1; ++k) {
        ha.emplace(k, h_of(a, k));
        hb.emplace(k, h_of(b, k));
        hq.emplace(k, QuotientCohomology(f, k));
    }

    LongExactSequence les;
    les.groups.push_back(FgAbGroup{});

    auto push = [&](AbHom h, const FgAbGroup& g) {
        les.maps.push_back(std::move(h));
        les.groups.push_back(g);
    };

    Presentation prev = zero_presentation();
    for (int k = lo; k <= hi; ++k) {
        const CohomologyResult& hbk = hb.at(k);
        const CohomologyResult& hak = ha.at(k);
        const QuotientCohomology& hqk = hq.at(k);
        Presentation pb = canonical_presentation(hbk.group());
        Presentation pa = canonical_presentation(hak.group());
        Presentation pq = canonical_presentation(hqk.group());

        if (k == lo) push(zero_hom(prev, pb), hbk.group());

        // f^*: H^k(source) -> H^k(target)
        {
            IntMatrix m(pa.gens, pb.gens);
            for (std::size_t j = 0; j < pb.gens; ++j) {
                auto cc = hak.class_of(f.matrix(k) * hbk.representative(j));
                for (std::size_t i = 0; i < cc.coords.size(); ++i) m.at(i, j) = cc.coords[i];
            }
            push(AbHom(pb, pa, std::move(m)), hak.group());
        }
        // projection H^k(target) -> H^k_Q
        {
            IntMatrix m(pq.gens, pa.gens);
            for (std::size_t j = 0; j < pa.gens; ++j) {
                auto cc = hqk.class_of(hak.representative(j));
                for (std::size_t i = 0; i < cc.coords.size(); ++i) m.at(i, j) = cc.coords[i];
            }
            push(AbHom(pa, pq, std::move(m)), hqk.group());
        }
        // connecting map H^k_Q -> H^{k+1}(source): lift, apply d, pull back
        // through the injective f
        {
            const CohomologyResult& hb1 = hb.at(k + 1);
            Presentation pb1 = canonical_presentation(hb1.group());
            SnfDecomposition fs = smith_normal_form(f.matrix(k + 1));
            IntMatrix m(pb1.gens, pq.gens);
            for (std::size_t j = 0; j < pq.gens; ++j) {
                std::vector<Int> da = a.d(k) * hqk.representative(j);
                auto pre = solve(fs, da);
                if (!pre)
                    throw InconsistentState("long_exact_sequence: connecting lift failed");
                auto cc = hb1.class_of(*pre);
                for (std::size_t i = 0; i < cc.coords.size(); ++i) m.at(i, j) = cc.coords[i];
            }
            push(AbHom(pq, pb1, std::move(m)), hb1.group());
            prev = pb1;
        }

        les.index_h_source[k] = les.groups.size() - 4;
        les.index_h_target[k] = les.groups.size() - 3;
        les.index_h_q[k] = les.groups.size() - 2;
    }
    // final cap: H^{hi+1}(source) -> 0 (the trailing group is zero because
    // hi+1 is past both ranges)
    push(zero_hom(prev, zero_presentation()), FgAbGroup{});
    return les;
}

} // namespace tilecoh
