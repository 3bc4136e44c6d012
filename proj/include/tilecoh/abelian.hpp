#pragma once

#include "tilecoh/errors.hpp"
#include "tilecoh/int_matrix.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tilecoh {

/// Finitely generated abelian group in canonical form: free rank plus
/// invariant factors t_1 | t_2 | ... (each >= 2).  Two groups are isomorphic
/// iff these fields agree.
struct FgAbGroup {
    std::size_t rank = 0;
    std::vector<Int> torsion;

    bool operator==(const FgAbGroup& o) const { return rank == o.rank && torsion == o.torsion; }
    bool operator!=(const FgAbGroup& o) const { return !(*this == o); }

    bool is_trivial() const { return rank == 0 && torsion.empty(); }
    std::size_t gens() const { return rank + torsion.size(); }

    /// Order when finite, nullopt otherwise.
    std::optional<Int> order() const {
        if (rank > 0) return std::nullopt;
        Int o = 1;
        for (const Int& t : torsion) o *= t;
        return o;
    }

    /// Canonical rendering: "0", "Z", "Z^r", "Z_m", joined by " + ".
    std::string render() const {
        if (is_trivial()) return "0";
        std::ostringstream os;
        bool first = true;
        auto emit = [&](const std::string& s) {
            if (!first) os << " + ";
            os << s;
            first = false;
        };
        if (rank == 1) emit("Z");
        else if (rank > 1) emit("Z^" + std::to_string(rank));
        for (const Int& t : torsion) emit("Z_" + t.str());
        return os.str();
    }
};

/// Presentation of an abelian group: `gens` generators, one relation per row
/// of `rels`.
struct Presentation {
    std::size_t gens = 0;
    IntMatrix rels; // n_rels x gens

    Presentation() = default;
    Presentation(std::size_t g, IntMatrix r) : gens(g), rels(std::move(r)) {
        if (rels.rows() > 0 && rels.cols() != gens)
            throw std::invalid_argument("Presentation: relation width != generator count");
        if (rels.rows() == 0) rels = IntMatrix::zero(0, gens);
    }

    static Presentation free_group(std::size_t g) { return Presentation(g, IntMatrix::zero(0, g)); }

    bool operator==(const Presentation& o) const { return gens == o.gens && rels == o.rels; }
    bool operator!=(const Presentation& o) const { return !(*this == o); }
};

/// Relations of the canonical presentation of a group: [free gens | torsion
/// gens], one row t_i on each torsion generator.
inline Presentation canonical_presentation(const FgAbGroup& g) {
    IntMatrix rels = IntMatrix::zero(g.torsion.size(), g.gens());
    for (std::size_t i = 0; i < g.torsion.size(); ++i) rels.at(i, g.rank + i) = g.torsion[i];
    return Presentation(g.gens(), rels);
}

/// Coordinates of an element in a canonical group: free coordinates first,
/// then torsion residues in [0, t_i).
struct CanonicalCoords {
    std::vector<Int> coords;
};

/// The subquotient L/M of Z^n where L is given by a basis (columns) and M by
/// generators (columns, contained in L).  Provides canonical form, class
/// coordinates of elements of L, and representative lifts -- the engine behind
/// every cohomology and presentation computation here.
class Subquotient {
public:
    Subquotient(std::size_t n, IntMatrix l_basis, const IntMatrix& m_gens)
        : n_(n), lb_(std::move(l_basis)) {
        if (lb_.rows() != n_ || (m_gens.cols() > 0 && m_gens.rows() != n_))
            throw std::invalid_argument("Subquotient: shape mismatch");
        lb_snf_ = smith_normal_form(lb_);
        if (lb_snf_.rank != lb_.cols())
            throw std::invalid_argument("Subquotient: L columns are not independent");
        std::size_t s = lb_.cols();

        // express M in L-coordinates
        IntMatrix x(s, m_gens.cols());
        for (std::size_t j = 0; j < m_gens.cols(); ++j) {
            auto sol = solve(lb_snf_, m_gens.col(j));
            if (!sol) throw std::invalid_argument("Subquotient: M is not contained in L");
            for (std::size_t i = 0; i < s; ++i) x.at(i, j) = (*sol)[i];
        }
        rel_snf_ = smith_normal_form(x);

        // generator bookkeeping: w-coordinates with d_i = 0 give free factors,
        // d_i >= 2 torsion factors, d_i = 1 nothing
        for (std::size_t i = 0; i < s; ++i) {
            Int di = rel_snf_.diag(i);
            if (di == 0) free_idx_.push_back(i);
            else if (di > 1) {
                tor_idx_.push_back(i);
                group_.torsion.push_back(di);
            }
        }
        group_.rank = free_idx_.size();
    }

    /// L = Z^n, M given by relation rows (the everyday presented-group case).
    static Subquotient of_presentation(const Presentation& p) {
        return Subquotient(p.gens, IntMatrix::identity(p.gens), p.rels.transpose());
    }

    const FgAbGroup& group() const { return group_; }
    std::size_t ambient_dim() const { return n_; }

    /// Class coordinates of v (which must lie in L): free coordinates then
    /// torsion residues.
    CanonicalCoords express(const std::vector<Int>& v) const {
        auto y = solve(lb_snf_, v);
        if (!y) throw std::invalid_argument("Subquotient: element not in L");
        std::vector<Int> w = rel_snf_.u * *y;
        CanonicalCoords c;
        c.coords.reserve(group_.gens());
        for (std::size_t i : free_idx_) c.coords.push_back(w[i]);
        for (std::size_t k = 0; k < tor_idx_.size(); ++k) {
            Int r = w[tor_idx_[k]] % group_.torsion[k];
            if (r < 0) r += group_.torsion[k];
            c.coords.push_back(r);
        }
        return c;
    }

    /// Ambient representative of the i-th canonical generator.
    std::vector<Int> lift(std::size_t i) const {
        std::size_t w_index = i < group_.rank ? free_idx_[i] : tor_idx_[i - group_.rank];
        std::vector<Int> y = rel_snf_.uinv.col(w_index);
        return lb_ * y;
    }

    /// All generator representatives as columns of an n x gens matrix.
    IntMatrix generator_matrix() const {
        IntMatrix g(n_, group_.gens());
        for (std::size_t j = 0; j < group_.gens(); ++j) {
            auto c = lift(j);
            for (std::size_t i = 0; i < n_; ++i) g.at(i, j) = c[i];
        }
        return g;
    }

    bool contains(const std::vector<Int>& v) const { return solve(lb_snf_, v).has_value(); }

private:
    std::size_t n_;
    IntMatrix lb_;
    SnfDecomposition lb_snf_;
    SnfDecomposition rel_snf_;
    FgAbGroup group_;
    std::vector<std::size_t> free_idx_, tor_idx_;
};

/// Cokernel of a relation matrix: Z^cols modulo the rows.
inline FgAbGroup cokernel(const IntMatrix& rels) {
    SnfDecomposition s = smith_normal_form(rels);
    FgAbGroup g;
    g.rank = rels.cols() - s.rank;
    for (std::size_t i = 0; i < s.rank; ++i)
        if (s.diag(i) > 1) g.torsion.push_back(s.diag(i));
    return g;
}

/// Lattice of v in Z^n with h(v) = 0 in the presented target, where h is given
/// on generators by `m` and the target by `rels` (rows).  Returned as a basis
/// (columns).
inline IntMatrix preimage_lattice(const IntMatrix& m, const IntMatrix& target_rels) {
    IntMatrix stacked = IntMatrix::hstack(m, target_rels.transpose());
    IntMatrix k = kernel_basis(stacked);
    IntMatrix proj(m.cols(), k.cols());
    for (std::size_t j = 0; j < k.cols(); ++j)
        for (std::size_t i = 0; i < m.cols(); ++i) proj.at(i, j) = k.at(i, j);
    return lattice_basis(proj);
}

/// Homomorphism between presented groups, given by a matrix on generators
/// (columns index source generators).  Well-definedness is checked at
/// construction.
struct AbHom {
    Presentation source, target;
    IntMatrix matrix; // target.gens x source.gens

    AbHom(Presentation src, Presentation tgt, IntMatrix m)
        : source(std::move(src)), target(std::move(tgt)), matrix(std::move(m)) {
        if (matrix.rows() != target.gens || matrix.cols() != source.gens)
            throw IllDefinedHom("AbHom: matrix shape does not match presentations");
        SnfDecomposition tgt_lattice = smith_normal_form(target.rels.transpose());
        for (std::size_t r = 0; r < source.rels.rows(); ++r) {
            std::vector<Int> rel = source.rels.row(r);
            std::vector<Int> img = matrix * rel;
            if (!in_lattice(tgt_lattice, img))
                throw IllDefinedHom("AbHom: images of relations not contained in target relations");
        }
    }

    static AbHom identity(const Presentation& p) {
        return AbHom(p, p, IntMatrix::identity(p.gens));
    }

    std::vector<Int> apply(const std::vector<Int>& v) const { return matrix * v; }
};

inline AbHom compose(const AbHom& g, const AbHom& f) {
    if (f.target != g.source) throw NotComposable("compose: target/source presentations differ");
    return AbHom(f.source, g.target, g.matrix * f.matrix);
}

/// A subgroup handed back as an abstract group plus embedding of its canonical
/// generators into the ambient generators.
struct SubgroupPresentation {
    FgAbGroup group;
    IntMatrix generators; // ambient_gens x group.gens()
};

/// Kernel of h as an abstract group: the preimage lattice of the target
/// relations modulo the source relations.
inline SubgroupPresentation hom_kernel(const AbHom& h) {
    IntMatrix lat = preimage_lattice(h.matrix, h.target.rels);
    Subquotient q(h.source.gens, lat, h.source.rels.transpose());
    return {q.group(), q.generator_matrix()};
}

/// Image of h as an abstract group: Z^{source gens} modulo the preimage
/// lattice.
inline FgAbGroup hom_image(const AbHom& h) {
    IntMatrix lat = preimage_lattice(h.matrix, h.target.rels);
    Subquotient q(h.source.gens, IntMatrix::identity(h.source.gens), lat);
    return q.group();
}

/// Cokernel of h: target modulo image, i.e. stack the image columns onto the
/// target relations.
inline FgAbGroup hom_cokernel(const AbHom& h) {
    IntMatrix rels = IntMatrix::vstack(h.target.rels, h.matrix.transpose());
    return cokernel(rels);
}

struct ExactnessResult {
    bool exact = true;
    // 0-based index of the first group at which exactness fails
    std::optional<std::size_t> failure_index;
};

/// Exactness of G_0 -> G_1 -> ... -> G_n at every interior node: image and
/// kernel compared as sublattices of the generator space (both contain the
/// relation lattice).
inline ExactnessResult is_exact(const std::vector<AbHom>& seq) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (seq[i].target != seq[i + 1].source)
            throw NotComposable("is_exact: consecutive maps not composable");
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const AbHom& f = seq[i];
        const AbHom& g = seq[i + 1];
        IntMatrix img_gens = IntMatrix::hstack(f.matrix, f.target.rels.transpose());
        IntMatrix ker_gens =
            IntMatrix::hstack(preimage_lattice(g.matrix, g.target.rels), f.target.rels.transpose());
        SnfDecomposition img_snf = smith_normal_form(img_gens);
        SnfDecomposition ker_snf = smith_normal_form(ker_gens);
        bool ok = true;
        for (std::size_t j = 0; j < img_gens.cols() && ok; ++j)
            if (!in_lattice(ker_snf, img_gens.col(j))) ok = false;
        for (std::size_t j = 0; j < ker_gens.cols() && ok; ++j)
            if (!in_lattice(img_snf, ker_gens.col(j))) ok = false;
        if (!ok) return {false, i + 1};
    }
    return {true, std::nullopt};
}

/// Zero group presentation, handy for capping exact sequences.
inline Presentation zero_presentation() { return Presentation::free_group(0); }

inline AbHom zero_hom(const Presentation& src, const Presentation& tgt) {
    return AbHom(src, tgt, IntMatrix::zero(tgt.gens, src.gens));
}

} // namespace tilecoh
