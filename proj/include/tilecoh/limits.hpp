#pragma once

#include "tilecoh/complexes.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace tilecoh {

/// One localized summand Z[1/base].  The subgroup of Q only depends on the
/// prime support of the base; the base itself is kept as a display hint (it
/// records which power the substitution multiplies by).  An optional tag
/// marks a q-fold extension such as (1/3)Z[1/4]; tags never affect
/// isomorphism.
struct LocSummand {
    Int base;
    std::optional<Int> tag;

    std::set<Int> support() const { return prime_support(base); }
};

/// Classified colimit of finitely generated groups: finite torsion summands,
/// localized summands Z[1/n], and free Z summands.  Coordinate order
/// everywhere is [torsion..., localized..., free...].
struct LimitGroup {
    std::vector<Int> torsion;          // ascending
    std::vector<LocSummand> localized; // descending display base
    std::size_t free_rank = 0;

    void normalize() {
        std::sort(torsion.begin(), torsion.end());
        std::stable_sort(localized.begin(), localized.end(),
                         [](const LocSummand& a, const LocSummand& b) { return a.base > b.base; });
    }

    static LimitGroup zero() { return LimitGroup{}; }
    static LimitGroup free_part(std::size_t r) {
        LimitGroup g;
        g.free_rank = r;
        return g;
    }
    static LimitGroup from_fg(const FgAbGroup& f) {
        LimitGroup g;
        g.free_rank = f.rank;
        g.torsion = f.torsion;
        return g;
    }
    static LimitGroup localized_one(Int base) {
        LimitGroup g;
        g.localized.push_back({std::move(base), std::nullopt});
        return g;
    }

    bool is_zero() const { return torsion.empty() && localized.empty() && free_rank == 0; }
    std::size_t summands() const { return torsion.size() + localized.size() + free_rank; }

    /// Abstract isomorphism: free rank, torsion, and the multiset of prime
    /// supports of the localized summands; tags and display bases ignored.
    bool isomorphic(const LimitGroup& o) const {
        if (free_rank != o.free_rank) return false;
        auto ts = torsion, to = o.torsion;
        std::sort(ts.begin(), ts.end());
        std::sort(to.begin(), to.end());
        if (ts != to) return false;
        std::vector<std::set<Int>> sa, sb;
        for (const auto& l : localized) sa.push_back(l.support());
        for (const auto& l : o.localized) sb.push_back(l.support());
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        return sa == sb;
    }

    /// Identical summand layout (used to wire homs together): same torsion,
    /// same ordered display bases, same free rank.
    bool same_shape(const LimitGroup& o) const {
        if (free_rank != o.free_rank || torsion != o.torsion) return false;
        if (localized.size() != o.localized.size()) return false;
        for (std::size_t i = 0; i < localized.size(); ++i)
            if (localized[i].base != o.localized[i].base) return false;
        return true;
    }

    /// "Z_3 + Z[1/2]^4 + Z"; extension tags render as a "(1/q)" prefix when
    /// requested.
    std::string render(bool track_extensions = false) const {
        if (is_zero()) return "0";
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < torsion.size();) {
            std::size_t j = i;
            while (j < torsion.size() && torsion[j] == torsion[i]) ++j;
            std::string p = "Z_" + torsion[i].str();
            if (j - i > 1) p += "^" + std::to_string(j - i);
            parts.push_back(p);
            i = j;
        }
        for (std::size_t i = 0; i < localized.size();) {
            std::size_t j = i;
            auto same = [&](std::size_t a, std::size_t b) {
                return localized[a].base == localized[b].base &&
                       (!track_extensions || localized[a].tag == localized[b].tag);
            };
            while (j < localized.size() && same(i, j)) ++j;
            std::string p;
            if (track_extensions && localized[i].tag)
                p += "(1/" + localized[i].tag->str() + ")";
            p += "Z[1/" + localized[i].base.str() + "]";
            if (j - i > 1) p += "^" + std::to_string(j - i);
            parts.push_back(p);
            i = j;
        }
        if (free_rank == 1) parts.push_back("Z");
        else if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
        return out;
    }
};

/// A finitely generated group with a self-map, in canonical coordinates.  The
/// direct limit of G -> G -> ... under the endomorphism is what classify_limit
/// computes.
struct StationarySystem {
    FgAbGroup group;
    IntMatrix endo; // gens x gens, canonical coordinate order [free..., torsion...]

    StationarySystem(FgAbGroup g, IntMatrix e) : group(std::move(g)), endo(std::move(e)) {
        (void)AbHom(canonical_presentation(group), canonical_presentation(group), endo);
    }
};

namespace detail {

inline IntMatrix mat_pow(const IntMatrix& m, std::size_t e) {
    IntMatrix r = IntMatrix::identity(m.rows());
    IntMatrix b = m;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

/// Saturation of the column span: the largest sublattice with the same
/// rational span.
inline IntMatrix saturate(const IntMatrix& m) {
    IntMatrix k = kernel_basis(m.transpose());
    return kernel_basis(k.transpose());
}

inline std::vector<Int> mod_reduce(std::vector<Int> v, const std::vector<Int>& orders) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (orders[i] == 0) continue;
        v[i] %= orders[i];
        if (v[i] < 0) v[i] += orders[i];
    }
    return v;
}

} // namespace detail

/// The eventual kernel of a stationary system: union of ker(endo^n), returned
/// as an abstract group with embedded generators (stabilization detected).
inline SubgroupPresentation eventual_kernel(const StationarySystem& s) {
    Presentation p = canonical_presentation(s.group);
    std::size_t n = p.gens == 0 ? 1 : p.gens;
    std::size_t step = n;
    IntMatrix power = detail::mat_pow(s.endo, step);
    for (;;) {
        AbHom h(p, p, power);
        SubgroupPresentation k1 = hom_kernel(h);
        IntMatrix power2 = power * power;
        SubgroupPresentation k2 = hom_kernel(AbHom(p, p, power2));
        // stable once the two subgroups coincide
        bool same = k1.group == k2.group;
        if (same) {
            SnfDecomposition s1 = smith_normal_form(
                IntMatrix::hstack(k1.generators, p.rels.transpose()));
            for (std::size_t j = 0; j < k2.generators.cols() && same; ++j)
                if (!in_lattice(s1, k2.generators.col(j))) same = false;
        }
        if (same) return k1;
        power = power2;
        step *= 2;
        if (step > 4096) throw Unclassifiable("eventual_kernel: no stabilization");
    }
}

/// A classified stationary system: the limit group together with the
/// coordinate data needed to push homomorphisms to the limit.
class ClassifiedSystem {
public:
    FgAbGroup domain;
    IntMatrix endo;
    LimitGroup limit;

    // free part
    std::size_t r = 0;              // free rank of the domain
    std::shared_ptr<Subquotient> evq;   // Z^r modulo the eventual kernel
    IntMatrix evq_lift;             // r x n'
    IntMatrix aprime;               // n' x n'
    IntMatrix bdiv;                 // n' x s   basis of the divisible part
    IntMatrix bunit;                // n' x ru  complement giving the Z summands
    std::shared_ptr<Subquotient> unit_quot;
    SnfDecomposition bdiv_snf;
    Int rho = 1;
    bool hom_ready = false;

    // torsion part
    std::vector<Int> tor_orders;
    IntMatrix tor_block;            // t x t
    IntMatrix n_power;              // tor_block^N with stable image
    std::size_t n_stab = 0;
    std::shared_ptr<Subquotient> tor_pres; // T_infty presented over the columns of n_power
    IntMatrix tor_lift;             // t x tg  lifts of T_infty generators (coefficients)
    IntMatrix alpha;                // induced automorphism of T_infty
    IntMatrix alpha_inv;

    std::size_t s() const { return bdiv.cols(); }
    std::size_t ru() const { return bunit.cols(); }
    std::size_t tg() const { return tor_pres ? tor_pres->group().gens() : 0; }

    /// Limit coordinates (torsion part) of a torsion element of the domain.
    std::vector<Int> torsion_limit_coords(const std::vector<Int>& tau) const {
        if (tor_orders.empty()) return {};
        return detail::mod_reduce(tor_pres->express(tau).coords, limit.torsion);
    }

    /// An element of T with prescribed T_infty limit coordinates.
    std::vector<Int> torsion_element_of(const std::vector<Int>& coords) const {
        std::vector<Int> c(tor_orders.size(), Int(0));
        std::vector<Int> lifted = tor_lift * coords;
        std::vector<Int> elt = n_power * lifted;
        return detail::mod_reduce(elt, tor_orders);
    }

    struct LimitCoords {
        std::vector<Int> tor;  // length tg()
        std::vector<Rat> div;  // length s
        std::vector<Int> unit; // length ru
    };

    /// Limit coordinates (stage-0 convention) of a domain element given in
    /// canonical coordinates.  The torsion coordinate includes the shadow of
    /// the eventual kernel: a free-part element that eventually dies can still
    /// land on surviving torsion along the way.
    LimitCoords limit_coords(const std::vector<Int>& x_free,
                             const std::vector<Int>& x_tor) const {
        if (!hom_ready) throw Unclassifiable("classified system lacks splitting data");
        LimitCoords out;
        std::vector<Int> xq;
        if (r > 0) {
            xq = evq->express(x_free).coords;
            auto uc = unit_quot->express(xq);
            out.unit = uc.coords;
            std::vector<Int> v = xq;
            for (std::size_t j = 0; j < bunit.cols(); ++j)
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= bunit.at(i, j) * out.unit[j];
            RatMatrix rhs(v.size(), 1);
            for (std::size_t i = 0; i < v.size(); ++i) rhs.at(i, 0) = Rat(v[i]);
            RatMatrix sol = rat_solve(bdiv_snf, rhs);
            out.div.resize(bdiv.cols());
            for (std::size_t i = 0; i < bdiv.cols(); ++i) {
                out.div[i] = sol.at(i, 0);
                Int den = boost::multiprecision::denominator(out.div[i]);
                if (coprime_part(den, rho) != 1)
                    throw Unclassifiable("divisible coordinates carry foreign denominators");
            }
        } else {
            out.div.resize(0);
        }
        if (!tor_orders.empty()) {
            std::vector<Int> coords = detail::mod_reduce(tor_pres->express(x_tor).coords,
                                                         limit.torsion);
            if (r > 0) {
                // residue of x_free modulo the tracked generators lies in the
                // eventual kernel; push it forward until its free part dies
                std::vector<Int> eps = x_free;
                for (std::size_t j = 0; j < evq_lift.cols(); ++j)
                    for (std::size_t i = 0; i < r; ++i) eps[i] -= evq_lift.at(i, j) * xq[j];
                std::vector<Int> full(r + tor_orders.size(), Int(0));
                for (std::size_t i = 0; i < r; ++i) full[i] = eps[i];
                for (std::size_t k = 0; k < r; ++k) {
                    full = endo * full;
                    for (std::size_t i = 0; i < tor_orders.size(); ++i) {
                        Int& x = full[r + i];
                        x %= tor_orders[i];
                        if (x < 0) x += tor_orders[i];
                    }
                }
                for (std::size_t i = 0; i < r; ++i)
                    if (full[i] != 0)
                        throw Unclassifiable("eventual kernel residue fails to die");
                std::vector<Int> tau(full.begin() + r, full.end());
                std::vector<Int> shadow = detail::mod_reduce(tor_pres->express(tau).coords,
                                                             limit.torsion);
                for (std::size_t k = 0; k < r; ++k)
                    shadow = detail::mod_reduce(alpha_inv * shadow, limit.torsion);
                for (std::size_t i = 0; i < coords.size(); ++i)
                    coords[i] = (coords[i] + shadow[i]) % limit.torsion[i];
            }
            out.tor = coords;
        }
        return out;
    }

    /// Free-part representative (in Z^r) of the j-th divisible summand
    /// generator.
    std::vector<Int> div_generator(std::size_t j) const { return evq_lift * bdiv.col(j); }
    /// Free-part representative of the j-th unit (Z) summand generator.
    std::vector<Int> unit_generator(std::size_t j) const { return evq_lift * bunit.col(j); }
};

/// Classify the direct limit of a stationary system.  The free part must be
/// rationally diagonalizable with integer eigenvalues once the eventual
/// kernel is removed; the torsion part is handled by eventual image.
inline ClassifiedSystem classify_limit_full(const StationarySystem& sys) {
    ClassifiedSystem cs;
    cs.domain = sys.group;
    cs.endo = sys.endo;
    cs.r = sys.group.rank;
    std::size_t t = sys.group.torsion.size();
    cs.tor_orders = sys.group.torsion;

    // canonical coordinates are [free | torsion]; split the endo in blocks
    IntMatrix a(cs.r, cs.r), b(t, cs.r), c(t, t);
    for (std::size_t i = 0; i < cs.r; ++i)
        for (std::size_t j = 0; j < cs.r; ++j) a.at(i, j) = sys.endo.at(i, j);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < cs.r; ++j) b.at(i, j) = sys.endo.at(cs.r + i, j);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j) c.at(i, j) = sys.endo.at(cs.r + i, cs.r + j);
    cs.tor_block = c;

    // --- free part ---
    IntMatrix evker = cs.r == 0 ? IntMatrix::zero(0, 0)
                                : kernel_basis(detail::mat_pow(a, cs.r == 0 ? 1 : cs.r));
    cs.evq = std::make_shared<Subquotient>(cs.r, IntMatrix::identity(cs.r), evker);
    if (!cs.evq->group().torsion.empty())
        throw Unclassifiable("eventual kernel is not saturated"); // cannot happen
    std::size_t np = cs.evq->group().rank;
    cs.evq_lift = IntMatrix(cs.r, np);
    for (std::size_t j = 0; j < np; ++j) {
        auto l = cs.evq->lift(j);
        for (std::size_t i = 0; i < cs.r; ++i) cs.evq_lift.at(i, j) = l[i];
    }
    cs.aprime = IntMatrix(np, np);
    for (std::size_t j = 0; j < np; ++j) {
        auto img = a * cs.evq->lift(j);
        auto cc = cs.evq->express(img);
        for (std::size_t i = 0; i < np; ++i) cs.aprime.at(i, j) = cc.coords[i];
    }

    std::vector<std::pair<Int, std::size_t>> eigen; // (lambda, multiplicity)
    if (np > 0) {
        std::vector<Int> poly = char_poly(cs.aprime);
        if (poly.back() == 0) throw Unclassifiable("injective part has zero eigenvalue");
        std::vector<Int> rem = poly;
        auto deflate = [&](const Int& root) {
            // synthetic division; returns true when root divides rem
            std::vector<Int> q(rem.size() - 1);
            Int carry = 0;
            for (std::size_t i = 0; i + 1 < rem.size(); ++i) {
                carry = rem[i] + carry * root;
                q[i] = carry;
            }
            if (rem.back() + carry * root != 0) return false;
            rem = q;
            return true;
        };
        std::vector<Int> candidates;
        for (const Int& d : divisors(poly.back())) {
            candidates.push_back(d);
            candidates.push_back(-d);
        }
        std::sort(candidates.begin(), candidates.end(), [](const Int& x, const Int& y) {
            Int ax = int_abs(x), ay = int_abs(y);
            return ax != ay ? ax > ay : x > y;
        });
        for (const Int& lam : candidates) {
            std::size_t mult = 0;
            while (rem.size() > 1 && poly_eval(rem, lam) == 0 && deflate(lam)) ++mult;
            if (mult) eigen.push_back({lam, mult});
        }
        std::size_t total = 0;
        for (auto& [lam, m] : eigen) total += m;
        if (total != np)
            throw Unclassifiable("spectrum is not integer");
        for (auto& [lam, m] : eigen) {
            IntMatrix shifted = cs.aprime;
            for (std::size_t i = 0; i < np; ++i) shifted.at(i, i) -= lam;
            if (np - rank(shifted) != m)
                throw Unclassifiable("free action is not diagonalizable");
        }
    }

    std::vector<Int> expanding; // with multiplicity, sorted |.| desc
    std::size_t unit_count = 0;
    for (auto& [lam, m] : eigen) {
        if (int_abs(lam) >= 2)
            for (std::size_t i = 0; i < m; ++i) expanding.push_back(lam);
        else
            unit_count += m;
    }
    std::sort(expanding.begin(), expanding.end(), [](const Int& x, const Int& y) {
        Int ax = int_abs(x), ay = int_abs(y);
        return ax != ay ? ax > ay : x > y;
    });

    // splitting-adapted basis [bdiv | bunit] of Z^{n'}
    if (expanding.empty()) {
        cs.bdiv = IntMatrix::zero(np, 0);
        cs.bunit = IntMatrix::identity(np);
        cs.unit_quot =
            std::make_shared<Subquotient>(np, IntMatrix::identity(np), IntMatrix::zero(np, 0));
        cs.bdiv_snf = smith_normal_form(cs.bdiv);
        cs.rho = 1;
        cs.hom_ready = true;
    } else {
        Int rho = radical(int_abs(expanding[0]));
        bool uniform = true;
        for (const Int& lam : expanding)
            if (radical(int_abs(lam)) != rho) uniform = false;
        IntMatrix evecs(np, 0);
        for (auto& [lam, m] : eigen) {
            if (int_abs(lam) < 2) continue;
            IntMatrix shifted = cs.aprime;
            for (std::size_t i = 0; i < np; ++i) shifted.at(i, i) -= lam;
            evecs = IntMatrix::hstack(evecs, kernel_basis(shifted));
        }
        IntMatrix wsat = detail::saturate(evecs);
        cs.unit_quot = std::make_shared<Subquotient>(np, IntMatrix::identity(np), wsat);
        std::size_t ru = cs.unit_quot->group().rank;
        cs.bunit = IntMatrix(np, ru);
        for (std::size_t j = 0; j < ru; ++j) {
            auto l = cs.unit_quot->lift(j);
            for (std::size_t i = 0; i < np; ++i) cs.bunit.at(i, j) = l[i];
        }
        if (uniform) {
            cs.rho = rho;
            // grow the Z[1/rho]-lattice W + A^{-1}W + ... until stable
            IntMatrix lam = wsat;
            SnfDecomposition ap_snf = smith_normal_form(cs.aprime);
            auto z_contains = [&](const SnfDecomposition& big, const IntMatrix& small) {
                for (std::size_t j = 0; j < small.cols(); ++j) {
                    std::vector<Int> v = small.col(j);
                    bool in = false;
                    Int scale = 1;
                    for (int attempt = 0; attempt <= 64 && !in; ++attempt) {
                        std::vector<Int> w = v;
                        for (auto& x : w) x *= scale;
                        if (in_lattice(big, w)) in = true;
                        scale *= rho;
                    }
                    if (!in) return false;
                }
                return true;
            };
            for (int iter = 0; iter < 80; ++iter) {
                // X = A^{-1} * lam, denominators supported on rho
                RatMatrix lr = RatMatrix::from_int(lam);
                RatMatrix x = rat_solve(ap_snf, lr);
                Int scale = 1;
                for (std::size_t i = 0; i < x.rows(); ++i)
                    for (std::size_t j = 0; j < x.cols(); ++j) {
                        Int den = boost::multiprecision::denominator(x.at(i, j));
                        if (coprime_part(den, rho) != 1) {
                            cs.hom_ready = false;
                            den = 1;
                        }
                        scale = int_lcm(scale, den);
                    }
                IntMatrix xi(x.rows(), x.cols());
                for (std::size_t i = 0; i < x.rows(); ++i)
                    for (std::size_t j = 0; j < x.cols(); ++j) {
                        Rat v = x.at(i, j) * Rat(scale);
                        xi.at(i, j) = boost::multiprecision::numerator(v);
                    }
                IntMatrix scaled_lam = lam.scaled(scale);
                IntMatrix next = lattice_basis(IntMatrix::hstack(scaled_lam, xi));
                SnfDecomposition next_snf = smith_normal_form(next);
                SnfDecomposition lam_snf = smith_normal_form(lam);
                if (z_contains(lam_snf, next) && z_contains(next_snf, lam)) {
                    cs.hom_ready = true;
                    break;
                }
                lam = next;
                cs.hom_ready = false;
            }
            cs.bdiv = lam;
            cs.bdiv_snf = smith_normal_form(cs.bdiv);
        } else {
            cs.bdiv = wsat;
            cs.bdiv_snf = smith_normal_form(cs.bdiv);
            cs.rho = rho;
            cs.hom_ready = false; // classification fine, hom extraction unsupported
        }
    }

    // --- torsion part: eventual image ---
    if (t > 0) {
        IntMatrix diag_rels(t, t);
        for (std::size_t i = 0; i < t; ++i) diag_rels.at(i, i) = cs.tor_orders[i];
        auto image_order = [&](const IntMatrix& power) {
            IntMatrix rels = preimage_lattice(power, diag_rels).transpose();
            FgAbGroup g = cokernel(rels);
            return *g.order();
        };
        IntMatrix power = cs.tor_block;
        std::size_t n = 1;
        for (;;) {
            IntMatrix next = power * cs.tor_block;
            if (image_order(power) == image_order(next)) break;
            power = next;
            ++n;
            if (n > 4096) throw Unclassifiable("torsion image fails to stabilize");
        }
        cs.n_power = power;
        cs.n_stab = n;
        IntMatrix rels = preimage_lattice(power, diag_rels).transpose();
        cs.tor_pres = std::make_shared<Subquotient>(
            Subquotient::of_presentation(Presentation(t, rels)));
        FgAbGroup tg = cs.tor_pres->group();
        cs.limit.torsion = tg.torsion;
        cs.tor_lift = IntMatrix(t, tg.gens());
        for (std::size_t j = 0; j < tg.gens(); ++j) {
            auto l = cs.tor_pres->lift(j);
            for (std::size_t i = 0; i < t; ++i) cs.tor_lift.at(i, j) = l[i];
        }
        // induced automorphism on T_infty: the element with coefficient
        // vector v is C^N v, so C acts on coefficients directly
        std::size_t m = tg.gens();
        cs.alpha = IntMatrix(m, m);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<Int> coeff =
                detail::mod_reduce(cs.tor_block * cs.tor_lift.col(j), cs.tor_orders);
            auto coords = detail::mod_reduce(cs.tor_pres->express(coeff).coords, tg.torsion);
            for (std::size_t i = 0; i < m; ++i) cs.alpha.at(i, j) = coords[i];
        }
        // invert by finding the period
        auto reduce_cols = [&](IntMatrix mat) {
            for (std::size_t i = 0; i < mat.rows(); ++i)
                for (std::size_t j = 0; j < mat.cols(); ++j) {
                    mat.at(i, j) %= tg.torsion[i];
                    if (mat.at(i, j) < 0) mat.at(i, j) += tg.torsion[i];
                }
            return mat;
        };
        IntMatrix id = reduce_cols(IntMatrix::identity(m));
        IntMatrix acc = reduce_cols(cs.alpha);
        IntMatrix prev = IntMatrix::identity(m);
        std::size_t guard = 0;
        while (reduce_cols(acc) != id) {
            prev = acc;
            acc = reduce_cols(acc * cs.alpha);
            if (++guard > 2000000) throw Unclassifiable("torsion automorphism has no period");
        }
        cs.alpha_inv = reduce_cols(prev);
    } else {
        cs.n_power = IntMatrix::zero(0, 0);
        cs.alpha = IntMatrix::zero(0, 0);
        cs.alpha_inv = IntMatrix::zero(0, 0);
    }

    // --- assemble the limit group ---
    cs.limit.free_rank = unit_count;
    for (const Int& lam : expanding) cs.limit.localized.push_back({int_abs(lam), std::nullopt});
    cs.limit.normalize();
    return cs;
}

inline LimitGroup classify_limit(const StationarySystem& sys) {
    return classify_limit_full(sys).limit;
}

/// Homomorphism between classified limits, as a rational matrix in the
/// coordinate order [torsion | localized | free] on both sides.  Entry
/// admissibility mirrors the subgroup containments q * Z[1/a] <= Z[1/b].
struct LocHom {
    LimitGroup source, target;
    RatMatrix body; // target.summands() x source.summands()

    LocHom(LimitGroup src, LimitGroup tgt, RatMatrix m)
        : source(std::move(src)), target(std::move(tgt)), body(std::move(m)) {
        if (body.rows() != target.summands() || body.cols() != source.summands())
            throw InadmissibleHom("LocHom: matrix shape mismatch");
        validate();
    }

    static LocHom zero(const LimitGroup& src, const LimitGroup& tgt) {
        return LocHom(src, tgt, RatMatrix(tgt.summands(), src.summands()));
    }

    enum class Kind { Torsion, Localized, Free };

    static Kind kind(const LimitGroup& g, std::size_t i) {
        if (i < g.torsion.size()) return Kind::Torsion;
        if (i < g.torsion.size() + g.localized.size()) return Kind::Localized;
        return Kind::Free;
    }
    static Int base_of(const LimitGroup& g, std::size_t i) {
        if (kind(g, i) == Kind::Torsion) return g.torsion[i];
        if (kind(g, i) == Kind::Localized) return g.localized[i - g.torsion.size()].base;
        return 1;
    }

private:
    void validate() const {
        for (std::size_t i = 0; i < body.rows(); ++i)
            for (std::size_t j = 0; j < body.cols(); ++j) {
                const Rat& q = body.at(i, j);
                if (q == 0) continue;
                Kind ki = kind(target, i), kj = kind(source, j);
                Int num = boost::multiprecision::numerator(q);
                Int den = boost::multiprecision::denominator(q);
                if (ki == Kind::Torsion) {
                    Int ti = base_of(target, i);
                    if (den != 1) throw InadmissibleHom("torsion entry must be integral");
                    if (kj == Kind::Torsion) {
                        Int tj = base_of(source, j);
                        if (!divides(ti, num * tj))
                            throw InadmissibleHom("torsion-to-torsion entry ill-defined");
                    } else if (kj == Kind::Localized) {
                        Int b = base_of(source, j);
                        // the part of t_i supported on b must divide the entry
                        Int tb = ti / coprime_part(ti, b);
                        if (!divides(tb, num))
                            throw InadmissibleHom("localized source cannot reach that torsion");
                    }
                } else if (ki == Kind::Localized) {
                    Int bi = base_of(target, i);
                    if (kj == Kind::Torsion)
                        throw InadmissibleHom("torsion cannot map to a localized summand");
                    if (coprime_part(den, bi) != 1)
                        throw InadmissibleHom("entry does not lie in the target localization");
                    if (kj == Kind::Localized) {
                        auto ss = prime_support(base_of(source, j));
                        auto ts = prime_support(bi);
                        for (const Int& p : ss)
                            if (!ts.count(p))
                                throw InadmissibleHom("source support exceeds target support");
                    }
                } else { // free target
                    if (kj != Kind::Free)
                        throw InadmissibleHom("only free summands may map to free summands");
                    if (den != 1) throw InadmissibleHom("free entry must be integral");
                }
            }
    }
};

inline LocHom loc_compose(const LocHom& g, const LocHom& f) {
    if (!f.target.same_shape(g.source))
        throw NotComposable("loc_compose: shapes do not line up");
    return LocHom(f.source, g.target, g.body * f.body);
}

/// Push a homomorphism of stationary systems (an AbHom intertwining the two
/// self-maps) to the classified limits.
inline LocHom limit_hom(const ClassifiedSystem& src, const ClassifiedSystem& dst,
                        const IntMatrix& f) {
    if (!src.hom_ready || !dst.hom_ready)
        throw Unclassifiable("limit_hom: splitting data unavailable");
    std::size_t rg = src.r, rh = dst.r;
    std::size_t tgn = src.tor_orders.size(), thn = dst.tor_orders.size();
    if (f.rows() != rh + thn || f.cols() != rg + tgn)
        throw InadmissibleHom("limit_hom: matrix shape mismatch");
    // intertwining check modulo target torsion
    {
        IntMatrix lhs = f * src.endo, rhs = dst.endo * f;
        IntMatrix diff = lhs - rhs;
        Presentation pt = canonical_presentation(dst.domain);
        SnfDecomposition rel = smith_normal_form(pt.rels.transpose());
        for (std::size_t j = 0; j < diff.cols(); ++j)
            if (!in_lattice(rel, diff.col(j)))
                throw InadmissibleHom("limit_hom: map does not intertwine the self-maps");
    }

    const LimitGroup& lg = src.limit;
    const LimitGroup& lh = dst.limit;
    RatMatrix body(lh.summands(), lg.summands());

    std::size_t h_t = lh.torsion.size(), h_s = dst.s(), g_t = lg.torsion.size(),
                g_s = src.s();

    // evaluate the map on a domain element given by (free part, torsion part)
    auto eval = [&](const std::vector<Int>& xfree, const std::vector<Int>& xtor,
                    std::size_t out_col) {
        std::vector<Int> full(rg + tgn, Int(0));
        for (std::size_t i = 0; i < rg; ++i) full[i] = xfree[i];
        for (std::size_t i = 0; i < tgn; ++i) full[rg + i] = xtor[i];
        std::vector<Int> img = f * full;
        std::vector<Int> yfree(img.begin(), img.begin() + rh);
        std::vector<Int> ytor(img.begin() + rh, img.end());
        ytor = detail::mod_reduce(ytor, dst.tor_orders);
        auto lc = dst.limit_coords(yfree, ytor);
        for (std::size_t i = 0; i < lc.tor.size(); ++i) body.at(i, out_col) = Rat(lc.tor[i]);
        for (std::size_t i = 0; i < lc.div.size(); ++i) body.at(h_t + i, out_col) = lc.div[i];
        for (std::size_t i = 0; i < lc.unit.size(); ++i)
            body.at(h_t + h_s + i, out_col) = Rat(lc.unit[i]);
    };

    // torsion source summands
    for (std::size_t j = 0; j < g_t; ++j) {
        std::vector<Int> coords(src.tg(), Int(0));
        coords[j] = 1;
        std::vector<Int> adj = coords;
        for (std::size_t k = 0; k < src.n_stab; ++k)
            adj = detail::mod_reduce(src.alpha_inv * adj, src.limit.torsion);
        std::vector<Int> elt = src.torsion_element_of(adj);
        eval(std::vector<Int>(rg, Int(0)), elt, j);
    }
    // localized source summands
    for (std::size_t j = 0; j < g_s; ++j)
        eval(src.div_generator(j), std::vector<Int>(tgn, Int(0)), g_t + j);
    // free source summands
    for (std::size_t j = 0; j < src.ru(); ++j)
        eval(src.unit_generator(j), std::vector<Int>(tgn, Int(0)), g_t + g_s + j);

    return LocHom(lg, lh, std::move(body));
}

/// Direct limits of a cochain-map pair with self-maps on both sides: absolute
/// cohomology limits upstairs and downstairs, quotient cohomology limits, and
/// the limit of the whole long exact sequence.
struct PairLimits {
    std::map<int, ClassifiedSystem> upstairs;   // H^k of the map's target complex
    std::map<int, ClassifiedSystem> downstairs; // H^k of the map's source complex
    std::map<int, ClassifiedSystem> quotient;   // H^k_Q
    std::map<int, LocHom> pullback_limit;       // lim H^k(downstairs) -> lim H^k(upstairs)
    std::vector<LocHom> les;                    // limit long exact sequence, zero-capped

    LimitGroup h_up(int k) const {
        auto it = upstairs.find(k);
        return it == upstairs.end() ? LimitGroup::zero() : it->second.limit;
    }
    LimitGroup h_down(int k) const {
        auto it = downstairs.find(k);
        return it == downstairs.end() ? LimitGroup::zero() : it->second.limit;
    }
    LimitGroup h_q(int k) const {
        auto it = quotient.find(k);
        return it == quotient.end() ? LimitGroup::zero() : it->second.limit;
    }
};

/// f pulls cochains back from the quotient space to the covering space; sx
/// and sy are the pullbacks of compatible self-maps upstairs and downstairs.
inline PairLimits limit_of_pair(const CochainMap& f, const CochainMap& sx, const CochainMap& sy) {
    require_injective(f, "limit_of_pair");
    const CochainComplex& a = f.target();
    const CochainComplex& b = f.source();
    int lo = std::min(a.k_min(), b.k_min());
    int hi = std::max(a.k_max(), b.k_max());

    // cochain-level intertwining gives a well-defined action on the quotient
    bool exact_intertwine = true;
    for (int k = lo; k <= hi; ++k)
        if (sx.matrix(k) * f.matrix(k) != f.matrix(k) * sy.matrix(k)) exact_intertwine = false;
    if (!exact_intertwine) {
        for (int k = lo; k <= hi; ++k) {
            if (!f.target().in_range(k) && !f.source().in_range(k)) continue;
            if (!f.target().in_range(k)) continue;
            AbHom left = compose(induced_map(sx, k), induced_map(f, k));
            AbHom right = compose(induced_map(f, k), induced_map(sy, k));
            if (!(left.matrix == right.matrix))
                throw IntertwiningFailure("limit_of_pair: self-maps do not intertwine");
        }
        throw IntertwiningFailure(
            "limit_of_pair: intertwining holds on cohomology only; a cellular model with exact "
            "commutation is required");
    }

    PairLimits out;
    LongExactSequence fin = long_exact_sequence(f);

    std::map<int, ClassifiedSystem> sysq;
    auto sys_of = [&](const CochainComplex& c, const CochainMap& s, int k) {
        CohomologyResult h(c.rank(k), kernel_basis(c.d(k)), c.d(k - 1));
        std::size_t n = h.group().gens();
        IntMatrix m(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            auto cc = h.class_of(s.matrix(k) * h.representative(j));
            for (std::size_t i = 0; i < n; ++i) m.at(i, j) = cc.coords[i];
        }
        return classify_limit_full(StationarySystem(h.group(), m));
    };
    auto sys_of_q = [&](int k) {
        QuotientCohomology q(f, k);
        std::size_t n = q.group().gens();
        IntMatrix m(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            auto cc = q.class_of(sx.matrix(k) * q.representative(j));
            for (std::size_t i = 0; i < n; ++i) m.at(i, j) = cc.coords[i];
        }
        return classify_limit_full(StationarySystem(q.group(), m));
    };

    for (int k = lo; k <= hi + 1; ++k) {
        out.downstairs.emplace(k, sys_of(b, sy, k));
        out.upstairs.emplace(k, sys_of(a, sx, k));
        sysq.emplace(k, sys_of_q(k));
        if (k <= hi) out.quotient.emplace(k, sysq.at(k));
    }

    // limit of the long exact sequence, reusing the finite maps
    LimitGroup zero = LimitGroup::zero();
    out.les.push_back(LocHom::zero(zero, out.downstairs.at(lo).limit));
    for (int k = lo; k <= hi; ++k) {
        const ClassifiedSystem& sb = out.downstairs.at(k);
        const ClassifiedSystem& sa = out.upstairs.at(k);
        const ClassifiedSystem& sq = sysq.at(k);
        const ClassifiedSystem& sb1 = out.downstairs.at(k + 1);
        const AbHom& fstar = fin.maps[(k - lo) * 3 + 1];
        const AbHom& proj = fin.maps[(k - lo) * 3 + 2];
        const AbHom& conn = fin.maps[(k - lo) * 3 + 3];
        LocHom lf = limit_hom(sb, sa, fstar.matrix);
        out.pullback_limit.emplace(k, lf);
        out.les.push_back(lf);
        out.les.push_back(limit_hom(sa, sq, proj.matrix));
        out.les.push_back(limit_hom(sq, sb1, conn.matrix));
    }
    out.les.push_back(LocHom::zero(out.downstairs.at(hi + 1).limit, zero));
    return out;
}

/// Pure degree reindexing for fiberwise suspension: the quotient cohomology of
/// the big pair in degree m is that of the small pair in degree m - n + k.
inline std::map<int, LimitGroup> suspension_shift(const std::map<int, LimitGroup>& source,
                                                  int n, int k) {
    if (n < k || k < 0) throw std::invalid_argument("suspension_shift: need n >= k >= 0");
    std::map<int, LimitGroup> out;
    for (const auto& [deg, grp] : source) out[deg + n - k] = grp;
    return out;
}

} // namespace tilecoh
