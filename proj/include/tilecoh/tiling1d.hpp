#pragma once

#include "tilecoh/cw.hpp"
#include "tilecoh/limits.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tilecoh {

/// Word over an alphabet, stored by letter index.
using Word = std::vector<std::size_t>;

/// Primitive symbolic substitution on a finite alphabet.
class Substitution1D {
public:
    Substitution1D(std::vector<std::string> alphabet, std::map<std::string, std::vector<std::string>> rules)
        : alphabet_(std::move(alphabet)) {
        for (std::size_t i = 0; i < alphabet_.size(); ++i) index_[alphabet_[i]] = i;
        rules_.resize(alphabet_.size());
        for (const auto& [letter, image] : rules) {
            auto it = index_.find(letter);
            if (it == index_.end())
                throw std::invalid_argument("substitution rule for unknown letter " + letter);
            if (image.empty())
                throw std::invalid_argument("substitution image of " + letter + " is empty");
            for (const auto& l : image) {
                if (!index_.count(l))
                    throw std::invalid_argument("substitution image uses unknown letter " + l);
                rules_[it->second].push_back(index_.at(l));
            }
        }
        for (std::size_t i = 0; i < alphabet_.size(); ++i)
            if (rules_[i].empty())
                throw std::invalid_argument("no substitution rule for letter " + alphabet_[i]);
    }

    /// Parse single-character rules like {"1","2"} with "1"->"21".
    static Substitution1D from_strings(std::vector<std::string> alphabet,
                                       const std::map<std::string, std::string>& rules) {
        std::map<std::string, std::vector<std::string>> r;
        for (const auto& [k, w] : rules) {
            std::vector<std::string> img;
            for (char c : w) img.push_back(std::string(1, c));
            r[k] = img;
        }
        return Substitution1D(std::move(alphabet), std::move(r));
    }

    std::size_t size() const { return alphabet_.size(); }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    const std::string& letter(std::size_t i) const { return alphabet_[i]; }
    std::size_t index(const std::string& l) const { return index_.at(l); }
    const Word& rule(std::size_t i) const { return rules_[i]; }

    Word apply(const Word& w) const {
        Word out;
        for (std::size_t l : w) out.insert(out.end(), rules_[l].begin(), rules_[l].end());
        return out;
    }

    /// Letter-count abelianization; column j counts letters in the image of j.
    IntMatrix abelianization() const {
        IntMatrix m(size(), size());
        for (std::size_t j = 0; j < size(); ++j)
            for (std::size_t l : rules_[j]) m.at(l, j) += 1;
        return m;
    }

    bool constant_length() const {
        for (std::size_t i = 1; i < size(); ++i)
            if (rules_[i].size() != rules_[0].size()) return false;
        return true;
    }

    /// Some power of the abelianization is strictly positive, and the tiles
    /// actually grow (letter permutations do not count).
    bool primitive() const {
        bool grows = false;
        for (std::size_t i = 0; i < size(); ++i)
            if (rules_[i].size() > 1) grows = true;
        if (!grows) return false;
        std::size_t n = size();
        IntMatrix p = abelianization();
        IntMatrix acc = p;
        std::size_t bound = (n - 1) * (n - 1) + 1;
        for (std::size_t k = 1; k <= bound; ++k) {
            bool pos = true;
            for (std::size_t i = 0; i < n && pos; ++i)
                for (std::size_t j = 0; j < n && pos; ++j)
                    if (acc.at(i, j) == 0) pos = false;
            if (pos) return true;
            acc = acc * p;
        }
        return false;
    }

    void require_primitive(const char* who) const {
        if (!primitive()) throw NotPrimitive(std::string(who) + ": substitution is not primitive");
    }

    bool operator==(const Substitution1D& o) const {
        return alphabet_ == o.alphabet_ && rules_ == o.rules_;
    }

private:
    std::vector<std::string> alphabet_;
    std::map<std::string, std::size_t> index_;
    std::vector<Word> rules_;
};

inline Substitution1D period_doubling() {
    return Substitution1D::from_strings({"1", "2"}, {{"1", "21"}, {"2", "11"}});
}
inline Substitution1D thue_morse() {
    return Substitution1D::from_strings({"A", "B"}, {{"A", "AB"}, {"B", "BA"}});
}
/// One letter doubling itself; its approximant is the two-cell circle and its
/// inverse limit the dyadic solenoid.
inline Substitution1D solenoid_substitution(std::size_t length = 2) {
    std::vector<std::string> img(length, "o");
    return Substitution1D({"o"}, {{"o", img}});
}

/// The words of the given length that occur in the subshift: seeded from deep
/// images of letters and closed under taking subwords of substituted words.
inline std::set<Word> allowed_words(const Substitution1D& s, std::size_t length) {
    s.require_primitive("allowed_words");
    std::set<Word> words;
    auto add_subwords = [&](const Word& w) {
        bool grew = false;
        if (w.size() < length) return false;
        for (std::size_t i = 0; i + length <= w.size(); ++i) {
            Word sub(w.begin() + i, w.begin() + i + length);
            grew |= words.insert(sub).second;
        }
        return grew;
    };
    for (std::size_t l = 0; l < s.size(); ++l) {
        Word w{l};
        while (w.size() < length) w = s.apply(w);
        add_subwords(w);
    }
    for (;;) {
        bool grew = false;
        std::set<Word> snapshot = words;
        for (const Word& w : snapshot) grew |= add_subwords(s.apply(w));
        if (!grew) return words;
    }
}

/// Map between the alphabets of two substitutions.
struct LetterMap {
    std::map<std::string, std::string> assign;

    std::string operator()(const std::string& l) const { return assign.at(l); }
};

/// Result of right-collaring: the collared substitution plus the letter map
/// that forgets the collar.
struct CollarResult {
    Substitution1D collared;
    LetterMap forget;
};

/// Right collaring: letters become (letter, follower) pairs over the allowed
/// two-letter words, and the substitution is read off along the images.
inline CollarResult collar(const Substitution1D& s) {
    s.require_primitive("collar");
    std::set<Word> pairs = allowed_words(s, 2);
    std::vector<Word> plist(pairs.begin(), pairs.end());
    auto pair_name = [&](const Word& p) {
        return s.letter(p[0]) + "|" + s.letter(p[1]);
    };
    std::vector<std::string> alphabet;
    std::map<Word, std::size_t> pindex;
    for (std::size_t i = 0; i < plist.size(); ++i) {
        alphabet.push_back(pair_name(plist[i]));
        pindex[plist[i]] = i;
    }
    std::map<std::string, std::vector<std::string>> rules;
    LetterMap forget;
    for (const Word& p : plist) {
        const Word& img = s.rule(p[0]);
        std::size_t follower_head = s.rule(p[1])[0];
        std::vector<std::string> out;
        for (std::size_t i = 0; i < img.size(); ++i) {
            std::size_t next = i + 1 < img.size() ? img[i + 1] : follower_head;
            Word q{img[i], next};
            if (!pindex.count(q))
                throw NotPrimitive("collar: substitution image leaves the language");
            out.push_back(pair_name(q));
        }
        rules[pair_name(p)] = out;
        forget.assign[pair_name(p)] = s.letter(p[0]);
    }
    return {Substitution1D(std::move(alphabet), std::move(rules)), std::move(forget)};
}

/// Approximant of a substitution: one long edge per tile running a- -> a+,
/// one short edge per allowed two-letter word running a+ -> b-, and the
/// cellular self-map induced by the substitution.
struct BDComplex {
    Substitution1D substitution;
    CWComplex complex;
    CellularMap self_map;
};

namespace detail {

inline std::string bd_minus(const std::string& a) { return a + "-"; }
inline std::string bd_plus(const std::string& a) { return a + "+"; }
inline std::string bd_tile(const std::string& a) { return "e[" + a + "]"; }
inline std::string bd_trans(const std::string& a, const std::string& b) {
    return "t[" + a + "|" + b + "]";
}

} // namespace detail

inline BDComplex bd_complex(const Substitution1D& s) {
    s.require_primitive("bd_complex");
    std::set<Word> words2 = allowed_words(s, 2);

    CWComplex k;
    for (std::size_t i = 0; i < s.size(); ++i) {
        k.add_vertex(detail::bd_minus(s.letter(i)));
        k.add_vertex(detail::bd_plus(s.letter(i)));
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        k.add_edge(detail::bd_tile(s.letter(i)), detail::bd_minus(s.letter(i)),
                   detail::bd_plus(s.letter(i)));
    for (const Word& w : words2)
        k.add_edge(detail::bd_trans(s.letter(w[0]), s.letter(w[1])),
                   detail::bd_plus(s.letter(w[0])), detail::bd_minus(s.letter(w[1])));

    CellularMap m(k, k);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Word& img = s.rule(i);
        m.set_vertex(detail::bd_minus(s.letter(i)), detail::bd_minus(s.letter(img.front())));
        m.set_vertex(detail::bd_plus(s.letter(i)), detail::bd_plus(s.letter(img.back())));
        EdgePath p;
        for (std::size_t j = 0; j < img.size(); ++j) {
            p.push_back({detail::bd_tile(s.letter(img[j])), 1});
            if (j + 1 < img.size())
                p.push_back({detail::bd_trans(s.letter(img[j]), s.letter(img[j + 1])), 1});
        }
        m.set_edge(detail::bd_tile(s.letter(i)), p);
    }
    for (const Word& w : words2) {
        std::size_t a_last = s.rule(w[0]).back();
        std::size_t b_first = s.rule(w[1])[0];
        m.set_edge(detail::bd_trans(s.letter(w[0]), s.letter(w[1])),
                   {{detail::bd_trans(s.letter(a_last), s.letter(b_first)), 1}});
    }
    m.validate();
    return {s, k, m};
}

/// Factor data between the approximants of two substitutions: the pullback of
/// the quotient map, and the pullbacks of the two substitution self-maps.
/// The target self-map is the one induced through the letter map (it generates
/// the same language as t, which is checked), so all three squares commute on
/// cochains exactly.
struct FactorPair {
    BDComplex upstairs;
    BDComplex downstairs;
    CochainMap pullback;       // C(downstairs) -> C(upstairs)
    CochainMap upstairs_self;  // pullback of substitution upstairs
    CochainMap downstairs_self;
};

inline FactorPair factor_pair(const Substitution1D& s, const Substitution1D& t,
                              const LetterMap& m) {
    s.require_primitive("factor_pair");
    t.require_primitive("factor_pair");
    for (const auto& a : s.alphabet())
        if (!m.assign.count(a))
            throw NotIntertwining("factor_pair: letter map misses " + a);
    for (const auto& [a, b] : m.assign)
        if (std::find(t.alphabet().begin(), t.alphabet().end(), b) == t.alphabet().end())
            throw NotIntertwining("factor_pair: letter map image " + b + " not downstairs");

    // the substitution induced on the downstairs alphabet must be well-defined
    std::map<std::string, std::vector<std::string>> induced;
    for (const auto& a : s.alphabet()) {
        std::vector<std::string> img;
        for (std::size_t l : s.rule(s.index(a))) img.push_back(m(s.letter(l)));
        auto [it, fresh] = induced.emplace(m(a), img);
        if (!fresh && it->second != img)
            throw NotIntertwining("factor_pair: letter map does not intertwine the substitutions");
    }
    for (const auto& b : t.alphabet())
        if (!induced.count(b))
            throw NotIntertwining("factor_pair: letter map misses downstairs letter " + b);
    Substitution1D tau(t.alphabet(), induced);
    tau.require_primitive("factor_pair");

    // tau may differ from t as a rule set, but must generate the same language
    for (std::size_t len = 2; len <= 4; ++len)
        if (allowed_words(tau, len) != allowed_words(t, len))
            throw NotIntertwining("factor_pair: induced substitution changes the language");

    BDComplex up = bd_complex(s);
    BDComplex down = bd_complex(tau);

    CellularMap p(up.complex, down.complex);
    std::set<Word> words2 = allowed_words(s, 2);
    for (const auto& a : s.alphabet()) {
        p.set_vertex(detail::bd_minus(a), detail::bd_minus(m(a)));
        p.set_vertex(detail::bd_plus(a), detail::bd_plus(m(a)));
        p.set_edge(detail::bd_tile(a), {{detail::bd_tile(m(a)), 1}});
    }
    for (const Word& w : words2) {
        std::string a = s.letter(w[0]), b = s.letter(w[1]);
        if (!down.complex.has_edge(detail::bd_trans(m(a), m(b))))
            throw NotIntertwining("factor_pair: image of transition " + a + b +
                                  " is not allowed downstairs");
        p.set_edge(detail::bd_trans(a, b), {{detail::bd_trans(m(a), m(b)), 1}});
    }
    p.validate();

    CochainMap pull = p.induced_cochain_map();
    CochainMap su = up.self_map.induced_cochain_map();
    CochainMap sd = down.self_map.induced_cochain_map();

    // exact cochain-level commutation is guaranteed by the construction of
    // tau; verify anyway
    CochainMap left = compose(su, pull);
    CochainMap right = compose(pull, sd);
    for (int k = 0; k <= 1; ++k)
        if (left.matrix(k) != right.matrix(k))
            throw NotIntertwining("factor_pair: projection fails to intertwine cellular maps");

    if (!pull.injective_on_cochains())
        throw NotInjectiveOnCochains("factor_pair: pullback not injective");

    return {std::move(up), std::move(down), std::move(pull), std::move(su), std::move(sd)};
}

/// Constant-length substitutions factor onto the one-letter substitution of
/// the same length (approximant a circle; inverse limit the q-adic solenoid).
inline FactorPair solenoid_factor(const Substitution1D& s) {
    if (!s.constant_length())
        throw NotIntertwining("solenoid_factor: substitution is not of constant length");
    Substitution1D t = solenoid_substitution(s.rule(0).size());
    LetterMap m;
    for (const auto& a : s.alphabet()) m.assign[a] = "o";
    return factor_pair(s, t, m);
}

/// The canonical letter map from collared Thue-Morse onto period doubling:
/// letters whose collar pair is heterogeneous map to 1, homogeneous to 2.
inline LetterMap tm_to_pd_letter_map(const Substitution1D& collared_tm) {
    LetterMap m;
    for (const auto& a : collared_tm.alphabet()) {
        auto bar = a.find('|');
        if (bar == std::string::npos)
            throw NotIntertwining("tm_to_pd_letter_map: expected collared letters");
        std::string first = a.substr(0, bar), second = a.substr(bar + 1);
        m.assign[a] = first == second ? "2" : "1";
    }
    return m;
}

/// Per-degree cohomology of the tiling space of a primitive substitution, via
/// the direct limit of the approximant's cohomology under substitution.
inline std::map<int, LimitGroup> tiling_cohomology(const Substitution1D& s) {
    BDComplex bd = bd_complex(s);
    CochainComplex c = bd.complex.cochain_complex();
    CochainMap sm = bd.self_map.induced_cochain_map();
    std::map<int, LimitGroup> out;
    for (int k = 0; k <= 1; ++k) {
        CohomologyResult h = cohomology(c, k);
        std::size_t n = h.group().gens();
        IntMatrix e(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            auto cc = h.class_of(sm.matrix(k) * h.representative(j));
            for (std::size_t i = 0; i < n; ++i) e.at(i, j) = cc.coords[i];
        }
        out[k] = classify_limit(StationarySystem(h.group(), e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// named approximants, with reconstruction self-checks
// ---------------------------------------------------------------------------

/// Period-doubling approximant: two long edges, three short edges, homotopy
/// equivalent to a figure eight.
inline BDComplex gamma_pd() {
    BDComplex g = bd_complex(period_doubling());
    CochainComplex c = g.complex.cochain_complex();
    if (g.complex.euler_characteristic() != -1 || !g.complex.connected() ||
        !(cohomology(c, 1).group() == FgAbGroup{2, {}}))
        throw InconsistentState("gamma_pd: reconstruction self-check failed");
    return g;
}

/// Thue-Morse approximant over the collared alphabet; homotopy equivalent to
/// the double cover of the figure eight.
inline BDComplex gamma_tm() {
    BDComplex g = bd_complex(collar(thue_morse()).collared);
    CochainComplex c = g.complex.cochain_complex();
    if (g.complex.euler_characteristic() != -2 || !g.complex.connected() ||
        !(cohomology(c, 1).group() == FgAbGroup{3, {}}))
        throw InconsistentState("gamma_tm: reconstruction self-check failed");
    return g;
}

// ---------------------------------------------------------------------------
// the three one-dimensional degenerations
// ---------------------------------------------------------------------------

struct Degeneration {
    PairLimits pair;
    LimitGroup h0q, h1q;
};

namespace detail {

inline Degeneration fold_degeneration(const CWComplex& base, const CellularMap& self) {
    CWComplex two = disjoint_union(base, base);
    CellularMap fold = fold_map(two, base);
    CellularMap up_self = componentwise_map(two, self);
    CochainMap pull = fold.induced_cochain_map();
    CochainMap sx = up_self.induced_cochain_map();
    CochainMap sy = self.induced_cochain_map();
    PairLimits pl = limit_of_pair(pull, sx, sy);
    Degeneration d{pl, pl.h_q(0), pl.h_q(1)};
    return d;
}

} // namespace detail

/// Two solenoids projecting to one.
inline Degeneration degeneration_a() {
    SolenoidCircle c = solenoid_circle();
    Degeneration d = detail::fold_degeneration(c.complex, c.doubling);
    if (!d.h0q.isomorphic(LimitGroup::free_part(1)) ||
        !d.h1q.isomorphic(LimitGroup::localized_one(2)))
        throw InconsistentState("degeneration_a: self-check failed");
    return d;
}

/// Two period-doubling spaces projecting to one.
inline Degeneration degeneration_b() {
    BDComplex pd = gamma_pd();
    Degeneration d = detail::fold_degeneration(pd.complex, pd.self_map);
    LimitGroup want_h1;
    want_h1.localized.push_back({Int(2), std::nullopt});
    want_h1.free_rank = 1;
    if (!d.h0q.isomorphic(LimitGroup::free_part(1)) || !d.h1q.isomorphic(want_h1))
        throw InconsistentState("degeneration_b: self-check failed");
    return d;
}

/// The wrapped two-circle complex over the solenoid.
inline Degeneration degeneration_c() {
    GammaTmPrime g = gamma_tm_prime();
    CochainMap pull = g.factor.induced_cochain_map();
    CochainMap sx = g.self_map.induced_cochain_map();
    CochainMap sy = g.base_self.induced_cochain_map();
    PairLimits pl = limit_of_pair(pull, sx, sy);
    Degeneration d{pl, pl.h_q(0), pl.h_q(1)};
    LimitGroup want_h1;
    want_h1.localized.push_back({Int(2), std::nullopt});
    want_h1.free_rank = 1;
    if (!d.h0q.is_zero() || !d.h1q.isomorphic(want_h1))
        throw InconsistentState("degeneration_c: self-check failed");
    return d;
}

} // namespace tilecoh
