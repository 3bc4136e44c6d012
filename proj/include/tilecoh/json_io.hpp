#pragma once

#include "tilecoh/chair.hpp"
#include "tilecoh/locgroups.hpp"
#include "tilecoh/tiling1d.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace tilecoh {

using nlohmann::json;

// Integers are emitted as JSON numbers when they fit, as decimal strings
// otherwise; both forms are accepted on input.
inline json int_to_json(const Int& v) {
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
        return static_cast<long long>(v);
    return v.str();
}

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw std::invalid_argument("expected an integer or integer string");
}

inline json to_json(const IntMatrix& m) {
    json entries = json::array();
    for (const Int& e : m.entries()) entries.push_back(int_to_json(e));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline IntMatrix int_matrix_from_json(const json& j) {
    std::size_t rows = j.at("rows").get<std::size_t>();
    std::size_t cols = j.at("cols").get<std::size_t>();
    std::vector<Int> entries;
    for (const auto& e : j.at("entries")) entries.push_back(int_from_json(e));
    return IntMatrix(rows, cols, std::move(entries));
}

inline json to_json(const FgAbGroup& g) {
    json t = json::array();
    for (const Int& x : g.torsion) t.push_back(int_to_json(x));
    return json{{"rank", g.rank}, {"torsion", t}};
}

inline FgAbGroup fg_group_from_json(const json& j) {
    FgAbGroup g;
    g.rank = j.at("rank").get<std::size_t>();
    for (const auto& t : j.at("torsion")) g.torsion.push_back(int_from_json(t));
    return g;
}

inline json to_json(const SnfDecomposition& s) {
    return json{{"U", to_json(s.u)}, {"D", to_json(s.d)}, {"V", to_json(s.v)}};
}

inline json to_json(const CochainComplex& c) {
    json ranks = json::object(), d = json::object();
    for (int k = c.k_min(); k <= c.k_max(); ++k) {
        ranks[std::to_string(k)] = c.rank(k);
        if (k < c.k_max()) d[std::to_string(k)] = to_json(c.d(k));
    }
    return json{{"degrees", {c.k_min(), c.k_max()}}, {"ranks", ranks}, {"d", d}};
}

inline CochainComplex complex_from_json(const json& j) {
    auto degrees = j.at("degrees");
    int lo = degrees.at(0).get<int>(), hi = degrees.at(1).get<int>();
    std::vector<std::size_t> ranks;
    for (int k = lo; k <= hi; ++k)
        ranks.push_back(j.at("ranks").at(std::to_string(k)).get<std::size_t>());
    std::vector<IntMatrix> d;
    for (int k = lo; k < hi; ++k) {
        auto key = std::to_string(k);
        if (j.at("d").contains(key)) d.push_back(int_matrix_from_json(j.at("d").at(key)));
        else d.push_back(IntMatrix::zero(ranks[k - lo + 1], ranks[k - lo]));
    }
    return CochainComplex(lo, std::move(ranks), std::move(d));
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

/// A map file references its two complexes inline or by file path, plus one
/// matrix per degree.
inline CochainMap cochain_map_from_json(const json& j) {
    auto load_side = [&](const json& side) {
        if (side.is_string()) return complex_from_json(load_json_file(side.get<std::string>()));
        return complex_from_json(side);
    };
    CochainComplex source = load_side(j.at("source"));
    CochainComplex target = load_side(j.at("target"));
    std::map<int, IntMatrix> mats;
    for (const auto& [key, val] : j.at("matrices").items())
        mats[std::stoi(key)] = int_matrix_from_json(val);
    return CochainMap(std::move(source), std::move(target), std::move(mats));
}

inline json to_json(const Substitution1D& s) {
    json alphabet = json::array(), rules = json::object();
    for (const auto& a : s.alphabet()) alphabet.push_back(a);
    for (std::size_t i = 0; i < s.size(); ++i) {
        json img = json::array();
        for (std::size_t l : s.rule(i)) img.push_back(s.letter(l));
        rules[s.letter(i)] = img;
    }
    return json{{"alphabet", alphabet}, {"rules", rules}};
}

inline Substitution1D substitution_from_json(const json& j) {
    std::vector<std::string> alphabet;
    for (const auto& a : j.at("alphabet")) alphabet.push_back(a.get<std::string>());
    std::map<std::string, std::vector<std::string>> rules;
    for (const auto& [letter, img] : j.at("rules").items()) {
        std::vector<std::string> w;
        if (img.is_string())
            for (char c : img.get<std::string>()) w.push_back(std::string(1, c));
        else
            for (const auto& l : img) w.push_back(l.get<std::string>());
        rules[letter] = w;
    }
    return Substitution1D(std::move(alphabet), std::move(rules));
}

inline LetterMap letter_map_from_json(const json& j) {
    LetterMap m;
    const json& body = j.contains("map") ? j.at("map") : j;
    for (const auto& [k, v] : body.items()) m.assign[k] = v.get<std::string>();
    return m;
}

inline json to_json(const StationarySystem& s) {
    return json{{"group", to_json(s.group)}, {"endo", to_json(s.endo)}};
}

inline StationarySystem system_from_json(const json& j) {
    FgAbGroup g;
    const json& gj = j.at("group");
    if (gj.contains("gens")) {
        // presentation form: canonicalize first
        Presentation p(gj.at("gens").get<std::size_t>(),
                       int_matrix_from_json(gj.at("rels")));
        g = Subquotient::of_presentation(p).group();
    } else {
        g = fg_group_from_json(gj);
    }
    return StationarySystem(g, int_matrix_from_json(j.at("endo")));
}

inline json to_json(const LimitGroup& g) {
    json loc = json::array();
    for (const auto& l : g.localized) {
        json s{{"base", int_to_json(l.base)}};
        if (l.tag) s["tag"] = int_to_json(*l.tag);
        loc.push_back(s);
    }
    json tor = json::array();
    for (const Int& t : g.torsion) tor.push_back(int_to_json(t));
    return json{{"torsion", tor},
                {"localized", loc},
                {"free_rank", g.free_rank},
                {"rendered", g.render(true)}};
}

inline LimitGroup limit_group_from_json(const json& j) {
    LimitGroup g;
    for (const auto& t : j.at("torsion")) g.torsion.push_back(int_from_json(t));
    for (const auto& l : j.at("localized")) {
        LocSummand s{int_from_json(l.at("base")), std::nullopt};
        if (l.contains("tag")) s.tag = int_from_json(l.at("tag"));
        g.localized.push_back(s);
    }
    g.free_rank = j.at("free_rank").get<std::size_t>();
    g.normalize();
    return g;
}

inline json to_json(const LocHom& h) {
    json rows = json::array();
    for (std::size_t i = 0; i < h.body.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < h.body.cols(); ++j) {
            const Rat& q = h.body.at(i, j);
            row.push_back(json{{"num", int_to_json(boost::multiprecision::numerator(q))},
                               {"den", int_to_json(boost::multiprecision::denominator(q))}});
        }
        rows.push_back(row);
    }
    return json{{"source", to_json(h.source)}, {"target", to_json(h.target)}, {"matrix", rows}};
}

inline LocHom loc_hom_from_json(const json& j) {
    LimitGroup src = limit_group_from_json(j.at("source"));
    LimitGroup tgt = limit_group_from_json(j.at("target"));
    const json& rows = j.at("matrix");
    RatMatrix m(tgt.summands(), src.summands());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t jj = 0; jj < rows.at(i).size(); ++jj) {
            const json& cell = rows.at(i).at(jj);
            if (cell.is_object())
                m.at(i, jj) = Rat(int_from_json(cell.at("num")), int_from_json(cell.at("den")));
            else
                m.at(i, jj) = Rat(int_from_json(cell));
        }
    return LocHom(std::move(src), std::move(tgt), std::move(m));
}

inline json to_json(const CWComplex& k) {
    json vertices = json::array(), edges = json::array(), faces = json::array();
    for (const auto& v : k.vertices()) vertices.push_back(v);
    for (const auto& e : k.edges())
        edges.push_back(json{{"name", e.name}, {"src", e.src}, {"dst", e.dst}});
    for (const auto& f : k.faces()) {
        json b = json::array();
        for (const auto& s : f.boundary) b.push_back(json{{"edge", s.edge}, {"sign", s.sign}});
        faces.push_back(json{{"name", f.name}, {"boundary", b}});
    }
    return json{{"vertices", vertices}, {"edges", edges}, {"faces", faces}};
}

inline CWComplex cw_from_json(const json& j) {
    CWComplex k;
    for (const auto& v : j.at("vertices")) k.add_vertex(v.get<std::string>());
    for (const auto& e : j.at("edges"))
        k.add_edge(e.at("name").get<std::string>(), e.at("src").get<std::string>(),
                   e.at("dst").get<std::string>());
    if (j.contains("faces"))
        for (const auto& f : j.at("faces")) {
            EdgePath b;
            for (const auto& s : f.at("boundary"))
                b.push_back({s.at("edge").get<std::string>(), s.at("sign").get<int>()});
            k.add_face(f.at("name").get<std::string>(), b);
        }
    return k;
}

inline json to_json(const LongExactSequence& les) {
    json nodes = json::array(), maps = json::array();
    for (const auto& g : les.groups) nodes.push_back(g.render());
    for (const auto& m : les.maps) maps.push_back(to_json(m.matrix));
    return json{{"nodes", nodes}, {"maps", maps}};
}

inline json to_json(const ChairTables& t, bool track_extensions) {
    auto table = [&](const std::array<std::array<std::string, 3>, 3>& tb) {
        json rows = json::array();
        for (const auto& r : tb) rows.push_back(json{r[0], r[1], r[2]});
        return rows;
    };
    json cancels = json::object();
    for (const auto& [e, c] : t.state.cancellation) cancels[e] = c;
    return json{{"H1", table(t.h1_table)},
                {"H2", table(t.h2_table)},
                {"H1Q", table(t.h1q_table)},
                {"H2Q", table(t.h2q_table)},
                {"cancellations", cancels},
                {"track_extensions", track_extensions},
                {"identifications", model_identifications()}};
}

} // namespace tilecoh
