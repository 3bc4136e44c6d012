#pragma once

#include "tilecoh/complexes.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace tilecoh {

/// Signed step along an edge: +1 traverses with the orientation, -1 against.
struct EdgeStep {
    std::string edge;
    int sign = 1;
};
using EdgePath = std::vector<EdgeStep>;

/// CW complex of dimension <= 2: named vertices, oriented edges, and optional
/// faces given by closed boundary walks.
class CWComplex {
public:
    struct Edge {
        std::string name, src, dst;
    };
    struct Face {
        std::string name;
        EdgePath boundary;
    };

    CWComplex() = default;

    void add_vertex(const std::string& v) {
        if (vindex_.count(v)) throw InvalidBoundary("duplicate vertex " + v);
        vindex_[v] = vertices_.size();
        vertices_.push_back(v);
    }
    void add_edge(const std::string& name, const std::string& src, const std::string& dst) {
        if (eindex_.count(name)) throw InvalidBoundary("duplicate edge " + name);
        if (!vindex_.count(src) || !vindex_.count(dst))
            throw InvalidBoundary("edge " + name + " references unknown vertex");
        eindex_[name] = edges_.size();
        edges_.push_back({name, src, dst});
    }
    void add_face(const std::string& name, const EdgePath& boundary) {
        if (findex_.count(name)) throw InvalidBoundary("duplicate face " + name);
        check_closed_walk(boundary, "face " + name);
        findex_[name] = faces_.size();
        faces_.push_back({name, boundary});
    }

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Face>& faces() const { return faces_; }

    std::size_t vertex_index(const std::string& v) const { return vindex_.at(v); }
    std::size_t edge_index(const std::string& e) const { return eindex_.at(e); }
    std::size_t face_index(const std::string& f) const { return findex_.at(f); }
    bool has_vertex(const std::string& v) const { return vindex_.count(v) != 0; }
    bool has_edge(const std::string& e) const { return eindex_.count(e) != 0; }

    const Edge& edge(const std::string& e) const { return edges_[eindex_.at(e)]; }

    int dim() const { return faces_.empty() ? 1 : 2; }

    long euler_characteristic() const {
        return static_cast<long>(vertices_.size()) - static_cast<long>(edges_.size()) +
               static_cast<long>(faces_.size());
    }

    bool connected() const {
        if (vertices_.empty()) return true;
        std::vector<bool> seen(vertices_.size(), false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (const Edge& e : edges_) {
                std::size_t s = vindex_.at(e.src), d = vindex_.at(e.dst);
                if (s == v && !seen[d]) { seen[d] = true; stack.push_back(d); }
                if (d == v && !seen[s]) { seen[s] = true; stack.push_back(s); }
            }
        }
        for (bool b : seen)
            if (!b) return false;
        return true;
    }

    /// Walk endpoints: (start, end) of a signed edge path; validates chaining.
    std::pair<std::string, std::string> walk_endpoints(const EdgePath& p,
                                                       const std::string& who) const {
        if (p.empty()) throw InvalidBoundary(who + ": empty path has no endpoints");
        std::string start, cur;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const Edge& e = edges_[eindex_.at(p[i].edge)];
            std::string from = p[i].sign > 0 ? e.src : e.dst;
            std::string to = p[i].sign > 0 ? e.dst : e.src;
            if (i == 0) start = from;
            else if (from != cur)
                throw InvalidBoundary(who + ": path does not chain at step " + std::to_string(i));
            cur = to;
        }
        return {start, cur};
    }

    /// Cellular cochain complex: C^0 on vertices, C^1 on edges, C^2 on faces;
    /// d is the transpose of the boundary operator.
    CochainComplex cochain_complex() const {
        std::size_t nv = vertices_.size(), ne = edges_.size(), nf = faces_.size();
        IntMatrix d0(ne, nv);
        for (std::size_t i = 0; i < ne; ++i) {
            d0.at(i, vindex_.at(edges_[i].dst)) += 1;
            d0.at(i, vindex_.at(edges_[i].src)) -= 1;
        }
        if (faces_.empty()) return CochainComplex(0, {nv, ne}, {d0});
        IntMatrix d1(nf, ne);
        for (std::size_t i = 0; i < nf; ++i)
            for (const EdgeStep& s : faces_[i].boundary) d1.at(i, eindex_.at(s.edge)) += s.sign;
        return CochainComplex(0, {nv, ne, nf}, {d0, d1});
    }

private:
    void check_closed_walk(const EdgePath& p, const std::string& who) const {
        auto [s, t] = walk_endpoints(p, who);
        if (s != t) throw InvalidBoundary(who + ": boundary walk is not closed");
    }

    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::vector<Face> faces_;
    std::map<std::string, std::size_t> vindex_, eindex_, findex_;
};

/// Cellular map: vertices to vertices, edges to signed edge paths (possibly
/// empty, for collapsed edges), faces to formal sums of faces.  Validity =
/// endpoint compatibility plus commutation of the induced cochain maps.
class CellularMap {
public:
    CellularMap(CWComplex source, CWComplex target)
        : source_(std::move(source)), target_(std::move(target)) {}

    void set_vertex(const std::string& v, const std::string& image) {
        if (!target_.has_vertex(image))
            throw IncompatibleMap("vertex image " + image + " not in target");
        vmap_[v] = image;
    }
    void set_edge(const std::string& e, const EdgePath& path) { emap_[e] = path; }
    void set_face(const std::string& f, const std::vector<std::pair<std::string, Int>>& sum) {
        fmap_[f] = sum;
    }

    const CWComplex& source() const { return source_; }
    const CWComplex& target() const { return target_; }
    const std::string& vertex_image(const std::string& v) const { return vmap_.at(v); }
    const EdgePath& edge_image(const std::string& e) const { return emap_.at(e); }

    /// Endpoint compatibility of every edge assignment.
    void validate() const {
        for (const auto& v : source_.vertices())
            if (!vmap_.count(v)) throw IncompatibleMap("no image for vertex " + v);
        for (const auto& e : source_.edges()) {
            if (!emap_.count(e.name)) throw IncompatibleMap("no image for edge " + e.name);
            const EdgePath& p = emap_.at(e.name);
            std::string want_s = vmap_.at(e.src), want_t = vmap_.at(e.dst);
            if (p.empty()) {
                if (want_s != want_t)
                    throw IncompatibleMap("edge " + e.name +
                                          " collapses but endpoints map apart");
                continue;
            }
            auto [s, t] = target_.walk_endpoints(p, "image of edge " + e.name);
            if (s != want_s || t != want_t)
                throw IncompatibleMap("edge " + e.name + " image endpoints mismatch");
        }
        for (const auto& f : source_.faces())
            if (!fmap_.count(f.name)) throw IncompatibleMap("no image for face " + f.name);
    }

    /// Pullback on cellular cochains: a CochainMap from target cochains to
    /// source cochains.  Commutation with d is what the CochainMap constructor
    /// checks; failure is reported as IncompatibleMap.
    CochainMap induced_cochain_map() const {
        validate();
        CochainComplex cs = source_.cochain_complex();
        CochainComplex ct = target_.cochain_complex();
        std::size_t nv_s = source_.vertices().size(), nv_t = target_.vertices().size();
        std::size_t ne_s = source_.edges().size(), ne_t = target_.edges().size();
        std::size_t nf_s = source_.faces().size(), nf_t = target_.faces().size();

        IntMatrix m0(nv_s, nv_t);
        for (std::size_t i = 0; i < nv_s; ++i)
            m0.at(i, target_.vertex_index(vmap_.at(source_.vertices()[i]))) = 1;
        IntMatrix m1(ne_s, ne_t);
        for (std::size_t i = 0; i < ne_s; ++i)
            for (const EdgeStep& s : emap_.at(source_.edges()[i].name))
                m1.at(i, target_.edge_index(s.edge)) += s.sign;
        std::map<int, IntMatrix> mats{{0, m0}, {1, m1}};
        if (nf_t > 0 || nf_s > 0) {
            IntMatrix m2(nf_s, nf_t);
            for (std::size_t i = 0; i < nf_s; ++i)
                for (const auto& [fname, c] : fmap_.at(source_.faces()[i].name))
                    m2.at(i, target_.face_index(fname)) += c;
            mats[2] = m2;
        }
        try {
            return CochainMap(ct, cs, std::move(mats));
        } catch (const std::invalid_argument& e) {
            throw IncompatibleMap(std::string("induced cochain map: ") + e.what());
        }
    }

private:
    CWComplex source_, target_;
    std::map<std::string, std::string> vmap_;
    std::map<std::string, EdgePath> emap_;
    std::map<std::string, std::vector<std::pair<std::string, Int>>> fmap_;
};

/// GraphViz export of the 1-skeleton.
inline std::string export_dot(const CWComplex& k, const std::string& name = "complex") {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (const auto& v : k.vertices()) os << "  \"" << v << "\";\n";
    for (const auto& e : k.edges())
        os << "  \"" << e.src << "\" -> \"" << e.dst << "\" [label=\"" << e.name << "\"];\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

/// Circle with a single vertex and a single loop edge.
inline CWComplex circle() {
    CWComplex c;
    c.add_vertex("v");
    c.add_edge("e", "v", "v");
    return c;
}

/// Circle with two vertices and two arcs, the cell structure used as the base
/// of solenoid factor maps; `doubling` wraps it twice around itself.
struct SolenoidCircle {
    CWComplex complex;
    CellularMap doubling;
};

inline SolenoidCircle solenoid_circle() {
    CWComplex c;
    c.add_vertex("v-");
    c.add_vertex("v+");
    c.add_edge("E", "v-", "v+");
    c.add_edge("T", "v+", "v-");
    CellularMap d(c, c);
    d.set_vertex("v-", "v-");
    d.set_vertex("v+", "v+");
    d.set_edge("E", {{"E", 1}, {"T", 1}, {"E", 1}});
    d.set_edge("T", {{"T", 1}});
    d.validate();
    return {c, d};
}

/// Torus as one vertex, two loops, one square face a b a^-1 b^-1, plus the
/// doubling self-map (faces map with multiplicity four).
struct TorusModel {
    CWComplex complex;
    CellularMap doubling;
};

inline TorusModel torus() {
    CWComplex t;
    t.add_vertex("v");
    t.add_edge("a", "v", "v");
    t.add_edge("b", "v", "v");
    t.add_face("F", {{"a", 1}, {"b", 1}, {"a", -1}, {"b", -1}});
    CellularMap d(t, t);
    d.set_vertex("v", "v");
    d.set_edge("a", {{"a", 1}, {"a", 1}});
    d.set_edge("b", {{"b", 1}, {"b", 1}});
    d.set_face("F", {{"F", Int(4)}});
    d.validate();
    return {t, d};
}

/// The double cover of the figure eight: X has two vertices, a loop at each,
/// and two crossing edges; Y is the figure eight; f identifies fibers.
struct Example2Pair {
    CWComplex cover;  // X
    CWComplex base;   // Y
    CellularMap covering; // X -> Y
};

inline Example2Pair example2_pair() {
    CWComplex x;
    x.add_vertex("p1");
    x.add_vertex("p2");
    x.add_edge("a1", "p1", "p1");
    x.add_edge("a2", "p2", "p2");
    x.add_edge("b1", "p1", "p2");
    x.add_edge("b2", "p2", "p1");
    CWComplex y;
    y.add_vertex("p");
    y.add_edge("a", "p", "p");
    y.add_edge("b", "p", "p");
    CellularMap f(x, y);
    f.set_vertex("p1", "p");
    f.set_vertex("p2", "p");
    f.set_edge("a1", {{"a", 1}});
    f.set_edge("a2", {{"a", 1}});
    f.set_edge("b1", {{"b", 1}});
    f.set_edge("b2", {{"b", 1}});
    f.validate();
    return {x, y, f};
}

/// Disjoint union with component-tagged cell names.
inline CWComplex disjoint_union(const CWComplex& a, const CWComplex& b) {
    CWComplex u;
    for (const auto& v : a.vertices()) u.add_vertex("1." + v);
    for (const auto& v : b.vertices()) u.add_vertex("2." + v);
    for (const auto& e : a.edges()) u.add_edge("1." + e.name, "1." + e.src, "1." + e.dst);
    for (const auto& e : b.edges()) u.add_edge("2." + e.name, "2." + e.src, "2." + e.dst);
    for (const auto& f : a.faces()) {
        EdgePath p;
        for (const auto& s : f.boundary) p.push_back({"1." + s.edge, s.sign});
        u.add_face("1." + f.name, p);
    }
    for (const auto& f : b.faces()) {
        EdgePath p;
        for (const auto& s : f.boundary) p.push_back({"2." + s.edge, s.sign});
        u.add_face("2." + f.name, p);
    }
    return u;
}

/// Fold map (K disjoint-union K) -> K.
inline CellularMap fold_map(const CWComplex& two_copies, const CWComplex& base) {
    CellularMap f(two_copies, base);
    for (const auto& v : two_copies.vertices()) f.set_vertex(v, v.substr(2));
    for (const auto& e : two_copies.edges()) f.set_edge(e.name, {{e.name.substr(2), 1}});
    for (const auto& fc : two_copies.faces()) f.set_face(fc.name, {{fc.name.substr(2), Int(1)}});
    f.validate();
    return f;
}

/// Diagonal self-map of a disjoint union of two copies of K induced by a
/// self-map of K.
inline CellularMap componentwise_map(const CWComplex& two_copies, const CellularMap& s) {
    CellularMap m(two_copies, two_copies);
    for (const auto& v : two_copies.vertices()) {
        std::string tag = v.substr(0, 2);
        m.set_vertex(v, tag + s.vertex_image(v.substr(2)));
    }
    for (const auto& e : two_copies.edges()) {
        std::string tag = e.name.substr(0, 2);
        EdgePath p;
        for (const auto& st : s.edge_image(e.name.substr(2))) p.push_back({tag + st.edge, st.sign});
        m.set_edge(e.name, p);
    }
    m.validate();
    return m;
}

/// Two large circles joined by four small arcs through midpoint vertices; the
/// four arcs form an invariant small loop.  The self-map wraps each circle
/// twice and stretches each arc across its circle; the factor map winds both
/// circles onto the two-cell circle.
struct GammaTmPrime {
    CWComplex complex;
    CellularMap self_map;
    CWComplex circle_base;
    CellularMap factor;      // complex -> circle_base
    CellularMap base_self;   // circle doubling
};

inline GammaTmPrime gamma_tm_prime() {
    CWComplex g;
    g.add_vertex("vL");
    g.add_vertex("x");
    g.add_vertex("vR");
    g.add_vertex("y");
    g.add_edge("a", "vL", "vL");
    g.add_edge("b", "vR", "vR");
    g.add_edge("c1", "vL", "x");
    g.add_edge("c2", "vR", "x");
    g.add_edge("c3", "vR", "y");
    g.add_edge("c4", "vL", "y");

    CellularMap s(g, g);
    for (const auto& v : g.vertices()) s.set_vertex(v, v);
    s.set_edge("a", {{"a", 1}, {"a", 1}});
    s.set_edge("b", {{"b", 1}, {"b", 1}});
    s.set_edge("c1", {{"a", 1}, {"c1", 1}});
    s.set_edge("c2", {{"b", 1}, {"c2", 1}});
    s.set_edge("c3", {{"b", 1}, {"c3", 1}});
    s.set_edge("c4", {{"a", 1}, {"c4", 1}});
    s.validate();

    SolenoidCircle base = solenoid_circle();
    CellularMap p(g, base.complex);
    p.set_vertex("vL", "v-");
    p.set_vertex("vR", "v-");
    p.set_vertex("x", "v+");
    p.set_vertex("y", "v+");
    p.set_edge("a", {{"E", 1}, {"T", 1}});
    p.set_edge("b", {{"E", 1}, {"T", 1}});
    p.set_edge("c1", {{"E", 1}});
    p.set_edge("c2", {{"E", 1}});
    p.set_edge("c3", {{"E", 1}});
    p.set_edge("c4", {{"E", 1}});
    p.validate();

    GammaTmPrime out{g, s, base.complex, p, base.doubling};

    // reconstruction self-check: the projection must intertwine the two
    // self-maps on the nose, and the invariant small loop must be fixed
    CochainMap ps = out.factor.induced_cochain_map();
    CochainMap ss = out.self_map.induced_cochain_map();
    CochainMap ds = out.base_self.induced_cochain_map();
    CochainMap left = compose(ss, ps);   // C(circle) -> C(gamma), via self then pull
    CochainMap right = compose(ps, ds);
    for (int k = 0; k <= 1; ++k)
        if (left.matrix(k) != right.matrix(k))
            throw InconsistentState("gamma_tm_prime: projection fails to intertwine");
    return out;
}

} // namespace tilecoh
