#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vknot/algebra.hpp"
#include "vknot/biquandle.hpp"
#include "vknot/freegraph.hpp"
#include "vknot/gauss.hpp"
#include "vknot/parity.hpp"

namespace vknot {

using CoeffTable = std::vector<std::vector<RingElem>>;

/**
 * The state-sum machinery below indexes coefficient tables by the same
 * colour pair that the flip-biquandle parity reads off a crossing:
 * (under-in, over-out) at positive crossings and (under-out, over-in)
 * at negative ones.  At a kink that pair sits on the little loop, so
 * the diagonal relations C_{x,x}=F_{x,x}=0 and delta*A_{x,x}+B_{x,x}=w
 * are exactly the ones that fire when a kink is added or removed.
 */
inline std::pair<int, int> coefficient_cell(const LinkDiagram& d,
                                            const Coloring& f, int c) {
    CrossingColors k = colors_at(d, f, c);
    if (d.sign(c) > 0)
        return {k.under_in, k.over_out};
    return {k.under_out, k.over_in};
}

struct RelationViolation {
    std::string equation;
    std::vector<int> at;

    std::string describe() const {
        std::ostringstream out;
        out << equation << " fails at (";
        for (size_t i = 0; i < at.size(); ++i)
            out << (i ? "," : "") << at[i];
        out << ')';
        return out.str();
    }
};

using RelationReport = std::vector<RelationViolation>;

/* ------------------------------------------------------------------ */
/*  Parity bracket                                                     */
/* ------------------------------------------------------------------ */

/**
 * Z2-linear combination of framed 4-valent graphs attached to a
 * diagram: odd crossings stay graphical vertices, and the sum runs
 * over both smoothings of every even crossing.  Values live in the
 * graph module with delta = 0, so any state that splits off a free
 * circle next to leftover vertices vanishes, while an all-smoothed
 * state survives only when it traces a single circle.
 */
inline GraphPolynomial parity_bracket(const LinkDiagram& d,
                                      const ParityMap& parity) {
    Ring z2 = Ring::mod(2);
    GraphPolynomial out(z2, z2.zero());
    int n = d.crossing_count();
    std::vector<int> even;
    std::vector<Smoothing> choice(n, Smoothing::Vertex);
    for (int c = 0; c < n; ++c) {
        auto it = parity.find(d.label(c));
        if (it == parity.end())
            throw std::invalid_argument("parity map misses crossing '" +
                                        d.label(c) + "'");
        if (it->second == 0)
            even.push_back(c);
    }
    RingElem one = z2.one();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << even.size());
         ++mask) {
        for (size_t i = 0; i < even.size(); ++i)
            choice[even[i]] = (mask >> i) & 1 ? Smoothing::Disoriented
                                              : Smoothing::Oriented;
        out.add_term(one, smooth_state(d, choice));
    }
    return out;
}

inline GraphPolynomial parity_bracket(const LinkDiagram& d, ParityKind kind) {
    return parity_bracket(d, parity_map(d, kind));
}

/* ------------------------------------------------------------------ */
/*  Invariant multisets                                                */
/* ------------------------------------------------------------------ */

/**
 * Multiset of canonically serialized invariant values, one entry per
 * biquandle colouring.  The domain string records the value space
 * (ring, and delta for graph-valued brackets) so that only comparable
 * multisets ever get compared.
 */
class InvariantMultiset {
public:
    explicit InvariantMultiset(std::string domain = "")
        : domain_(std::move(domain)) {}

    void insert(const std::string& value) { counts_[value] += 1; }

    const std::map<std::string, int>& counts() const { return counts_; }
    const std::string& domain() const { return domain_; }

    int total() const {
        int t = 0;
        for (const auto& [v, m] : counts_)
            t += m;
        return t;
    }

    int multiplicity(const std::string& value) const {
        auto it = counts_.find(value);
        return it == counts_.end() ? 0 : it->second;
    }

    std::string to_string() const {
        std::ostringstream out;
        for (const auto& [v, m] : counts_)
            out << v << " # " << m << '\n';
        return out.str();
    }

    /** Generating-function form: the values become exponents of u. */
    std::string generating_function() const {
        if (counts_.empty())
            return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [v, m] : counts_) {
            if (!first)
                out << " + ";
            first = false;
            if (m != 1)
                out << m << '*';
            out << "u^(" << v << ')';
        }
        return out.str();
    }

    bool operator==(const InvariantMultiset& o) const {
        return domain_ == o.domain_ && counts_ == o.counts_;
    }
    bool operator!=(const InvariantMultiset& o) const { return !(*this == o); }

private:
    std::string domain_;
    std::map<std::string, int> counts_;
};

inline bool compare_multisets(const InvariantMultiset& a,
                              const InvariantMultiset& b) {
    if (a.domain() != b.domain())
        throw std::domain_error("multisets live in different value spaces: '" +
                                a.domain() + "' vs '" + b.domain() + "'");
    return a.counts() == b.counts();
}

/* ------------------------------------------------------------------ */
/*  Scalar biquandle bracket                                           */
/* ------------------------------------------------------------------ */

namespace detail {

inline void require_square(const CoeffTable& t, int n, const std::string& name) {
    if ((int)t.size() != n)
        throw std::domain_error(name + " table must have " + std::to_string(n) +
                                " rows");
    for (const auto& row : t)
        if ((int)row.size() != n)
            throw std::domain_error(name + " table must be " +
                                    std::to_string(n) + "x" +
                                    std::to_string(n));
}

inline void require_units(const Ring& ring, const CoeffTable& t,
                          const std::string& name) {
    for (size_t x = 0; x < t.size(); ++x)
        for (size_t y = 0; y < t[x].size(); ++y)
            if (!ring.is_unit(t[x][y]))
                throw std::domain_error(name + "[" + std::to_string(x) + "][" +
                                        std::to_string(y) + "] = " +
                                        ring.to_string(t[x][y]) +
                                        " is not a unit");
}

} // namespace detail

/**
 * Checks the skein-coefficient relations for the scalar (two-state)
 * bracket: the kink equations on the diagonal, the per-cell expression
 * for delta, and the five triple-product equations coming from the
 * third Reidemeister move.  Returns every violation with a witness.
 */
inline RelationReport verify_nor_relations(const Ring& ring,
                                           const Biquandle& X,
                                           const CoeffTable& A,
                                           const CoeffTable& B,
                                           const RingElem& delta,
                                           const RingElem& w) {
    int n = X.size();
    detail::require_square(A, n, "A");
    detail::require_square(B, n, "B");
    detail::require_units(ring, A, "A");
    detail::require_units(ring, B, "B");
    if (!ring.is_unit(w))
        throw std::domain_error("w = " + ring.to_string(w) + " is not a unit");
    RelationReport bad;
    RingElem wi = ring.inverse(w);
    for (int x = 0; x < n; ++x) {
        if (ring.add(ring.mul(delta, A[x][x]), B[x][x]) != w)
            bad.push_back({"(i) delta*A[x,x]+B[x,x]=w", {x}});
        if (ring.add(ring.mul(delta, ring.inverse(A[x][x])),
                     ring.inverse(B[x][x])) != wi)
            bad.push_back({"(i) delta*A^-1[x,x]+B^-1[x,x]=w^-1", {x}});
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            RingElem rhs =
                ring.neg(ring.add(ring.mul(A[x][y], ring.inverse(B[x][y])),
                                  ring.mul(ring.inverse(A[x][y]), B[x][y])));
            if (delta != rhs)
                bad.push_back({"(ii) delta=-A*B^-1-A^-1*B", {x, y}});
        }
    auto prod3 = [&](const RingElem& p, const RingElem& q, const RingElem& r) {
        return ring.mul(p, ring.mul(q, r));
    };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                int xy = X.circ(x, y), zy = X.star(z, y);
                int xz = X.circ(x, z), yz = X.circ(y, z);
                int yx = X.star(y, x), zx = X.star(z, x);
                const RingElem &a1 = A[x][y], &a2 = A[y][z], &a3 = A[xy][zy];
                const RingElem &b1 = B[x][y], &b2 = B[y][z], &b3 = B[xy][zy];
                const RingElem &A1 = A[x][z], &A2 = A[yx][zx], &A3 = A[xz][yz];
                const RingElem &B1 = B[x][z], &B2 = B[yx][zx], &B3 = B[xz][yz];
                if (prod3(a1, a2, a3) != prod3(A1, A2, A3))
                    bad.push_back({"(iii) AAA=AAA", {x, y, z}});
                if (prod3(a1, b2, b3) != prod3(B1, B2, A3))
                    bad.push_back({"(iii) ABB=BBA", {x, y, z}});
                if (prod3(b1, a2, b3) != prod3(B1, A2, B3))
                    bad.push_back({"(iii) BAB=BAB", {x, y, z}});
                RingElem lhs4 = prod3(a1, a2, b3);
                RingElem rhs4 = ring.add(
                    ring.add(prod3(A1, B2, A3), prod3(A1, A2, B3)),
                    ring.add(ring.mul(delta, prod3(A1, B2, B3)),
                             prod3(B1, B2, B3)));
                if (lhs4 != rhs4)
                    bad.push_back({"(iii) AAB=ABA+AAB+delta*ABB+BBB", {x, y, z}});
                RingElem lhs5 = prod3(B1, A2, A3);
                RingElem rhs5 = ring.add(
                    ring.add(prod3(b1, a2, a3), prod3(a1, b2, a3)),
                    ring.add(ring.mul(delta, prod3(b1, b2, a3)),
                             prod3(b1, b2, b3)));
                if (lhs5 != rhs5)
                    bad.push_back({"(iii) BAA=BAA+ABA+delta*BBA+BBB", {x, y, z}});
            }
    return bad;
}

/**
 * Scalar bracket of one coloured diagram: over the 2^n smoothing
 * states the positive crossings contribute A or B entries and the
 * negative ones their inverses (oriented smoothing first), each state
 * weighted by delta^circles, everything scaled by w^(-writhe).
 */
inline RingElem biquandle_bracket_value(const LinkDiagram& d,
                                        const Coloring& f, const Ring& ring,
                                        const CoeffTable& A,
                                        const CoeffTable& B,
                                        const RingElem& delta,
                                        const RingElem& w) {
    int n = d.crossing_count();
    detail::require_units(ring, A, "A");
    detail::require_units(ring, B, "B");
    if (!ring.is_unit(w))
        throw std::domain_error("w = " + ring.to_string(w) + " is not a unit");
    std::vector<std::array<RingElem, 2>> factor(n);
    for (int c = 0; c < n; ++c) {
        auto [x, y] = coefficient_cell(d, f, c);
        if (d.sign(c) > 0)
            factor[c] = {A[x][y], B[x][y]};
        else
            factor[c] = {ring.inverse(A[x][y]), ring.inverse(B[x][y])};
    }
    RingElem total = ring.zero();
    std::vector<Smoothing> choice(n, Smoothing::Oriented);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        RingElem coeff = ring.one();
        for (int c = 0; c < n; ++c) {
            bool dis = (mask >> c) & 1;
            choice[c] = dis ? Smoothing::Disoriented : Smoothing::Oriented;
            coeff = ring.mul(coeff, factor[c][dis ? 1 : 0]);
        }
        FreeGraph g = smooth_state(d, choice);
        total = ring.add(total,
                         ring.mul(coeff, ring.pow(delta, g.free_circles)));
    }
    return ring.mul(total, ring.pow(w, -(long long)d.writhe()));
}

inline InvariantMultiset biquandle_bracket_multiset(const LinkDiagram& d,
                                                    const Biquandle& X,
                                                    const Ring& ring,
                                                    const CoeffTable& A,
                                                    const CoeffTable& B,
                                                    const RingElem& delta,
                                                    const RingElem& w) {
    InvariantMultiset out(ring.descriptor());
    for (const Coloring& f : enumerate_colorings(d, X))
        out.insert(ring.to_string(
            biquandle_bracket_value(d, f, ring, A, B, delta, w)));
    return out;
}

/* ------------------------------------------------------------------ */
/*  Kauffman oracle                                                    */
/* ------------------------------------------------------------------ */

/**
 * Brute-force Kauffman bracket with the writhe correction, computed
 * through a disjoint-set circle count rather than the circle tracer
 * the brackets use, so the two state sums share no code.  At positive
 * crossings the a-weighted smoothing is the oriented one, at negative
 * crossings the disoriented one.
 */
inline RingElem kauffman_oracle(const LinkDiagram& d, const Ring& ring,
                                const RingElem& a) {
    if (!ring.is_unit(a))
        throw std::domain_error("bracket variable must be a unit, got " +
                                ring.to_string(a));
    int n = d.crossing_count();
    RingElem ai = ring.inverse(a);
    RingElem delta = ring.neg(ring.add(ring.mul(a, a), ring.mul(ai, ai)));

    // ends 2s, 2s+1 = tail and head of semiarc s; a crossingless circle
    // is its own closed semiarc, so the union-find covers it too
    int ends = 2 * d.semiarc_count();
    std::vector<int> parent(ends);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v)
            v = parent[v] = parent[parent[v]];
        return v;
    };
    RingElem total = ring.zero();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (int v = 0; v < ends; ++v)
            parent[v] = v;
        auto join = [&](int u, int v) { parent[find(u)] = find(v); };
        int exponent = 0;
        for (int c = 0; c < n; ++c) {
            CrossingEnds e = d.ends(c);
            bool pick_a = !((mask >> c) & 1);
            exponent += pick_a ? 1 : -1;
            bool oriented = pick_a == (d.sign(c) > 0);
            if (oriented) {
                join(2 * e.over_in + 1, 2 * e.under_out);
                join(2 * e.under_in + 1, 2 * e.over_out);
            } else {
                join(2 * e.over_in + 1, 2 * e.under_in + 1);
                join(2 * e.over_out, 2 * e.under_out);
            }
        }
        for (int s = 0; s < d.semiarc_count(); ++s)
            join(2 * s, 2 * s + 1);
        int circles = 0;
        for (int v = 0; v < ends; ++v)
            if (find(v) == v)
                circles += 1;
        total = ring.add(total, ring.mul(ring.pow(a, exponent),
                                         ring.pow(delta, circles)));
    }
    RingElem w = ring.neg(ring.mul(a, ring.mul(a, a)));
    return ring.mul(total, ring.pow(w, -(long long)d.writhe()));
}

/* ------------------------------------------------------------------ */
/*  Parity-biquandle bracket                                           */
/* ------------------------------------------------------------------ */

/**
 * Coefficient pack for the three-state bracket: at a positive crossing
 * A, B and C weight the oriented smoothing, the disoriented smoothing
 * and the surviving vertex; D, E and F play those roles at a negative
 * crossing.  delta is the free-circle value and w the positive-kink
 * unit.  Tables are |X| x |X|, indexed by coefficient_cell colours.
 */
struct BracketCoefficients {
    Ring ring;
    Biquandle X;
    CoeffTable A, B, C, D, E, F;
    RingElem delta, w;
    std::string x_descriptor;

    BracketCoefficients(Ring ring_, Biquandle X_, CoeffTable A_, CoeffTable B_,
                        CoeffTable C_, CoeffTable D_, CoeffTable E_,
                        CoeffTable F_, RingElem delta_, RingElem w_,
                        std::string x_descriptor_ = "")
        : ring(std::move(ring_)), X(std::move(X_)), A(std::move(A_)),
          B(std::move(B_)), C(std::move(C_)), D(std::move(D_)),
          E(std::move(E_)), F(std::move(F_)), delta(std::move(delta_)),
          w(std::move(w_)), x_descriptor(std::move(x_descriptor_)) {
        int n = X.size();
        detail::require_square(A, n, "A");
        detail::require_square(B, n, "B");
        detail::require_square(C, n, "C");
        detail::require_square(D, n, "D");
        detail::require_square(E, n, "E");
        detail::require_square(F, n, "F");
        if (!ring.is_unit(w))
            throw std::domain_error("w = " + ring.to_string(w) +
                                    " is not a unit");
    }

    const CoeffTable& table(int which) const {
        switch (which) {
        case 0: return A;
        case 1: return B;
        case 2: return C;
        case 3: return D;
        case 4: return E;
        default: return F;
        }
    }
};

/** The two-state coefficient pack (A,B,0,A^-1,B^-1,0) seen as a three-state one. */
inline BracketCoefficients nor_reduction(const Biquandle& X, const Ring& ring,
                                         const CoeffTable& A,
                                         const CoeffTable& B,
                                         const RingElem& delta,
                                         const RingElem& w,
                                         const std::string& x_descriptor = "") {
    int n = X.size();
    detail::require_square(A, n, "A");
    detail::require_square(B, n, "B");
    CoeffTable D(n, std::vector<RingElem>(n)), E = D,
               Z(n, std::vector<RingElem>(n, ring.zero()));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            D[x][y] = ring.inverse(A[x][y]);
            E[x][y] = ring.inverse(B[x][y]);
        }
    return BracketCoefficients(ring, X, A, B, Z, D, E, Z, delta, w,
                               x_descriptor);
}

/**
 * Z2 coefficients over the two-colour flip biquandle whose vertex
 * tables C, F are the odd-crossing indicator: off-diagonal cells keep
 * the vertex, diagonal cells smooth both ways.  The resulting bracket
 * reproduces the Gaussian-parity bracket in every colouring.
 */
inline BracketCoefficients flip_parity_coefficients() {
    Ring z2 = Ring::mod(2);
    RingElem o = z2.one(), z = z2.zero();
    CoeffTable diag{{o, z}, {z, o}}, off{{z, o}, {o, z}};
    return BracketCoefficients(z2, builtin_biquandle("flip2"), diag, diag, off,
                               diag, diag, off, z, o, "builtin:flip2");
}

/**
 * Checks the three-state relation system: the kink relations (i), the
 * union of the per-cell two-crossing relations (ii) from both parallel
 * and antiparallel second moves, and the sixteen triple equations
 * (iii) from the third move.  Two printed forms of equations seven and
 * eight index their second summand inconsistently with the remaining
 * fourteen; the verifier checks the pattern-consistent reading, and
 * with strict_printed also the literal one.
 */
inline RelationReport verify_pbbr_relations(const BracketCoefficients& beta,
                                            bool strict_printed = false) {
    const Ring& R = beta.ring;
    const Biquandle& X = beta.X;
    int n = X.size();
    RelationReport bad;
    RingElem one = R.one();
    RingElem wi = R.inverse(beta.w);
    auto mul3 = [&](const RingElem& p, const RingElem& q, const RingElem& r) {
        return R.mul(p, R.mul(q, r));
    };
    for (int x = 0; x < n; ++x) {
        if (R.add(R.mul(beta.delta, beta.A[x][x]), beta.B[x][x]) != beta.w)
            bad.push_back({"(i) delta*A[x,x]+B[x,x]=w", {x}});
        if (R.add(R.mul(beta.delta, beta.D[x][x]), beta.E[x][x]) != wi)
            bad.push_back({"(i) delta*D[x,x]+E[x,x]=w^-1", {x}});
        if (!beta.C[x][x].is_zero())
            bad.push_back({"(i) C[x,x]=0", {x}});
        if (!beta.F[x][x].is_zero())
            bad.push_back({"(i) F[x,x]=0", {x}});
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const RingElem &a = beta.A[x][y], &b = beta.B[x][y],
                           &c = beta.C[x][y], &dd = beta.D[x][y],
                           &e = beta.E[x][y], &ff = beta.F[x][y];
            if (!R.mul(a, ff).is_zero())
                bad.push_back({"(ii) A*F=0", {x, y}});
            if (!R.mul(c, dd).is_zero())
                bad.push_back({"(ii) C*D=0", {x, y}});
            if (!R.mul(b, ff).is_zero())
                bad.push_back({"(ii) B*F=0", {x, y}});
            if (!R.mul(c, e).is_zero())
                bad.push_back({"(ii) C*E=0", {x, y}});
            RingElem complement = R.sub(one, R.mul(c, ff));
            if (R.mul(a, dd) != complement)
                bad.push_back({"(ii) A*D=1-C*F", {x, y}});
            if (R.mul(b, e) != complement)
                bad.push_back({"(ii) B*E=1-C*F", {x, y}});
            if (R.mul(beta.delta, R.mul(a, dd)) !=
                R.neg(R.add(R.mul(a, e), R.mul(b, dd))))
                bad.push_back({"(ii) delta*A*D=-A*E-B*D", {x, y}});
        }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                int xy = X.circ(x, y), zy = X.star(z, y);
                int xz = X.circ(x, z), yz = X.circ(y, z);
                int yx = X.star(y, x), zx = X.star(z, x);
                const RingElem &a1 = beta.A[x][y], &b1 = beta.B[x][y],
                               &c1 = beta.C[x][y];
                const RingElem &a2 = beta.A[y][z], &b2 = beta.B[y][z],
                               &c2 = beta.C[y][z];
                const RingElem &a3 = beta.A[xy][zy], &b3 = beta.B[xy][zy],
                               &c3 = beta.C[xy][zy];
                const RingElem &A1 = beta.A[x][z], &B1 = beta.B[x][z],
                               &C1 = beta.C[x][z];
                const RingElem &A2 = beta.A[yx][zx], &B2 = beta.B[yx][zx],
                               &C2 = beta.C[yx][zx];
                const RingElem &A3 = beta.A[xz][yz], &B3 = beta.B[xz][yz],
                               &C3 = beta.C[xz][yz];
                auto expect = [&](const char* id, const RingElem& lhs,
                                  const RingElem& rhs) {
                    if (lhs != rhs)
                        bad.push_back({id, {x, y, z}});
                };
                expect("(iii) L1", R.add(mul3(a1, a2, a3), mul3(c1, c2, a3)),
                       R.add(mul3(A1, A2, A3), mul3(A1, C2, C3)));
                expect("(iii) L2", R.add(mul3(a1, b2, b3), mul3(c1, b2, c3)),
                       R.add(mul3(B1, B2, A3), mul3(C1, B2, C3)));
                expect("(iii) L3", R.add(mul3(b1, a2, b3), mul3(b1, c2, c3)),
                       R.add(mul3(B1, A2, B3), mul3(C1, C2, B3)));
                expect("(iii) L4", R.add(mul3(a1, c2, a3), mul3(c1, a2, a3)),
                       mul3(C1, A2, A3));
                expect("(iii) L5", mul3(a1, a2, c3),
                       R.add(mul3(A1, A2, C3), mul3(A1, C2, A3)));
                expect("(iii) L6", mul3(a1, c2, b3),
                       R.add(mul3(B1, B2, C3), mul3(C1, B2, A3)));
                expect("(iii) L7", R.add(mul3(b1, c2, b3), mul3(b1, a2, c3)),
                       mul3(B1, A2, C3));
                expect("(iii) L8", R.add(mul3(a1, b2, c3), mul3(c1, b2, b3)),
                       mul3(B1, C2, A3));
                if (strict_printed) {
                    expect("(iii) L7 (printed)",
                           R.add(mul3(b1, c2, b3), mul3(B1, a2, c3)),
                           mul3(B1, A2, C3));
                    expect("(iii) L8 (printed)",
                           R.add(mul3(a1, b2, c3), mul3(C1, b2, b3)),
                           mul3(B1, C2, A3));
                }
                expect("(iii) L9", mul3(c1, a2, b3),
                       R.add(mul3(B1, C2, B3), mul3(C1, A2, B3)));
                expect("(iii) L10", mul3(c1, c2, b3), mul3(B1, C2, C3));
                expect("(iii) L11", mul3(a1, c2, c3), mul3(C1, C2, A3));
                expect("(iii) L12", mul3(c1, a2, c3), mul3(C1, A2, C3));
                expect("(iii) L13a", mul3(b1, c2, a3), R.zero());
                expect("(iii) L13b", mul3(c1, b2, a3), R.zero());
                expect("(iii) L13c", mul3(b1, b2, c3), R.zero());
                expect("(iii) L13d", mul3(c1, c2, c3), R.zero());
                expect("(iii) L14a", mul3(A1, B2, C3), R.zero());
                expect("(iii) L14b", mul3(A1, C2, B3), R.zero());
                expect("(iii) L14c", mul3(C1, B2, B3), R.zero());
                expect("(iii) L14d", mul3(C1, C2, C3), R.zero());
                expect("(iii) L15", mul3(a1, a2, b3),
                       R.add(R.add(mul3(A1, B2, A3), mul3(A1, A2, B3)),
                             R.add(R.mul(beta.delta, mul3(A1, B2, B3)),
                                   mul3(B1, B2, B3))));
                expect("(iii) L16", mul3(B1, A2, A3),
                       R.add(R.add(mul3(b1, a2, a3), mul3(a1, b2, a3)),
                             R.add(R.mul(beta.delta, mul3(b1, b2, a3)),
                                   mul3(b1, b2, b3))));
            }
    return bad;
}

/**
 * Picture-valued bracket of one coloured diagram: each crossing opens
 * three branches (oriented, disoriented, vertex) weighted by its
 * table row, states assemble into framed graphs, and the normalized
 * sum gets the w^(-writhe) scaling.  Zero factors prune their whole
 * branch, so sparse tables cost far less than 3^n.
 */
inline GraphPolynomial pb_bracket_value(const LinkDiagram& d,
                                        const Coloring& f,
                                        const BracketCoefficients& beta) {
    const Ring& R = beta.ring;
    int n = d.crossing_count();
    for (int c = 0; c < n; ++c)
        if (!coloring_valid_at(d, beta.X, f, c))
            throw std::invalid_argument(
                "colouring violates the crossing relation at '" + d.label(c) +
                "'");
    std::vector<std::array<RingElem, 3>> factor(n);
    for (int c = 0; c < n; ++c) {
        auto [x, y] = coefficient_cell(d, f, c);
        if (d.sign(c) > 0)
            factor[c] = {beta.A[x][y], beta.B[x][y], beta.C[x][y]};
        else
            factor[c] = {beta.D[x][y], beta.E[x][y], beta.F[x][y]};
    }
    static const Smoothing kBranch[3] = {Smoothing::Oriented,
                                         Smoothing::Disoriented,
                                         Smoothing::Vertex};
    GraphPolynomial out(R, beta.delta);
    std::vector<Smoothing> choice(n, Smoothing::Oriented);
    std::function<void(int, const RingElem&)> descend =
        [&](int c, const RingElem& coeff) {
            if (c == n) {
                out.add_term(coeff, smooth_state(d, choice));
                return;
            }
            for (int br = 0; br < 3; ++br) {
                RingElem next = R.mul(coeff, factor[c][br]);
                if (next.is_zero())
                    continue;
                choice[c] = kBranch[br];
                descend(c + 1, next);
            }
        };
    descend(0, R.one());
    out.scale(R.pow(beta.w, -(long long)d.writhe()));
    return out;
}

inline std::string graph_value_domain(const BracketCoefficients& beta) {
    return beta.ring.descriptor() + " delta=" + beta.ring.to_string(beta.delta);
}

inline InvariantMultiset pb_bracket_multiset(const LinkDiagram& d,
                                             const BracketCoefficients& beta) {
    InvariantMultiset out(graph_value_domain(beta));
    for (const Coloring& f : enumerate_colorings(d, beta.X))
        out.insert(pb_bracket_value(d, f, beta).to_string());
    return out;
}

/**
 * Evaluates a graph polynomial supported on the plain circle by
 * sending the circle to delta; any other graph term is an error.
 * Reconciles the one-circle-kept convention of the picture-valued
 * bracket with the delta^k convention of the scalar one.
 */
inline RingElem substitute_circle(const GraphPolynomial& p) {
    RingElem out = p.ring().zero();
    for (const auto& [key, coeff] : p.terms()) {
        if (key != GraphPolynomial::kCircleKey)
            throw std::domain_error("graph term beyond a circle: " + key);
        out = p.ring().add(out, p.ring().mul(coeff, p.delta()));
    }
    return out;
}

/* ------------------------------------------------------------------ */
/*  Coefficient search                                                 */
/* ------------------------------------------------------------------ */

/** Pins for the search: whole tables, single entries, delta, w. */
struct CoefficientConstraints {
    std::optional<RingElem> delta, w;
    std::map<int, RingElem> tables;                    // 0..5 = A..F
    std::map<std::array<int, 3>, RingElem> entries;    // {table, x, y}
};

/**
 * Deterministic backtracking search for coefficient packs over a
 * finite ring: delta and w run over the ring (w over units), each
 * cell's six entries are filtered by the local relations first, and
 * full candidates are kept only when the complete relation report is
 * empty.  Throws when the pruned space still exceeds the node budget.
 */
inline std::vector<BracketCoefficients> search_coefficients(
    const Biquandle& X, const Ring& ring, const CoefficientConstraints& fix,
    long long node_budget = 4000000) {
    if (ring.kind() != RingKind::Zn)
        throw std::domain_error(
            "coefficient search needs a finite ring, got " +
            ring.descriptor());
    long long m = ring.modulus();
    int n = X.size();
    if (fix.w && !ring.is_unit(*fix.w))
        throw std::domain_error("fixed w = " + ring.to_string(*fix.w) +
                                " is not a unit");

    auto pinned = [&](int t, int x, int y) -> std::optional<RingElem> {
        auto it = fix.entries.find({t, x, y});
        if (it != fix.entries.end())
            return it->second;
        auto tt = fix.tables.find(t);
        if (tt != fix.tables.end())
            return tt->second;
        return std::nullopt;
    };

    std::vector<RingElem> elems;
    for (long long v = 0; v < m; ++v)
        elems.push_back(ring.from_int(v));

    std::vector<BracketCoefficients> found;
    std::vector<std::pair<int, int>> cells;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            cells.push_back({x, y});

    for (const RingElem& delta : elems) {
        if (fix.delta && delta != *fix.delta)
            continue;
        for (const RingElem& w : elems) {
            if (fix.w && w != *fix.w)
                continue;
            if (!ring.is_unit(w))
                continue;
            RingElem wi = ring.inverse(w);

            // per-cell candidate six-tuples surviving the local relations
            std::vector<std::vector<std::array<RingElem, 6>>> cand(
                cells.size());
            bool dead = false;
            long long space = 1;
            for (size_t ci = 0; ci < cells.size() && !dead; ++ci) {
                auto [x, y] = cells[ci];
                std::array<std::vector<RingElem>, 6> options;
                for (int t = 0; t < 6; ++t) {
                    auto pin = pinned(t, x, y);
                    if (pin)
                        options[t] = {*pin};
                    else
                        options[t] = elems;
                }
                for (const RingElem& a : options[0])
                    for (const RingElem& b : options[1])
                        for (const RingElem& c : options[2]) {
                            if (x == y && !c.is_zero())
                                continue;
                            if (x == y &&
                                ring.add(ring.mul(delta, a), b) != w)
                                continue;
                            for (const RingElem& dd : options[3]) {
                                if (!ring.mul(c, dd).is_zero())
                                    continue;
                                for (const RingElem& e : options[4]) {
                                    if (!ring.mul(c, e).is_zero())
                                        continue;
                                    if (x == y &&
                                        ring.add(ring.mul(delta, dd), e) != wi)
                                        continue;
                                    for (const RingElem& ff : options[5]) {
                                        if (x == y && !ff.is_zero())
                                            continue;
                                        if (!ring.mul(a, ff).is_zero() ||
                                            !ring.mul(b, ff).is_zero())
                                            continue;
                                        RingElem compl_ =
                                            ring.sub(ring.one(),
                                                     ring.mul(c, ff));
                                        if (ring.mul(a, dd) != compl_ ||
                                            ring.mul(b, e) != compl_)
                                            continue;
                                        if (ring.mul(delta, ring.mul(a, dd)) !=
                                            ring.neg(
                                                ring.add(ring.mul(a, e),
                                                         ring.mul(b, dd))))
                                            continue;
                                        cand[ci].push_back(
                                            {a, b, c, dd, e, ff});
                                    }
                                }
                            }
                        }
                if (cand[ci].empty())
                    dead = true;
                else if (space > node_budget / (long long)cand[ci].size())
                    throw std::domain_error(
                        "coefficient search space too large; pin more "
                        "entries");
                else
                    space *= (long long)cand[ci].size();
            }
            if (dead)
                continue;

            CoeffTable A(n, std::vector<RingElem>(n)), B = A, C = A, D = A,
                       E = A, F = A;
            std::function<void(size_t)> place = [&](size_t ci) {
                if (ci == cells.size()) {
                    BracketCoefficients beta(ring, X, A, B, C, D, E, F, delta,
                                             w);
                    if (verify_pbbr_relations(beta).empty())
                        found.push_back(std::move(beta));
                    return;
                }
                auto [x, y] = cells[ci];
                for (const auto& six : cand[ci]) {
                    A[x][y] = six[0];
                    B[x][y] = six[1];
                    C[x][y] = six[2];
                    D[x][y] = six[3];
                    E[x][y] = six[4];
                    F[x][y] = six[5];
                    place(ci + 1);
                }
            };
            place(0);
        }
    }
    return found;
}

/* ------------------------------------------------------------------ */
/*  Coefficient files                                                  */
/* ------------------------------------------------------------------ */

/**
 * Text format: "ring=", "X=", "delta=", "w=" headers in any order,
 * then six tables introduced by "A:".."F:" with |X| rows of |X|
 * whitespace-separated ring elements (written without inner spaces,
 * e.g. "2*x^-1+3").  "#" starts a comment.  The X= value is resolved
 * by the supplied loader; "builtin:<name>" works out of the box.
 */
inline BracketCoefficients parse_coefficients(
    const std::string& text,
    const std::function<Biquandle(const std::string&)>& load_biquandle =
        [](const std::string& name) {
            if (name.rfind("builtin:", 0) == 0)
                return builtin_biquandle(name.substr(8));
            throw std::runtime_error("cannot resolve biquandle '" + name +
                                     "' without a loader");
        }) {
    std::istringstream in(text);
    std::string line;
    std::optional<Ring> ring;
    std::optional<Biquandle> X;
    std::string x_descriptor, delta_text, w_text;
    std::map<char, std::vector<std::vector<std::string>>> rows;
    char current = 0;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first))
            continue;
        if (first.rfind("ring=", 0) == 0) {
            ring = Ring::from_descriptor(first.substr(5));
        } else if (first.rfind("X=", 0) == 0) {
            x_descriptor = first.substr(2);
            X = load_biquandle(x_descriptor);
        } else if (first.rfind("delta=", 0) == 0) {
            delta_text = first.substr(6);
        } else if (first.rfind("w=", 0) == 0) {
            w_text = first.substr(2);
        } else if (first.size() == 2 && first[1] == ':' && first[0] >= 'A' &&
                   first[0] <= 'F') {
            current = first[0];
            rows[current];
        } else {
            if (!current)
                throw std::runtime_error(
                    "table row before any A:..F: header");
            std::vector<std::string> row;
            row.push_back(first);
            std::string cell;
            while (ls >> cell)
                row.push_back(cell);
            rows[current].push_back(std::move(row));
        }
    }
    if (!ring)
        throw std::runtime_error("missing ring= line");
    if (!X)
        throw std::runtime_error("missing X= line");
    if (delta_text.empty() || w_text.empty())
        throw std::runtime_error("missing delta= or w= line");
    int n = X->size();
    auto build = [&](char name) {
        auto it = rows.find(name);
        if (it == rows.end())
            throw std::runtime_error(std::string("missing table ") + name);
        if ((int)it->second.size() != n)
            throw std::runtime_error(std::string("table ") + name +
                                     " needs " + std::to_string(n) + " rows");
        CoeffTable t(n, std::vector<RingElem>(n));
        for (int x = 0; x < n; ++x) {
            if ((int)it->second[x].size() != n)
                throw std::runtime_error(std::string("table ") + name +
                                         " row " + std::to_string(x) +
                                         " needs " + std::to_string(n) +
                                         " entries");
            for (int y = 0; y < n; ++y)
                t[x][y] = ring->parse(it->second[x][y]);
        }
        return t;
    };
    return BracketCoefficients(*ring, *X, build('A'), build('B'), build('C'),
                               build('D'), build('E'), build('F'),
                               ring->parse(delta_text), ring->parse(w_text),
                               x_descriptor);
}

inline std::string serialize_coefficients(const BracketCoefficients& beta) {
    auto compact = [](std::string s) {
        std::string out;
        for (char ch : s)
            if (ch != ' ')
                out.push_back(ch);
        return out;
    };
    std::ostringstream out;
    out << "ring=" << beta.ring.descriptor() << '\n';
    out << "X=" << (beta.x_descriptor.empty() ? "builtin:?" : beta.x_descriptor)
        << '\n';
    out << "delta=" << compact(beta.ring.to_string(beta.delta)) << '\n';
    out << "w=" << compact(beta.ring.to_string(beta.w)) << '\n';
    const char* names = "ABCDEF";
    for (int t = 0; t < 6; ++t) {
        out << names[t] << ":\n";
        for (int x = 0; x < beta.X.size(); ++x) {
            for (int y = 0; y < beta.X.size(); ++y)
                out << (y ? " " : "")
                    << compact(beta.ring.to_string(beta.table(t)[x][y]));
            out << '\n';
        }
    }
    return out.str();
}

} // namespace vknot
