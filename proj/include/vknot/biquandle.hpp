#pragma once

#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vknot/gauss.hpp"

namespace vknot {

/**
 * Finite biquandle: two n x n tables circ (x∘y) and star (x∗y) with
 * derived inverses.  Tables are only required to be total and in range
 * at construction; run check_axioms to certify the axioms.
 */
class Biquandle {
public:
    static Biquandle from_tables(const std::vector<std::vector<int>>& circ,
                                 const std::vector<std::vector<int>>& star) {
        Biquandle X;
        X.n_ = (int)circ.size();
        if (X.n_ == 0 || (int)star.size() != X.n_)
            throw std::runtime_error("biquandle tables must be square and equal-sized");
        for (const auto* t : {&circ, &star})
            for (const auto& row : *t) {
                if ((int)row.size() != X.n_)
                    throw std::runtime_error("ragged biquandle table");
                for (int v : row)
                    if (v < 0 || v >= X.n_)
                        throw std::runtime_error("biquandle table entry out of range");
            }
        X.circ_ = circ;
        X.star_ = star;
        X.build_inverses();
        return X;
    }

    int size() const { return n_; }
    int circ(int x, int y) const { return circ_[x][y]; }
    int star(int x, int y) const { return star_[x][y]; }

    /** x with x∘y = z, or -1 if β_y is not invertible at z. */
    int circ_inv(int z, int y) const { return circ_inv_[z][y]; }
    int star_inv(int z, int y) const { return star_inv_[z][y]; }

    /**
     * Color transport through a crossing, the single source of truth
     * for the crossing relation: the strand pair entering as
     * (under, over) = (x, y) leaves as (x∘y, y∗x).  The mirrored
     * reading of the defining figure would swap circ and star here and
     * nowhere else.
     */
    std::pair<int, int> forward(int under_from, int over_from) const {
        return {circ_[under_from][over_from], star_[over_from][under_from]};
    }

    /** Unique preimage of forward; needs S invertible (axiom R3). */
    std::pair<int, int> backward(int under_to, int over_to) const {
        int packed = s_inv_[(size_t)star_pack(under_to, over_to)];
        if (packed < 0)
            throw std::domain_error("S is not invertible on these tables");
        return {packed / n_, packed % n_};
    }

private:
    int n_ = 0;
    std::vector<std::vector<int>> circ_, star_;
    std::vector<std::vector<int>> circ_inv_, star_inv_;
    std::vector<int> s_inv_;

    int star_pack(int under_to, int over_to) const {
        // forward(x, y) = (x∘y, y∗x); pack the image pair row-major
        return under_to * n_ + over_to;
    }

    void build_inverses() {
        circ_inv_.assign(n_, std::vector<int>(n_, -1));
        star_inv_.assign(n_, std::vector<int>(n_, -1));
        for (int y = 0; y < n_; ++y)
            for (int x = 0; x < n_; ++x) {
                circ_inv_[circ_[x][y]][y] = x;
                star_inv_[star_[x][y]][y] = x;
            }
        s_inv_.assign((size_t)n_ * n_, -1);
        for (int x = 0; x < n_; ++x)
            for (int y = 0; y < n_; ++y)
                s_inv_[(size_t)star_pack(circ_[x][y], star_[y][x])] = x * n_ + y;
    }
};

struct AxiomViolation {
    std::string axiom;
    std::vector<int> witness;

    std::string describe() const {
        std::ostringstream out;
        out << axiom << " fails at (";
        for (size_t i = 0; i < witness.size(); ++i)
            out << (i ? "," : "") << witness[i];
        out << ')';
        return out.str();
    }
};

/** Empty result certifies that X satisfies biquandle axioms R1-R4. */
inline std::vector<AxiomViolation> check_axioms(const Biquandle& X) {
    std::vector<AxiomViolation> bad;
    int n = X.size();
    for (int x = 0; x < n; ++x)
        if (X.circ(x, x) != X.star(x, x))
            bad.push_back({"R1", {x}});
    for (int y = 0; y < n; ++y) {
        std::vector<int> seen_c(n, 0), seen_s(n, 0);
        for (int x = 0; x < n; ++x) {
            seen_c[X.circ(x, y)] += 1;
            seen_s[X.star(x, y)] += 1;
        }
        for (int z = 0; z < n; ++z) {
            if (seen_c[z] != 1) {
                bad.push_back({"R2 (circ column)", {y, z}});
                break;
            }
        }
        for (int z = 0; z < n; ++z) {
            if (seen_s[z] != 1) {
                bad.push_back({"R2 (star column)", {y, z}});
                break;
            }
        }
    }
    {
        std::vector<int> hit(n * n, 0);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                hit[X.star(y, x) * n + X.circ(x, y)] += 1;
        for (int p = 0; p < n * n; ++p)
            if (hit[p] != 1) {
                bad.push_back({"R3", {p / n, p % n}});
                break;
            }
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (X.circ(X.circ(x, z), X.circ(y, z)) !=
                    X.circ(X.circ(x, y), X.star(z, y)))
                    bad.push_back({"R4 (first exchange law)", {x, y, z}});
                if (X.star(X.circ(y, z), X.circ(x, z)) !=
                    X.circ(X.star(y, x), X.star(z, x)))
                    bad.push_back({"R4 (second exchange law)", {x, y, z}});
                if (X.star(X.star(z, x), X.star(y, x)) !=
                    X.star(X.star(z, y), X.circ(x, y)))
                    bad.push_back({"R4 (third exchange law)", {x, y, z}});
            }
    return bad;
}

/**
 * Text format: "n=<size>", a "circ:" header followed by n rows of n
 * entries, then "star:" likewise.  "#" starts a comment.
 */
inline Biquandle parse_biquandle(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    std::vector<std::vector<int>> circ, star;
    std::vector<std::vector<int>>* target = nullptr;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first))
            continue;
        if (first.rfind("n=", 0) == 0) {
            n = std::stoi(first.substr(2));
            if (n < 1)
                throw std::runtime_error("biquandle size must be positive");
        } else if (first == "circ:" || first == "star:") {
            target = first == "circ:" ? &circ : &star;
            std::vector<int> row;
            int v;
            while (ls >> v)
                row.push_back(v);
            if (!row.empty())
                target->push_back(row);
        } else {
            if (!target)
                throw std::runtime_error("table row before circ:/star: header");
            std::vector<int> row;
            ls.clear();
            ls.str(line);
            int v;
            while (ls >> v)
                row.push_back(v);
            target->push_back(row);
        }
    }
    if (n < 1)
        throw std::runtime_error("missing n= line in biquandle file");
    if ((int)circ.size() != n || (int)star.size() != n)
        throw std::runtime_error("expected " + std::to_string(n) +
                                 " rows in each biquandle table");
    return Biquandle::from_tables(circ, star);
}

/** Named built-ins: "flip2", "dihedral3", "singleton". */
inline Biquandle builtin_biquandle(const std::string& name) {
    if (name == "flip2")
        return Biquandle::from_tables({{1, 1}, {0, 0}}, {{1, 1}, {0, 0}});
    if (name == "dihedral3") {
        std::vector<std::vector<int>> circ(3, std::vector<int>(3));
        std::vector<std::vector<int>> star(3, std::vector<int>(3));
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) {
                circ[x][y] = x;
                star[x][y] = ((2 * y - x) % 3 + 3) % 3;
            }
        return Biquandle::from_tables(circ, star);
    }
    if (name == "singleton")
        return Biquandle::from_tables({{0}}, {{0}});
    throw std::runtime_error("unknown builtin biquandle: " + name);
}

/** Semiarc colors, indexed by the diagram's semiarc ids. */
using Coloring = std::vector<int>;

struct CrossingColors {
    int over_in, over_out, under_in, under_out;
};

inline CrossingColors colors_at(const LinkDiagram& d, const Coloring& f, int c) {
    CrossingEnds e = d.ends(c);
    return {f[e.over_in], f[e.over_out], f[e.under_in], f[e.under_out]};
}

inline bool coloring_valid_at(const LinkDiagram& d, const Biquandle& X,
                              const Coloring& f, int c) {
    CrossingColors k = colors_at(d, f, c);
    if (d.sign(c) > 0)
        return X.forward(k.under_in, k.over_in) ==
               std::pair<int, int>(k.under_out, k.over_out);
    return X.forward(k.under_out, k.over_out) ==
           std::pair<int, int>(k.under_in, k.over_in);
}

/**
 * All semiarc assignments satisfying the crossing relation everywhere,
 * in lexicographic order.  Backtracking assigns semiarcs in id order;
 * whenever both colors on one side of a crossing are known the other
 * side is forced through S or its inverse.
 */
inline std::vector<Coloring> enumerate_colorings(const LinkDiagram& d,
                                                 const Biquandle& X) {
    int S = d.semiarc_count();
    int n = d.crossing_count();
    std::vector<Coloring> out;
    Coloring col(S, -1);

    // semiarc -> crossings it touches (for propagation scheduling)
    std::vector<std::vector<int>> touching(S);
    for (int c = 0; c < n; ++c) {
        CrossingEnds e = d.ends(c);
        for (int s : {e.over_in, e.over_out, e.under_in, e.under_out})
            touching[s].push_back(c);
    }

    // Returns false on conflict; records every semiarc it assigns.
    auto propagate = [&](int seed, std::vector<int>& trail) -> bool {
        std::vector<int> queue{seed};
        auto set_color = [&](int s, int v) -> bool {
            if (col[s] == v)
                return true;
            if (col[s] != -1)
                return false;
            col[s] = v;
            trail.push_back(s);
            queue.push_back(s);
            return true;
        };
        while (!queue.empty()) {
            int s = queue.back();
            queue.pop_back();
            for (int c : touching[s]) {
                CrossingEnds e = d.ends(c);
                int ui = col[e.under_in], oi = col[e.over_in];
                int uo = col[e.under_out], oo = col[e.over_out];
                bool ins = ui != -1 && oi != -1;
                bool outs = uo != -1 && oo != -1;
                if (!ins && !outs)
                    continue;
                if (d.sign(c) > 0) {
                    if (ins) {
                        auto [u2, o2] = X.forward(ui, oi);
                        if (!set_color(e.under_out, u2) ||
                            !set_color(e.over_out, o2))
                            return false;
                    } else {
                        auto [u1, o1] = X.backward(uo, oo);
                        if (!set_color(e.under_in, u1) ||
                            !set_color(e.over_in, o1))
                            return false;
                    }
                } else {
                    if (outs) {
                        auto [u1, o1] = X.forward(uo, oo);
                        if (!set_color(e.under_in, u1) ||
                            !set_color(e.over_in, o1))
                            return false;
                    } else {
                        auto [u2, o2] = X.backward(ui, oi);
                        if (!set_color(e.under_out, u2) ||
                            !set_color(e.over_out, o2))
                            return false;
                    }
                }
            }
        }
        return true;
    };

    std::function<void(int)> go = [&](int s) {
        while (s < S && col[s] != -1)
            ++s;
        if (s == S) {
            for (int c = 0; c < n; ++c)
                if (!coloring_valid_at(d, X, col, c))
                    return;
            out.push_back(col);
            return;
        }
        for (int v = 0; v < X.size(); ++v) {
            std::vector<int> trail;
            col[s] = v;
            trail.push_back(s);
            if (propagate(s, trail))
                go(s + 1);
            for (int t : trail)
                col[t] = -1;
        }
    };
    go(0);
    return out;
}

} // namespace vknot
