#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vknot/algebra.hpp"
#include "vknot/gauss.hpp"

namespace vknot {

/**
 * A framed 4-valent graph drawn as a multi-circle chord diagram:
 * cyclic words of chord symbols (each symbol appears exactly twice
 * somewhere) plus a count of chordless circles carried alongside.
 */
struct FreeGraph {
    std::vector<std::vector<int>> circles;
    int free_circles = 0;
};

enum class Smoothing { Oriented, Disoriented, Vertex };

/**
 * Resolve every crossing of d according to `choice` and trace the
 * resulting circles.  Vertex keeps the crossing as a chord; Oriented
 * reconnects respecting orientation; Disoriented performs the other
 * planar reconnection (one arc gets traversed backwards).
 */
inline FreeGraph smooth_state(const LinkDiagram& d,
                              const std::vector<Smoothing>& choice) {
    if ((int)choice.size() != d.crossing_count())
        throw std::runtime_error("state size does not match crossing count");
    int n_ends = 2 * d.semiarc_count();
    std::vector<int> sigma(n_ends, -1), emit(n_ends, -1);
    for (int c = 0; c < d.crossing_count(); ++c) {
        CrossingEnds e = d.ends(c);
        int oi = 2 * e.over_in + 1, oo = 2 * e.over_out;
        int ui = 2 * e.under_in + 1, uo = 2 * e.under_out;
        switch (choice[c]) {
        case Smoothing::Vertex:
            sigma[oi] = oo; sigma[oo] = oi;
            sigma[ui] = uo; sigma[uo] = ui;
            emit[oi] = emit[oo] = emit[ui] = emit[uo] = c;
            break;
        case Smoothing::Oriented:
            sigma[oi] = uo; sigma[uo] = oi;
            sigma[ui] = oo; sigma[oo] = ui;
            break;
        case Smoothing::Disoriented:
            sigma[oi] = ui; sigma[ui] = oi;
            sigma[oo] = uo; sigma[uo] = oo;
            break;
        }
    }

    FreeGraph out;
    for (const auto& comp : d.components())
        if (comp.empty())
            out.free_circles += 1;

    std::vector<char> seen(n_ends, 0);
    for (int e0 = 0; e0 < n_ends; ++e0) {
        if (seen[e0] || sigma[e0] < 0)
            continue;
        std::vector<int> word;
        int e = e0;
        do {
            seen[e] = 1;
            int f = sigma[e];
            seen[f] = 1;
            if (emit[e] >= 0)
                word.push_back(emit[e]);
            e = f ^ 1;
        } while (e != e0);
        if (word.empty())
            out.free_circles += 1;
        else
            out.circles.push_back(std::move(word));
    }
    return out;
}

namespace detail {

inline std::map<int, std::vector<std::pair<int, int>>> chord_sites(
    const std::vector<std::vector<int>>& circles) {
    std::map<int, std::vector<std::pair<int, int>>> sites;
    for (int ci = 0; ci < (int)circles.size(); ++ci)
        for (int pi = 0; pi < (int)circles[ci].size(); ++pi)
            sites[circles[ci][pi]].push_back({ci, pi});
    return sites;
}

inline bool linked_on_circle(const std::vector<std::pair<int, int>>& u_sites,
                             const std::vector<std::pair<int, int>>& v_sites) {
    int p1 = u_sites[0].second, p2 = u_sites[1].second;
    if (p1 > p2)
        std::swap(p1, p2);
    bool in1 = v_sites[0].second > p1 && v_sites[0].second < p2;
    bool in2 = v_sites[1].second > p1 && v_sites[1].second < p2;
    return in1 != in2;
}

inline std::vector<std::pair<int, int>> removable_pairs(const FreeGraph& g) {
    std::vector<std::pair<int, int>> out;
    auto sites = chord_sites(g.circles);
    for (auto iu = sites.begin(); iu != sites.end(); ++iu) {
        for (auto iv = std::next(iu); iv != sites.end(); ++iv) {
            int u = iu->first, v = iv->first;
            // adjacency gaps between an endpoint of u and one of v
            std::vector<std::array<std::pair<int, int>, 2>> gaps;
            for (int ci = 0; ci < (int)g.circles.size(); ++ci) {
                int k = (int)g.circles[ci].size();
                for (int p = 0; p < k; ++p) {
                    int a = g.circles[ci][p], b = g.circles[ci][(p + 1) % k];
                    if ((a == u && b == v) || (a == v && b == u))
                        gaps.push_back({std::pair<int, int>{ci, p},
                                        std::pair<int, int>{ci, (p + 1) % k}});
                }
            }
            bool found = false;
            for (size_t i = 0; i < gaps.size() && !found; ++i) {
                for (size_t j = i + 1; j < gaps.size() && !found; ++j) {
                    std::set<std::pair<int, int>> endpoints{
                        gaps[i][0], gaps[i][1], gaps[j][0], gaps[j][1]};
                    if (endpoints.size() == 4)
                        found = true;
                }
            }
            if (!found)
                continue;
            bool same_circle = iu->second[0].first == iu->second[1].first &&
                               iv->second[0].first == iv->second[1].first &&
                               iu->second[0].first == iv->second[0].first;
            if (same_circle && linked_on_circle(iu->second, iv->second))
                continue;
            out.push_back({u, v});
        }
    }
    return out;
}

inline void erase_pair(FreeGraph& g, int u, int v) {
    std::vector<std::vector<int>> next;
    for (const auto& word : g.circles) {
        std::vector<int> w;
        for (int s : word)
            if (s != u && s != v)
                w.push_back(s);
        if (w.empty())
            g.free_circles += 1;
        else
            next.push_back(std::move(w));
    }
    g.circles = std::move(next);
}

inline bool remove_one_r2_pair(FreeGraph& g) {
    auto pairs = removable_pairs(g);
    if (pairs.empty())
        return false;
    erase_pair(g, pairs[0].first, pairs[0].second);
    return true;
}

// tokens: -2 opens a circle, -1 closes it, labels count from 0.
// `tight` means cur currently equals the best prefix of its length, so
// token-by-token comparison against best can prune greater branches.
inline void cluster_dfs(const std::vector<std::vector<int>>& words,
                        std::vector<char>& used, std::map<int, int>& labels,
                        std::vector<int>& cur, bool tight,
                        std::vector<int>& best) {
    bool done = true;
    for (char u : used)
        if (!u)
            done = false;
    if (done) {
        if (best.empty() || cur < best)
            best = cur;
        return;
    }
    for (int ci = 0; ci < (int)words.size(); ++ci) {
        if (used[ci])
            continue;
        int k = (int)words[ci].size();
        for (int start = 0; start < k; ++start) {
            for (int dir : {1, -1}) {
                std::map<int, int> lab = labels;
                size_t mark = cur.size();
                bool t = tight && !best.empty();
                bool worse = false;
                auto push = [&](int tok) {
                    cur.push_back(tok);
                    if (t) {
                        int b = best[cur.size() - 1];
                        if (tok < b)
                            t = false;
                        else if (tok > b)
                            worse = true;
                    }
                };
                push(-2);
                for (int step = 0; step < k && !worse; ++step) {
                    int pos = ((start + dir * step) % k + k) % k;
                    int sym = words[ci][pos];
                    auto it = lab.find(sym);
                    int tok;
                    if (it == lab.end()) {
                        tok = (int)lab.size();
                        lab[sym] = tok;
                    } else {
                        tok = it->second;
                    }
                    push(tok);
                }
                if (!worse)
                    push(-1);
                if (!worse) {
                    used[ci] = 1;
                    std::swap(labels, lab);
                    cluster_dfs(words, used, labels, cur, t, best);
                    std::swap(labels, lab);
                    used[ci] = 0;
                }
                cur.resize(mark);
            }
        }
    }
}

inline std::vector<int> cluster_tokens(const std::vector<std::vector<int>>& words) {
    std::vector<char> used(words.size(), 0);
    std::map<int, int> labels;
    std::vector<int> cur, best;
    size_t total = 0;
    for (const auto& w : words)
        total += w.size() + 2;
    best.reserve(total);
    cur.reserve(total);
    cluster_dfs(words, used, labels, cur, true, best);
    return best;
}

} // namespace detail

/**
 * Remove second-Reidemeister chord pairs until none remains: a pair is
 * removable when it has two adjacency gaps using all four endpoints,
 * and (for a pair living on a single circle) the chords are unlinked.
 * Circles whose word empties out move into free_circles.
 */
inline FreeGraph r2_reduce(FreeGraph g) {
    std::vector<std::vector<int>> keep;
    for (auto& w : g.circles) {
        if (w.empty())
            g.free_circles += 1;
        else
            keep.push_back(std::move(w));
    }
    g.circles = std::move(keep);
    while (detail::remove_one_r2_pair(g)) {
    }
    return g;
}

/**
 * String form invariant under chord relabeling, rotation/reflection of
 * each circle, and circle permutation: the lexicographically minimal
 * serialization.  Chordless circles print as "(o)"; chord letters skip
 * the letter o so the two can never collide.
 */
inline std::string canonical_code(const FreeGraph& g) {
    // split circles into clusters joined by shared chords
    int nc = (int)g.circles.size();
    std::vector<int> parent(nc);
    for (int i = 0; i < nc; ++i)
        parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<int, int> first_circle;
    for (int ci = 0; ci < nc; ++ci) {
        for (int sym : g.circles[ci]) {
            auto it = first_circle.find(sym);
            if (it == first_circle.end())
                first_circle[sym] = ci;
            else
                parent[find(it->second)] = find(ci);
        }
    }
    std::map<int, std::vector<std::vector<int>>> clusters;
    for (int ci = 0; ci < nc; ++ci)
        clusters[find(ci)].push_back(g.circles[ci]);

    std::vector<std::vector<int>> codes;
    for (auto& [root, words] : clusters)
        codes.push_back(detail::cluster_tokens(words));
    std::sort(codes.begin(), codes.end());

    static const char* kLetters = "abcdefghijklmnpqrstuvwxyz";
    std::ostringstream out;
    int offset = 0;
    for (const auto& code : codes) {
        int local_max = -1;
        bool at_open = false;
        for (int tok : code) {
            if (tok == -2) {
                out << '(';
                at_open = true;
            } else if (tok == -1) {
                out << ')';
            } else {
                if (!at_open)
                    out << ' ';
                at_open = false;
                int l = offset + tok;
                if (l < 25)
                    out << kLetters[l];
                else
                    out << '#' << l;
                local_max = std::max(local_max, tok);
            }
        }
        offset += local_max + 1;
    }
    for (int i = 0; i < g.free_circles; ++i)
        out << "(o)";
    return out.str();
}

/**
 * Formal linear combination of canonical graph codes over a ring, with
 * the circle-absorption rule baked in: adding a term r2-reduces the
 * graph, converts chordless circles to powers of delta, and keys the
 * remainder by canonical_code.  A term with no chords left lands on the
 * distinguished generator "(o)" with exponent one lower.
 */
class GraphPolynomial {
public:
    static constexpr const char* kCircleKey = "(o)";

    GraphPolynomial(const Ring& ring, const RingElem& delta)
        : ring_(ring), delta_(delta) {}

    const Ring& ring() const { return ring_; }
    const RingElem& delta() const { return delta_; }
    const std::map<std::string, RingElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const RingElem& coeff, FreeGraph g) {
        if (coeff.is_zero())
            return;
        g = r2_reduce(std::move(g));
        if (g.circles.empty()) {
            if (g.free_circles == 0)
                throw std::domain_error("term with no circles at all");
            add_key(kCircleKey,
                    ring_.mul(coeff, ring_.pow(delta_, g.free_circles - 1)));
        } else {
            int c = g.free_circles;
            g.free_circles = 0;
            add_key(canonical_code(g), ring_.mul(coeff, ring_.pow(delta_, c)));
        }
    }

    void add(const GraphPolynomial& other) {
        require_compatible(other);
        for (const auto& [key, c] : other.terms_)
            add_key(key, c);
    }

    void scale(const RingElem& factor) {
        std::map<std::string, RingElem> next;
        for (const auto& [key, c] : terms_) {
            RingElem s = ring_.mul(c, factor);
            if (!s.is_zero())
                next[key] = s;
        }
        terms_ = std::move(next);
    }

    bool operator==(const GraphPolynomial& o) const {
        return ring_ == o.ring_ && delta_ == o.delta_ && terms_ == o.terms_;
    }
    bool operator!=(const GraphPolynomial& o) const { return !(*this == o); }

    std::string to_string() const {
        if (terms_.empty())
            return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [key, c] : terms_) {
            if (!first)
                out << " + ";
            first = false;
            std::string cs = ring_.to_string(c);
            if (cs.find(' ') != std::string::npos ||
                cs.find('*') != std::string::npos)
                out << '(' << cs << ')';
            else
                out << cs;
            out << '*' << key;
        }
        return out.str();
    }

private:
    Ring ring_;
    RingElem delta_;
    std::map<std::string, RingElem> terms_;

    void require_compatible(const GraphPolynomial& o) const {
        if (ring_ != o.ring_ || delta_ != o.delta_)
            throw std::domain_error("graph polynomials over different rings");
    }

    void add_key(const std::string& key, const RingElem& c) {
        if (c.is_zero())
            return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_[key] = c;
            return;
        }
        it->second = ring_.add(it->second, c);
        if (it->second.is_zero())
            terms_.erase(it);
    }
};

inline GraphPolynomial normalize(
    const std::vector<std::pair<RingElem, FreeGraph>>& raw, const Ring& ring,
    const RingElem& delta) {
    GraphPolynomial p(ring, delta);
    for (const auto& [coeff, graph] : raw)
        p.add_term(coeff, graph);
    return p;
}

} // namespace vknot
