#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gauss.hpp"

namespace vknot {

enum class MoveKind { R1Insert, R1Delete, R2Insert, R2Delete, R3 };

// Which moves a random walk may draw from.  ParityEven keeps double
// insertions and deletions to interlacement-even pairs.  Picture-valued
// state sums leave odd crossings in place as rigid vertices, and an odd
// double pair can come back linked on a state circle, where the nested
// cancellation no longer applies; even pairs are always smoothed away.
enum class MoveMenu { All, ParityEven };

// A move is described relative to the diagram it is applied to.  Gaps are
// insertion points on a circle: gap g means "before the passage at index g",
// so a circle with k passages has k cyclic gaps (a bare circle has one).
struct MoveDescriptor {
    MoveKind kind = MoveKind::R1Insert;
    int circle_a = 0;
    int gap_a = 0;
    int circle_b = 0;       // under pair site for R2 insertion
    int gap_b = 0;
    int sign = 1;           // kink sign, or sign of the first inserted chord
    bool over_first = true; // kink: over passage precedes under passage
    bool parallel = false;  // R2 across two circles: under pair in the same order
    std::string label_a;    // deletion target / top-middle crossing
    std::string label_b;    // second deletion target / top-bottom crossing
    std::string label_c;    // middle-bottom crossing
};

inline std::string move_kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::R1Insert: return "R1-insert";
        case MoveKind::R1Delete: return "R1-delete";
        case MoveKind::R2Insert: return "R2-insert";
        case MoveKind::R2Delete: return "R2-delete";
        case MoveKind::R3: return "R3";
    }
    return "?";
}

namespace detail {

inline std::vector<std::string> fresh_labels(const LinkDiagram& d, int count) {
    std::set<std::string> used;
    for (int i = 0; i < d.crossing_count(); ++i) used.insert(d.label(i));
    std::vector<std::string> out;
    for (long long v = 1; static_cast<int>(out.size()) < count; ++v) {
        std::string cand = std::to_string(v);
        if (!used.count(cand)) out.push_back(cand);
    }
    return out;
}

inline int crossing_index(const LinkDiagram& d, const std::string& label) {
    for (int i = 0; i < d.crossing_count(); ++i)
        if (d.label(i) == label) return i;
    throw std::runtime_error("no crossing labelled '" + label + "'");
}

// b directly follows a on their common circle
inline bool follows(const LinkDiagram& d, Site a, Site b) {
    if (a.circle != b.circle) return false;
    int k = static_cast<int>(d.components()[a.circle].size());
    return (a.pos + 1) % k == b.pos;
}

inline bool adjacent(const LinkDiagram& d, Site a, Site b) {
    return follows(d, a, b) || follows(d, b, a);
}

inline void insert_pair(std::vector<std::vector<RawPassage>>& raw, int circle, int gap,
                        const RawPassage& first, const RawPassage& second) {
    auto& comp = raw[circle];
    comp.insert(comp.begin() + gap, {first, second});
}

inline void check_insert_site(const std::vector<std::vector<RawPassage>>& raw, int circle,
                              int gap) {
    if (circle < 0 || circle >= static_cast<int>(raw.size()))
        throw std::runtime_error("no circle with index " + std::to_string(circle));
    int gaps = std::max<int>(1, static_cast<int>(raw[circle].size()));
    if (gap < 0 || gap >= gaps)
        throw std::runtime_error("gap " + std::to_string(gap) + " out of range on circle " +
                                 std::to_string(circle));
}

inline LinkDiagram apply_r1_insert(const LinkDiagram& d, const MoveDescriptor& m) {
    if (m.sign != 1 && m.sign != -1)
        throw std::runtime_error("crossing sign must be +1 or -1");
    auto raw = d.to_raw();
    check_insert_site(raw, m.circle_a, m.gap_a);
    std::string lab = fresh_labels(d, 1)[0];
    insert_pair(raw, m.circle_a, m.gap_a, RawPassage{lab, m.over_first, m.sign},
                RawPassage{lab, !m.over_first, m.sign});
    return LinkDiagram::from_raw(raw);
}

inline LinkDiagram apply_r1_delete(const LinkDiagram& d, const MoveDescriptor& m) {
    int idx = crossing_index(d, m.label_a);
    Site o = d.over_site(idx), u = d.under_site(idx);
    if (o.circle != u.circle || !adjacent(d, o, u))
        throw std::runtime_error("crossing '" + m.label_a + "' is not a kink");
    auto raw = d.to_raw();
    auto& comp = raw[o.circle];
    comp.erase(comp.begin() + std::max(o.pos, u.pos));
    comp.erase(comp.begin() + std::min(o.pos, u.pos));
    return LinkDiagram::from_raw(raw);
}

inline LinkDiagram apply_r2_insert(const LinkDiagram& d, const MoveDescriptor& m) {
    if (m.sign != 1 && m.sign != -1)
        throw std::runtime_error("crossing sign must be +1 or -1");
    auto raw = d.to_raw();
    check_insert_site(raw, m.circle_a, m.gap_a);
    check_insert_site(raw, m.circle_b, m.gap_b);
    bool same = m.circle_a == m.circle_b;
    if (same && m.parallel)
        throw std::runtime_error("parallel double insertion needs two distinct circles");
    auto labs = fresh_labels(d, 2);
    RawPassage o1{labs[0], true, m.sign}, o2{labs[1], true, -m.sign};
    RawPassage u1{labs[0], false, m.sign}, u2{labs[1], false, -m.sign};
    if (!same) {
        insert_pair(raw, m.circle_a, m.gap_a, o1, o2);
        if (m.parallel)
            insert_pair(raw, m.circle_b, m.gap_b, u1, u2);
        else
            insert_pair(raw, m.circle_b, m.gap_b, u2, u1);
    } else if (m.gap_a > m.gap_b) {
        insert_pair(raw, m.circle_a, m.gap_a, o1, o2);
        insert_pair(raw, m.circle_b, m.gap_b, u2, u1);
    } else {
        insert_pair(raw, m.circle_b, m.gap_b, u2, u1);
        insert_pair(raw, m.circle_a, m.gap_a, o1, o2);
    }
    return LinkDiagram::from_raw(raw);
}

inline LinkDiagram apply_r2_delete(const LinkDiagram& d, const MoveDescriptor& m) {
    int ix = crossing_index(d, m.label_a);
    int iy = crossing_index(d, m.label_b);
    if (ix == iy) throw std::runtime_error("double deletion needs two distinct crossings");
    if (d.sign(ix) != -d.sign(iy))
        throw std::runtime_error("crossings '" + m.label_a + "' and '" + m.label_b +
                                 "' do not have opposite signs");
    Site xo = d.over_site(ix), yo = d.over_site(iy);
    Site xu = d.under_site(ix), yu = d.under_site(iy);
    if (!adjacent(d, xo, yo))
        throw std::runtime_error("over passages of '" + m.label_a + "' and '" + m.label_b +
                                 "' are not adjacent");
    if (!adjacent(d, xu, yu))
        throw std::runtime_error("under passages of '" + m.label_a + "' and '" + m.label_b +
                                 "' are not adjacent");
    if (xo.circle == xu.circle && interlacement(d)[ix][iy])
        throw std::runtime_error("interleaved pair '" + m.label_a + "','" + m.label_b +
                                 "' cannot be removed");
    auto raw = d.to_raw();
    std::vector<Site> sites{xo, yo, xu, yu};
    std::sort(sites.begin(), sites.end(), [](Site a, Site b) {
        return a.circle != b.circle ? a.circle < b.circle : a.pos > b.pos;
    });
    for (Site s : sites) raw[s.circle].erase(raw[s.circle].begin() + s.pos);
    return LinkDiagram::from_raw(raw);
}

// The three strands of a triangle configuration: the top strand runs over
// both others, the bottom under both, the middle one between them.  For each
// orientation choice the triangle forces the crossing signs, so a candidate
// triple is accepted exactly when some orientation matches all three signs.
inline bool r3_orders(const LinkDiagram& d, int itm, int itb, int imb,
                      std::array<std::vector<int>, 3>* orders) {
    Site tmo = d.over_site(itm), tmu = d.under_site(itm);
    Site tbo = d.over_site(itb), tbu = d.under_site(itb);
    Site mbo = d.over_site(imb), mbu = d.under_site(imb);
    auto& [ot, om, ob] = *orders;
    if (follows(d, tmo, tbo)) ot.push_back(1);
    if (follows(d, tbo, tmo)) ot.push_back(-1);
    if (follows(d, mbo, tmu)) om.push_back(1);
    if (follows(d, tmu, mbo)) om.push_back(-1);
    if (follows(d, mbu, tbu)) ob.push_back(1);
    if (follows(d, tbu, mbu)) ob.push_back(-1);
    if (ot.empty() || om.empty() || ob.empty()) return false;
    int stm = d.sign(itm), stb = d.sign(itb), smb = d.sign(imb);
    for (int a : ot)
        for (int b : om)
            for (int c : ob)
                if (stm == a * b && stb == a * c && smb == -b * c) return true;
    return false;
}

inline LinkDiagram apply_r3(const LinkDiagram& d, const MoveDescriptor& m) {
    int itm = crossing_index(d, m.label_a);
    int itb = crossing_index(d, m.label_b);
    int imb = crossing_index(d, m.label_c);
    if (itm == itb || itb == imb || itm == imb)
        throw std::runtime_error("triangle move needs three distinct crossings");
    std::array<std::vector<int>, 3> orders;
    if (!r3_orders(d, itm, itb, imb, &orders))
        throw std::runtime_error("crossings '" + m.label_a + "','" + m.label_b + "','" +
                                 m.label_c + "' do not form a movable triangle");
    auto raw = d.to_raw();
    auto swap_sites = [&raw](Site a, Site b) { std::swap(raw[a.circle][a.pos], raw[b.circle][b.pos]); };
    swap_sites(d.over_site(itm), d.over_site(itb));
    swap_sites(d.under_site(itm), d.over_site(imb));
    swap_sites(d.under_site(itb), d.under_site(imb));
    return LinkDiagram::from_raw(raw);
}

}  // namespace detail

inline LinkDiagram apply_move(const LinkDiagram& d, const MoveDescriptor& m) {
    switch (m.kind) {
        case MoveKind::R1Insert: return detail::apply_r1_insert(d, m);
        case MoveKind::R1Delete: return detail::apply_r1_delete(d, m);
        case MoveKind::R2Insert: return detail::apply_r2_insert(d, m);
        case MoveKind::R2Delete: return detail::apply_r2_delete(d, m);
        case MoveKind::R3: return detail::apply_r3(d, m);
    }
    throw std::runtime_error("unknown move kind");
}

// Deletions and triangle moves first, then insertions; insertions are listed
// only while the resulting diagram stays within max_crossings.
inline std::vector<MoveDescriptor> enumerate_applicable_moves(
        const LinkDiagram& d, std::optional<int> max_crossings = std::nullopt,
        MoveMenu menu = MoveMenu::All) {
    std::vector<MoveDescriptor> out;
    int n = d.crossing_count();
    const auto& comps = d.components();
    int circles = static_cast<int>(comps.size());
    bool even_only = menu == MoveMenu::ParityEven;

    for (int i = 0; i < n; ++i) {
        Site o = d.over_site(i), u = d.under_site(i);
        if (o.circle == u.circle && detail::adjacent(d, o, u)) {
            MoveDescriptor m;
            m.kind = MoveKind::R1Delete;
            m.label_a = d.label(i);
            out.push_back(m);
        }
    }

    auto linked = interlacement(d);
    auto row_parity = [&](int i) {
        int row = 0;
        for (int j = 0; j < n; ++j) row += linked[i][j];
        return row % 2;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (d.sign(i) != -d.sign(j)) continue;
            Site io = d.over_site(i), jo = d.over_site(j);
            Site iu = d.under_site(i), ju = d.under_site(j);
            if (!detail::adjacent(d, io, jo) || !detail::adjacent(d, iu, ju)) continue;
            if (io.circle == iu.circle && linked[i][j]) continue;
            if (even_only && row_parity(i) != 0) continue;
            MoveDescriptor m;
            m.kind = MoveKind::R2Delete;
            m.label_a = d.label(i);
            m.label_b = d.label(j);
            out.push_back(m);
        }

    std::set<std::array<int, 3>> triples;
    for (int itm = 0; itm < n; ++itm)
        for (int itb = 0; itb < n; ++itb) {
            if (itm == itb) continue;
            if (!detail::adjacent(d, d.over_site(itm), d.over_site(itb))) continue;
            for (int imb = 0; imb < n; ++imb) {
                if (imb == itm || imb == itb) continue;
                if (triples.count({itm, itb, imb})) continue;
                std::array<std::vector<int>, 3> orders;
                if (!detail::r3_orders(d, itm, itb, imb, &orders)) continue;
                triples.insert({itm, itb, imb});
                MoveDescriptor m;
                m.kind = MoveKind::R3;
                m.label_a = d.label(itm);
                m.label_b = d.label(itb);
                m.label_c = d.label(imb);
                out.push_back(m);
            }
        }

    if (!max_crossings || n + 1 <= *max_crossings)
        for (int c = 0; c < circles; ++c) {
            int gaps = std::max<int>(1, static_cast<int>(comps[c].size()));
            for (int g = 0; g < gaps; ++g)
                for (int sign : {1, -1})
                    for (bool over_first : {true, false}) {
                        MoveDescriptor m;
                        m.kind = MoveKind::R1Insert;
                        m.circle_a = c;
                        m.gap_a = g;
                        m.sign = sign;
                        m.over_first = over_first;
                        out.push_back(m);
                    }
        }

    if (!max_crossings || n + 2 <= *max_crossings) {
        std::vector<std::vector<int>> spanning(circles, std::vector<int>(circles, 0));
        for (int i = 0; i < n; ++i) {
            int a = d.over_site(i).circle, b = d.under_site(i).circle;
            if (a != b) {
                ++spanning[a][b];
                ++spanning[b][a];
            }
        }
        for (int ca = 0; ca < circles; ++ca) {
            int gaps_a = std::max<int>(1, static_cast<int>(comps[ca].size()));
            for (int ga = 0; ga < gaps_a; ++ga)
                for (int cb = 0; cb < circles; ++cb) {
                    int gaps_b = std::max<int>(1, static_cast<int>(comps[cb].size()));
                    for (int gb = 0; gb < gaps_b; ++gb) {
                        if (even_only) {
                            // the new pair's interlacement count is the gap
                            // separation on one circle, or one plus the
                            // chords already spanning the two circles
                            int count = ca == cb ? ga - gb : 1 + spanning[ca][cb];
                            if (count % 2 != 0) continue;
                        }
                        for (int sign : {1, -1}) {
                            MoveDescriptor m;
                            m.kind = MoveKind::R2Insert;
                            m.circle_a = ca;
                            m.gap_a = ga;
                            m.circle_b = cb;
                            m.gap_b = gb;
                            m.sign = sign;
                            out.push_back(m);
                            if (ca != cb) {
                                m.parallel = true;
                                out.push_back(m);
                            }
                        }
                    }
                }
        }
    }

    return out;
}

inline LinkDiagram random_equivalent_diagram(const LinkDiagram& d, int steps, std::uint64_t seed,
                                             int max_crossings = 12,
                                             MoveMenu menu = MoveMenu::All) {
    std::mt19937_64 rng(seed);
    LinkDiagram cur = d;
    for (int s = 0; s < steps; ++s) {
        auto moves = enumerate_applicable_moves(cur, max_crossings, menu);
        if (moves.empty()) break;
        std::uint64_t span = moves.size();
        std::uint64_t lo = (0 - span) % span;
        std::uint64_t r;
        do {
            r = rng();
        } while (r < lo);
        cur = apply_move(cur, moves[r % span]);
    }
    return cur;
}

}  // namespace vknot
