#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "biquandle.hpp"
#include "gauss.hpp"
#include "moves.hpp"

namespace vknot {

using ParityMap = std::map<std::string, int>;

enum class ParityKind { Gaussian, Component, Biquandle, Zero };

inline ParityMap gaussian_parity(const LinkDiagram& d) {
    auto linked = interlacement(d);
    ParityMap out;
    for (int i = 0; i < d.crossing_count(); ++i) {
        int row = 0;
        for (int j = 0; j < d.crossing_count(); ++j)
            if (linked[i][j]) ++row;
        out[d.label(i)] = row % 2;
    }
    return out;
}

inline ParityMap component_parity(const LinkDiagram& d) {
    if (d.components().size() != 2)
        throw std::runtime_error("component parity needs a two-component link");
    ParityMap out;
    for (int i = 0; i < d.crossing_count(); ++i)
        out[d.label(i)] = d.over_site(i).circle != d.under_site(i).circle ? 1 : 0;
    return out;
}

// Parity read off a colouring by the two-element flip biquandle: a crossing
// is even when the colour entering on the under side matches the colour
// leaving on the over side (for a negative crossing, the outgoing under
// colour against the incoming over colour).  Both flip colourings give the
// same answer because they differ by swapping the two colours everywhere.
inline ParityMap biquandle_parity(const LinkDiagram& d) {
    if (d.components().size() != 1)
        throw std::runtime_error("flip parity is defined for one-component diagrams");
    Biquandle flip = builtin_biquandle("flip2");
    auto cols = enumerate_colorings(d, flip);
    if (cols.empty()) throw std::runtime_error("diagram has no flip colouring");
    const Coloring& col = cols.front();
    ParityMap out;
    for (int i = 0; i < d.crossing_count(); ++i) {
        CrossingColors cc = colors_at(d, col, i);
        bool even = d.sign(i) > 0 ? cc.under_in == cc.over_out : cc.under_out == cc.over_in;
        out[d.label(i)] = even ? 0 : 1;
    }
    return out;
}

inline ParityMap parity_map(const LinkDiagram& d, ParityKind kind) {
    switch (kind) {
        case ParityKind::Gaussian: return gaussian_parity(d);
        case ParityKind::Component: return component_parity(d);
        case ParityKind::Biquandle: return biquandle_parity(d);
        case ParityKind::Zero: {
            ParityMap out;
            for (int i = 0; i < d.crossing_count(); ++i) out[d.label(i)] = 0;
            return out;
        }
    }
    throw std::runtime_error("unknown parity kind");
}

// The defining conditions of a parity, checked across one move: crossings
// surviving the move keep their value, a deleted or inserted kink crossing
// is even, a deleted or inserted double pair sums to zero, and the three
// crossings of a triangle move sum to zero.
inline bool check_parity_under_move(const LinkDiagram& d, const MoveDescriptor& m,
                                    ParityKind kind) {
    LinkDiagram after = apply_move(d, m);
    ParityMap before = parity_map(d, kind);
    ParityMap post = parity_map(after, kind);
    int lost = 0, gained = 0, lost_sum = 0, gained_sum = 0;
    for (const auto& [lab, val] : before) {
        auto it = post.find(lab);
        if (it == post.end()) {
            ++lost;
            lost_sum += val;
        } else if (it->second != val) {
            return false;
        }
    }
    for (const auto& [lab, val] : post)
        if (!before.count(lab)) {
            ++gained;
            gained_sum += val;
        }
    switch (m.kind) {
        case MoveKind::R1Insert: return lost == 0 && gained == 1 && gained_sum % 2 == 0;
        case MoveKind::R1Delete: return gained == 0 && lost == 1 && lost_sum % 2 == 0;
        case MoveKind::R2Insert: return lost == 0 && gained == 2 && gained_sum % 2 == 0;
        case MoveKind::R2Delete: return gained == 0 && lost == 2 && lost_sum % 2 == 0;
        case MoveKind::R3: {
            if (lost || gained) return false;
            int s = before.at(m.label_a) + before.at(m.label_b) + before.at(m.label_c);
            return s % 2 == 0;
        }
    }
    return false;
}

}  // namespace vknot
