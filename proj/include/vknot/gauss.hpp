#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vknot {

struct Passage {
    int crossing;
    bool over;
};

/** Raw token form used by the parser and the move engine. */
struct RawPassage {
    std::string label;
    bool over;
    int sign;
};

/** Location of one passage: which circle, which position along it. */
struct Site {
    int circle;
    int pos;
};

/** Semiarc ids of the four strand-ends meeting at one crossing. */
struct CrossingEnds {
    int over_in;
    int over_out;
    int under_in;
    int under_out;
};

/**
 * A virtual link diagram as a Gauss datum: circles carrying cyclic
 * sequences of over/under passages, plus a sign per crossing.  Immutable
 * once built; every constructor path runs the full label/sign audit.
 */
class LinkDiagram {
public:
    static LinkDiagram from_raw(const std::vector<std::vector<RawPassage>>& comps) {
        LinkDiagram d;
        std::map<std::string, int> index;
        for (int ci = 0; ci < (int)comps.size(); ++ci) {
            d.components_.emplace_back();
            for (int pi = 0; pi < (int)comps[ci].size(); ++pi) {
                const RawPassage& rp = comps[ci][pi];
                auto it = index.find(rp.label);
                int c;
                if (it == index.end()) {
                    c = (int)d.labels_.size();
                    index[rp.label] = c;
                    d.labels_.push_back(rp.label);
                    d.signs_.push_back(rp.sign);
                    d.over_site_.push_back({-1, -1});
                    d.under_site_.push_back({-1, -1});
                } else {
                    c = it->second;
                    if (d.signs_[c] != rp.sign)
                        throw std::runtime_error(
                            "inconsistent signs for label " + rp.label);
                }
                Site& slot = rp.over ? d.over_site_[c] : d.under_site_[c];
                if (slot.circle != -1)
                    throw std::runtime_error(
                        "label " + rp.label + " has two " +
                        (rp.over ? "over" : "under") + " passages");
                slot = {ci, pi};
                d.components_[ci].push_back({c, rp.over});
            }
        }
        for (int c = 0; c < (int)d.labels_.size(); ++c) {
            if (d.over_site_[c].circle == -1 || d.under_site_[c].circle == -1)
                throw std::runtime_error("label " + d.labels_[c] +
                                         " appears only once");
        }
        d.build_semiarcs();
        return d;
    }

    const std::vector<std::vector<Passage>>& components() const {
        return components_;
    }
    int crossing_count() const { return (int)labels_.size(); }
    const std::string& label(int c) const { return labels_[c]; }
    int sign(int c) const { return signs_[c]; }
    Site over_site(int c) const { return over_site_[c]; }
    Site under_site(int c) const { return under_site_[c]; }

    int writhe() const {
        int w = 0;
        for (int s : signs_)
            w += s;
        return w;
    }

    std::vector<std::vector<RawPassage>> to_raw() const {
        std::vector<std::vector<RawPassage>> out;
        for (const auto& comp : components_) {
            out.emplace_back();
            for (const Passage& p : comp)
                out.back().push_back({labels_[p.crossing], p.over,
                                      signs_[p.crossing]});
        }
        return out;
    }

    std::string gauss_code() const {
        std::ostringstream out;
        for (size_t ci = 0; ci < components_.size(); ++ci) {
            if (ci)
                out << " / ";
            for (size_t pi = 0; pi < components_[ci].size(); ++pi) {
                const Passage& p = components_[ci][pi];
                if (pi)
                    out << ' ';
                out << (p.over ? 'O' : 'U') << labels_[p.crossing]
                    << (signs_[p.crossing] > 0 ? '+' : '-');
            }
        }
        std::string s = out.str();
        while (!s.empty() && s.back() == ' ')
            s.pop_back();
        size_t lead = s.find_first_not_of(' ');
        return lead == std::string::npos ? std::string() : s.substr(lead);
    }

    /**
     * Semiarcs are numbered circle-major; on a circle with k passages,
     * semiarc (offset + i) runs from passage i to passage i+1 (mod k).
     * A bare circle owns one semiarc with no crossing ends.
     */
    int semiarc_count() const { return total_semiarcs_; }

    int semiarc_offset(int circle) const { return semiarc_offset_[circle]; }

    int circle_of_semiarc(int s) const {
        int ci = 0;
        while (ci + 1 < (int)semiarc_offset_.size() &&
               semiarc_offset_[ci + 1] <= s)
            ++ci;
        return ci;
    }

    int outgoing_semiarc(Site at) const {
        return semiarc_offset_[at.circle] + at.pos;
    }

    int incoming_semiarc(Site at) const {
        int k = (int)components_[at.circle].size();
        return semiarc_offset_[at.circle] + (at.pos + k - 1) % k;
    }

    CrossingEnds ends(int c) const {
        return {incoming_semiarc(over_site_[c]), outgoing_semiarc(over_site_[c]),
                incoming_semiarc(under_site_[c]),
                outgoing_semiarc(under_site_[c])};
    }

private:
    std::vector<std::vector<Passage>> components_;
    std::vector<std::string> labels_;
    std::vector<int> signs_;
    std::vector<Site> over_site_, under_site_;
    std::vector<int> semiarc_offset_;
    int total_semiarcs_ = 0;

    void build_semiarcs() {
        semiarc_offset_.clear();
        total_semiarcs_ = 0;
        for (const auto& comp : components_) {
            semiarc_offset_.push_back(total_semiarcs_);
            total_semiarcs_ += std::max<int>(1, (int)comp.size());
        }
    }
};

inline bool valid_gauss_label(const std::string& s) {
    if (s.empty())
        return false;
    if (std::isdigit((unsigned char)s[0])) {
        if (s[0] == '0')
            return false;
        return std::all_of(s.begin(), s.end(), [](unsigned char c) {
            return std::isdigit(c);
        });
    }
    if (!std::isalpha((unsigned char)s[0]) && s[0] != '_')
        return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

/**
 * Grammar: whitespace-separated tokens ("O"|"U")LABEL("+"|"-"),
 * components separated by "/", "#" starts a line comment.  An empty
 * token list (including the empty string and a lone "/") is a bare
 * circle.
 */
inline LinkDiagram parse_gauss_code(const std::string& text) {
    std::string clean;
    bool in_comment = false;
    for (char ch : text) {
        if (ch == '\n')
            in_comment = false;
        else if (ch == '#')
            in_comment = true;
        if (!in_comment)
            clean.push_back(ch);
    }
    std::vector<std::vector<RawPassage>> comps(1);
    std::istringstream in(clean);
    std::string tok;
    while (in >> tok) {
        if (tok == "/") {
            comps.emplace_back();
            continue;
        }
        if (tok.size() < 3)
            throw std::runtime_error("bad gauss token: " + tok);
        if (tok[0] != 'O' && tok[0] != 'U')
            throw std::runtime_error("bad gauss token (want O/U prefix): " + tok);
        char sign_ch = tok.back();
        if (sign_ch != '+' && sign_ch != '-')
            throw std::runtime_error("bad gauss token (want +/- suffix): " + tok);
        std::string lab = tok.substr(1, tok.size() - 2);
        if (!valid_gauss_label(lab))
            throw std::runtime_error("bad gauss label: " + lab);
        comps.back().push_back({lab, tok[0] == 'O', sign_ch == '+' ? 1 : -1});
    }
    return LinkDiagram::from_raw(comps);
}

/**
 * Symmetric 0/1 matrix over crossings.  Two chords on one circle are
 * linked iff their endpoints alternate around it; two chords each
 * spanning the same pair of distinct circles are always linked; every
 * other configuration is unlinked.
 */
inline std::vector<std::vector<int>> interlacement(const LinkDiagram& d) {
    int n = d.crossing_count();
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    auto circles = [&](int c) {
        int a = d.over_site(c).circle, b = d.under_site(c).circle;
        return std::pair<int, int>(std::min(a, b), std::max(a, b));
    };
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            auto cu = circles(u), cv = circles(v);
            bool linked = false;
            if (cu.first == cu.second && cu == cv) {
                int p1 = d.over_site(u).pos, p2 = d.under_site(u).pos;
                if (p1 > p2)
                    std::swap(p1, p2);
                int q1 = d.over_site(v).pos, q2 = d.under_site(v).pos;
                bool in1 = q1 > p1 && q1 < p2;
                bool in2 = q2 > p1 && q2 < p2;
                linked = in1 != in2;
            } else if (cu.first != cu.second && cu == cv) {
                linked = true;
            }
            m[u][v] = m[v][u] = linked ? 1 : 0;
        }
    }
    return m;
}

/**
 * True iff the abstract 4-valent graph with the sign-induced rotation
 * system embeds in the sphere: every connected piece must satisfy
 * V - E + F = 2 under face tracing (bare circles trivially do).
 */
inline bool classical_realizability(const LinkDiagram& d) {
    // darts: 2 per semiarc (start end, finish end), skipping bare circles
    struct End {
        int crossing;
        int slot;
    };
    int n = d.crossing_count();
    if (n == 0)
        return true;

    auto slot_of = [&](int c, bool over, bool outgoing) {
        // CCW rotation: positive [Oout Uout Oin Uin], negative [Oout Uin Oin Uout]
        if (over)
            return outgoing ? 0 : 2;
        if (d.sign(c) > 0)
            return outgoing ? 1 : 3;
        return outgoing ? 3 : 1;
    };

    std::vector<std::array<int, 4>> dart_at(n, {-1, -1, -1, -1});
    std::vector<End> ends;
    const auto& comps = d.components();
    for (int ci = 0; ci < (int)comps.size(); ++ci) {
        int k = (int)comps[ci].size();
        for (int i = 0; i < k; ++i) {
            // semiarc i on this circle: start at passage i, finish at i+1
            const Passage& a = comps[ci][i];
            const Passage& b = comps[ci][(i + 1) % k];
            int start_slot = slot_of(a.crossing, a.over, true);
            int finish_slot = slot_of(b.crossing, b.over, false);
            int id0 = (int)ends.size();
            ends.push_back({a.crossing, start_slot});
            ends.push_back({b.crossing, finish_slot});
            dart_at[a.crossing][start_slot] = id0;
            dart_at[b.crossing][finish_slot] = id0 + 1;
        }
    }

    // union-find over crossings to split the diagram into connected pieces
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i)
        parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t e = 0; e < ends.size(); e += 2)
        parent[find(ends[e].crossing)] = find(ends[e + 1].crossing);

    std::vector<int> faces_per(n, 0), verts_per(n, 0), edges_per(n, 0);
    for (int c = 0; c < n; ++c)
        verts_per[find(c)] += 1;
    for (size_t e = 0; e < ends.size(); e += 2)
        edges_per[find(ends[e].crossing)] += 1;

    std::vector<char> seen(ends.size(), 0);
    for (size_t start = 0; start < ends.size(); ++start) {
        if (seen[start])
            continue;
        size_t e = start;
        while (!seen[e]) {
            seen[e] = 1;
            size_t partner = e ^ 1;
            const End& p = ends[partner];
            e = (size_t)dart_at[p.crossing][(p.slot + 1) % 4];
        }
        faces_per[find(ends[start].crossing)] += 1;
    }

    for (int c = 0; c < n; ++c) {
        if (find(c) != c)
            continue;
        if (verts_per[c] - edges_per[c] + faces_per[c] != 2)
            return false;
    }
    return true;
}

} // namespace vknot
