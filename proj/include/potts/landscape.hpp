#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "potts/lattice.hpp"
#include "potts/spin.hpp"

// Energy-landscape taxonomy for the hexagonal lattice: bridges, semibridges,
// crosses, regular and canonical configurations, protuberance families,
// dead-ends, monochromatic-bridge configurations, and capped neighborhoods.
// Everything here is specific to the hexagonal geometry; square inputs are
// rejected.
namespace potts::landscape {

inline void require_hex(const SpinConfig& c) {
    if (c.lat->kind() != LatticeKind::Hexagonal)
        throw std::invalid_argument("landscape classification is hexagonal-only");
}

// --- strips ---------------------------------------------------------------

struct StripArc {
    int start = 0;  // position within the strip's cyclic order
    int len = 0;
    Spin spin = 0;
};

enum class StripKind { Bridge, Semibridge, Other };

struct StripStatus {
    StripKind kind = StripKind::Other;
    int energy = 0;               // number of arc boundaries
    std::vector<StripArc> arcs;   // maximal monochromatic arcs, cyclic order
};

inline StripStatus strip_status(const SpinConfig& c, StripId s) {
    require_hex(c);
    const auto& sites = c.lat->strip_sites(s);
    const int n = static_cast<int>(sites.size());
    StripStatus st;
    // find an arc boundary to anchor the scan
    int anchor = 0;
    while (anchor < n && c[sites[static_cast<size_t>(anchor)]] ==
                             c[sites[static_cast<size_t>((anchor + n - 1) % n)]])
        ++anchor;
    if (anchor == n) {
        st.kind = StripKind::Bridge;
        st.arcs.push_back({0, n, c[sites[0]]});
        st.energy = 0;
        return st;
    }
    int pos = anchor;
    do {
        StripArc arc{pos % n, 0, c[sites[static_cast<size_t>(pos % n)]]};
        while (arc.len < n && c[sites[static_cast<size_t>(pos % n)]] == arc.spin) {
            ++arc.len;
            ++pos;
        }
        st.arcs.push_back(arc);
    } while (pos % n != anchor);
    st.energy = static_cast<int>(st.arcs.size());
    std::set<Spin> spins;
    for (const auto& a : st.arcs) spins.insert(a.spin);
    st.kind = (st.arcs.size() == 2 && spins.size() == 2) ? StripKind::Semibridge
                                                         : StripKind::Other;
    return st;
}

// Per-direction bridge table: spin of each bridge strip, or -1.
struct BridgeTable {
    std::array<std::vector<int>, 3> spin_of;  // [dir][strip]
    int total = 0;

    int count(Spin a) const {
        int n = 0;
        for (const auto& v : spin_of)
            for (int s : v) n += (s == static_cast<int>(a));
        return n;
    }
    int count_dir(StripDir d) const {
        int n = 0;
        for (int s : spin_of[static_cast<size_t>(static_cast<int>(d))]) n += (s >= 0);
        return n;
    }
    // a cross is two bridges of the same spin in different directions
    bool has_cross(Spin a) const {
        int dirs = 0;
        for (const auto& v : spin_of)
            dirs += std::count(v.begin(), v.end(), static_cast<int>(a)) > 0;
        return dirs >= 2;
    }
    int cross_spin() const {  // -1 if cross-free; crosses of two spins cannot coexist
        for (int a = 0; a < 16; ++a)
            if (has_cross(static_cast<Spin>(a))) return a;
        return -1;
    }
};

inline BridgeTable bridge_table(const SpinConfig& c) {
    require_hex(c);
    BridgeTable t;
    const int L = c.lat->side();
    for (int d = 0; d < 3; ++d) {
        t.spin_of[static_cast<size_t>(d)].assign(static_cast<size_t>(L), -1);
        for (int l = 0; l < L; ++l) {
            const auto& sites = c.lat->strip_sites({static_cast<StripDir>(d), l});
            const Spin s0 = c[sites[0]];
            bool mono = true;
            for (int x : sites) mono &= (c[x] == s0);
            if (mono) {
                t.spin_of[static_cast<size_t>(d)][static_cast<size_t>(l)] = s0;
                ++t.total;
            }
        }
    }
    return t;
}

inline bool has_cross(const SpinConfig& c, Spin a) { return bridge_table(c).has_cross(a); }

// Two strips of different directions, all spin a except exactly one site,
// and that site lies in their intersection. Updating it to a completes an
// a-cross in a single flip.
inline std::optional<std::pair<StripId, StripId>> find_semicross(const SpinConfig& c, Spin a) {
    require_hex(c);
    const int L = c.lat->side();
    for (int d1 = 0; d1 < 3; ++d1)
        for (int d2 = d1 + 1; d2 < 3; ++d2)
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    StripId s1{static_cast<StripDir>(d1), i}, s2{static_cast<StripDir>(d2), j};
                    const auto& a1 = c.lat->strip_sites(s1);
                    const auto& a2 = c.lat->strip_sites(s2);
                    std::set<int> in1(a1.begin(), a1.end());
                    int defects = 0, defect_site = -1;
                    for (int x : a1)
                        if (c[x] != a) { ++defects; defect_site = x; }
                    for (int x : a2)
                        if (!in1.count(x) && c[x] != a) { ++defects; defect_site = x; }
                    if (defects != 1) continue;
                    if (in1.count(defect_site) &&
                        c.lat->strip_of(static_cast<StripDir>(d2), defect_site) == j)
                        return std::make_pair(s1, s2);
                }
    return std::nullopt;
}

// --- cyclic intervals on the strip-index torus -----------------------------

struct CycInterval {
    int start = 0;
    int len = 0;

    bool contains(int x, int L) const {
        int d = ((x - start) % L + L) % L;
        return d < len;
    }
};

// positions of `value` in a per-strip table, as a cyclic interval if possible
inline std::optional<CycInterval> as_interval(const std::vector<int>& table, int value) {
    const int L = static_cast<int>(table.size());
    int count = 0;
    for (int v : table) count += (v == value);
    if (count == 0) return CycInterval{0, 0};
    if (count == L) return CycInterval{0, L};
    // find a start: position with value whose predecessor differs
    for (int s = 0; s < L; ++s) {
        if (table[static_cast<size_t>(s)] == value &&
            table[static_cast<size_t>((s + L - 1) % L)] != value) {
            for (int k = 0; k < count; ++k)
                if (table[static_cast<size_t>((s + k) % L)] != value) return std::nullopt;
            return CycInterval{s, count};
        }
    }
    return std::nullopt;
}

// --- classification --------------------------------------------------------

enum class ClassTag {
    Ground,
    Regular,
    CanonicalOdd,
    CanonicalEven,  // the even-protuberance type, connected or vertex-split
    PP,
    ODP,
    TDP,
    SP,
    MB,
    HasCross,
    Unclassified
};

inline const char* tag_name(ClassTag t) {
    switch (t) {
        case ClassTag::Ground: return "ground";
        case ClassTag::Regular: return "regular";
        case ClassTag::CanonicalOdd: return "canonical-odd";
        case ClassTag::CanonicalEven: return "canonical-even";
        case ClassTag::PP: return "pp";
        case ClassTag::ODP: return "odp";
        case ClassTag::TDP: return "tdp";
        case ClassTag::SP: return "sp";
        case ClassTag::MB: return "mb";
        case ClassTag::HasCross: return "has-cross";
        case ClassTag::Unclassified: return "unclassified";
    }
    return "?";
}

struct LandscapeClass {
    ClassTag tag = ClassTag::Unclassified;
    Spin a = 0;       // sea spin (or ground/cross spin)
    Spin b = 0;       // band spin
    Spin c = 0;       // third spin for PP
    StripDir dir = StripDir::H;
    CycInterval band;              // P: the band of full b-strips
    int protub_strip = -1;         // strip holding the protuberance, if any
    int m = 0;                     // protuberance size (canonical), or total
                                   // non-bridge b-content for Q/MB types
    bool disconnected = false;     // vertex-split even protuberance
    int mb_subtype = 0;            // 1..13 for MB

    int n() const { return band.len; }
    std::string describe() const {
        std::string s = tag_name(tag);
        if (tag == ClassTag::MB) s += std::to_string(mb_subtype);
        return s;
    }
};

namespace detail {

// Positions (within strip order) of sites whose spin matches `sp`.
inline std::vector<int> strip_positions_of(const SpinConfig& c, StripId s, Spin sp) {
    const auto& sites = c.lat->strip_sites(s);
    std::vector<int> pos;
    for (int k = 0; k < static_cast<int>(sites.size()); ++k)
        if (c[sites[static_cast<size_t>(k)]] == sp) pos.push_back(k);
    return pos;
}

// Decompose a position set in a cyclic strip into maximal runs.
inline std::vector<CycInterval> cyclic_runs(const std::vector<int>& pos, int n) {
    if (pos.empty()) return {};
    if (static_cast<int>(pos.size()) == n) return {CycInterval{0, n}};
    std::vector<char> in(static_cast<size_t>(n), 0);
    for (int p : pos) in[static_cast<size_t>(p)] = 1;
    std::vector<CycInterval> runs;
    for (int s = 0; s < n; ++s) {
        if (in[static_cast<size_t>(s)] && !in[static_cast<size_t>((s + n - 1) % n)]) {
            int len = 0;
            while (in[static_cast<size_t>((s + len) % n)]) ++len;
            runs.push_back({s, len});
        }
    }
    return runs;
}

// Does strip position p of strip (d, l) attach (share its out-of-strip edge)
// to strip (d, ltarget)?
inline bool attaches_to(const Lattice& lat, StripDir d, int l, int p, int ltarget) {
    const auto& sites = lat.strip_sites({d, l});
    const int x = sites[static_cast<size_t>(p)];
    const int prev = sites[static_cast<size_t>((p + sites.size() - 1) % sites.size())];
    const int next = sites[static_cast<size_t>((p + 1) % sites.size())];
    for (int k = 0; k < lat.degree(); ++k) {
        const int y = lat.neighbors(x)[k];
        if (y == prev || y == next) continue;
        return lat.strip_of(d, y) == ltarget;
    }
    return false;
}

// Validity of a one-dimensional canonical set U (given as strip positions)
// attached to the band side `lband`, including the attachment-majority
// condition when required.
inline bool valid_protuberance(const Lattice& lat, StripDir d, int lstrip,
                               const std::vector<int>& pos, int lband, bool need_majority) {
    const int n2 = lat.strip_length();
    if (pos.empty() || static_cast<int>(pos.size()) == n2) return false;
    auto runs = cyclic_runs(pos, n2);
    if (runs.size() == 1) {
        // connected arc
    } else if (runs.size() == 2 && static_cast<int>(pos.size()) % 2 == 0 && need_majority) {
        // vertex-split form: an odd arc plus a single across a one-site gap.
        // Only meaningful against a proper band; without one the two pieces
        // are plain separate droplets.
        const CycInterval* arc = &runs[0];
        const CycInterval* single = &runs[1];
        if (arc->len == 1 && single->len != 1) std::swap(arc, single);
        if (single->len != 1) return false;
        if (arc->len % 2 == 0) return false;  // components are (odd, 1)
        const int gap_after_arc = ((single->start - (arc->start + arc->len)) % n2 + n2) % n2;
        const int gap_after_single = ((arc->start - (single->start + 1)) % n2 + n2) % n2;
        if (gap_after_arc != 1 && gap_after_single != 1) return false;
    } else {
        return false;
    }
    if (!need_majority) return true;
    int touching = 0;
    for (int p : pos) touching += attaches_to(lat, d, lstrip, p, lband);
    return 2 * touching >= static_cast<int>(pos.size());
}

struct CanonicalView {
    Spin a = 0, b = 0;
    StripDir dir = StripDir::H;
    CycInterval band;      // P (full b-strips)
    int protub_strip = -1;
    std::vector<int> protub_pos;
    bool disconnected = false;
};

// Prefer the representation with the smaller band; break ties by band spin.
inline bool view_less(const CanonicalView& x, const CanonicalView& y) {
    if (x.band.len != y.band.len) return x.band.len < y.band.len;
    return x.b < y.b;
}

}  // namespace detail

// Total classifier: every configuration gets a tag; cross-free ones with
// energy at most 2L+2 land in the taxonomy, everything else in HasCross or
// Unclassified.
inline LandscapeClass classify(const SpinConfig& c) {
    require_hex(c);
    const Lattice& lat = *c.lat;
    const int L = lat.side();
    const int H = energy(c);

    LandscapeClass out;
    if (H == 0) {
        out.tag = ClassTag::Ground;
        out.a = c[0];
        return out;
    }

    const BridgeTable bt = bridge_table(c);
    const int cs = bt.cross_spin();
    if (cs >= 0) {
        out.tag = ClassTag::HasCross;
        out.a = static_cast<Spin>(cs);
        return out;
    }
    if (H > 2 * L + 2) return out;  // Unclassified

    // cross-free: all bridges lie in one direction
    int d0 = -1;
    for (int d = 0; d < 3; ++d)
        if (bt.count_dir(static_cast<StripDir>(d)) > 0) {
            if (d0 >= 0) return out;  // cannot happen cross-free
            d0 = d;
        }
    if (d0 < 0) return out;
    const StripDir dir = static_cast<StripDir>(d0);
    const auto& table = bt.spin_of[static_cast<size_t>(d0)];
    const int k = bt.count_dir(dir);

    std::set<int> bridge_spins;
    for (int v : table)
        if (v >= 0) bridge_spins.insert(v);

    std::vector<int> nonbridge;
    for (int l = 0; l < L; ++l)
        if (table[static_cast<size_t>(l)] < 0) nonbridge.push_back(l);

    auto finish_canonical = [&](std::vector<detail::CanonicalView> views, ClassTag tag) {
        if (views.empty()) return false;
        std::sort(views.begin(), views.end(), detail::view_less);
        const auto& v = views.front();
        out.tag = tag;
        out.a = v.a;
        out.b = v.b;
        out.dir = v.dir;
        out.band = v.band;
        out.protub_strip = v.protub_strip;
        out.m = static_cast<int>(v.protub_pos.size());
        out.disconnected = v.disconnected;
        return true;
    };

    if (H == 2 * L) {
        // regular configuration: L bridges of two spins forming two bands
        if (k != L || bridge_spins.size() != 2) return out;
        auto it = bridge_spins.begin();
        const Spin s1 = static_cast<Spin>(*it++), s2 = static_cast<Spin>(*it);
        auto i1 = as_interval(table, s1), i2 = as_interval(table, s2);
        if (!i1 || !i2) return out;
        detail::CanonicalView v1{s1, s2, dir, *i2, -1, {}, false};
        detail::CanonicalView v2{s2, s1, dir, *i1, -1, {}, false};
        finish_canonical({v1, v2}, ClassTag::Regular);
        return out;
    }

    if (H == 2 * L + 1) {
        if (k != L - 1 || nonbridge.size() != 1) return out;
        const int l0 = nonbridge[0];
        const StripStatus st = strip_status(c, {dir, l0});
        if (st.kind != StripKind::Semibridge) return out;
        std::vector<detail::CanonicalView> views;
        for (const auto& arc : st.arcs) {
            // try this arc as the protuberance over the other spin's sea
            const Spin bspin = arc.spin;
            Spin aspin = 0;
            for (const auto& other : st.arcs)
                if (other.spin != bspin) aspin = other.spin;
            // band: strips bridged with bspin (may be empty)
            auto band = as_interval(table, bspin);
            if (!band) continue;
            // remaining bridges must all be aspin
            bool ok = true;
            for (int v : table)
                if (v >= 0 && v != bspin && v != aspin) ok = false;
            if (!ok) continue;
            if (band->len > 0) {
                // protuberance strip must extend the band: P' = P + {l0}
                const int before = (band->start + L - 1) % L, after = (band->start + band->len) % L;
                if (l0 != before && l0 != after) continue;
            }
            std::vector<int> pos;
            for (int t = 0; t < arc.len; ++t) pos.push_back((arc.start + t) % lat.strip_length());
            const bool need_majority = band->len >= 1 && band->len <= L - 2;
            const int lband = band->len > 0
                                  ? (l0 == (band->start + L - 1) % L ? band->start
                                                                     : (band->start + band->len - 1 + L) % L)
                                  : -1;
            if (!detail::valid_protuberance(lat, dir, l0, pos, lband, need_majority))
                continue;
            detail::CanonicalView v{aspin, bspin, dir, *band, l0, pos, false};
            views.push_back(v);
        }
        finish_canonical(views, ClassTag::CanonicalOdd);
        return out;
    }

    if (H != 2 * L + 2) return out;

    // ----- energy exactly 2L+2, cross-free: the six types -----

    if (bridge_spins.size() == 1) {
        // monochromatic bridges
        const Spin a = static_cast<Spin>(*bridge_spins.begin());
        out.tag = ClassTag::MB;
        out.a = a;
        out.dir = dir;
        out.m = 0;
        for (int l : nonbridge) {
            const auto& sites = lat.strip_sites({dir, l});
            for (int x : sites) out.m += (c[x] != a);
        }
        out.mb_subtype = 0;  // refined below by mb_subtype()
        return out;
    }
    if (bridge_spins.size() != 2) return out;
    auto it = bridge_spins.begin();
    const Spin s1 = static_cast<Spin>(*it++), s2 = static_cast<Spin>(*it);

    if (k == L - 1 && nonbridge.size() == 1) {
        const int l0 = nonbridge[0];
        const StripStatus st = strip_status(c, {dir, l0});
        // third spin present: peculiar protuberance
        std::vector<const StripArc*> third;
        for (const auto& arc : st.arcs)
            if (arc.spin != s1 && arc.spin != s2) third.push_back(&arc);
        if (!third.empty()) {
            if (third.size() != 1 || third[0]->len != 1) return out;
            // the rest of the strip is a single arc of s1 or s2
            if (st.arcs.size() != 2) return out;
            const Spin fill = st.arcs[0].spin == third[0]->spin ? st.arcs[1].spin
                                                                : st.arcs[0].spin;
            // underlying regular configuration restores fill at the third spin
            std::vector<int> tb(table);
            tb[static_cast<size_t>(l0)] = fill;
            auto ia = as_interval(tb, s1), ib = as_interval(tb, s2);
            if (!ia || !ib) return out;
            detail::CanonicalView v1{s1, s2, dir, *ib, -1, {}, false};
            detail::CanonicalView v2{s2, s1, dir, *ia, -1, {}, false};
            if (!finish_canonical({v1, v2}, ClassTag::PP)) return out;
            out.c = third[0]->spin;
            out.protub_strip = l0;
            out.m = 1;
            return out;
        }
        // two-spin non-bridge strip
        std::vector<detail::CanonicalView> even_views;
        for (Spin bspin : {s1, s2}) {
            const Spin aspin = bspin == s1 ? s2 : s1;
            auto band = as_interval(table, bspin);
            if (!band) continue;
            if (band->len > 0) {
                const int before = (band->start + L - 1) % L, after = (band->start + band->len) % L;
                if (l0 != before && l0 != after) continue;
            } else {
                continue;  // would be monochromatic bridges
            }
            auto pos = detail::strip_positions_of(c, {dir, l0}, bspin);
            if (pos.empty() || pos.size() % 2 != 0) continue;
            const bool need_majority = band->len >= 1 && band->len <= L - 2;
            const int lband = l0 == (band->start + L - 1) % L
                                  ? band->start
                                  : (band->start + band->len - 1 + L) % L;
            if (!detail::valid_protuberance(lat, dir, l0, pos, lband, need_majority))
                continue;
            auto runs = detail::cyclic_runs(pos, lat.strip_length());
            detail::CanonicalView v{aspin, bspin, dir, *band, l0, pos, runs.size() == 2};
            even_views.push_back(v);
        }
        if (finish_canonical(even_views, ClassTag::CanonicalEven)) return out;
        // otherwise: one-sided double protuberance
        out.tag = ClassTag::ODP;
        {
            auto band1 = as_interval(table, s1);
            auto band2 = as_interval(table, s2);
            if (!band1 || !band2) {
                out.tag = ClassTag::Unclassified;
                return out;
            }
            // orient with the smaller band as the b-band
            if (band2->len <= band1->len) {
                out.a = s1; out.b = s2; out.band = *band2;
            } else {
                out.a = s2; out.b = s1; out.band = *band1;
            }
            out.dir = dir;
            out.protub_strip = l0;
            out.m = static_cast<int>(
                detail::strip_positions_of(c, {dir, l0}, out.b).size());
        }
        return out;
    }

    if (k == L - 2 && nonbridge.size() == 2) {
        const int l1 = nonbridge[0], l2 = nonbridge[1];
        for (int l : {l1, l2})
            if (strip_status(c, {dir, l}).kind != StripKind::Semibridge) return out;
        const bool adjacent = (l2 - l1 == 1) || (l1 == 0 && l2 == L - 1);
        out.tag = adjacent ? ClassTag::SP : ClassTag::TDP;
        auto band1 = as_interval(table, s1);
        auto band2 = as_interval(table, s2);
        if (!band1 || !band2) {
            out.tag = ClassTag::Unclassified;
            return out;
        }
        if (band2->len <= band1->len) {
            out.a = s1; out.b = s2; out.band = *band2;
        } else {
            out.a = s2; out.b = s1; out.band = *band1;
        }
        out.dir = dir;
        out.m = static_cast<int>(detail::strip_positions_of(c, {dir, l1}, out.b).size() +
                                 detail::strip_positions_of(c, {dir, l2}, out.b).size());
        return out;
    }
    return out;  // Unclassified
}

// --- good flips and neighborhoods ------------------------------------------

struct GoodFlip {
    int site = 0;
    Spin to = 0;
    SpinConfig config;
};

// All single-flip neighbors with energy at most 2L+2.
inline std::vector<GoodFlip> good_flip_neighbors(const SpinConfig& c) {
    require_hex(c);
    const int cap = 2 * c.lat->side() + 2;
    const int h = energy(c);
    std::vector<GoodFlip> out;
    for (int x = 0; x < c.lat->n_sites(); ++x)
        for (Spin a = 0; a < c.q; ++a) {
            if (a == c[x]) continue;
            if (h + flip_delta(c, x, a) <= cap) {
                SpinConfig d = c;
                d[x] = a;
                out.push_back({x, a, std::move(d)});
            }
        }
    return out;
}

struct BudgetExceeded : std::runtime_error {
    size_t visited;
    explicit BudgetExceeded(size_t v)
        : std::runtime_error("neighborhood exploration exceeded its budget after " +
                             std::to_string(v) + " states"),
          visited(v) {}
};

// BFS closure of all states reachable through paths with every energy <= cap,
// avoiding `forbidden` (spin keys). Hard failure if the visited set passes
// the budget; never a silent truncation.
struct Neighborhood {
    std::vector<SpinConfig> configs;
    std::unordered_map<std::string, int> index;  // spin_key -> position
};

inline Neighborhood neighborhood(const SpinConfig& origin, int cap,
                                 const std::unordered_set<std::string>* forbidden = nullptr,
                                 size_t budget = 100'000'000) {
    require_hex(origin);
    if (energy(origin) > cap) throw std::invalid_argument("origin violates the energy cap");
    Neighborhood nb;
    std::vector<size_t> frontier;
    auto push = [&](SpinConfig cfg) {
        std::string key = spin_key(cfg);
        if (nb.index.count(key)) return;
        if (forbidden && forbidden->count(key)) return;
        if (nb.configs.size() >= budget) throw BudgetExceeded(nb.configs.size());
        nb.index.emplace(std::move(key), static_cast<int>(nb.configs.size()));
        frontier.push_back(nb.configs.size());
        nb.configs.push_back(std::move(cfg));
    };
    push(origin);
    while (!frontier.empty()) {
        const size_t i = frontier.back();
        frontier.pop_back();
        SpinConfig cur = nb.configs[i];  // copy: configs may reallocate
        const int h = energy(cur);
        for (int x = 0; x < cur.lat->n_sites(); ++x)
            for (Spin a = 0; a < cur.q; ++a) {
                if (a == cur[x]) continue;
                if (h + flip_delta(cur, x, a) > cap) continue;
                SpinConfig d = cur;
                d[x] = a;
                push(std::move(d));
            }
    }
    return nb;
}

// --- constructive families ---------------------------------------------------

// Regular configuration: spin b on the strips of band P, spin a elsewhere.
inline SpinConfig make_regular(const Lattice& lat, int q, Spin a, Spin b, StripDir dir,
                               CycInterval P) {
    if (lat.kind() != LatticeKind::Hexagonal)
        throw std::invalid_argument("regular configurations are hexagonal-only");
    if (a == b || a >= q || b >= q) throw std::invalid_argument("bad spin pair");
    if (P.len < 0 || P.len > lat.side()) throw std::invalid_argument("bad band");
    SpinConfig c(lat, q, a);
    for (int t = 0; t < P.len; ++t) {
        const int l = (P.start + t) % lat.side();
        for (int x : lat.strip_sites({dir, l})) c[x] = b;
    }
    return c;
}

// Canonical configuration: regular band P plus a protuberance in the strip
// extending it. `side` +1 grows the band forward (strip after the band),
// -1 backward. Protuberance given by strip positions.
inline SpinConfig make_canonical(const Lattice& lat, int q, Spin a, Spin b, StripDir dir,
                                 CycInterval P, int side, const std::vector<int>& protub) {
    const int L = lat.side();
    const int lp = P.len == 0 ? P.start
                              : (side > 0 ? (P.start + P.len) % L : (P.start + L - 1) % L);
    const int lband = P.len == 0 ? -1 : (side > 0 ? (P.start + P.len - 1) % L : P.start);
    const bool need_majority = P.len >= 1 && P.len <= L - 2;
    if (!detail::valid_protuberance(lat, dir, lp, protub, lband, need_majority))
        throw std::invalid_argument("not a valid protuberance");
    SpinConfig c = make_regular(lat, q, a, b, dir, P);
    const auto& sites = lat.strip_sites({dir, lp});
    for (int p : protub) c[sites[static_cast<size_t>(p)]] = b;
    return c;
}

// All regular configurations with band width n between spins a and b.
inline std::vector<SpinConfig> enumerate_regular(const Lattice& lat, int q, Spin a, Spin b,
                                                 int n) {
    std::vector<SpinConfig> out;
    for (int d = 0; d < 3; ++d)
        for (int s = 0; s < lat.side(); ++s)
            out.push_back(make_regular(lat, q, a, b, static_cast<StripDir>(d),
                                       {s, n}));
    return out;
}

// Canonical configurations at band width n with protuberance size m (either
// parity), both attachment sides, all positions. Valid ones only.
inline std::vector<SpinConfig> enumerate_canonical(const Lattice& lat, int q, Spin a, Spin b,
                                                   int n, int m) {
    std::vector<SpinConfig> out;
    const int L = lat.side(), n2 = lat.strip_length();
    for (int d = 0; d < 3; ++d)
        for (int s = 0; s < L; ++s)
            for (int side : {+1, -1}) {
                if (n == 0 && side < 0) continue;  // empty band: one orientation
                const CycInterval P{s, n};
                // connected arcs
                for (int st = 0; st < n2; ++st) {
                    std::vector<int> pos;
                    for (int t = 0; t < m; ++t) pos.push_back((st + t) % n2);
                    try {
                        out.push_back(make_canonical(lat, q, a, b, static_cast<StripDir>(d),
                                                     P, side, pos));
                    } catch (const std::invalid_argument&) {
                    }
                }
                // vertex-split sets: odd arc plus a single across a one-site gap
                if (m % 2 == 0 && m >= 2)
                    for (int st = 0; st < n2; ++st)
                        for (int which : {0, 1}) {
                            std::vector<int> pos;
                            for (int t = 0; t < m - 1; ++t) pos.push_back((st + t) % n2);
                            pos.push_back(which == 0 ? (st + m) % n2 : (st + n2 - 2) % n2);
                            std::sort(pos.begin(), pos.end());
                            pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
                            if (static_cast<int>(pos.size()) != m) continue;
                            try {
                                out.push_back(make_canonical(
                                    lat, q, a, b, static_cast<StripDir>(d), P, side, pos));
                            } catch (const std::invalid_argument&) {
                            }
                        }
            }
    // deduplicate on serialized identity
    std::set<std::string> seen;
    std::vector<SpinConfig> uniq;
    for (auto& c : out) {
        if (seen.insert(spin_key(c)).second) uniq.push_back(std::move(c));
    }
    return uniq;
}

// Peculiar protuberances reachable by one good flip from a width-n regular
// configuration (requires a third spin).
inline std::vector<SpinConfig> enumerate_pp(const Lattice& lat, int q, Spin a, Spin b, int n) {
    std::vector<SpinConfig> out;
    std::set<std::string> seen;
    if (q < 3) return out;
    for (auto& r : enumerate_regular(lat, q, a, b, n)) {
        const int h = energy(r);
        for (int x = 0; x < lat.n_sites(); ++x)
            for (Spin s = 0; s < q; ++s) {
                if (s == r[x] || s == a || s == b) continue;
                if (h + flip_delta(r, x, s) != 2 * lat.side() + 2) continue;
                SpinConfig d = r;
                d[x] = s;
                if (classify(d).tag == ClassTag::PP && seen.insert(spin_key(d)).second)
                    out.push_back(std::move(d));
            }
    }
    return out;
}

// Double/superimposed protuberances reachable by one good flip from a
// width-n odd canonical configuration.
inline std::vector<SpinConfig> enumerate_q(const Lattice& lat, int q, Spin a, Spin b, int n) {
    std::vector<SpinConfig> out;
    std::set<std::string> seen;
    const int gamma = 2 * lat.side() + 2;
    for (int m = 1; m < lat.strip_length(); m += 2)
        for (auto& c : enumerate_canonical(lat, q, a, b, n, m)) {
            const int h = energy(c);
            for (int x = 0; x < lat.n_sites(); ++x)
                for (Spin s = 0; s < q; ++s) {
                    if (s == c[x]) continue;
                    if (h + flip_delta(c, x, s) != gamma) continue;
                    SpinConfig d = c;
                    d[x] = s;
                    const ClassTag t = classify(d).tag;
                    if ((t == ClassTag::ODP || t == ClassTag::TDP || t == ClassTag::SP) &&
                        seen.insert(spin_key(d)).second)
                        out.push_back(std::move(d));
                }
        }
    return out;
}

// --- monochromatic-bridge configurations ------------------------------------

// All MB configurations with parallel bridges of spin a: cross-free,
// energy 2L+2, every bridge of spin a and in one direction. Enumerated by
// direct pattern search over one or two non-bridge strips.
inline std::vector<SpinConfig> enumerate_mb(const Lattice& lat, int q, Spin a) {
    const int L = lat.side(), n2 = lat.strip_length(), gamma = 2 * L + 2;
    std::vector<SpinConfig> out;
    std::set<std::string> seen;
    auto consider = [&](SpinConfig&& c) {
        if (energy(c) != gamma) return;
        const LandscapeClass cl = classify(c);
        if (cl.tag == ClassTag::MB && cl.a == a && seen.insert(spin_key(c)).second)
            out.push_back(std::move(c));
    };
    for (int d = 0; d < 3; ++d) {
        const StripDir dir = static_cast<StripDir>(d);
        // one non-bridge strip: two isolated a-sites splitting it into two arcs
        for (int l = 0; l < L; ++l) {
            const auto& sites = lat.strip_sites({dir, l});
            for (Spin b1 = 0; b1 < q; ++b1) {
                if (b1 == a) continue;
                for (Spin b2 = 0; b2 < q; ++b2) {
                    if (b2 == a) continue;
                    for (int p1 = 0; p1 < n2; ++p1)
                        for (int p2 = p1 + 2; p2 < n2; ++p2) {
                            if (p1 == 0 && p2 == n2 - 1) continue;  // cyclically adjacent
                            SpinConfig c = ground_state(lat, q, a);
                            for (int t = 0; t < n2; ++t)
                                c[sites[static_cast<size_t>(t)]] =
                                    (t > p1 && t < p2) ? b1 : b2;
                            c[sites[static_cast<size_t>(p1)]] = a;
                            c[sites[static_cast<size_t>(p2)]] = a;
                            consider(std::move(c));
                        }
                    // mixed-spin variants (need b1 != b2): one or zero a-sites
                    if (b1 != b2) {
                        for (int p = 0; p < n2; ++p)
                            for (int j = 1; j < n2 - 1; ++j) {
                                // [a at p][b1-arc of j][b2-arc of the rest]
                                SpinConfig c = ground_state(lat, q, a);
                                for (int t = 1; t <= j; ++t)
                                    c[sites[static_cast<size_t>((p + t) % n2)]] = b1;
                                for (int t = j + 1; t < n2; ++t)
                                    c[sites[static_cast<size_t>((p + t) % n2)]] = b2;
                                consider(std::move(c));
                            }
                        for (int p = 0; p < n2; ++p)
                            for (int j = 1; j < n2; ++j) {
                                // [b1-arc of j][b2-arc of the rest], no a at all
                                SpinConfig c = ground_state(lat, q, a);
                                for (int t = 0; t < n2; ++t)
                                    c[sites[static_cast<size_t>((p + t) % n2)]] =
                                        t < j ? b1 : b2;
                                consider(std::move(c));
                            }
                    }
                }
            }
        }
        // two adjacent non-bridge strips, one non-a arc in each; prefilter on
        // the exact perimeter before building the configuration
        for (int l = 0; l < L; ++l) {
            const int l2 = (l + 1) % L;
            const auto& s1 = lat.strip_sites({dir, l});
            const auto& s2 = lat.strip_sites({dir, l2});
            // adjacency map between strip positions of l and l2
            std::vector<int> link(static_cast<size_t>(n2), -1);  // pos in l -> pos in l2
            for (int p = 0; p < n2; ++p) {
                const int x = s1[static_cast<size_t>(p)];
                for (int k = 0; k < lat.degree(); ++k) {
                    const int y = lat.neighbors(x)[k];
                    if (lat.strip_of(dir, y) == l2)
                        link[static_cast<size_t>(p)] = lat.pos_in_strip(dir, y);
                }
            }
            std::vector<char> in2(static_cast<size_t>(n2), 0);
            for (int m2 = 1; m2 < n2; ++m2)
                for (int st2 = 0; st2 < n2; ++st2) {
                    std::fill(in2.begin(), in2.end(), 0);
                    for (int t = 0; t < m2; ++t) in2[static_cast<size_t>((st2 + t) % n2)] = 1;
                    for (int m1 = 1; m1 < n2; ++m1)
                        for (int st1 = 0; st1 < n2; ++st1) {
                            int cross = 0;
                            for (int t = 0; t < m1; ++t) {
                                const int lk = link[static_cast<size_t>((st1 + t) % n2)];
                                if (lk >= 0 && in2[static_cast<size_t>(lk)]) ++cross;
                            }
                            const int same_need = m1 + m2 + 4 - gamma;
                            for (Spin b1 = 0; b1 < q; ++b1) {
                                if (b1 == a) continue;
                                for (Spin b2 = 0; b2 < q; ++b2) {
                                    if (b2 == a) continue;
                                    if ((b1 == b2 ? 2 : 1) * cross != same_need) continue;
                                    SpinConfig c = ground_state(lat, q, a);
                                    for (int t = 0; t < m1; ++t)
                                        c[s1[static_cast<size_t>((st1 + t) % n2)]] = b1;
                                    for (int t = 0; t < m2; ++t)
                                        c[s2[static_cast<size_t>((st2 + t) % n2)]] = b2;
                                    consider(std::move(c));
                                }
                            }
                        }
                }
        }
    }
    return out;
}

// Structural subtype of an MB configuration, 1..13.
//
// One non-bridge strip (MB1-MB4): two isolated a-sites keyed by attachment
// parity and gap (MB1: same parity, minimal gap; MB2: same parity, wider;
// MB3: opposite parity); mixed-spin strip contents with fewer than two
// a-sites (possible only for q >= 3) are MB4.
//
// Two adjacent non-bridge strips: distinct protuberance spins are MB5 and
// even sizes MB13. For common-spin odd pairs the behavioral anchors come
// first: no good flip at all is MB10 (the isolated type) and a downhill flip
// onto a mid-sized single-band canonical configuration is MB7 (the type
// whose only exits lead away from the ground valley). The remaining classes
// split on arc orientation: both arcs facing each other are MB6/MB8/MB9 by
// overlap (disjoint / partial / contained), mixed orientation is MB8, and
// both facing away are MB11 (unequal sizes) or MB12 (equal sizes).
inline int mb_subtype(const SpinConfig& c) {
    const LandscapeClass cl = classify(c);
    if (cl.tag != ClassTag::MB) throw std::invalid_argument("not an MB configuration");
    const Lattice& lat = *c.lat;
    const int L = lat.side(), n2 = lat.strip_length();
    const Spin a = cl.a;
    const BridgeTable bt = bridge_table(c);
    int d0 = 0;
    for (int d = 0; d < 3; ++d)
        if (bt.count_dir(static_cast<StripDir>(d)) > 0) d0 = d;
    const StripDir dir = static_cast<StripDir>(d0);
    std::vector<int> nonbridge;
    for (int l = 0; l < L; ++l)
        if (bt.spin_of[static_cast<size_t>(d0)][static_cast<size_t>(l)] < 0)
            nonbridge.push_back(l);

    if (nonbridge.size() == 1) {
        const auto pos = detail::strip_positions_of(c, {dir, nonbridge[0]}, a);
        if (pos.size() != 2) return 4;
        const int p1 = pos[0], p2 = pos[1];
        const int g = std::min((p2 - p1 + n2) % n2, (p1 - p2 + n2) % n2);
        const bool same_parity = ((p1 ^ p2) & 1) == 0;
        if (same_parity) return g == 2 ? 1 : 2;
        return 3;
    }
    if (nonbridge.size() != 2) return 0;
    int l1 = nonbridge[0], l2 = nonbridge[1];
    if (!((l2 - l1 == 1) || (l1 == 0 && l2 == L - 1))) return 0;
    if (l1 == 0 && l2 == L - 1) std::swap(l1, l2);

    auto non_a_arcs = [&](int l) {
        std::vector<int> p;
        const auto& s = lat.strip_sites({dir, l});
        for (int t = 0; t < n2; ++t)
            if (c[s[static_cast<size_t>(t)]] != a) p.push_back(t);
        return detail::cyclic_runs(p, n2);
    };
    auto arcs1 = non_a_arcs(l1), arcs2 = non_a_arcs(l2);
    if (arcs1.size() != 1 || arcs2.size() != 1) return 0;
    const Spin b1 = c[lat.strip_sites({dir, l1})[static_cast<size_t>(arcs1[0].start)]];
    const Spin b2 = c[lat.strip_sites({dir, l2})[static_cast<size_t>(arcs2[0].start)]];
    if (b1 != b2) return 5;
    if (arcs2[0].len % 2 == 0) return 13;  // both even: total content is even

    // behavioral anchors
    bool any_good_flip = false, singleton_exit = false;
    const int h = energy(c);
    for (int x = 0; x < lat.n_sites(); ++x)
        for (Spin s = 0; s < c.q; ++s) {
            if (s == c[x]) continue;
            const int hn = h + flip_delta(c, x, s);
            if (hn <= h) any_good_flip = true;
            if (hn < h) {
                SpinConfig d = c;
                d[x] = s;
                const LandscapeClass dl = classify(d);
                if (dl.tag == ClassTag::CanonicalOdd && dl.n() == 1 && dl.m >= 3 &&
                    dl.m <= 2 * L - 3)
                    singleton_exit = true;
            }
        }
    if (!any_good_flip) return 10;
    if (singleton_exit) return 7;

    // orientation: does each arc's start-position triangle attach toward the
    // other non-bridge strip?
    const bool t1 = detail::attaches_to(lat, dir, l1, arcs1[0].start, l2);
    const bool t2 = detail::attaches_to(lat, dir, l2, arcs2[0].start, l1);
    if (t1 != t2) return 8;
    if (!t1) return arcs1[0].len == arcs2[0].len ? 12 : 11;

    // both arcs face each other: overlap class of the smaller arc's
    // across-strip projection against the larger arc
    const bool big_is_2 = arcs2[0].len >= arcs1[0].len;
    const int lb = big_is_2 ? l2 : l1, lo = big_is_2 ? l1 : l2;
    const auto& big = big_is_2 ? arcs2[0] : arcs1[0];
    const auto& small = big_is_2 ? arcs1[0] : arcs2[0];
    std::vector<char> in_big(static_cast<size_t>(n2), 0);
    for (int t = 0; t < big.len; ++t) in_big[static_cast<size_t>((big.start + t) % n2)] = 1;
    int covered = 0;
    const auto& ssites = lat.strip_sites({dir, lo});
    for (int t = 0; t < small.len; ++t) {
        const int p = (small.start + t) % n2;
        const int x = ssites[static_cast<size_t>(p)];
        for (int k = 0; k < lat.degree(); ++k) {
            const int y = lat.neighbors(x)[k];
            if (lat.strip_of(dir, y) == lb &&
                in_big[static_cast<size_t>(lat.pos_in_strip(dir, y))])
                ++covered;
        }
    }
    if (covered == 0) return 6;
    if (covered < (small.len + 1) / 2) return 8;
    return 9;
}

// --- canonical paths ---------------------------------------------------------

// A path of configurations from ground a to ground b that grows one strip at
// a time, each strip filled monotonically from a band-attached seed. Every
// configuration on the path is regular or canonical and the path never
// exceeds energy 2L+2.
inline std::vector<SpinConfig> canonical_path(const Lattice& lat, int q, Spin a, Spin b,
                                              StripDir dir = StripDir::H) {
    const int L = lat.side(), n2 = lat.strip_length();
    std::vector<SpinConfig> path;
    SpinConfig c = ground_state(lat, q, a);
    path.push_back(c);
    for (int n = 0; n < L; ++n) {
        const int lp = n;  // strip being filled; band = [0, n)
        const auto& sites = lat.strip_sites({dir, lp});
        // seed at a position attached to the band side (strip n-1)
        int seed = 0;
        for (int p = 0; p < n2; ++p)
            if (detail::attaches_to(lat, dir, lp, p, (lp + L - 1) % L)) {
                seed = p;
                break;
            }
        for (int t = 0; t < n2; ++t) {
            c[sites[static_cast<size_t>((seed + t) % n2)]] = b;
            path.push_back(c);
        }
    }
    return path;
}

// Shrink all non-a spins one site per step: each flip targets the non-a site
// with the most discordant edges, so the energy never rises except for the
// single +1 seed flip needed to open a perfect winding band. Every step
// removes one non-a site, so the path length is exactly the starting non-a
// count. Returns the path from c to ground a, or nothing if some step would
// exceed `cap`.
inline std::optional<std::vector<SpinConfig>> monotone_shrink_path(const SpinConfig& start,
                                                                   Spin a, int cap) {
    std::vector<SpinConfig> path = {start};
    SpinConfig c = start;
    const int n = c.lat->n_sites();
    int h = energy(c);
    if (h > cap) return std::nullopt;
    // non-a occupation per strip, used to break ties toward thin strips so
    // protuberances are dismantled before the bands they sit on
    const int L = c.lat->side();
    std::array<std::vector<int>, 3> load;
    for (int d = 0; d < 3; ++d) {
        load[static_cast<size_t>(d)].assign(static_cast<size_t>(L), 0);
        for (int x = 0; x < n; ++x)
            if (c[x] != a)
                ++load[static_cast<size_t>(d)][static_cast<size_t>(
                    c.lat->strip_of(static_cast<StripDir>(d), x))];
    }
    auto weight = [&](int x) {
        int w = 0;
        for (int d = 0; d < 3; ++d)
            w += load[static_cast<size_t>(d)][static_cast<size_t>(
                c.lat->strip_of(static_cast<StripDir>(d), x))];
        return w;
    };
    while (true) {
        int best = -1, bestd = 4, bestw = 0;
        for (int x = 0; x < n; ++x) {
            if (c[x] == a) continue;
            const int d = flip_delta(c, x, a);
            const int w = weight(x);
            if (d < bestd || (d == bestd && w < bestw)) {
                bestd = d;
                bestw = w;
                best = x;
            }
        }
        if (best < 0) return path;  // monochromatic a
        if (h + bestd > cap) return std::nullopt;
        for (int d = 0; d < 3; ++d)
            --load[static_cast<size_t>(d)][static_cast<size_t>(
                c.lat->strip_of(static_cast<StripDir>(d), best))];
        c[best] = a;
        h += bestd;
        path.push_back(c);
    }
}

// Witness path from a configuration to ground a staying at or below `cap`:
// plain monotone shrink when possible, otherwise one non-increasing flip
// first (the exit move of the interlocked bridge types, which lands on a
// single-band canonical configuration) followed by the shrink.
inline std::optional<std::vector<SpinConfig>> valley_path_to_ground(const SpinConfig& start,
                                                                    Spin a, int cap) {
    if (auto p = monotone_shrink_path(start, a, cap)) return p;
    const int h = energy(start);
    for (int x = 0; x < start.lat->n_sites(); ++x)
        for (Spin s = 0; s < start.q; ++s) {
            if (s == start[x] || s == a) continue;
            if (flip_delta(start, x, s) > 0) continue;
            SpinConfig d = start;
            d[x] = s;
            if (h + flip_delta(start, x, s) > cap) continue;
            if (auto p = monotone_shrink_path(d, a, cap)) {
                p->insert(p->begin(), start);
                return p;
            }
        }
    return std::nullopt;
}

}  // namespace potts::landscape
