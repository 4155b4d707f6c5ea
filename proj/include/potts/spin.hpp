#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "potts/lattice.hpp"

namespace potts {

using Spin = uint8_t;

// A spin configuration on a lattice. Value type; the lattice is shared and
// immutable. Energies are exact integers: H = number of discordant edges.
struct SpinConfig {
    const Lattice* lat = nullptr;
    int q = 2;
    std::vector<Spin> spins;

    SpinConfig() = default;
    SpinConfig(const Lattice& l, int q_, Spin fill = 0)
        : lat(&l), q(q_), spins(static_cast<size_t>(l.n_sites()), fill) {
        if (q_ < 2) throw std::invalid_argument("q must be >= 2");
        if (fill >= q_) throw std::invalid_argument("fill spin out of range");
    }

    Spin operator[](int x) const { return spins[static_cast<size_t>(x)]; }
    Spin& operator[](int x) { return spins[static_cast<size_t>(x)]; }

    bool operator==(const SpinConfig& o) const { return q == o.q && spins == o.spins; }
};

inline SpinConfig ground_state(const Lattice& lat, int q, Spin a) {
    return SpinConfig(lat, q, a);
}

inline int energy(const SpinConfig& c) {
    int h = 0;
    for (const auto& [x, y] : c.lat->edges()) h += (c[x] != c[y]);
    return h;
}

// Energy change of flipping site x to spin a, from the neighborhood only.
inline int flip_delta(const SpinConfig& c, int x, Spin a) {
    const Spin old = c[x];
    if (a == old) return 0;
    int d = 0;
    const int* nb = c.lat->neighbors(x);
    for (int k = 0; k < c.lat->degree(); ++k) {
        const Spin s = c[nb[k]];
        d += (a != s) - (old != s);
    }
    return d;
}

inline void apply_flip(SpinConfig& c, int x, Spin a) { c[x] = a; }

// Dual edges crossing discordant lattice edges; size equals the energy.
struct DualBoundary {
    std::vector<int> edges;  // indices into Lattice::edges()
};

inline DualBoundary dual_boundary(const SpinConfig& c) {
    DualBoundary b;
    const auto& es = c.lat->edges();
    for (int e = 0; e < static_cast<int>(es.size()); ++e)
        if (c[es[static_cast<size_t>(e)].first] != c[es[static_cast<size_t>(e)].second])
            b.edges.push_back(e);
    return b;
}

// Number of discordant adjacent pairs within one strip (cyclic).
inline int strip_energy(const SpinConfig& c, StripId s) {
    const auto& sites = c.lat->strip_sites(s);
    int h = 0;
    const size_t n = sites.size();
    for (size_t k = 0; k < n; ++k)
        h += (c[sites[k]] != c[sites[(k + 1) % n]]);
    return h;
}

inline int spin_count(const SpinConfig& c, Spin a) {
    int n = 0;
    for (Spin s : c.spins) n += (s == a);
    return n;
}

struct Cluster {
    Spin spin = 0;
    std::vector<int> sites;
    int perimeter = 0;  // number of boundary edges of the cluster
};

// Maximal monochromatic connected components. Half the summed perimeters
// equals the energy.
inline std::vector<Cluster> clusters(const SpinConfig& c) {
    const int n = c.lat->n_sites();
    std::vector<int> comp(static_cast<size_t>(n), -1);
    std::vector<Cluster> out;
    std::vector<int> stack;
    for (int s0 = 0; s0 < n; ++s0) {
        if (comp[static_cast<size_t>(s0)] >= 0) continue;
        const int id = static_cast<int>(out.size());
        out.push_back({c[s0], {}, 0});
        comp[static_cast<size_t>(s0)] = id;
        stack.push_back(s0);
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            out[static_cast<size_t>(id)].sites.push_back(x);
            const int* nb = c.lat->neighbors(x);
            for (int k = 0; k < c.lat->degree(); ++k) {
                int y = nb[k];
                if (c[y] != c[x]) {
                    ++out[static_cast<size_t>(id)].perimeter;
                } else if (comp[static_cast<size_t>(y)] < 0) {
                    comp[static_cast<size_t>(y)] = id;
                    stack.push_back(y);
                }
            }
        }
    }
    return out;
}

// --- serialization -------------------------------------------------------
//
// Bit-exact text format:
//   POTTS v1 kind=<hex|sq> L=<n> q=<n>\n
//   <#sites base-q digits in site-index order>\n

inline char spin_digit(Spin v) {
    return static_cast<char>(v < 10 ? '0' + v : 'a' + (v - 10));
}

inline Spin digit_spin(char ch) {
    if (ch >= '0' && ch <= '9') return static_cast<Spin>(ch - '0');
    if (ch >= 'a' && ch <= 'z') return static_cast<Spin>(ch - 'a' + 10);
    throw std::invalid_argument("bad spin digit");
}

inline std::string serialize(const SpinConfig& c) {
    std::string out = "POTTS v1 kind=";
    out += kind_name(c.lat->kind());
    out += " L=" + std::to_string(c.lat->side());
    out += " q=" + std::to_string(c.q);
    out += '\n';
    for (Spin s : c.spins) out += spin_digit(s);
    out += '\n';
    return out;
}

// Compact digit-string identity for sets and maps (no header).
inline std::string spin_key(const SpinConfig& c) {
    std::string out;
    out.reserve(c.spins.size());
    for (Spin s : c.spins) out += spin_digit(s);
    return out;
}

inline SpinConfig deserialize(const Lattice& lat, const std::string& text) {
    std::istringstream in(text);
    std::string tag, ver, kindkv, lkv, qkv;
    in >> tag >> ver >> kindkv >> lkv >> qkv;
    if (tag != "POTTS" || ver != "v1") throw std::invalid_argument("bad header");
    auto val = [](const std::string& kv, const char* key) {
        const std::string k = std::string(key) + "=";
        if (kv.rfind(k, 0) != 0) throw std::invalid_argument("bad header field");
        return kv.substr(k.size());
    };
    const std::string kind = val(kindkv, "kind");
    const int L = std::stoi(val(lkv, "L"));
    const int q = std::stoi(val(qkv, "q"));
    if (kind != kind_name(lat.kind()) || L != lat.side())
        throw std::invalid_argument("header does not match lattice");
    std::string digits;
    in >> digits;
    if (static_cast<int>(digits.size()) != lat.n_sites())
        throw std::invalid_argument("wrong digit count");
    SpinConfig c(lat, q);
    for (int i = 0; i < lat.n_sites(); ++i) {
        Spin s = digit_spin(digits[static_cast<size_t>(i)]);
        if (s >= q) throw std::invalid_argument("spin value out of range");
        c[i] = s;
    }
    return c;
}

// Configuration from a set of sites carrying spin b over a sea of spin a.
inline SpinConfig fill_config(const Lattice& lat, int q, Spin a, Spin b,
                              const std::vector<int>& b_sites) {
    SpinConfig c(lat, q, a);
    for (int x : b_sites) c[x] = b;
    return c;
}

}  // namespace potts
