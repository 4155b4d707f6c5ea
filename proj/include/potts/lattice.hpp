#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace potts {

enum class LatticeKind { Square, Hexagonal };

inline const char* kind_name(LatticeKind k) {
    return k == LatticeKind::Square ? "sq" : "hex";
}

struct LatticeSpec {
    LatticeKind kind = LatticeKind::Hexagonal;
    int side = 8;  // L

    bool operator==(const LatticeSpec&) const = default;
};

// Strip directions. Square lattices have H and V only.
enum class StripDir : int { H = 0, V = 1, D = 2 };

struct StripId {
    StripDir dir = StripDir::H;
    int index = 0;  // in [0, L)
};

// Periodic lattice geometry, immutable after construction.
//
// Square: sites are (i,j) on the L x L torus, index = i*L + j, degree 4.
//
// Hexagonal: sites are identified with the triangular faces of the dual
// lattice, an L x L rhombus of cells with periodic identification. Each
// cell (i,j) holds an Up and a Down triangle:
//
//   index(Up(i,j))   = 2*(i*L + j)
//   index(Down(i,j)) = 2*(i*L + j) + 1
//
// Adjacency convention (fixed here once; strips and all landscape code
// derive from it):
//
//   Up(i,j)   ~ Down(i,j), Down(i,j-1), Down(i-1,j)
//   Down(i,j) ~ Up(i,j),   Up(i,j+1),   Up(i+1,j)
//
// with all cell indices mod L. Every lattice edge joins an Up and a Down
// triangle, so edges are enumerated once from the Up side.
//
// Strips are the three families of cyclic bands of 2L triangles:
//
//   H strip l: Up(l,0), Down(l,0), Up(l,1), Down(l,1), ...
//   V strip l: Up(0,l), Down(0,l), Up(1,l), Down(1,l), ...
//   D strip l: Up(i, l-i), Down(i, l-1-i) for i = 0..L-1, interleaved
//
// Consecutive strip entries are lattice-adjacent and the band closes up
// cyclically. Each site lies in exactly one strip per direction and each
// edge lies in exactly two strips (one per two of the three directions).
class Lattice {
public:
    explicit Lattice(LatticeSpec spec) : spec_(spec) {
        if (spec.side < 3) throw std::invalid_argument("lattice side must be >= 3");
        const int L = spec.side;
        if (spec.kind == LatticeKind::Square) {
            n_sites_ = L * L;
            degree_ = 4;
            n_dirs_ = 2;
        } else {
            n_sites_ = 2 * L * L;
            degree_ = 3;
            n_dirs_ = 3;
        }
        build_neighbors();
        build_edges();
        build_strips();
    }

    const LatticeSpec& spec() const { return spec_; }
    LatticeKind kind() const { return spec_.kind; }
    int side() const { return spec_.side; }
    int n_sites() const { return n_sites_; }
    int degree() const { return degree_; }
    int n_directions() const { return n_dirs_; }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    int strip_length() const {
        return spec_.kind == LatticeKind::Square ? spec_.side : 2 * spec_.side;
    }

    // Neighbors of x, always exactly degree() entries.
    const int* neighbors(int x) const { return &nbr_[static_cast<size_t>(x) * 4]; }

    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    // Ordered, cyclically closed site list of one strip.
    const std::vector<int>& strip_sites(StripId s) const {
        check_dir(s.dir);
        return strips_[static_cast<int>(s.dir)][static_cast<size_t>(s.index)];
    }

    int strip_of(StripDir d, int site) const {
        check_dir(d);
        return strip_index_[static_cast<int>(d)][static_cast<size_t>(site)];
    }

    int pos_in_strip(StripDir d, int site) const {
        check_dir(d);
        return strip_pos_[static_cast<int>(d)][static_cast<size_t>(site)];
    }

    // Hexagonal decode helpers.
    bool is_up(int site) const { return (site & 1) == 0; }
    int cell_row(int site) const { return (site >> 1) / spec_.side; }
    int cell_col(int site) const { return (site >> 1) % spec_.side; }

    int up_site(int i, int j) const { return 2 * (wrap(i) * spec_.side + wrap(j)); }
    int down_site(int i, int j) const { return 2 * (wrap(i) * spec_.side + wrap(j)) + 1; }
    int sq_site(int i, int j) const { return wrap(i) * spec_.side + wrap(j); }

private:
    int wrap(int v) const {
        const int L = spec_.side;
        v %= L;
        return v < 0 ? v + L : v;
    }

    void check_dir(StripDir d) const {
        if (spec_.kind == LatticeKind::Square && d == StripDir::D)
            throw std::invalid_argument("square lattice has no diagonal strips");
    }

    void build_neighbors() {
        const int L = spec_.side;
        nbr_.assign(static_cast<size_t>(n_sites_) * 4, -1);
        if (spec_.kind == LatticeKind::Square) {
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    int s = sq_site(i, j);
                    int* n = &nbr_[static_cast<size_t>(s) * 4];
                    n[0] = sq_site(i, j + 1);
                    n[1] = sq_site(i, j - 1);
                    n[2] = sq_site(i + 1, j);
                    n[3] = sq_site(i - 1, j);
                }
        } else {
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    int u = up_site(i, j);
                    int* nu = &nbr_[static_cast<size_t>(u) * 4];
                    nu[0] = down_site(i, j);
                    nu[1] = down_site(i, j - 1);
                    nu[2] = down_site(i - 1, j);
                    int d = down_site(i, j);
                    int* nd = &nbr_[static_cast<size_t>(d) * 4];
                    nd[0] = up_site(i, j);
                    nd[1] = up_site(i, j + 1);
                    nd[2] = up_site(i + 1, j);
                }
        }
    }

    void build_edges() {
        const int L = spec_.side;
        if (spec_.kind == LatticeKind::Square) {
            edges_.reserve(static_cast<size_t>(2) * L * L);
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    edges_.emplace_back(sq_site(i, j), sq_site(i, j + 1));
                    edges_.emplace_back(sq_site(i, j), sq_site(i + 1, j));
                }
        } else {
            edges_.reserve(static_cast<size_t>(3) * L * L);
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    int u = up_site(i, j);
                    edges_.emplace_back(u, down_site(i, j));
                    edges_.emplace_back(u, down_site(i, j - 1));
                    edges_.emplace_back(u, down_site(i - 1, j));
                }
        }
    }

    void build_strips() {
        const int L = spec_.side;
        for (int d = 0; d < n_dirs_; ++d) {
            strips_[d].assign(static_cast<size_t>(L), {});
            strip_index_[d].assign(static_cast<size_t>(n_sites_), -1);
            strip_pos_[d].assign(static_cast<size_t>(n_sites_), -1);
        }
        if (spec_.kind == LatticeKind::Square) {
            for (int l = 0; l < L; ++l) {
                auto& h = strips_[0][static_cast<size_t>(l)];
                auto& v = strips_[1][static_cast<size_t>(l)];
                for (int k = 0; k < L; ++k) {
                    h.push_back(sq_site(l, k));
                    v.push_back(sq_site(k, l));
                }
            }
        } else {
            for (int l = 0; l < L; ++l) {
                auto& h = strips_[0][static_cast<size_t>(l)];
                auto& v = strips_[1][static_cast<size_t>(l)];
                auto& dd = strips_[2][static_cast<size_t>(l)];
                for (int k = 0; k < L; ++k) {
                    h.push_back(up_site(l, k));
                    h.push_back(down_site(l, k));
                    v.push_back(up_site(k, l));
                    v.push_back(down_site(k, l));
                    dd.push_back(up_site(k, l - k));
                    dd.push_back(down_site(k, l - 1 - k));
                }
            }
        }
        for (int d = 0; d < n_dirs_; ++d)
            for (int l = 0; l < L; ++l) {
                const auto& sl = strips_[d][static_cast<size_t>(l)];
                for (size_t p = 0; p < sl.size(); ++p) {
                    strip_index_[d][static_cast<size_t>(sl[p])] = l;
                    strip_pos_[d][static_cast<size_t>(sl[p])] = static_cast<int>(p);
                }
            }
    }

    LatticeSpec spec_;
    int n_sites_ = 0;
    int degree_ = 0;
    int n_dirs_ = 0;
    std::vector<int> nbr_;  // 4 slots per site, -1 padded
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> strips_[3];
    std::vector<int> strip_index_[3];
    std::vector<int> strip_pos_[3];
};

inline Lattice build_lattice(LatticeSpec spec) { return Lattice(spec); }

}  // namespace potts
