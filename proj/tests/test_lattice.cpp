#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "catch_amalgamated.hpp"
#include "potts/lattice.hpp"

using namespace potts;

TEST_CASE("hexagonal L=5 has 50 sites, 75 dual edges, 15 strips") {
    Lattice lat({LatticeKind::Hexagonal, 5});
    CHECK(lat.n_sites() == 50);
    CHECK(lat.n_edges() == 75);
    int strips = 0;
    for (int d = 0; d < lat.n_directions(); ++d) strips += lat.side();
    CHECK(strips == 15);
}

TEST_CASE("square L=3 torus adjacency") {
    Lattice lat({LatticeKind::Square, 3});
    CHECK(lat.n_sites() == 9);
    CHECK(lat.n_edges() == 18);
    for (int s = 0; s < 9; ++s) {
        std::set<int> nb(lat.neighbors(s), lat.neighbors(s) + 4);
        CHECK(nb.size() == 4);
        CHECK(!nb.count(s));
    }
    std::set<int> n00(lat.neighbors(0), lat.neighbors(0) + 4);
    CHECK(n00 == std::set<int>{lat.sq_site(0, 1), lat.sq_site(0, 2), lat.sq_site(1, 0),
                               lat.sq_site(2, 0)});
}

TEST_CASE("neighbor relation is symmetric and regular") {
    for (LatticeSpec spec : {LatticeSpec{LatticeKind::Hexagonal, 8},
                             LatticeSpec{LatticeKind::Square, 5}}) {
        Lattice lat(spec);
        for (int x = 0; x < lat.n_sites(); ++x) {
            std::set<int> nx(lat.neighbors(x), lat.neighbors(x) + lat.degree());
            CHECK(static_cast<int>(nx.size()) == lat.degree());
            for (int y : nx) {
                std::set<int> ny(lat.neighbors(y), lat.neighbors(y) + lat.degree());
                CHECK(ny.count(x));
            }
        }
    }
}

TEST_CASE("hex L=8 neighbor graph is connected") {
    Lattice lat({LatticeKind::Hexagonal, 8});
    std::vector<char> seen(static_cast<size_t>(lat.n_sites()), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 0;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        ++count;
        for (int k = 0; k < lat.degree(); ++k) {
            int y = lat.neighbors(x)[k];
            if (!seen[static_cast<size_t>(y)]) {
                seen[static_cast<size_t>(y)] = 1;
                stack.push_back(y);
            }
        }
    }
    CHECK(count == lat.n_sites());
}

TEST_CASE("strips are cyclic bands partitioning the lattice") {
    Lattice lat({LatticeKind::Hexagonal, 8});
    const int L = lat.side();
    for (int d = 0; d < 3; ++d) {
        std::set<int> all;
        for (int l = 0; l < L; ++l) {
            const auto& s = lat.strip_sites({static_cast<StripDir>(d), l});
            REQUIRE(static_cast<int>(s.size()) == 2 * L);
            // consecutive entries adjacent, cyclically
            for (size_t k = 0; k < s.size(); ++k) {
                int x = s[k], y = s[(k + 1) % s.size()];
                bool adj = false;
                for (int m = 0; m < lat.degree(); ++m) adj |= (lat.neighbors(x)[m] == y);
                CHECK(adj);
            }
            for (int x : s) {
                CHECK(!all.count(x));
                all.insert(x);
                CHECK(lat.strip_of(static_cast<StripDir>(d), x) == l);
            }
        }
        CHECK(static_cast<int>(all.size()) == lat.n_sites());
    }
}

TEST_CASE("hex L=8: every site lies in exactly one strip per direction") {
    Lattice lat({LatticeKind::Hexagonal, 8});
    for (int x = 0; x < lat.n_sites(); ++x)
        for (int d = 0; d < 3; ++d) {
            int l = lat.strip_of(static_cast<StripDir>(d), x);
            const auto& s = lat.strip_sites({static_cast<StripDir>(d), l});
            CHECK(std::count(s.begin(), s.end(), x) == 1);
        }
}

TEST_CASE("hex strips of different directions meet in exactly 2 sites") {
    Lattice lat({LatticeKind::Hexagonal, 8});
    const int L = lat.side();
    for (int d1 = 0; d1 < 3; ++d1)
        for (int d2 = d1 + 1; d2 < 3; ++d2)
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    const auto& a = lat.strip_sites({static_cast<StripDir>(d1), i});
                    const auto& b = lat.strip_sites({static_cast<StripDir>(d2), j});
                    std::set<int> sb(b.begin(), b.end());
                    int common = 0;
                    for (int x : a) common += sb.count(x);
                    CHECK(common == 2);
                }
}

TEST_CASE("each dual edge lies in exactly two strips") {
    Lattice lat({LatticeKind::Hexagonal, 6});
    std::map<std::pair<int, int>, int> edge_uses;
    for (int d = 0; d < 3; ++d)
        for (int l = 0; l < lat.side(); ++l) {
            const auto& s = lat.strip_sites({static_cast<StripDir>(d), l});
            for (size_t k = 0; k < s.size(); ++k) {
                int x = s[k], y = s[(k + 1) % s.size()];
                edge_uses[{std::min(x, y), std::max(x, y)}]++;
            }
        }
    CHECK(edge_uses.size() == static_cast<size_t>(lat.n_edges()));
    for (const auto& [e, uses] : edge_uses) CHECK(uses == 2);
}

TEST_CASE("degenerate sides are rejected") {
    CHECK_THROWS(Lattice({LatticeKind::Square, 2}));
    CHECK_THROWS(Lattice({LatticeKind::Hexagonal, 1}));
}

TEST_CASE("square lattice rejects diagonal strips") {
    Lattice lat({LatticeKind::Square, 4});
    CHECK_THROWS(lat.strip_sites({StripDir::D, 0}));
    CHECK(static_cast<int>(lat.strip_sites({StripDir::H, 0}).size()) == 4);
}

TEST_CASE("two builds of the same spec are identical") {
    Lattice a({LatticeKind::Hexagonal, 5}), b({LatticeKind::Hexagonal, 5});
    CHECK(a.edges() == b.edges());
    for (int d = 0; d < 3; ++d)
        for (int l = 0; l < 5; ++l)
            CHECK(a.strip_sites({static_cast<StripDir>(d), l}) ==
                  b.strip_sites({static_cast<StripDir>(d), l}));
}
