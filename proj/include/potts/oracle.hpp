#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "potts/lattice.hpp"
#include "potts/spin.hpp"

namespace potts::oracle {

// Exhaustive state space q^sites, states addressed by base-q counter codes.
// Deliberately brute-force; this is the ground truth the rest of the
// project is checked against.
class StateSpace {
public:
    StateSpace(const Lattice& lat, int q, uint64_t limit = (1ULL << 28))
        : lat_(&lat), q_(q) {
        const int n = lat.n_sites();
        pow_.resize(static_cast<size_t>(n) + 1);
        pow_[0] = 1;
        for (int i = 0; i < n; ++i) {
            if (pow_[static_cast<size_t>(i)] > limit / static_cast<uint64_t>(q))
                throw std::runtime_error("state space exceeds enumeration limit");
            pow_[static_cast<size_t>(i) + 1] = pow_[static_cast<size_t>(i)] * static_cast<uint64_t>(q);
        }
        n_states_ = pow_[static_cast<size_t>(n)];
    }

    const Lattice& lattice() const { return *lat_; }
    int q() const { return q_; }
    uint64_t n_states() const { return n_states_; }

    Spin spin_at(uint64_t code, int x) const {
        return static_cast<Spin>((code / pow_[static_cast<size_t>(x)]) % static_cast<uint64_t>(q_));
    }

    uint64_t with_spin(uint64_t code, int x, Spin a) const {
        const Spin old = spin_at(code, x);
        return code + (static_cast<int64_t>(a) - static_cast<int64_t>(old)) *
                          static_cast<int64_t>(pow_[static_cast<size_t>(x)]);
    }

    SpinConfig decode(uint64_t code) const {
        SpinConfig c(*lat_, q_);
        for (int x = 0; x < lat_->n_sites(); ++x) c[x] = spin_at(code, x);
        return c;
    }

    uint64_t encode(const SpinConfig& c) const {
        uint64_t code = 0;
        for (int x = lat_->n_sites() - 1; x >= 0; --x)
            code = code * static_cast<uint64_t>(q_) + c[x];
        return code;
    }

    uint64_t ground_code(Spin a) const {
        uint64_t code = 0;
        for (int x = 0; x < lat_->n_sites(); ++x)
            code += static_cast<uint64_t>(a) * pow_[static_cast<size_t>(x)];
        return code;
    }

    int energy_of(uint64_t code) const {
        int h = 0;
        for (const auto& [x, y] : lat_->edges()) h += (spin_at(code, x) != spin_at(code, y));
        return h;
    }

    int flip_delta_code(uint64_t code, int x, Spin a) const {
        const Spin old = spin_at(code, x);
        if (a == old) return 0;
        int d = 0;
        const int* nb = lat_->neighbors(x);
        for (int k = 0; k < lat_->degree(); ++k) {
            const Spin s = spin_at(code, nb[k]);
            d += (a != s) - (old != s);
        }
        return d;
    }

    // All single-flip neighbors of a state.
    template <class F>
    void for_each_neighbor(uint64_t code, F&& f) const {
        for (int x = 0; x < lat_->n_sites(); ++x) {
            const Spin old = spin_at(code, x);
            for (Spin a = 0; a < q_; ++a)
                if (a != old) f(with_spin(code, x, a), x, a);
        }
    }

    std::vector<uint8_t> all_energies() const {
        std::vector<uint8_t> e(n_states_);
        SpinConfig c(*lat_, q_);
        // counter order: state k+1 differs from k like an odometer
        uint64_t code = 0;
        int h = 0;
        e[0] = 0;
        for (code = 1; code < n_states_; ++code) {
            // increment odometer on c, updating h incrementally
            int x = 0;
            while (true) {
                Spin old = c[x];
                Spin nw = static_cast<Spin>(old + 1 == q_ ? 0 : old + 1);
                h += flip_delta(c, x, nw);
                c[x] = nw;
                if (nw != 0) break;
                ++x;
            }
            e[code] = static_cast<uint8_t>(h);
        }
        return e;
    }

private:
    const Lattice* lat_;
    int q_;
    uint64_t n_states_;
    std::vector<uint64_t> pow_;
};

struct EnergyHistogram {
    std::map<int, uint64_t> counts;
    uint64_t total = 0;
};

inline EnergyHistogram energy_histogram(const StateSpace& ss) {
    EnergyHistogram h;
    const auto e = ss.all_energies();
    for (uint8_t v : e) ++h.counts[v];
    h.total = ss.n_states();
    return h;
}

// --- minimax communication heights via union-find over energy levels ----

class UnionFind {
public:
    explicit UnionFind(size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), size_t{0});
    }
    size_t find(size_t a) {
        size_t r = a;
        while (parent_[r] != r) r = parent_[r];
        while (parent_[a] != r) {
            size_t nxt = parent_[a];
            parent_[a] = r;
            a = nxt;
        }
        return r;
    }
    // returns the surviving root
    size_t unite(size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return a;
    }

private:
    std::vector<size_t> parent_;
    std::vector<uint8_t> rank_;
};

// Exact min over paths of max energy, all pairs against the ground set.
// Processes states level by level, merging each state with already-active
// lower-or-equal neighbors.
struct CommHeights {
    std::vector<int> phi_to_ground;  // per state: Phi(sigma, S)
    int phi_between_grounds = -1;    // Phi(a, b), any two distinct grounds
};

inline CommHeights comm_heights(const StateSpace& ss) {
    const uint64_t n = ss.n_states();
    const auto energy = ss.all_energies();
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return energy[a] < energy[b]; });

    UnionFind uf(n);
    std::vector<uint8_t> active(n, 0), grounded(n, 0);
    std::vector<std::vector<uint32_t>> pending(n);
    CommHeights out;
    out.phi_to_ground.assign(n, -1);

    std::unordered_set<uint64_t> groundset;
    for (Spin a = 0; a < ss.q(); ++a) groundset.insert(ss.ground_code(a));

    auto ground_root_count = [&]() {
        std::unordered_set<size_t> roots;
        for (uint64_t g : groundset) roots.insert(uf.find(g));
        return roots.size();
    };

    size_t i = 0;
    while (i < n) {
        const int level = energy[order[i]];
        size_t j = i;
        for (; j < n && energy[order[j]] == level; ++j) {
            const uint32_t s = order[j];
            active[s] = 1;
            if (groundset.count(s)) {
                grounded[s] = 1;
                out.phi_to_ground[s] = 0;
            } else {
                pending[s].push_back(s);
            }
        }
        // merge within the level
        for (size_t k = i; k < j; ++k) {
            const uint32_t s = order[k];
            ss.for_each_neighbor(s, [&](uint64_t t, int, Spin) {
                if (!active[t]) return;
                size_t ra = uf.find(s), rb = uf.find(t);
                if (ra == rb) return;
                const bool ga = grounded[ra], gb = grounded[rb];
                const size_t r = uf.unite(ra, rb);
                const size_t loser = (r == ra) ? rb : ra;
                if (ga && gb) {
                    grounded[r] = 1;
                } else if (ga || gb) {
                    const size_t ungrounded = ga ? rb : ra;
                    for (uint32_t m : pending[ungrounded]) out.phi_to_ground[m] = level;
                    pending[ungrounded].clear();
                    grounded[r] = 1;
                } else {
                    if (loser != r) {
                        pending[r].insert(pending[r].end(), pending[loser].begin(),
                                          pending[loser].end());
                        pending[loser].clear();
                    }
                    grounded[r] = 0;
                }
            });
        }
        if (out.phi_between_grounds < 0 && ground_root_count() == 1)
            out.phi_between_grounds = level;
        i = j;
    }
    return out;
}

// Exact Phi between two specific states.
inline int communication_height(const StateSpace& ss, uint64_t s0, uint64_t s1) {
    if (s0 == s1) return ss.energy_of(s0);
    const uint64_t n = ss.n_states();
    const auto energy = ss.all_energies();
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return energy[a] < energy[b]; });
    UnionFind uf(n);
    std::vector<uint8_t> active(n, 0);
    size_t i = 0;
    while (i < n) {
        const int level = energy[order[i]];
        size_t j = i;
        for (; j < n && energy[order[j]] == level; ++j) active[order[j]] = 1;
        for (size_t k = i; k < j; ++k) {
            const uint32_t s = order[k];
            ss.for_each_neighbor(s, [&](uint64_t t, int, Spin) {
                if (active[t]) uf.unite(s, t);
            });
        }
        if (uf.find(s0) == uf.find(s1)) return level;
        i = j;
    }
    throw std::logic_error("states never connected");
}

// --- exact reversible chain and potential theory -------------------------

// Metropolis chain on the full state space at inverse temperature beta.
// mu is the normalized Gibbs measure; rates c(s,t) = exp(-beta*max(dH,0)).
class ExactChain {
public:
    ExactChain(const StateSpace& ss, double beta) : ss_(&ss), beta_(beta) {
        if (beta <= 0) throw std::invalid_argument("beta must be positive");
        energy_ = ss.all_energies();
        const uint64_t n = ss.n_states();
        // log-sum-exp factored by the minimal energy present (always 0 here,
        // but kept general)
        int emin = *std::min_element(energy_.begin(), energy_.end());
        long double z = 0;
        for (uint64_t s = 0; s < n; ++s)
            z += std::exp(-static_cast<long double>(beta) * (energy_[s] - emin));
        log_z_ = std::log(z) - static_cast<long double>(beta) * emin;
    }

    const StateSpace& space() const { return *ss_; }
    double beta() const { return beta_; }
    int energy(uint64_t s) const { return energy_[s]; }
    double log_partition() const { return static_cast<double>(log_z_); }

    double mu(uint64_t s) const {
        return static_cast<double>(
            std::exp(-static_cast<long double>(beta_) * energy_[s] - log_z_));
    }

    double rate(uint64_t s, uint64_t t) const {
        const int d = energy_[t] - energy_[s];
        return d > 0 ? std::exp(-beta_ * d) : 1.0;
    }

    // symmetric conductance mu(s) c(s,t) = min(mu(s), mu(t))
    double conductance(uint64_t s, uint64_t t) const {
        return static_cast<double>(std::exp(
            -static_cast<long double>(beta_) * std::max(energy_[s], energy_[t]) - log_z_));
    }

    template <class F>
    void for_each_neighbor(uint64_t s, F&& f) const {
        ss_->for_each_neighbor(s, [&](uint64_t t, int, Spin) { f(t); });
    }

private:
    const StateSpace* ss_;
    double beta_;
    std::vector<uint8_t> energy_;
    long double log_z_;
};

namespace detail {

// Solve the SPD system given by conductances over `free` states with fixed
// boundary values; used for both equilibrium potentials and mean hitting
// times. Residual-checked, with one long-double refinement pass on demand.
inline Eigen::VectorXd solve_laplacian(
    const ExactChain& ch, const std::vector<int>& role,  // -1 free, else boundary id
    const std::vector<double>& boundary_value, const std::vector<double>& source,
    std::vector<int>& index_out) {
    const uint64_t n = ch.space().n_states();
    index_out.assign(n, -1);
    int m = 0;
    for (uint64_t s = 0; s < n; ++s)
        if (role[s] < 0) index_out[s] = m++;

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    for (uint64_t s = 0; s < n; ++s) {
        if (role[s] >= 0) continue;
        const int i = index_out[s];
        double diag = 0;
        ch.for_each_neighbor(s, [&](uint64_t t) {
            const double w = ch.conductance(s, t);
            diag += w;
            if (role[t] < 0)
                trip.emplace_back(i, index_out[t], -w);
            else
                b[i] += w * boundary_value[static_cast<size_t>(role[t])];
        });
        trip.emplace_back(i, i, diag);
        b[i] += source[s];
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success) throw std::runtime_error("laplacian factorization failed");
    Eigen::VectorXd x = solver.solve(b);
    // residual check with one refinement pass
    for (int pass = 0; pass < 3; ++pass) {
        Eigen::VectorXd r = b - A * x;
        const double scale = std::max(1e-300, b.cwiseAbs().maxCoeff());
        if (r.cwiseAbs().maxCoeff() / scale <= 1e-12) break;
        x += solver.solve(r).eval();
    }
    return x;
}

}  // namespace detail

// Equilibrium potential h = P[tau_A < tau_B]: 1 on A, 0 on B, harmonic off.
inline std::vector<double> exact_potential(const ExactChain& ch,
                                           const std::vector<uint64_t>& A,
                                           const std::vector<uint64_t>& B) {
    const uint64_t n = ch.space().n_states();
    std::vector<int> role(n, -1);
    for (uint64_t s : A) role[s] = 0;
    for (uint64_t s : B) {
        if (role[s] == 0) throw std::invalid_argument("A and B overlap");
        role[s] = 1;
    }
    std::vector<double> bval = {1.0, 0.0}, src(n, 0.0);
    std::vector<int> index;
    Eigen::VectorXd x = detail::solve_laplacian(ch, role, bval, src, index);
    std::vector<double> h(n);
    for (uint64_t s = 0; s < n; ++s)
        h[s] = role[s] < 0 ? x[index[s]] : bval[static_cast<size_t>(role[s])];
    return h;
}

inline double dirichlet_form(const ExactChain& ch, const std::vector<double>& f) {
    long double d = 0;
    const uint64_t n = ch.space().n_states();
    for (uint64_t s = 0; s < n; ++s)
        ch.for_each_neighbor(s, [&](uint64_t t) {
            if (t < s) return;  // each unordered pair once
            const long double df = f[t] - f[s];
            d += ch.conductance(s, t) * df * df;
        });
    return static_cast<double>(d);
}

inline double exact_capacity(const ExactChain& ch, const std::vector<uint64_t>& A,
                             const std::vector<uint64_t>& B) {
    return dirichlet_form(ch, exact_potential(ch, A, B));
}

// Flows: antisymmetric edge functions, stored on ordered pairs s < t.
struct Flow {
    // value on (s, t) with s < t; f(t, s) = -value
    std::unordered_map<uint64_t, double> half;  // key = packed edge id
    static uint64_t key(uint64_t s, uint64_t t, uint64_t n) { return s * n + t; }
};

inline double flow_norm_sq(const ExactChain& ch, const Flow& phi) {
    long double v = 0;
    const uint64_t n = ch.space().n_states();
    for (const auto& [k, val] : phi.half) {
        const uint64_t s = k / n, t = k % n;
        v += static_cast<long double>(val) * val / ch.conductance(s, t);
    }
    return static_cast<double>(v);
}

inline std::vector<double> divergence(const ExactChain& ch, const Flow& phi) {
    const uint64_t n = ch.space().n_states();
    std::vector<double> div(n, 0.0);
    for (const auto& [k, val] : phi.half) {
        const uint64_t s = k / n, t = k % n;
        div[s] += val;
        div[t] -= val;
    }
    return div;
}

inline Flow harmonic_flow(const ExactChain& ch, const std::vector<double>& h) {
    Flow phi;
    const uint64_t n = ch.space().n_states();
    for (uint64_t s = 0; s < n; ++s)
        ch.for_each_neighbor(s, [&](uint64_t t) {
            if (t < s) return;
            const double v = ch.conductance(s, t) * (h[s] - h[t]);
            if (v != 0) phi.half[Flow::key(s, t, n)] = v;
        });
    return phi;
}

// Generalized Thomson quotient; <= capacity for every nonzero flow.
inline double thomson_quotient(const ExactChain& ch, const std::vector<double>& h,
                               const Flow& phi) {
    const auto div = divergence(ch, phi);
    long double num = 0;
    for (uint64_t s = 0; s < ch.space().n_states(); ++s)
        num += static_cast<long double>(h[s]) * div[s];
    const double nsq = flow_norm_sq(ch, phi);
    return static_cast<double>(num * num / nsq);
}

// Mean hitting time from a single state via the capacity formula
//   E_s[tau_T] = sum_sigma mu(sigma) h_{s,T}(sigma) / Cap(s, T).
inline double mean_hitting_formula(const ExactChain& ch, uint64_t start,
                                   const std::vector<uint64_t>& target) {
    for (uint64_t t : target)
        if (t == start) return 0.0;
    const auto h = exact_potential(ch, {start}, target);
    long double num = 0;
    for (uint64_t s = 0; s < ch.space().n_states(); ++s) num += ch.mu(s) * h[s];
    const double cap = dirichlet_form(ch, h);
    return static_cast<double>(num / cap);
}

// Mean hitting time by direct linear solve of the absorbed system.
inline double mean_hitting_direct(const ExactChain& ch, uint64_t start,
                                  const std::vector<uint64_t>& target) {
    const uint64_t n = ch.space().n_states();
    std::vector<int> role(n, -1);
    for (uint64_t t : target) role[t] = 0;
    if (role[start] == 0) return 0.0;
    std::vector<double> bval = {0.0}, src(n);
    for (uint64_t s = 0; s < n; ++s) src[s] = ch.mu(s);  // mu * 1
    std::vector<int> index;
    Eigen::VectorXd x = detail::solve_laplacian(ch, role, bval, src, index);
    return x[index[start]];
}

// --- nice-pair counting ---------------------------------------------------

// All states connected to some ground state by a path never exceeding `cap`.
inline std::unordered_set<uint64_t> nhat_of_grounds(const StateSpace& ss, int cap) {
    std::unordered_set<uint64_t> seen;
    std::vector<uint64_t> stack;
    for (Spin a = 0; a < ss.q(); ++a) {
        uint64_t g = ss.ground_code(a);
        if (seen.insert(g).second) stack.push_back(g);
    }
    while (!stack.empty()) {
        uint64_t s = stack.back();
        stack.pop_back();
        ss.for_each_neighbor(s, [&](uint64_t t, int, Spin) {
            if (seen.count(t)) return;
            if (ss.energy_of(t) <= cap) {
                seen.insert(t);
                stack.push_back(t);
            }
        });
    }
    return seen;
}

// U_i = number of pairs (s, t), s ~ t, both outside Nhat(S), with
// sum_{a in A} |s|_a = L^2, sum_{a in A} |t|_a = L^2 - 1, max energy 2L + i.
inline std::map<int, uint64_t> count_nice_pairs(const StateSpace& ss,
                                                const std::vector<Spin>& A) {
    const int L = ss.lattice().side();
    const int gamma = 2 * L + 2;
    const auto nhat = nhat_of_grounds(ss, gamma);
    std::vector<uint8_t> in_A(static_cast<size_t>(ss.q()), 0);
    for (Spin a : A) in_A[a] = 1;
    const auto energy = ss.all_energies();

    auto weight_A = [&](uint64_t code) {
        int w = 0;
        for (int x = 0; x < ss.lattice().n_sites(); ++x) w += in_A[ss.spin_at(code, x)];
        return w;
    };

    std::map<int, uint64_t> u;
    const int half = L * L;
    for (uint64_t s = 0; s < ss.n_states(); ++s) {
        if (nhat.count(s)) continue;
        if (weight_A(s) != half) continue;
        ss.for_each_neighbor(s, [&](uint64_t t, int x, Spin a) {
            // the flip must move one site out of the A-block
            if (!in_A[ss.spin_at(s, x)] || in_A[a]) return;
            if (nhat.count(t)) return;
            const int i = std::max<int>(energy[s], energy[t]) - 2 * L;
            ++u[i];
        });
    }
    return u;
}

}  // namespace potts::oracle
