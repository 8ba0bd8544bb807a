#include "hqf/cochar.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "hqf/errors.hpp"
#include "hqf/rng.hpp"

namespace hqf {

namespace {

using MatZ = std::vector<mpz_class>; // row-major with explicit dims

mpz_class det_mpz(MatZ m, unsigned n) {
    if (n == 0) return 1;
    auto at = [&](unsigned i, unsigned j) -> mpz_class& { return m[std::size_t(i) * n + j]; };
    mpz_class prev = 1;
    int sign = 1;
    for (unsigned k = 0; k + 1 < n; ++k) {
        if (at(k, k) == 0) {
            unsigned s = k + 1;
            while (s < n && at(s, k) == 0) ++s;
            if (s == n) return 0;
            for (unsigned j = k; j < n; ++j) std::swap(at(k, j), at(s, j));
            sign = -sign;
        }
        for (unsigned i = k + 1; i < n; ++i)
            for (unsigned j = k + 1; j < n; ++j) {
                mpz_class num = at(i, j) * at(k, k) - at(i, k) * at(k, j);
                mpz_divexact(at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = at(k, k);
    }
    return sign > 0 ? at(n - 1, n - 1) : mpz_class(-at(n - 1, n - 1));
}

// Columns (gamma - 1)e_j stacked over all generators: r x (r * #gens).
MatZ relation_matrix(const LatticeAction& act, unsigned& cols) {
    unsigned r = act.rank;
    cols = r * unsigned(act.generators.size());
    MatZ M(std::size_t(r) * cols, 0);
    for (unsigned g = 0; g < act.generators.size(); ++g)
        for (unsigned i = 0; i < r; ++i)
            for (unsigned j = 0; j < r; ++j) {
                mpz_class v = act.generators[g][std::size_t(i) * r + j];
                if (i == j) v -= 1;
                M[std::size_t(i) * cols + g * r + j] = v;
            }
    return M;
}

// Integer inverse of a unimodular matrix via the adjugate.
MatZ unimodular_inverse(const MatZ& U, unsigned n) {
    MatZ inv(std::size_t(n) * n);
    mpz_class det = det_mpz(U, n);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            MatZ minor;
            minor.reserve(std::size_t(n - 1) * (n - 1));
            for (unsigned a = 0; a < n; ++a) {
                if (a == i) continue;
                for (unsigned b = 0; b < n; ++b) {
                    if (b == j) continue;
                    minor.push_back(U[std::size_t(a) * n + b]);
                }
            }
            mpz_class c = det_mpz(std::move(minor), n - 1);
            if ((i + j) % 2 == 1) c = -c;
            inv[std::size_t(j) * n + i] = det > 0 ? c : mpz_class(-c);
        }
    return inv;
}

} // namespace

LatticeAction make_action(unsigned rank, std::vector<std::vector<mpz_class>> generators) {
    if (rank == 0) raise(errc::constraint_violation, "rank must be positive");
    if (rank > 16) raise(errc::support_overflow, "rank exceeds the desk-scale guard");
    for (std::size_t g = 0; g < generators.size(); ++g) {
        if (generators[g].size() != std::size_t(rank) * rank)
            raise(errc::constraint_violation,
                  "generator " + std::to_string(g) + " is not " + std::to_string(rank) + "x" +
                      std::to_string(rank));
        mpz_class d = det_mpz(generators[g], rank);
        if (d != 1 && d != -1)
            raise(errc::non_unimodular_generator,
                  "generator " + std::to_string(g) + " has determinant " + d.get_str());
    }
    return LatticeAction{rank, std::move(generators)};
}

CoinvResult coinvariants(const LatticeAction& act) {
    const unsigned r = act.rank;
    unsigned c = 0;
    MatZ M = relation_matrix(act, c);
    auto at = [&](unsigned i, unsigned j) -> mpz_class& { return M[std::size_t(i) * c + j]; };

    MatZ U(std::size_t(r) * r, 0);
    for (unsigned i = 0; i < r; ++i) U[std::size_t(i) * r + i] = 1;
    auto uat = [&](unsigned i, unsigned j) -> mpz_class& { return U[std::size_t(i) * r + j]; };

    auto swap_rows = [&](unsigned a, unsigned b) {
        if (a == b) return;
        for (unsigned j = 0; j < c; ++j) std::swap(at(a, j), at(b, j));
        for (unsigned j = 0; j < r; ++j) std::swap(uat(a, j), uat(b, j));
    };
    auto negate_row = [&](unsigned a) {
        for (unsigned j = 0; j < c; ++j) at(a, j) = -at(a, j);
        for (unsigned j = 0; j < r; ++j) uat(a, j) = -uat(a, j);
    };
    auto row_sub = [&](unsigned dst, unsigned src, const mpz_class& q) {
        if (q == 0) return;
        for (unsigned j = 0; j < c; ++j) at(dst, j) -= q * at(src, j);
        for (unsigned j = 0; j < r; ++j) uat(dst, j) -= q * uat(src, j);
    };
    auto swap_cols = [&](unsigned a, unsigned b) {
        if (a == b) return;
        for (unsigned i = 0; i < r; ++i) std::swap(at(i, a), at(i, b));
    };
    auto col_sub = [&](unsigned dst, unsigned src, const mpz_class& q) {
        if (q == 0) return;
        for (unsigned i = 0; i < r; ++i) at(i, dst) -= q * at(i, src);
    };

    unsigned k = 0;
    while (k < r && k < c) {
        // smallest nonzero pivot by absolute value in the trailing block
        unsigned pi = r, pj = c;
        for (unsigned i = k; i < r; ++i)
            for (unsigned j = k; j < c; ++j)
                if (at(i, j) != 0 &&
                    (pi == r || mpz_cmpabs(at(i, j).get_mpz_t(), at(pi, pj).get_mpz_t()) < 0)) {
                    pi = i;
                    pj = j;
                }
        if (pi == r) break;
        swap_rows(k, pi);
        swap_cols(k, pj);
        if (at(k, k) < 0) negate_row(k);

        for (bool settled = false; !settled;) {
            settled = true;
            for (unsigned i = k + 1; i < r && settled; ++i) {
                if (at(i, k) == 0) continue;
                mpz_class q, rem;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), at(i, k).get_mpz_t(),
                            at(k, k).get_mpz_t());
                row_sub(i, k, q);
                if (rem != 0) {
                    swap_rows(i, k);
                    settled = false;
                }
            }
            if (!settled) continue;
            for (unsigned j = k + 1; j < c && settled; ++j) {
                if (at(k, j) == 0) continue;
                mpz_class q, rem;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), at(k, j).get_mpz_t(),
                            at(k, k).get_mpz_t());
                col_sub(j, k, q);
                if (rem != 0) {
                    swap_cols(j, k);
                    if (at(k, k) < 0) negate_row(k);
                    settled = false;
                }
            }
            if (!settled) continue;
            for (unsigned i = k + 1; i < r && settled; ++i)
                for (unsigned j = k + 1; j < c && settled; ++j)
                    if (at(i, j) % at(k, k) != 0) {
                        // fold row i into the pivot row to expose the gcd
                        row_sub(k, i, mpz_class(-1));
                        settled = false;
                    }
        }
        ++k;
    }

    CoinvResult out;
    out.U = std::move(U);
    out.diag.assign(r, 0);
    for (unsigned i = 0; i < k; ++i) out.diag[i] = M[std::size_t(i) * c + i];
    out.free_rank = r - k;
    for (unsigned i = 0; i < k; ++i)
        if (out.diag[i] > 1) out.torsion.push_back(out.diag[i]);
    return out;
}

SpClass sp(const CoinvResult& coinv, const std::vector<mpz_class>& mu) {
    const unsigned r = unsigned(coinv.diag.size());
    if (mu.size() != r) raise(errc::rank_mismatch, "cocharacter has wrong length");
    SpClass out;
    for (unsigned i = 0; i < r; ++i) {
        mpz_class w = 0;
        for (unsigned j = 0; j < r; ++j) w += coinv.U[std::size_t(i) * r + j] * mu[j];
        if (coinv.diag[i] == 0) {
            out.free.push_back(w);
        } else if (coinv.diag[i] > 1) {
            mpz_class red;
            mpz_fdiv_r(red.get_mpz_t(), w.get_mpz_t(), coinv.diag[i].get_mpz_t());
            out.torsion.emplace_back(red, coinv.diag[i]);
        }
    }
    return out;
}

SpClass sp(const LatticeAction& act, const std::vector<mpz_class>& mu) {
    return sp(coinvariants(act), mu);
}

SurjectivityReport verify_surjectivity(const LatticeAction& act, unsigned long long samples,
                                       std::uint64_t seed) {
    SurjectivityReport rep;
    rep.samples = samples;
    const unsigned r = act.rank;
    CoinvResult coinv = coinvariants(act);

    // Constructive coverage: realize each torsion combination through the
    // integer inverse of U and confirm sp lands on it.
    mpz_class total = 1;
    for (const auto& d : coinv.torsion) total *= d;
    if (total > 1) {
        MatZ uinv = unimodular_inverse(coinv.U, r);
        unsigned long long combos =
            total > 4096 ? 4096ull : static_cast<unsigned long long>(total.get_ui());
        for (unsigned long long idx = 0; idx < combos; ++idx) {
            // decode idx into one residue per torsion slot
            std::vector<mpz_class> w(r, 0);
            unsigned long long rest = idx;
            std::vector<std::pair<mpz_class, mpz_class>> want;
            for (unsigned i = 0; i < r; ++i) {
                if (coinv.diag[i] <= 1) continue;
                unsigned long long d = coinv.diag[i].get_ui();
                w[i] = mpz_class(static_cast<unsigned long>(rest % d));
                want.emplace_back(w[i], coinv.diag[i]);
                rest /= d;
            }
            std::vector<mpz_class> mu(r, 0);
            for (unsigned i = 0; i < r; ++i)
                for (unsigned j = 0; j < r; ++j) mu[i] += uinv[std::size_t(i) * r + j] * w[j];
            if (!(sp(coinv, mu).torsion == want)) {
                rep.torsion_classes_covered = false;
                break;
            }
        }
    }

    // sp must be constant on orbits: sp(mu + gamma nu - nu) == sp(mu).
    Rng g(seed);
    for (unsigned long long s = 0; s < samples && rep.coinvariance_ok; ++s) {
        std::vector<mpz_class> mu(r), nu(r);
        for (unsigned i = 0; i < r; ++i) {
            mu[i] = mpz_class(long(g.below(19)) - 9);
            nu[i] = mpz_class(long(g.below(19)) - 9);
        }
        if (act.generators.empty()) break;
        const auto& gen = act.generators[g.below(act.generators.size())];
        std::vector<mpz_class> shifted = mu;
        for (unsigned i = 0; i < r; ++i) {
            mpz_class acc = 0;
            for (unsigned j = 0; j < r; ++j) acc += gen[std::size_t(i) * r + j] * nu[j];
            shifted[i] += acc - nu[i];
        }
        if (!(sp(coinv, shifted) == sp(coinv, mu))) rep.coinvariance_ok = false;
    }
    return rep;
}

QuotientShape coinvariants_by_minors(const LatticeAction& act) {
    const unsigned r = act.rank;
    if (r > 8) raise(errc::support_overflow, "minor enumeration bounded to rank 8");
    unsigned c = 0;
    MatZ M = relation_matrix(act, c);

    auto gcd_minors = [&](unsigned k) {
        mpz_class g = 0;
        std::vector<unsigned> rows(k), cols(k);
        for (unsigned i = 0; i < k; ++i) rows[i] = i;
        auto next_comb = [](std::vector<unsigned>& comb, unsigned limit) {
            unsigned k2 = unsigned(comb.size());
            for (unsigned i = k2; i-- > 0;) {
                if (comb[i] < limit - (k2 - i)) {
                    ++comb[i];
                    for (unsigned j = i + 1; j < k2; ++j) comb[j] = comb[j - 1] + 1;
                    return true;
                }
            }
            return false;
        };
        bool more_rows = true;
        while (more_rows) {
            for (unsigned i = 0; i < k; ++i) cols[i] = i;
            bool more_cols = c >= k;
            while (more_cols) {
                MatZ sub;
                sub.reserve(std::size_t(k) * k);
                for (unsigned i = 0; i < k; ++i)
                    for (unsigned j = 0; j < k; ++j)
                        sub.push_back(M[std::size_t(rows[i]) * c + cols[j]]);
                mpz_class d = det_mpz(std::move(sub), k);
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
                if (g == 1) return g;
                more_cols = next_comb(cols, c);
            }
            more_rows = next_comb(rows, r);
        }
        return g;
    };

    QuotientShape out;
    mpz_class prev = 1;
    unsigned rank_found = 0;
    for (unsigned k = 1; k <= std::min(r, c); ++k) {
        mpz_class dk = gcd_minors(k);
        if (dk == 0) break;
        mpz_class inv;
        mpz_divexact(inv.get_mpz_t(), dk.get_mpz_t(), prev.get_mpz_t());
        if (inv > 1) out.torsion.push_back(inv);
        prev = dk;
        rank_found = k;
    }
    out.free_rank = r - rank_found;
    return out;
}

BoxCheck box_projector_check(const LatticeAction& act, const CoinvResult& coinv, long box) {
    const unsigned r = act.rank;
    unsigned c = 0;
    MatZ M = relation_matrix(act, c);
    auto at = [&](unsigned i, unsigned j) -> mpz_class& { return M[std::size_t(i) * c + j]; };

    // column-style HNF (pivot rows strictly increasing, pivots positive)
    std::vector<std::pair<unsigned, unsigned>> pivots;
    unsigned pc = 0;
    for (unsigned row = 0; row < r && pc < c; ++row) {
        for (bool settled = false; !settled;) {
            unsigned best = c;
            for (unsigned j = pc; j < c; ++j)
                if (at(row, j) != 0 &&
                    (best == c || mpz_cmpabs(at(row, j).get_mpz_t(), at(row, best).get_mpz_t()) < 0))
                    best = j;
            if (best == c) { settled = true; break; } // row has no pivot
            if (best != pc)
                for (unsigned i = 0; i < r; ++i) std::swap(at(i, best), at(i, pc));
            if (at(row, pc) < 0)
                for (unsigned i = 0; i < r; ++i) at(i, pc) = -at(i, pc);
            settled = true;
            for (unsigned j = pc + 1; j < c; ++j) {
                if (at(row, j) == 0) continue;
                mpz_class q, rem;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), at(row, j).get_mpz_t(),
                            at(row, pc).get_mpz_t());
                for (unsigned i = 0; i < r; ++i) at(i, j) -= q * at(i, pc);
                if (rem != 0) settled = false;
            }
        }
        if (pc < c && at(row, pc) != 0) {
            pivots.emplace_back(row, pc);
            ++pc;
        }
    }

    auto member = [&](const std::vector<mpz_class>& v) {
        std::vector<mpz_class> x = v;
        for (const auto& [row, col] : pivots) {
            mpz_class q, rem;
            mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), x[row].get_mpz_t(),
                        at(row, col).get_mpz_t());
            if (rem != 0) return false;
            for (unsigned i = 0; i < r; ++i) x[i] -= q * at(i, col);
        }
        return std::all_of(x.begin(), x.end(), [](const mpz_class& e) { return e == 0; });
    };

    BoxCheck out;
    if (pivots.size() == r) {
        out.index = 1;
        for (const auto& [row, col] : pivots) out.index *= at(row, col);
    }

    // enumerate the box, compare sp equality with lattice membership pairwise
    const unsigned long side = static_cast<unsigned long>(2 * box + 1);
    unsigned long count = 1;
    for (unsigned i = 0; i < r; ++i) count *= side;
    std::vector<std::vector<mpz_class>> pts(count, std::vector<mpz_class>(r));
    for (unsigned long idx = 0; idx < count; ++idx) {
        unsigned long rest = idx;
        for (unsigned i = 0; i < r; ++i) {
            pts[idx][i] = mpz_class(long(rest % side) - box);
            rest /= side;
        }
    }
    std::vector<SpClass> classes(count);
    for (unsigned long idx = 0; idx < count; ++idx) classes[idx] = sp(coinv, pts[idx]);
    for (unsigned long a = 0; a < count && out.faithful; ++a)
        for (unsigned long b = a + 1; b < count; ++b) {
            std::vector<mpz_class> d(r);
            for (unsigned i = 0; i < r; ++i) d[i] = pts[a][i] - pts[b][i];
            if ((classes[a] == classes[b]) != member(d)) {
                out.faithful = false;
                break;
            }
        }
    return out;
}

} // namespace hqf
