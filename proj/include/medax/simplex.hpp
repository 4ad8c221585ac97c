#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace medax {

/// max c'y  subject to  A y = b, y >= 0, with b >= 0.
/// A is dense column-major (m x n), intended for m << n.
struct LpProblem {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<double> A;  // A[j*m + i] = entry (i, j)
    std::vector<double> b;
    std::vector<double> c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0.0;
    std::vector<double> y;            // primal solution, length n
    std::vector<double> multipliers;  // simplex multipliers, length m
};

namespace detail {

/// LU with partial pivoting for the (tiny) basis matrix.
class DenseLu {
public:
    bool factor(const double* B, std::size_t m) {
        m_ = m;
        lu_.assign(B, B + m * m);  // row-major
        piv_.resize(m);
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t p = col;
            double best = std::abs(lu_[col * m + col]);
            for (std::size_t r = col + 1; r < m; ++r) {
                const double v = std::abs(lu_[r * m + col]);
                if (v > best) {
                    best = v;
                    p = r;
                }
            }
            piv_[col] = p;
            if (best < 1e-13) return false;
            if (p != col) {
                for (std::size_t cc = 0; cc < m; ++cc) {
                    std::swap(lu_[col * m + cc], lu_[p * m + cc]);
                }
            }
            const double d = lu_[col * m + col];
            for (std::size_t r = col + 1; r < m; ++r) {
                const double f = lu_[r * m + col] / d;
                lu_[r * m + col] = f;
                for (std::size_t cc = col + 1; cc < m; ++cc) {
                    lu_[r * m + cc] -= f * lu_[col * m + cc];
                }
            }
        }
        return true;
    }

    // In-place solve of B x = rhs.
    void solve(double* x) const {
        for (std::size_t i = 0; i < m_; ++i) {
            if (piv_[i] != i) std::swap(x[i], x[piv_[i]]);
        }
        for (std::size_t i = 1; i < m_; ++i) {
            double s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= lu_[i * m_ + j] * x[j];
            x[i] = s;
        }
        for (std::size_t ii = m_; ii-- > 0;) {
            double s = x[ii];
            for (std::size_t j = ii + 1; j < m_; ++j) s -= lu_[ii * m_ + j] * x[j];
            x[ii] = s / lu_[ii * m_ + ii];
        }
    }

    // In-place solve of B' x = rhs.
    void solve_transposed(double* x) const {
        for (std::size_t i = 0; i < m_; ++i) {
            double s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= lu_[j * m_ + i] * x[j];
            x[i] = s / lu_[i * m_ + i];
        }
        for (std::size_t ii = m_; ii-- > 0;) {
            double s = x[ii];
            for (std::size_t j = ii + 1; j < m_; ++j) s -= lu_[j * m_ + ii] * x[j];
            x[ii] = s;
        }
        for (std::size_t ii = m_; ii-- > 0;) {
            if (piv_[ii] != ii) std::swap(x[ii], x[piv_[ii]]);
        }
    }

private:
    std::size_t m_ = 0;
    std::vector<double> lu_;
    std::vector<std::size_t> piv_;
};

}  // namespace detail

/// Two-phase revised simplex. Designed for problems with a handful of rows
/// and thousands of columns; the basis is refactored every iteration, so the
/// per-iteration cost is dominated by pricing (O(n*m)).
///
/// Pivoting is deterministic: Dantzig pricing with lowest-index tie-breaks,
/// switching to Bland's rule after a run of degenerate pivots. Artificial
/// variables never re-enter; in phase 2 a basic artificial (pinned at zero
/// on redundant rows) is kicked out whenever a pivot direction touches it.
inline LpSolution solve_standard_max(const LpProblem& lp, std::size_t max_iters = 0) {
    constexpr double kRedTol = 1e-10;
    constexpr double kPivTol = 1e-11;
    constexpr double kDegenTol = 1e-12;

    const std::size_t m = lp.m;
    const std::size_t n = lp.n;
    if (lp.A.size() != m * n || lp.b.size() != m || lp.c.size() != n) {
        throw std::invalid_argument("solve_standard_max: inconsistent problem sizes");
    }
    for (double bi : lp.b) {
        if (bi < 0.0) throw std::invalid_argument("solve_standard_max: requires b >= 0");
    }
    if (max_iters == 0) max_iters = 2000 + 20 * m + 4 * n;

    std::vector<std::size_t> basis(m);
    std::vector<char> in_basis(n + m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        basis[i] = n + i;  // artificial start
        in_basis[n + i] = 1;
    }

    const auto column = [&](std::size_t j, double* col) {
        if (j < n) {
            std::copy(lp.A.begin() + j * m, lp.A.begin() + (j + 1) * m, col);
        } else {
            std::fill(col, col + m, 0.0);
            col[j - n] = 1.0;
        }
    };
    const auto cost = [&](std::size_t j, int phase) -> double {
        if (phase == 1) return j < n ? 0.0 : -1.0;
        return j < n ? lp.c[j] : 0.0;
    };

    std::vector<double> B(m * m), xB(m), pi(m), dir(m), colbuf(m);
    detail::DenseLu lu;
    LpSolution sol;

    std::size_t iters = 0;
    int degen_streak = 0;
    bool bland = false;

    for (int phase = 1; phase <= 2; ++phase) {
        while (true) {
            if (++iters > max_iters) {
                sol.status = LpStatus::IterationLimit;
                return sol;
            }
            for (std::size_t i = 0; i < m; ++i) {
                column(basis[i], colbuf.data());
                for (std::size_t r = 0; r < m; ++r) B[r * m + i] = colbuf[r];
            }
            if (!lu.factor(B.data(), m)) {
                throw std::runtime_error("solve_standard_max: singular basis");
            }
            std::copy(lp.b.begin(), lp.b.end(), xB.begin());
            lu.solve(xB.data());
            for (std::size_t i = 0; i < m; ++i) pi[i] = cost(basis[i], phase);
            lu.solve_transposed(pi.data());

            // Pricing over real columns only.
            std::ptrdiff_t enter = -1;
            double best_red = kRedTol;
            for (std::size_t j = 0; j < n; ++j) {
                if (in_basis[j]) continue;
                double red = cost(j, phase);
                for (std::size_t i = 0; i < m; ++i) red -= pi[i] * lp.A[j * m + i];
                if (red > best_red) {
                    enter = static_cast<std::ptrdiff_t>(j);
                    best_red = red;
                    if (bland) break;  // first improving column
                }
            }
            if (enter < 0) break;  // phase optimal

            column(static_cast<std::size_t>(enter), dir.data());
            lu.solve(dir.data());

            // Ratio test. In phase 2, a basic artificial touched by the
            // direction leaves immediately (it must stay at zero).
            std::ptrdiff_t leave = -1;
            double theta = std::numeric_limits<double>::infinity();
            if (phase == 2) {
                for (std::size_t i = 0; i < m; ++i) {
                    if (basis[i] >= n && std::abs(dir[i]) > kPivTol) {
                        leave = static_cast<std::ptrdiff_t>(i);
                        theta = 0.0;
                        break;
                    }
                }
            }
            if (leave < 0) {
                for (std::size_t i = 0; i < m; ++i) {
                    if (dir[i] > kPivTol) {
                        const double ratio = std::max(xB[i], 0.0) / dir[i];
                        const bool better =
                            leave < 0 || ratio < theta ||
                            (ratio == theta && basis[i] < basis[static_cast<std::size_t>(leave)]);
                        if (better) {
                            leave = static_cast<std::ptrdiff_t>(i);
                            theta = ratio;
                        }
                    }
                }
            }
            if (leave < 0) {
                sol.status = LpStatus::Unbounded;
                return sol;
            }

            in_basis[basis[static_cast<std::size_t>(leave)]] = 0;
            in_basis[static_cast<std::size_t>(enter)] = 1;
            basis[static_cast<std::size_t>(leave)] = static_cast<std::size_t>(enter);

            if (theta <= kDegenTol) {
                if (++degen_streak > 50) bland = true;
            } else {
                degen_streak = 0;
                bland = false;
            }
        }

        if (phase == 1) {
            double infeas = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (basis[i] >= n) infeas += std::max(xB[i], 0.0);
            }
            if (infeas > 1e-7) {
                sol.status = LpStatus::Infeasible;
                return sol;
            }
            degen_streak = 0;
            bland = false;
        }
    }

    sol.status = LpStatus::Optimal;
    sol.y.assign(n, 0.0);
    double obj = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) {
            const double v = std::max(xB[i], 0.0);
            sol.y[basis[i]] = v;
            obj += lp.c[basis[i]] * v;
        }
    }
    sol.objective = obj;
    sol.multipliers.assign(pi.begin(), pi.end());
    return sol;
}

}  // namespace medax
