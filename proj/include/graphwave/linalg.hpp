// Symmetric "chains plus border" matrices and their LDL^T factorization.
// The chain part is tridiagonal (one run of nodes per edge); the border
// holds vertex unknowns coupling into chain endpoints and, for delta'
// vertices, into each other. Factorizations give inertia counts by
// Sylvester's law and O(n) solves.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace graphwave {

namespace detail {

inline double scalar_abs(double v) { return std::abs(v); }
inline double scalar_abs(const std::complex<double>& v) { return std::abs(v); }

} // namespace detail

template <class S>
struct BorderedMatrix {
    int n_chain = 0;
    int n_border = 0;
    std::vector<S> diag;  // chain diagonal
    std::vector<S> off;   // off[i] couples chain nodes i, i+1 (zero across edge breaks)
    std::vector<std::vector<std::pair<int, S>>> border_cols; // per border DOF: (chain row, value)
    std::vector<S> border_block; // dense n_border x n_border, symmetric

    int size() const { return n_chain + n_border; }

    void resize(int chain, int border)
    {
        n_chain = chain;
        n_border = border;
        diag.assign(chain, S{});
        off.assign(chain > 0 ? chain : 0, S{});
        border_cols.assign(border, {});
        border_block.assign(static_cast<size_t>(border) * border, S{});
    }

    S& border_at(int i, int j) { return border_block[static_cast<size_t>(i) * n_border + j]; }
    const S& border_at(int i, int j) const
    {
        return border_block[static_cast<size_t>(i) * n_border + j];
    }

    void add_border_coupling(int border_dof, int chain_row, S value)
    {
        for (auto& entry : border_cols[border_dof])
            if (entry.first == chain_row) {
                entry.second += value;
                return;
            }
        border_cols[border_dof].emplace_back(chain_row, value);
    }

    void multiply(const std::vector<S>& x, std::vector<S>& y) const
    {
        y.assign(size(), S{});
        for (int i = 0; i < n_chain; ++i) {
            y[i] += diag[i] * x[i];
            if (i + 1 < n_chain && off[i] != S{}) {
                y[i] += off[i] * x[i + 1];
                y[i + 1] += off[i] * x[i];
            }
        }
        for (int j = 0; j < n_border; ++j) {
            const int bj = n_chain + j;
            for (const auto& [row, v] : border_cols[j]) {
                y[row] += v * x[bj];
                y[bj] += v * x[row];
            }
            for (int k = 0; k < n_border; ++k) y[bj] += border_at(j, k) * x[n_chain + k];
        }
    }

    double inf_norm() const
    {
        std::vector<double> row(size(), 0.0);
        for (int i = 0; i < n_chain; ++i) {
            row[i] += detail::scalar_abs(diag[i]);
            if (i + 1 < n_chain) {
                row[i] += detail::scalar_abs(off[i]);
                row[i + 1] += detail::scalar_abs(off[i]);
            }
        }
        for (int j = 0; j < n_border; ++j) {
            for (const auto& [r, v] : border_cols[j]) {
                row[r] += detail::scalar_abs(v);
                row[n_chain + j] += detail::scalar_abs(v);
            }
            for (int k = 0; k < n_border; ++k)
                row[n_chain + j] += detail::scalar_abs(border_at(j, k));
        }
        double m = 0.0;
        for (double r : row) m = std::max(m, r);
        return m;
    }

    /// Lower/upper Gershgorin bounds (real scalar only).
    std::pair<double, double> gershgorin() const
    {
        static_assert(std::is_floating_point_v<S>, "gershgorin needs a real matrix");
        std::vector<double> radius(size(), 0.0);
        for (int i = 0; i + 1 < n_chain; ++i) {
            radius[i] += std::abs(off[i]);
            radius[i + 1] += std::abs(off[i]);
        }
        for (int j = 0; j < n_border; ++j) {
            for (const auto& [r, v] : border_cols[j]) {
                radius[r] += std::abs(v);
                radius[n_chain + j] += std::abs(v);
            }
            for (int k = 0; k < n_border; ++k)
                if (k != j) radius[n_chain + j] += std::abs(border_at(j, k));
        }
        double lo = 0.0, hi = 0.0;
        for (int i = 0; i < size(); ++i) {
            const double d = (i < n_chain) ? diag[i] : border_at(i - n_chain, i - n_chain);
            lo = std::min(lo, d - radius[i]);
            hi = std::max(hi, d + radius[i]);
            if (i == 0) {
                lo = d - radius[i];
                hi = d + radius[i];
            }
        }
        return {lo, hi};
    }
};

/// LDL^T factorization of (A - shift I) exploiting the bordered structure.
template <class S>
class BorderedFactor {
public:
    BorderedFactor(const BorderedMatrix<S>& a, S shift, double pivot_floor = 0.0)
        : n_chain_(a.n_chain), n_border_(a.n_border)
    {
        const double scale = std::max(1.0, a.inf_norm());
        const double floor = pivot_floor > 0.0 ? pivot_floor : 1e-300 + 1e-15 * scale * 1e-2;

        chain_d_.resize(n_chain_);
        chain_l_.assign(n_chain_ > 0 ? n_chain_ : 0, S{});
        for (int i = 0; i < n_chain_; ++i) {
            S d = a.diag[i] - shift;
            if (i > 0 && a.off[i - 1] != S{}) d -= a.off[i - 1] * chain_l_[i - 1];
            if (detail::scalar_abs(d) < floor) {
                kernel_hit_ = true;
                d = (detail::scalar_abs(d) == 0.0) ? S(floor) : d * (floor / detail::scalar_abs(d));
            }
            chain_d_[i] = d;
            min_pivot_ = std::min(min_pivot_, detail::scalar_abs(d));
            if constexpr (std::is_floating_point_v<S>) {
                if (std::real(d) < 0.0) ++negatives_;
            }
            if (i + 1 < n_chain_) chain_l_[i] = (a.off[i] != S{}) ? a.off[i] / d : S{};
        }

        // Schur complement of the border: S = B - C^T T^{-1} C.
        border_solutions_.assign(n_border_, std::vector<S>());
        std::vector<S> schur(static_cast<size_t>(n_border_) * n_border_, S{});
        for (int j = 0; j < n_border_; ++j) {
            std::vector<S> col(n_chain_, S{});
            for (const auto& [row, v] : a.border_cols[j]) col[row] = v;
            chain_solve(col);
            border_solutions_[j] = std::move(col);
        }
        for (int j = 0; j < n_border_; ++j)
            for (int k = j; k < n_border_; ++k) {
                S s = a.border_at(j, k);
                for (const auto& [row, v] : a.border_cols[k]) s -= v * border_solutions_[j][row];
                schur[static_cast<size_t>(j) * n_border_ + k] = s - (j == k ? shift : S{});
                schur[static_cast<size_t>(k) * n_border_ + j] =
                    schur[static_cast<size_t>(j) * n_border_ + k];
            }

        factor_dense(std::move(schur), floor);
        border_cols_ref_.resize(n_border_);
        for (int j = 0; j < n_border_; ++j) border_cols_ref_[j] = a.border_cols[j];
    }

    int negative_count() const { return negatives_; }
    bool kernel_hit() const { return kernel_hit_; }
    double min_pivot() const { return min_pivot_; }

    void solve_inplace(std::vector<S>& b) const
    {
        // x_border = S^{-1}(b_b - C^T T^{-1} b_c); x_chain = T^{-1} b_c - Y x_border.
        std::vector<S> bc(b.begin(), b.begin() + n_chain_);
        chain_solve(bc);
        std::vector<S> rb(n_border_);
        for (int j = 0; j < n_border_; ++j) {
            S s = b[n_chain_ + j];
            for (const auto& [row, v] : border_cols_ref_[j]) s -= v * bc[row];
            rb[j] = s;
        }
        dense_solve(rb);
        for (int i = 0; i < n_chain_; ++i) {
            S x = bc[i];
            for (int j = 0; j < n_border_; ++j)
                if (!border_solutions_[j].empty()) x -= border_solutions_[j][i] * rb[j];
            b[i] = x;
        }
        for (int j = 0; j < n_border_; ++j) b[n_chain_ + j] = rb[j];
    }

private:
    void chain_solve(std::vector<S>& b) const
    {
        for (int i = 1; i < n_chain_; ++i)
            if (chain_l_[i - 1] != S{}) b[i] -= chain_l_[i - 1] * b[i - 1];
        for (int i = 0; i < n_chain_; ++i) b[i] /= chain_d_[i];
        for (int i = n_chain_ - 2; i >= 0; --i)
            if (chain_l_[i] != S{}) b[i] -= chain_l_[i] * b[i + 1];
    }

    void factor_dense(std::vector<S> m, double floor)
    {
        const int n = n_border_;
        dense_ = std::move(m);
        perm_.resize(n);
        for (int i = 0; i < n; ++i) perm_[i] = i;
        for (int k = 0; k < n; ++k) {
            int best = k;
            double best_abs = detail::scalar_abs(dense_[idx(k, k)]);
            for (int j = k + 1; j < n; ++j) {
                const double a = detail::scalar_abs(dense_[idx(j, j)]);
                if (a > best_abs) {
                    best = j;
                    best_abs = a;
                }
            }
            if (best != k) swap_sym(k, best);
            S piv = dense_[idx(k, k)];
            if (detail::scalar_abs(piv) < floor) {
                kernel_hit_ = true;
                piv = (detail::scalar_abs(piv) == 0.0) ? S(floor)
                                                       : piv * (floor / detail::scalar_abs(piv));
                dense_[idx(k, k)] = piv;
            }
            min_pivot_ = std::min(min_pivot_, detail::scalar_abs(piv));
            if constexpr (std::is_floating_point_v<S>) {
                if (std::real(piv) < 0.0) ++negatives_;
            }
            for (int i = k + 1; i < n; ++i) {
                const S l = dense_[idx(i, k)] / piv;
                for (int j = k + 1; j <= i; ++j) dense_[idx(i, j)] -= l * dense_[idx(j, k)];
                dense_[idx(i, k)] = l;
            }
        }
    }

    void dense_solve(std::vector<S>& b) const
    {
        const int n = n_border_;
        std::vector<S> x(n);
        for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) x[i] -= dense_[idx(i, j)] * x[j];
        for (int i = 0; i < n; ++i) x[i] /= dense_[idx(i, i)];
        for (int i = n - 1; i >= 0; --i)
            for (int j = i + 1; j < n; ++j) x[i] -= dense_[idx(j, i)] * x[j];
        for (int i = 0; i < n; ++i) b[perm_[i]] = x[i];
    }

    size_t idx(int i, int j) const { return static_cast<size_t>(i) * n_border_ + j; }

    void swap_sym(int a, int b)
    {
        std::swap(perm_[a], perm_[b]);
        for (int j = 0; j < n_border_; ++j) std::swap(dense_[idx(a, j)], dense_[idx(b, j)]);
        for (int i = 0; i < n_border_; ++i) std::swap(dense_[idx(i, a)], dense_[idx(i, b)]);
    }

    int n_chain_ = 0;
    int n_border_ = 0;
    std::vector<S> chain_d_;
    std::vector<S> chain_l_;
    std::vector<std::vector<S>> border_solutions_; // Y = T^{-1} C, one column per border DOF
    std::vector<std::vector<std::pair<int, S>>> border_cols_ref_;
    std::vector<S> dense_;
    std::vector<int> perm_;
    int negatives_ = 0;
    bool kernel_hit_ = false;
    double min_pivot_ = std::numeric_limits<double>::max();
};

} // namespace graphwave
