// Incrementally built sparse least-squares systems min |AX - b|^2,
// solved through the normal equations A^T A X = A^T b with a
// Jacobi-preconditioned conjugate gradient. The solve is serial and
// deterministic for a fixed row insertion order.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace framefield {

struct SolveStats {
    int iterations = 0;
    double residual = 0.0; // |A^T A X - A^T b| / |A^T b| at exit
    bool converged = false;
};

class LsqSystem {
  public:
    explicit LsqSystem(int n_cols);

    // Append one row; duplicate column entries are summed. Throws
    // std::out_of_range on a bad column index.
    void add_row(const std::vector<std::pair<int, double>>& coeffs, double rhs);

    // max_iter < 0 selects the default 5 * n_cols.
    std::pair<std::vector<double>, SolveStats> solve(double tol = 1e-10, int max_iter = -1) const;

    int n_cols() const { return n_cols_; }
    std::size_t n_rows() const { return rhs_.size(); }

    // Sum over rows of (row residual)^2 restricted to rows [first, last).
    double row_residual_sq(const std::vector<double>& x, std::size_t first, std::size_t last) const;

  private:
    int n_cols_;
    std::vector<std::size_t> row_start_; // size n_rows + 1
    std::vector<int> cols_;
    std::vector<double> vals_;
    std::vector<double> rhs_;
};

} // namespace framefield
