#include "framefield/lsq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace framefield {

LsqSystem::LsqSystem(int n_cols) : n_cols_(n_cols) {
    if (n_cols <= 0) throw std::invalid_argument("LsqSystem: column count must be positive");
    row_start_.push_back(0);
}

void LsqSystem::add_row(const std::vector<std::pair<int, double>>& coeffs, double rhs) {
    std::size_t begin = cols_.size();
    for (const auto& [c, v] : coeffs) {
        if (c < 0 || c >= n_cols_) throw std::out_of_range("LsqSystem::add_row: column index out of range");
        // Sum duplicates within this row.
        bool merged = false;
        for (std::size_t k = begin; k < cols_.size(); k++) {
            if (cols_[k] == c) {
                vals_[k] += v;
                merged = true;
                break;
            }
        }
        if (!merged) {
            cols_.push_back(c);
            vals_.push_back(v);
        }
    }
    row_start_.push_back(cols_.size());
    rhs_.push_back(rhs);
}

double LsqSystem::row_residual_sq(const std::vector<double>& x, std::size_t first, std::size_t last) const {
    double total = 0.0;
    for (std::size_t r = first; r < last && r < rhs_.size(); r++) {
        double s = -rhs_[r];
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; k++) s += vals_[k] * x[cols_[k]];
        total += s * s;
    }
    return total;
}

std::pair<std::vector<double>, SolveStats> LsqSystem::solve(double tol, int max_iter) const {
    if (rhs_.empty()) throw std::runtime_error("LsqSystem::solve: no rows");
    if (max_iter < 0) max_iter = 5 * n_cols_;
    const int n = n_cols_;

    // Assemble A^T A in compressed sparse rows. Each system row touches a
    // handful of columns, so the product is built by accumulating per-row
    // outer products into per-column buckets, then sorting and merging.
    std::vector<std::vector<std::pair<int, double>>> buckets(n);
    std::vector<double> atb(n, 0.0);
    for (std::size_t r = 0; r < rhs_.size(); r++) {
        std::size_t lo = row_start_[r], hi = row_start_[r + 1];
        for (std::size_t k1 = lo; k1 < hi; k1++) {
            int c1 = cols_[k1];
            double v1 = vals_[k1];
            atb[c1] += v1 * rhs_[r];
            for (std::size_t k2 = lo; k2 < hi; k2++) buckets[c1].push_back({cols_[k2], v1 * vals_[k2]});
        }
    }
    std::vector<std::size_t> ata_start(n + 1, 0);
    std::vector<int> ata_cols;
    std::vector<double> ata_vals;
    std::vector<double> diag(n, 0.0);
    for (int c = 0; c < n; c++) {
        auto& bucket = buckets[c];
        std::sort(bucket.begin(), bucket.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k < bucket.size();) {
            int col = bucket[k].first;
            double sum = 0.0;
            while (k < bucket.size() && bucket[k].first == col) sum += bucket[k++].second;
            ata_cols.push_back(col);
            ata_vals.push_back(sum);
            if (col == c) diag[c] = sum;
        }
        ata_start[c + 1] = ata_cols.size();
        bucket.clear();
        bucket.shrink_to_fit();
    }

    auto mult = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (int c = 0; c < n; c++) {
            double s = 0.0;
            for (std::size_t k = ata_start[c]; k < ata_start[c + 1]; k++) s += ata_vals[k] * v[ata_cols[k]];
            out[c] = s;
        }
    };

    // Jacobi preconditioner; untouched columns keep a unit diagonal.
    std::vector<double> inv_diag(n);
    for (int c = 0; c < n; c++) inv_diag[c] = diag[c] > 0.0 ? 1.0 / diag[c] : 1.0;

    std::vector<double> x(n, 0.0);
    double bnorm = std::sqrt(std::inner_product(atb.begin(), atb.end(), atb.begin(), 0.0));
    SolveStats stats;
    if (bnorm == 0.0) {
        stats.converged = true;
        return {x, stats};
    }

    std::vector<double> resid = atb; // r = A^T b - A^T A x, x = 0
    std::vector<double> z(n), dir(n), adir(n);
    for (int c = 0; c < n; c++) z[c] = inv_diag[c] * resid[c];
    dir = z;
    double rz = std::inner_product(resid.begin(), resid.end(), z.begin(), 0.0);
    double rnorm = std::sqrt(std::inner_product(resid.begin(), resid.end(), resid.begin(), 0.0));
    int it = 0;
    while (rnorm / bnorm > tol && it < max_iter) {
        mult(dir, adir);
        double dad = std::inner_product(dir.begin(), dir.end(), adir.begin(), 0.0);
        if (dad <= 0.0) break; // matrix numerically singular along dir
        double alpha = rz / dad;
        for (int c = 0; c < n; c++) {
            x[c] += alpha * dir[c];
            resid[c] -= alpha * adir[c];
        }
        for (int c = 0; c < n; c++) z[c] = inv_diag[c] * resid[c];
        double rz_next = std::inner_product(resid.begin(), resid.end(), z.begin(), 0.0);
        double beta = rz_next / rz;
        rz = rz_next;
        for (int c = 0; c < n; c++) dir[c] = z[c] + beta * dir[c];
        rnorm = std::sqrt(std::inner_product(resid.begin(), resid.end(), resid.begin(), 0.0));
        it++;
    }
    stats.iterations = it;
    stats.residual = rnorm / bnorm;
    stats.converged = rnorm / bnorm <= tol;
    return {x, stats};
}

} // namespace framefield
