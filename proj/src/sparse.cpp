#include "bandspec/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace bandspec {

double CsrMatrix::diagonal(int i) const {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
        if (col[k] == i) return val[k];
    return 0.0;
}

CsrMatrix to_csr(const SparseSymMatrix& m) {
    const int n = m.n;
    // Mirror the lower triangle, then bucket by row.
    std::vector<Triplet> full;
    full.reserve(2 * m.lower.size());
    for (const auto& t : m.lower) {
        full.push_back(t);
        if (t.row != t.col)
            full.push_back({t.col, t.row, t.value});
    }
    std::vector<int> count(n + 1, 0);
    for (const auto& t : full)
        ++count[t.row + 1];
    for (int i = 0; i < n; ++i)
        count[i + 1] += count[i];
    std::vector<Triplet> by_row(full.size());
    {
        std::vector<int> cursor(count.begin(), count.end() - 1);
        for (const auto& t : full)
            by_row[static_cast<std::size_t>(cursor[t.row]++)] = t;
    }

    CsrMatrix out;
    out.n = n;
    out.row_ptr.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        auto first = by_row.begin() + count[i];
        auto last = by_row.begin() + count[i + 1];
        // Stable by insertion order within equal columns keeps the
        // accumulation order fixed regardless of thread count upstream.
        std::stable_sort(first, last, [](const Triplet& a, const Triplet& b) {
            return a.col < b.col;
        });
        for (auto it = first; it != last;) {
            int c = it->col;
            double s = 0.0;
            for (; it != last && it->col == c; ++it)
                s += it->value;
            if (s != 0.0) {
                out.col.push_back(c);
                out.val.push_back(s);
            }
        }
        out.row_ptr[i + 1] = static_cast<int>(out.col.size());
    }
    return out;
}

void spmv_serial(const CsrMatrix& a, const double* x, double* y) {
    for (int i = 0; i < a.n; ++i) {
        double s = 0.0;
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            s += a.val[k] * x[a.col[k]];
        y[i] = s;
    }
}

void spmv_parallel(const CsrMatrix& a, const double* x, double* y) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < a.n; ++i) {
        double s = 0.0;
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            s += a.val[k] * x[a.col[k]];
        y[i] = s;
    }
}

void spmv(const CsrMatrix& a, const double* x, double* y) {
#ifdef _OPENMP
    if (a.n >= 4096) {
        spmv_parallel(a, x, y);
        return;
    }
#endif
    spmv_serial(a, x, y);
}

std::vector<double> spmv(const CsrMatrix& a, const std::vector<double>& x) {
    std::vector<double> y(static_cast<std::size_t>(a.n));
    spmv(a, x.data(), y.data());
    return y;
}

CsrMatrix csr_add(double alpha, const CsrMatrix& a, double beta, const CsrMatrix& b) {
    CsrMatrix out;
    out.n = a.n;
    out.row_ptr.assign(a.n + 1, 0);
    for (int i = 0; i < a.n; ++i) {
        int ka = a.row_ptr[i], kb = b.row_ptr[i];
        while (ka < a.row_ptr[i + 1] || kb < b.row_ptr[i + 1]) {
            int ca = ka < a.row_ptr[i + 1] ? a.col[ka] : std::numeric_limits<int>::max();
            int cb = kb < b.row_ptr[i + 1] ? b.col[kb] : std::numeric_limits<int>::max();
            int c = std::min(ca, cb);
            double s = 0.0;
            if (ca == c) s += alpha * a.val[ka++];
            if (cb == c) s += beta * b.val[kb++];
            if (s != 0.0) {
                out.col.push_back(c);
                out.val.push_back(s);
            }
        }
        out.row_ptr[i + 1] = static_cast<int>(out.col.size());
    }
    return out;
}

void write_coordinate(const CsrMatrix& a, std::ostream& os) {
    for (int i = 0; i < a.n; ++i)
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            os << i << " " << a.col[k] << " " << a.val[k] << "\n";
}

double gershgorin_lower_bound(const CsrMatrix& a) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.n; ++i) {
        double diag = 0.0, off = 0.0;
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            if (a.col[k] == i)
                diag = a.val[k];
            else
                off += std::abs(a.val[k]);
        }
        lo = std::min(lo, diag - off);
    }
    return lo;
}

} // namespace bandspec
