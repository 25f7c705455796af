#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace bandspec {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

// Symmetric sparse matrix accumulated as lower-triangle triplets.
// Duplicates are summed and exact zeros dropped on compression.
struct SparseSymMatrix {
    int n = 0;
    std::vector<Triplet> lower;

    explicit SparseSymMatrix(int dim = 0) : n(dim) {}

    void add(int r, int c, double v) {
        if (r < c) std::swap(r, c);
        lower.push_back({r, c, v});
    }
};

// Compressed sparse row storage of the full (mirrored) symmetric matrix.
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr; // size n+1
    std::vector<int> col;
    std::vector<double> val;

    std::size_t nnz() const { return val.size(); }
    double diagonal(int i) const;
};

CsrMatrix to_csr(const SparseSymMatrix& m);

// y = A x. The serial kernel is the reference; the parallel kernel splits
// rows across OpenMP threads and is bit-identical to the serial one (each
// row is summed in a fixed order by a single thread).
void spmv_serial(const CsrMatrix& a, const double* x, double* y);
void spmv_parallel(const CsrMatrix& a, const double* x, double* y);
void spmv(const CsrMatrix& a, const double* x, double* y);

std::vector<double> spmv(const CsrMatrix& a, const std::vector<double>& x);

// C = alpha*A + beta*B on identical dimensions (sparsity union).
CsrMatrix csr_add(double alpha, const CsrMatrix& a, double beta, const CsrMatrix& b);

// Coordinate-format text dump: one "row col value" line per stored entry
// of the full symmetric matrix.
void write_coordinate(const CsrMatrix& a, std::ostream& os);

// min_i (a_ii - sum_{j != i} |a_ij|), a lower bound on the spectrum.
double gershgorin_lower_bound(const CsrMatrix& a);

} // namespace bandspec
