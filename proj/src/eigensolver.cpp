#include "bandspec/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <random>

namespace bandspec {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

SpMat csr_to_eigen(const CsrMatrix& a) {
    SpMat out(a.n, a.n);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(a.nnz());
    for (int i = 0; i < a.n; ++i)
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            trips.emplace_back(i, a.col[k], a.val[k]);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Mat csr_to_dense(const CsrMatrix& a) {
    Mat out = Mat::Zero(a.n, a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            out(i, a.col[k]) = a.val[k];
    return out;
}

Vec random_vector(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = dist(rng);
    return v;
}

// Number of generalized eigenvalues of (K, M) below tau, by Sylvester's
// law applied to the LDLT factorization of K - tau*M.
int negative_inertia(const Eigen::SimplicialLDLT<SpMat>& ldlt) {
    int neg = 0;
    const auto& d = ldlt.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (d[i] < 0.0) ++neg;
    return neg;
}

double residual_impl(const CsrMatrix& K, const CsrMatrix& M, double lambda,
                     const double* u, int n) {
    std::vector<double> ku(n), mu(n);
    spmv(K, u, ku.data());
    spmv(M, u, mu.data());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = ku[i] - lambda * mu[i];
        num += r * r;
        den += mu[i] * mu[i];
    }
    return std::sqrt(num) / std::sqrt(den);
}

} // namespace

double eigen_residual(const DiscreteForm& form, double lambda,
                      const std::vector<double>& u) {
    return residual_impl(form.K, form.M, lambda, u.data(), form.n);
}

SpectralResult dense_oracle(const DiscreteForm& form) {
    if (form.n > 2000)
        throw DimensionTooLarge("dense_oracle limited to dimension 2000, got " +
                                std::to_string(form.n));
    Mat K = csr_to_dense(form.K);
    Mat M = csr_to_dense(form.M);
    Eigen::LLT<Mat> llt(M);
    if (llt.info() != Eigen::Success)
        throw FactorizationFailure("mass matrix is not positive definite");
    Mat L = llt.matrixL();
    // C = L^-1 K L^-T, spectrum of (K, M) under congruence.
    Mat C = L.triangularView<Eigen::Lower>().solve(K);
    C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();
    C = 0.5 * (C + C.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(C);
    if (es.info() != Eigen::Success)
        throw NoConvergence("dense symmetric eigensolve failed");

    SpectralResult res;
    res.solver = "dense";
    res.eigenvalues.assign(es.eigenvalues().data(),
                           es.eigenvalues().data() + form.n);
    Mat U = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
    res.eigenvectors.resize(form.n);
    res.residuals.resize(form.n);
    for (int j = 0; j < form.n; ++j) {
        res.eigenvectors[j].assign(U.col(j).data(), U.col(j).data() + form.n);
        res.residuals[j] =
            residual_impl(form.K, form.M, res.eigenvalues[j], U.col(j).data(), form.n);
    }
    return res;
}

SpectralResult lobpcg_smallest(const DiscreteForm& form, int k,
                               const SolverOptions& opts) {
    const int n = form.n;
    const int bs = std::min(n, k + std::min(k, 6) + 2);
    SpMat K = csr_to_eigen(form.K);
    SpMat M = csr_to_eigen(form.M);

    // Jacobi preconditioner on K shifted positive.
    double glo = gershgorin_lower_bound(form.K);
    Vec prec(n);
    for (int i = 0; i < n; ++i) {
        double d = form.K.diagonal(i) + std::max(0.0, -glo) * form.M.diagonal(i);
        prec[i] = d > 0.0 ? 1.0 / d : 1.0;
    }

    std::mt19937_64 rng(opts.seed);
    Mat X(n, bs);
    for (int j = 0; j < bs; ++j)
        X.col(j) = random_vector(n, rng);
    Mat P(n, 0);

    auto svqb_pass = [&](const Mat& S) {
        Mat G = S.transpose() * (M * S);
        Eigen::SelfAdjointEigenSolver<Mat> es(G);
        const Vec& dvals = es.eigenvalues();
        double dmax = dvals.maxCoeff();
        int keep = 0;
        for (int i = 0; i < dvals.size(); ++i)
            if (dvals[i] > 1e-12 * dmax) ++keep;
        Mat T(dvals.size(), keep);
        int c = 0;
        for (int i = 0; i < dvals.size(); ++i)
            if (dvals[i] > 1e-12 * dmax)
                T.col(c++) = es.eigenvectors().col(i) / std::sqrt(dvals[i]);
        return Mat(S * T);
    };
    auto m_orthonormalize = [&](Mat S) {
        // Column scaling first: residual directions are orders of magnitude
        // smaller than Ritz vectors and would be dropped by the pivot
        // tolerance otherwise. Two passes restore orthogonality lost to
        // cancellation in the Gram matrix.
        for (int j = 0; j < S.cols(); ++j) {
            double nrm = std::sqrt(S.col(j).dot(M * S.col(j)));
            if (nrm > 0.0) S.col(j) /= nrm;
        }
        return svqb_pass(svqb_pass(S));
    };

    SpectralResult res;
    res.solver = "lobpcg";
    res.seed = opts.seed;
    const int maxit = 1000;
    Vec theta(bs);
    for (int it = 1; it <= maxit; ++it) {
        // The live block can shrink when the orthonormalization drops
        // near-dependent directions; b tracks its current width.
        const int b = static_cast<int>(X.cols());
        Mat S(n, b + P.cols() + (it > 1 ? b : 0));
        S.leftCols(b) = X;
        if (it > 1) {
            // Preconditioned residuals of the current Ritz block.
            Mat R = K * X - (M * X) * theta.head(b).asDiagonal();
            Mat W = prec.asDiagonal() * R;
            S.middleCols(b, b) = W;
        }
        if (P.cols() > 0)
            S.rightCols(P.cols()) = P;

        Mat Q = m_orthonormalize(S);
        Mat Kt = Q.transpose() * (K * Q);
        Kt = 0.5 * (Kt + Kt.transpose());
        Eigen::SelfAdjointEigenSolver<Mat> es(Kt);
        int nb = std::min<int>(bs, static_cast<int>(Q.cols()));
        Mat Xnew = Q * es.eigenvectors().leftCols(nb);
        theta = es.eigenvalues().head(nb);

        if (it > 1) {
            int pc = std::min(nb, b);
            P = Xnew.leftCols(pc) - X.leftCols(pc);
        }
        X = Xnew;

        if (nb < k) continue; // rebuild the block before judging convergence
        bool done = true;
        for (int j = 0; j < k; ++j)
            if (residual_impl(form.K, form.M, theta[j], X.col(j).data(), n) >
                opts.tol) {
                done = false;
                break;
            }
        res.iterations = it;
        if (done || static_cast<int>(Q.cols()) == n) {
            res.eigenvalues.assign(theta.data(), theta.data() + k);
            res.residuals.resize(k);
            res.eigenvectors.resize(k);
            for (int j = 0; j < k; ++j) {
                res.eigenvectors[j].assign(X.col(j).data(), X.col(j).data() + n);
                res.residuals[j] = residual_impl(form.K, form.M, theta[j],
                                                 X.col(j).data(), n);
            }
            if (done) return res;
            bool ok = true;
            for (int j = 0; j < k; ++j)
                if (res.residuals[j] > opts.tol) ok = false;
            if (ok) return res;
            throw NoConvergence("lobpcg stalled at full subspace");
        }
    }
    throw NoConvergence("lobpcg did not converge within iteration budget");
}

SpectralResult smallest_eigenpairs(const DiscreteForm& form, int k,
                                   const SolverOptions& opts) {
    const int n = form.n;
    if (k < 1 || k >= n + 1)
        throw DimensionTooLarge("need 1 <= k <= dimension");

    SpMat K = csr_to_eigen(form.K);
    SpMat M = csr_to_eigen(form.M);

    // Shift below the whole generalized spectrum, verified by inertia.
    double gk = gershgorin_lower_bound(form.K);
    double mdiag_min = form.M.diagonal(0);
    for (int i = 1; i < n; ++i)
        mdiag_min = std::min(mdiag_min, form.M.diagonal(i));
    double tau = (gk < 0.0 ? gk / mdiag_min : 0.0);
    tau -= 1.0 + 0.1 * std::abs(tau);

    Eigen::SimplicialLDLT<SpMat> ldlt;
    int attempts = 0;
    for (;;) {
        SpMat S = K - tau * M;
        ldlt.compute(S);
        if (ldlt.info() == Eigen::Success && negative_inertia(ldlt) == 0)
            break;
        tau = 2.0 * tau - 1.0;
        if (++attempts > 60) {
            if (ldlt.info() != Eigen::Success)
                throw FactorizationFailure("shifted factorization failed");
            // Factorization fine but shift never cleared the spectrum.
            return lobpcg_smallest(form, k, opts);
        }
    }

    // Lanczos on C = (K - tau M)^-1 M, self-adjoint in the M inner product.
    // Largest Ritz values theta map to the smallest lambda = tau + 1/theta.
    std::mt19937_64 rng(opts.seed);
    const int maxdim =
        opts.max_subspace > 0 ? std::min(n, opts.max_subspace)
                              : std::min(n, std::max(6 * k + 60, 100));
    std::vector<Vec> Q;
    Q.reserve(maxdim);
    std::vector<double> alpha, beta; // beta[j] couples q_j and q_{j+1}

    auto mv_M = [&](const Vec& v) {
        Vec out(n);
        spmv(form.M, v.data(), out.data());
        return out;
    };
    auto m_norm = [&](const Vec& v) { return std::sqrt(v.dot(mv_M(v))); };

    Vec q0 = random_vector(n, rng);
    q0 /= m_norm(q0);
    Q.push_back(q0);

    SpectralResult res;
    res.solver = "shift-invert-lanczos";
    res.shift = tau;
    res.seed = opts.seed;

    auto extract = [&](int j) -> bool {
        // Ritz pairs of the tridiagonal T_j.
        Mat T = Mat::Zero(j, j);
        for (int i = 0; i < j; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < j) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(T);
        if (j < k) return false;
        double bj = beta.size() >= static_cast<std::size_t>(j)
                        ? beta[j - 1]
                        : 0.0;
        // k largest theta; cheap bound on the invariant-subspace error first.
        for (int t = 0; t < k; ++t) {
            int idx = j - 1 - t;
            double theta = es.eigenvalues()[idx];
            if (theta <= 0.0) return false;
            double est = std::abs(bj * es.eigenvectors()(j - 1, idx));
            if (est > opts.tol * theta * std::max(theta, 1.0)) return false;
        }
        // t-th largest theta gives the t-th smallest lambda.
        std::vector<double> lam(k);
        std::vector<Vec> vecs(k);
        for (int t = 0; t < k; ++t) {
            int idx = j - 1 - t;
            double theta = es.eigenvalues()[idx];
            Vec u = Vec::Zero(n);
            for (int i = 0; i < j; ++i)
                u += es.eigenvectors()(i, idx) * Q[i];
            u /= m_norm(u);
            lam[t] = tau + 1.0 / theta;
            vecs[t] = std::move(u);
        }
        for (int t = 0; t < k; ++t)
            if (residual_impl(form.K, form.M, lam[t], vecs[t].data(), n) >
                opts.tol)
                return false;
        res.eigenvalues = lam;
        res.eigenvectors.resize(k);
        res.residuals.resize(k);
        for (int t = 0; t < k; ++t) {
            if (opts.keep_eigenvectors)
                res.eigenvectors[t].assign(vecs[t].data(), vecs[t].data() + n);
            res.residuals[t] =
                residual_impl(form.K, form.M, lam[t], vecs[t].data(), n);
        }
        if (!opts.keep_eigenvectors) res.eigenvectors.clear();
        return true;
    };

    for (int j = 1; j <= maxdim; ++j) {
        const Vec& qj = Q.back();
        Vec w = ldlt.solve(mv_M(qj));
        // Full reorthogonalization in the M inner product, two passes.
        double a_j = 0.0;
        for (int pass = 0; pass < 2; ++pass) {
            Vec z = mv_M(w);
            for (int i = static_cast<int>(Q.size()) - 1; i >= 0; --i) {
                double c = Q[i].dot(z);
                if (pass == 0 && i == static_cast<int>(Q.size()) - 1)
                    a_j = c;
                w -= c * Q[i];
            }
        }
        alpha.push_back(a_j);
        res.iterations = j;

        bool check_now = (j >= k && (j % 5 == 0 || j == maxdim));
        if (check_now && extract(j))
            return res;

        if (j == maxdim) break;
        double b_j = m_norm(w);
        if (!(b_j > 1e-12)) {
            // Invariant subspace hit; restart with a fresh direction.
            Vec r = random_vector(n, rng);
            for (int pass = 0; pass < 2; ++pass) {
                Vec z = mv_M(r);
                for (const auto& qi : Q)
                    r -= qi.dot(z) * qi;
            }
            double rn = m_norm(r);
            if (!(rn > 1e-12)) {
                if (extract(j)) return res;
                break;
            }
            b_j = 0.0;
            w = r / rn;
        } else {
            w /= b_j;
        }
        beta.push_back(b_j);
        Q.push_back(w);
    }
    if (extract(static_cast<int>(alpha.size())))
        return res;
    throw NoConvergence("lanczos did not converge within subspace budget");
}

} // namespace bandspec
