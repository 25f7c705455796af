#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bandspec/assembly.hpp"

namespace bandspec {

struct SpectralResult {
    std::vector<double> eigenvalues;            // ascending
    std::vector<std::vector<double>> eigenvectors; // M-orthonormal columns
    std::vector<double> residuals;              // ||K u - lambda M u|| / ||M u||
    int iterations = 0;
    std::string solver;
    double shift = 0.0;
    std::uint64_t seed = 0;
};

struct SolverOptions {
    double tol = 1e-8;
    std::uint64_t seed = 12345;
    int max_subspace = 0; // 0: chosen from k
    bool keep_eigenvectors = true;
};

// Lowest k eigenpairs of K u = lambda M u via shift-invert Lanczos with a
// sparse LDLT factorization of (K - tau*M); falls back to LOBPCG with a
// diagonal preconditioner when the factorization fails.
// Throws NoConvergence.
SpectralResult smallest_eigenpairs(const DiscreteForm& form, int k,
                                   const SolverOptions& opts = {});

// Full spectrum by dense M-Cholesky congruence; dimension <= 2000.
// Throws DimensionTooLarge.
SpectralResult dense_oracle(const DiscreteForm& form);

// Blocked preconditioned eigensolver (exposed for direct testing).
SpectralResult lobpcg_smallest(const DiscreteForm& form, int k,
                               const SolverOptions& opts = {});

double eigen_residual(const DiscreteForm& form, double lambda,
                      const std::vector<double>& u);

} // namespace bandspec
