#include "bandspec/oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace bandspec {
namespace oracles {

namespace {
constexpr double pi = std::numbers::pi;
}

double strip_threshold(double d) {
    if (!(d > 0)) throw DegenerateDomain("strip_threshold needs d > 0");
    return pi * pi / (2.0 * d * d);
}

double rect_ground_state(double d, double w) {
    if (!(d > 0) || !(w > 0))
        throw DegenerateDomain("rect_ground_state needs d, w > 0");
    return pi * pi / (2.0 * d * d) + pi * pi / (2.0 * w * w);
}

double robin_secular(double k, double gamma, double d) {
    return (k * k - gamma * gamma) * std::sin(k * d) +
           2.0 * gamma * k * std::cos(k * d);
}

double robin_interval_lambda0(double gamma, double d) {
    if (!(d > 0)) throw DegenerateDomain("robin_interval_lambda0 needs d > 0");
    if (gamma > 0)
        throw OutOfDomain("robin_interval_lambda0 defined for gamma <= 0");
    if (gamma == 0.0) return 0.0;

    double eps = 1e-9 / d;
    double lo = eps, hi = pi / d - eps;
    double flo = robin_secular(lo, gamma, d);
    double fhi = robin_secular(hi, gamma, d);
    if (flo * fhi > 0)
        throw RootNotBracketed("secular equation has no sign change on (0, pi/d)");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = robin_secular(mid, gamma, d);
        if (fm == 0.0) { lo = hi = mid; break; }
        if (flo * fm < 0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        if (hi - lo < 1e-15 * (pi / d)) break;
    }
    double k0 = 0.5 * (lo + hi);
    return k0 * k0;
}

double square_robin_ground_state(double gamma, double d) {
    return 2.0 * robin_interval_lambda0(gamma, d);
}

double fdm_1d_robin(double gamma, double d, int n) {
    if (n < 10) throw DegenerateDomain("fdm_1d_robin needs n >= 10");
    double h = d / (n - 1);
    // Ghost-point elimination gives boundary rows
    //   (2(1 - h*gamma) u_0 - 2 u_1) / h^2,
    // symmetrized by the similarity diag(1/sqrt(2), 1, ..., 1, 1/sqrt(2)).
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    double ih2 = 1.0 / (h * h);
    for (int i = 0; i < n; ++i) {
        A(i, i) = 2.0 * ih2;
        if (i > 0) A(i, i - 1) = -ih2;
        if (i + 1 < n) A(i, i + 1) = -ih2;
    }
    A(0, 0) = 2.0 * (1.0 - h * gamma) * ih2;
    A(n - 1, n - 1) = 2.0 * (1.0 - h * gamma) * ih2;
    double s2 = std::sqrt(2.0);
    A(0, 1) = A(1, 0) = -s2 * ih2;
    A(n - 1, n - 2) = A(n - 2, n - 1) = -s2 * ih2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

double lshape_reference(double b) {
    if (!(b > 0)) throw DegenerateDomain("lshape_reference needs b > 0");
    return 0.93 * (pi / b) * (pi / b);
}

} // namespace oracles
} // namespace bandspec
