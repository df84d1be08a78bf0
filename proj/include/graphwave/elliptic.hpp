// Jacobi elliptic functions sn, cn, dn and the complete integral K(k),
// evaluated by the arithmetic-geometric mean with descending Landen steps.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphwave {

struct JacobiTriple {
    double sn;
    double cn;
    double dn;
};

/// Complete elliptic integral of the first kind, k in [0, 1).
inline double elliptic_K(double k)
{
    if (k < 0.0 || k > 1.0) throw std::invalid_argument("elliptic_K: modulus outside [0,1]");
    if (k == 1.0) return std::numeric_limits<double>::infinity();
    double a = 1.0, b = std::sqrt(1.0 - k * k);
    while (a - b > 1e-17 * a) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

/// Jacobi elliptic functions for modulus k in [0, 1].
inline JacobiTriple jacobi(double z, double k)
{
    if (k < 0.0 || k > 1.0) throw std::invalid_argument("jacobi: modulus outside [0,1]");
    if (k == 0.0) return {std::sin(z), std::cos(z), 1.0};
    if (1.0 - k < 1e-12) {
        // Hyperbolic limit; error O(1-k).
        const double s = 1.0 / std::cosh(z);
        return {std::tanh(z), s, s};
    }
    double a[64], c[64];
    a[0] = 1.0;
    c[0] = k;
    double b = std::sqrt(1.0 - k * k);
    int n = 0;
    while (std::abs(c[n]) > 1e-17 * a[n] && n < 62) {
        ++n;
        a[n] = 0.5 * (a[n - 1] + b);
        c[n] = 0.5 * (a[n - 1] - b);
        b = std::sqrt(a[n - 1] * b);
    }
    double phi = std::ldexp(a[n] * z, n); // phi_n
    for (int i = n; i >= 1; --i) {
        const double s = c[i] / a[i] * std::sin(phi);
        phi = 0.5 * (phi + std::asin(std::max(-1.0, std::min(1.0, s))));
    }
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    // dn stays bounded below by k' here (k <= 1 - 1e-12), so the identity
    // form is accurate; the cos-ratio recursion formula is 0/0 at quarter
    // periods.
    const double dn = std::sqrt(std::max(0.0, 1.0 - k * k * sn * sn));
    return {sn, cn, dn};
}

/// Jacobi functions for any positive modulus; k > 1 handled by the
/// reciprocal-modulus transformation sn(z,k) = sn(kz,1/k)/k,
/// cn(z,k) = dn(kz,1/k), dn(z,k) = cn(kz,1/k).
inline JacobiTriple jacobi_any_modulus(double z, double k)
{
    if (k < 0.0) throw std::invalid_argument("jacobi_any_modulus: negative modulus");
    if (k <= 1.0) return jacobi(z, k);
    const JacobiTriple t = jacobi(k * z, 1.0 / k);
    return {t.sn / k, t.dn, t.cn};
}

/// Dnoidal solution of -u'' + u - 2u^3 = 0 with modulus k in (0, 1).
inline double dnoidal(double k, double z)
{
    if (k <= 0.0 || k >= 1.0) throw std::invalid_argument("dnoidal: modulus outside (0,1)");
    const double s = std::sqrt(2.0 - k * k);
    return jacobi(z / s, k).dn / s;
}

/// Level-curve invariant of the dnoidal solution, in (-1/4, 0).
inline double dnoidal_beta(double k)
{
    if (k <= 0.0 || k >= 1.0) throw std::invalid_argument("dnoidal_beta: modulus outside (0,1)");
    const double d = 2.0 - k * k;
    return (k * k - 1.0) / (d * d);
}

/// Cnoidal solution of -u'' + u - 2u^3 = 0 with modulus k in (1/sqrt(2), 1].
inline double cnoidal(double k, double z)
{
    if (k <= 1.0 / std::sqrt(2.0) || k > 1.0)
        throw std::invalid_argument("cnoidal: modulus outside (1/sqrt(2),1]");
    const double s = std::sqrt(2.0 * k * k - 1.0);
    return k * jacobi(z / s, k).cn / s;
}

/// Level-curve invariant of the cnoidal solution, positive.
inline double cnoidal_beta(double k)
{
    if (k <= 1.0 / std::sqrt(2.0) || k > 1.0)
        throw std::invalid_argument("cnoidal_beta: modulus outside (1/sqrt(2),1]");
    const double d = 2.0 * k * k - 1.0;
    return (1.0 - k * k) * k * k / (d * d);
}

} // namespace graphwave
