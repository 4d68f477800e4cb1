#include "collarspec/tridiag.hpp"

#include "collarspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace collarspec {

// Implicit-shift QL, eigenvalues only (EISPACK imtql1 lineage).
std::vector<double> tridiag_eigenvalues(Tridiagonal m) {
    auto& d = m.diag;
    const std::size_t n = d.size();
    if (n == 0) return {};
    if (m.off.size() + 1 != n)
        throw validation_error("tridiag: off-diagonal size mismatch");
    std::vector<double> e = m.off;
    e.push_back(0.0);
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t mm;
        do {
            for (mm = l; mm + 1 < n; ++mm) {
                const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
                if (std::abs(e[mm]) <= eps * dd) break;
            }
            if (mm != l) {
                if (iter++ == 60)
                    throw solver_error("tridiag_eigenvalues: QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = mm; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[mm] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (!underflow) {
                    d[l] -= p;
                    e[l] = g;
                    e[mm] = 0.0;
                }
            }
        } while (mm != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

int tridiag_count_below(const Tridiagonal& m, double x) {
    const std::size_t n = m.diag.size();
    int count = 0;
    double q = 1.0;
    const double tiny = 1e-300;
    for (std::size_t i = 0; i < n; ++i) {
        const double off2 = i == 0 ? 0.0 : m.off[i - 1] * m.off[i - 1];
        q = (m.diag[i] - x) - off2 / q;
        if (q == 0.0) q = tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

std::vector<double> tridiag_eigenvector(const Tridiagonal& m, double lambda) {
    const std::size_t n = m.diag.size();
    if (n == 0) return {};
    // slight shift off the exact eigenvalue keeps the factorization regular
    double scale = 0.0;
    for (double v : m.diag) scale = std::max(scale, std::abs(v));
    const double shift = lambda + 1e-12 * (scale + std::abs(lambda) + 1.0);

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? 1.0 : 0.5;

    // tridiagonal solve with partial pivoting; fill-in adds one superdiagonal
    auto solve = [&](std::vector<double>& rhs) {
        std::vector<double> d(n), dl(n, 0.0), du(n, 0.0), du2(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = m.diag[i] - shift;
            if (i + 1 < n) dl[i] = du[i] = m.off[i];
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] == 0.0) d[i] = 1e-300;
                const double f = dl[i] / d[i];
                d[i + 1] -= f * du[i];
                rhs[i + 1] -= f * rhs[i];
            } else {
                const double f = d[i] / dl[i];
                d[i] = dl[i];
                const double tmp = d[i + 1];
                d[i + 1] = du[i] - f * tmp;
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du[i + 1];
                }
                du[i] = tmp;
                std::swap(rhs[i], rhs[i + 1]);
                rhs[i + 1] -= f * rhs[i];
            }
        }
        if (d[n - 1] == 0.0) d[n - 1] = 1e-300;
        rhs[n - 1] /= d[n - 1];
        if (n > 1) rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
        for (std::size_t i = n - 2; i-- > 0;)
            rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    };

    for (int it = 0; it < 3; ++it) {
        solve(x);
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw solver_error("tridiag_eigenvector: inverse iteration failed");
        for (double& v : x) v /= nrm;
    }
    return x;
}

} // namespace collarspec
