#include "linalg.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <string>

namespace chaintx {

ComplexMatrix to_complex(const RealMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.rows(), "multiply: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexVector multiply(const ComplexMatrix& a, std::span<const cplx> x) {
    require(a.cols() == x.size(), "multiply: vector length differs from column count");
    ComplexVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s{};
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

ComplexMatrix scaled(const ComplexMatrix& a, cplx s) {
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double abs_tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_abs_diff(a, b) <= abs_tol;
}

double unitarity_defect(const ComplexMatrix& a) {
    require(a.square(), "unitarity_defect: matrix is not square");
    const std::size_t n = a.rows();
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s{};
            for (std::size_t k = 0; k < n; ++k) s += std::conj(a(k, i)) * a(k, j);
            if (i == j) s -= 1.0;
            m = std::max(m, std::abs(s));
        }
    return m;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    require(a.size() == b.size(), "dot: length mismatch");
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

RealMatrix SymTridiag::dense() const {
    const std::size_t n = size();
    RealMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = offdiag[i];
    return a;
}

namespace {

// EISPACK tql2 in the JAMA layout: e[i] couples i and i+1, e[n-1] = 0.
// The columns of z are rotated along with the iteration, so z may carry any
// prior orthogonal/unitary transform.
template <typename T>
void tql2(std::vector<double>& d, std::vector<double>& e, Matrix<T>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e.resize(n);
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    const int zr = static_cast<int>(z.rows());

    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        int m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kMaxQlIterations)
                    throw NumericalError("eig_sym_tridiag: no convergence for eigenvalue " +
                                         std::to_string(l) + " within " +
                                         std::to_string(kMaxQlIterations) + " sweeps");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (int k = 0; k < zr; ++k) {
                        const T zh = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * zh;
                        z(k, i) = c * z(k, i) - s * zh;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

template <typename T>
void sort_ascending(std::vector<double>& d, Matrix<T>& z) {
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    std::vector<double> ds(d.size());
    Matrix<T> zs(z.rows(), z.cols());
    for (std::size_t m = 0; m < order.size(); ++m) {
        ds[m] = d[order[m]];
        for (std::size_t k = 0; k < z.rows(); ++k) zs(k, m) = z(k, order[m]);
    }
    d = std::move(ds);
    z = std::move(zs);
}

} // namespace

EigenSystem eig_sym_tridiag(const SymTridiag& m) {
    const std::size_t n = m.size();
    require(n >= 1, "eig_sym_tridiag: empty matrix");
    require(m.offdiag.size() + 1 == n, "eig_sym_tridiag: offdiag must have length N-1");
    std::vector<double> d = m.diag;
    std::vector<double> e = m.offdiag;
    RealMatrix z = RealMatrix::identity(n);
    tql2(d, e, z);
    sort_ascending(d, z);
    return {std::move(d), std::move(z)};
}

HermitianEigenSystem eig_hermitian(const ComplexMatrix& input) {
    require(input.square(), "eig_hermitian: matrix is not square");
    const std::size_t n = input.rows();
    require(n >= 1, "eig_hermitian: empty matrix");

    // Work on the exactly Hermitian average.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
    ComplexMatrix q = ComplexMatrix::identity(n);

    ComplexVector v(n), p(n), w(n), qv(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double tail = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
        if (tail == 0.0) continue;
        const cplx x0 = a(k + 1, k);
        const double xnorm = std::sqrt(tail + std::norm(x0));
        const cplx ph = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0, 0.0};
        const cplx alpha = -ph * xnorm;

        std::fill(v.begin(), v.end(), cplx{});
        v[k + 1] = x0 - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
        const double vn = norm(v);
        for (auto& x : v) x /= vn;

        // A <- H A H with H = I - 2 v v^H, as A - 2 (v w^H + w v^H).
        for (std::size_t i = 0; i < n; ++i) {
            cplx s{};
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            p[i] = s;
        }
        const cplx kappa = dot(v, p);
        for (std::size_t i = 0; i < n; ++i) w[i] = p[i] - kappa * v[i];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) -= 2.0 * (v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]));

        for (std::size_t i = 0; i < n; ++i) {
            cplx s{};
            for (std::size_t j = k + 1; j < n; ++j) s += q(i, j) * v[j];
            qv[i] = s;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= 2.0 * qv[i] * std::conj(v[j]);
    }

    // Rotate the complex subdiagonal onto the positive reals.
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
    cplx delta{1.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = a(j, j).real();
        for (std::size_t i = 0; i < n; ++i) q(i, j) *= delta;
        if (j + 1 < n) {
            const cplx t = a(j + 1, j);
            e[j] = std::abs(t);
            if (e[j] > 0.0) delta *= t / e[j];
        }
    }

    tql2(d, e, q);
    sort_ascending(d, q);
    return {std::move(d), std::move(q)};
}

UnitaryEigenSystem eig_unitary(const ComplexMatrix& w, double degeneracy_tol) {
    require(w.square(), "eig_unitary: matrix is not square");
    require(w.rows() >= 1, "eig_unitary: empty matrix");
    require(degeneracy_tol >= 0.0, "eig_unitary: degeneracy_tol must be non-negative");
    const double defect = unitarity_defect(w);
    require(defect <= kUnitarityTol,
            "eig_unitary: input is not unitary (max |W^H W - I| = " + std::to_string(defect) + ")");

    const std::size_t n = w.rows();
    ComplexMatrix herm(n, n), anti(n, n);
    const cplx two_i{0.0, 2.0};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx wij = w(i, j);
            const cplx wji = std::conj(w(j, i));
            herm(i, j) = 0.5 * (wij + wji);
            anti(i, j) = (wij - wji) / two_i;
        }

    const HermitianEigenSystem hs = eig_hermitian(herm);
    ComplexMatrix vecs = hs.vectors;

    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && hs.values[end] - hs.values[end - 1] <= degeneracy_tol) ++end;
        const std::size_t len = end - start;
        if (len > 1) {
            ComplexMatrix restricted(len, len);
            for (std::size_t a = 0; a < len; ++a)
                for (std::size_t b = 0; b < len; ++b) {
                    cplx s{};
                    for (std::size_t i = 0; i < n; ++i) {
                        cplx av{};
                        for (std::size_t j = 0; j < n; ++j) av += anti(i, j) * hs.vectors(j, start + b);
                        s += std::conj(hs.vectors(i, start + a)) * av;
                    }
                    restricted(a, b) = s;
                }
            const HermitianEigenSystem split = eig_hermitian(restricted);
            for (std::size_t b = 0; b < len; ++b)
                for (std::size_t i = 0; i < n; ++i) {
                    cplx s{};
                    for (std::size_t a = 0; a < len; ++a) s += hs.vectors(i, start + a) * split.vectors(a, b);
                    vecs(i, start + b) = s;
                }
        }
        start = end;
    }

    std::vector<cplx> values(n);
    std::vector<double> phases(n);
    for (std::size_t m = 0; m < n; ++m) {
        const ComplexVector v = vecs.column(m);
        const cplx rq = dot(v, multiply(w, v));
        values[m] = std::polar(1.0, std::arg(rq));
        // Keep -1 on the +pi side of the branch cut.
        if (std::arg(values[m]) <= -std::numbers::pi + 1e-12) values[m] = std::polar(1.0, std::numbers::pi);
        phases[m] = std::arg(values[m]);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return phases[a] < phases[b]; });
    UnitaryEigenSystem out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t m = 0; m < n; ++m) {
        out.values[m] = values[order[m]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, m) = vecs(i, order[m]);
    }
    return out;
}

ComplexVector phase_fix(std::span<const cplx> v) {
    double vmax = 0.0;
    for (const auto& x : v) vmax = std::max(vmax, std::abs(x));
    require(vmax > 0.0, "phase_fix: zero vector");
    std::size_t pick = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) >= vmax * (1.0 - 1e-9)) {
            pick = i;
            break;
        }
    const cplx rot = std::conj(v[pick]) / std::abs(v[pick]);
    ComplexVector out(v.begin(), v.end());
    for (auto& x : out) x *= rot;
    out[pick] = std::abs(v[pick]);
    return out;
}

} // namespace chaintx
