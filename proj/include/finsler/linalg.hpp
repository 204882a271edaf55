#pragma once
// Small dense containers (dim <= 3) for point-wise tensor values, plus the
// little linear algebra the workbench needs: 2x2/3x3 inversion and a
// one-sided Jacobi SVD for the sigma-T kernel analysis.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace finsler {

struct Vec {
    int n = 0;
    std::array<double, 3> v{};
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
};

struct Mat {
    int n = 0;
    std::array<double, 9> v{};
    double& operator()(int i, int j) { return v[i * n + j]; }
    double operator()(int i, int j) const { return v[i * n + j]; }
};

struct Ten3 {
    int n = 0;
    std::array<double, 27> v{};
    double& operator()(int i, int j, int k) { return v[(i * n + j) * n + k]; }
    double operator()(int i, int j, int k) const { return v[(i * n + j) * n + k]; }
};

struct Ten4 {
    int n = 0;
    std::array<double, 81> v{};
    double& operator()(int i, int j, int k, int h) { return v[((i * n + j) * n + k) * n + h]; }
    double operator()(int i, int j, int k, int h) const { return v[((i * n + j) * n + k) * n + h]; }
};

inline double max_abs(const Vec& t) {
    double m = 0.0;
    for (int i = 0; i < t.n; ++i) m = std::max(m, std::abs(t.v[i]));
    return m;
}
inline double max_abs(const Mat& t) {
    double m = 0.0;
    for (int i = 0; i < t.n * t.n; ++i) m = std::max(m, std::abs(t.v[i]));
    return m;
}
inline double max_abs(const Ten3& t) {
    double m = 0.0;
    for (int i = 0; i < t.n * t.n * t.n; ++i) m = std::max(m, std::abs(t.v[i]));
    return m;
}
inline double max_abs(const Ten4& t) {
    double m = 0.0;
    for (int i = 0; i < t.n * t.n * t.n * t.n; ++i) m = std::max(m, std::abs(t.v[i]));
    return m;
}

inline double det(const Mat& m) {
    if (m.n == 1) return m(0, 0);
    if (m.n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline Mat inverse(const Mat& m, double d) {
    Mat out;
    out.n = m.n;
    if (m.n == 1) {
        out(0, 0) = 1.0 / d;
    } else if (m.n == 2) {
        out(0, 0) = m(1, 1) / d;
        out(0, 1) = -m(0, 1) / d;
        out(1, 0) = -m(1, 0) / d;
        out(1, 1) = m(0, 0) / d;
    } else {
        out(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
        out(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
        out(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
        out(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
        out(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
        out(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
        out(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
        out(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
        out(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
    }
    return out;
}

struct SvdResult {
    std::vector<double> sigma;              // descending
    std::vector<std::array<double, 3>> right;  // right singular vectors, matching order
};

/// One-sided Jacobi SVD of a tall matrix with ncols <= 3 (column-major
/// columns of length nrows).  Small singular values come out to high
/// relative accuracy, which the kernel cutoff relies on.
inline SvdResult svd_small(std::vector<std::array<double, 3>>& cols_in, int nrows, int ncols) {
    if (ncols < 1 || ncols > 3) throw std::invalid_argument("svd_small: ncols must be 1..3");
    std::vector<std::vector<double>> a(ncols, std::vector<double>(nrows, 0.0));
    for (int j = 0; j < ncols; ++j)
        for (int i = 0; i < nrows; ++i) a[j][i] = cols_in[i][j];

    std::array<std::array<double, 3>, 3> v{};
    for (int j = 0; j < ncols; ++j) v[j][j] = 1.0;

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < ncols - 1; ++p) {
            for (int q = p + 1; q < ncols; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < nrows; ++i) {
                    app += a[p][i] * a[p][i];
                    aqq += a[q][i] * a[q][i];
                    apq += a[p][i] * a[q][i];
                }
                off = std::max(off, std::abs(apq) / std::max(std::sqrt(app * aqq), 1e-300));
                if (std::abs(apq) <= 1e-30 * std::sqrt(app * aqq) + 1e-300) continue;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < nrows; ++i) {
                    const double ap = a[p][i], aq = a[q][i];
                    a[p][i] = c * ap - s * aq;
                    a[q][i] = s * ap + c * aq;
                }
                for (int j = 0; j < ncols; ++j) {
                    const double vp = v[p][j], vq = v[q][j];
                    v[p][j] = c * vp - s * vq;
                    v[q][j] = s * vp + c * vq;
                }
            }
        }
        if (off < 1e-15) break;
    }

    SvdResult out;
    std::vector<int> order(ncols);
    std::vector<double> sig(ncols);
    for (int j = 0; j < ncols; ++j) {
        double s2 = 0.0;
        for (int i = 0; i < nrows; ++i) s2 += a[j][i] * a[j][i];
        sig[j] = std::sqrt(s2);
        order[j] = j;
    }
    for (int i = 0; i < ncols; ++i)
        for (int j = i + 1; j < ncols; ++j)
            if (sig[order[j]] > sig[order[i]]) std::swap(order[i], order[j]);
    for (int j : order) {
        out.sigma.push_back(sig[j]);
        out.right.push_back(v[j]);
    }
    return out;
}

} // namespace finsler
