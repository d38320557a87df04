#include "polylab/lattice.hpp"

#include <cmath>
#include <cstdio>

namespace polylab {

std::vector<double> sym_eigenvalues(const SymMat& s, int dims) {
    // Cyclic Jacobi; dims <= 5 so a handful of sweeps is plenty.
    std::array<std::array<double, kMaxDims>, kMaxDims> a = s.m;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int i = 0; i < dims; ++i)
            for (int j = i + 1; j < dims; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (int p = 0; p < dims; ++p) {
            for (int q = p + 1; q < dims; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), sn = t * c;
                for (int k = 0; k < dims; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for (int k = 0; k < dims; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<size_t>(dims));
    for (int i = 0; i < dims; ++i) ev[static_cast<size_t>(i)] = a[i][i];
    return ev;
}

std::string format_point(const Point& p, int dims) {
    std::string s = "(";
    char buf[16];
    for (int i = 0; i < dims; ++i) {
        std::snprintf(buf, sizeof buf, "%s%d", i ? "," : "", p[i]);
        s += buf;
    }
    s += ")";
    return s;
}

}  // namespace polylab
