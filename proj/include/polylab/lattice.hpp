#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "polylab/errors.hpp"

namespace polylab {

// Hard dimension ceiling; sample_environment rejects anything above it.
inline constexpr int kMaxDims = 5;

// Lattice point in Z^D, D <= kMaxDims. Unused coordinates stay zero so that
// comparison and hashing work without carrying D around.
struct Point {
    std::array<int32_t, kMaxDims> c{};

    int32_t& operator[](int i) { return c[static_cast<size_t>(i)]; }
    int32_t operator[](int i) const { return c[static_cast<size_t>(i)]; }

    friend auto operator<=>(const Point&, const Point&) = default;

    Point operator+(const Point& o) const {
        Point r;
        for (int i = 0; i < kMaxDims; ++i) r.c[i] = c[i] + o.c[i];
        return r;
    }
    Point operator-(const Point& o) const {
        Point r;
        for (int i = 0; i < kMaxDims; ++i) r.c[i] = c[i] - o.c[i];
        return r;
    }
    Point operator-() const {
        Point r;
        for (int i = 0; i < kMaxDims; ++i) r.c[i] = -c[i];
        return r;
    }
};

inline Point unit_point(int axis, int sign) {
    Point p;
    p[axis] = sign;
    return p;
}

struct PointHash {
    size_t operator()(const Point& p) const {
        uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (int i = 0; i < kMaxDims; ++i) {
            h ^= static_cast<uint64_t>(static_cast<uint32_t>(p.c[i])) + 0x9e3779b97f4a7c15ULL +
                 (h << 6) + (h >> 2);
        }
        return static_cast<size_t>(h);
    }
};

inline int64_t norm2_sq(const Point& p) {
    int64_t s = 0;
    for (int i = 0; i < kMaxDims; ++i) s += static_cast<int64_t>(p.c[i]) * p.c[i];
    return s;
}

inline double norm2(const Point& p) { return std::sqrt(static_cast<double>(norm2_sq(p))); }

inline int l1_norm(const Point& p) {
    int s = 0;
    for (int i = 0; i < kMaxDims; ++i) s += std::abs(p.c[i]);
    return s;
}

inline int linf_norm(const Point& p) {
    int m = 0;
    for (int i = 0; i < kMaxDims; ++i) m = std::max(m, std::abs(p.c[i]));
    return m;
}

// Real vector in R^D, same fixed-capacity convention as Point.
struct RealVec {
    std::array<double, kMaxDims> c{};

    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }

    friend bool operator==(const RealVec&, const RealVec&) = default;

    static RealVec on_axis(double value, int axis = 0) {
        RealVec v;
        v[axis] = value;
        return v;
    }
};

inline double dot(const RealVec& a, const Point& b) {
    double s = 0;
    for (int i = 0; i < kMaxDims; ++i) s += a.c[i] * static_cast<double>(b.c[i]);
    return s;
}

inline double dot(const RealVec& a, const RealVec& b) {
    double s = 0;
    for (int i = 0; i < kMaxDims; ++i) s += a.c[i] * b.c[i];
    return s;
}

inline double norm2(const RealVec& v) { return std::sqrt(dot(v, v)); }

// Symmetric D x D matrix with the same capacity convention.
struct SymMat {
    std::array<std::array<double, kMaxDims>, kMaxDims> m{};

    double& at(int i, int j) { return m[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
    double at(int i, int j) const { return m[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
};

// quadratic form  a . M a
inline double quad_form(const SymMat& s, const RealVec& a, int dims) {
    double q = 0;
    for (int i = 0; i < dims; ++i)
        for (int j = 0; j < dims; ++j) q += a[i] * s.at(i, j) * a[j];
    return q;
}

// Eigenvalues of the leading dims x dims block by cyclic Jacobi sweeps.
std::vector<double> sym_eigenvalues(const SymMat& s, int dims);

// Dense index space over the L-infinity box { |x|_inf <= radius } in Z^dims.
struct Box {
    int dims = 0;
    int radius = 0;

    Box() = default;
    Box(int dims_, int radius_) : dims(dims_), radius(radius_) {
        if (dims < 1 || dims > kMaxDims) throw ValidationError("Box: dims out of range");
        if (radius < 0) throw ValidationError("Box: negative radius");
    }

    int side() const { return 2 * radius + 1; }

    size_t size() const {
        size_t n = 1;
        for (int i = 0; i < dims; ++i) n *= static_cast<size_t>(side());
        return n;
    }

    bool contains(const Point& p) const {
        for (int i = 0; i < dims; ++i)
            if (std::abs(p.c[i]) > radius) return false;
        for (int i = dims; i < kMaxDims; ++i)
            if (p.c[i] != 0) return false;
        return true;
    }

    size_t index(const Point& p) const {
        size_t idx = 0;
        for (int i = 0; i < dims; ++i)
            idx = idx * static_cast<size_t>(side()) + static_cast<size_t>(p.c[i] + radius);
        return idx;
    }

    Point point_at(size_t idx) const {
        Point p;
        for (int i = dims - 1; i >= 0; --i) {
            p.c[i] = static_cast<int32_t>(idx % static_cast<size_t>(side())) - radius;
            idx /= static_cast<size_t>(side());
        }
        return p;
    }

    // Stride of axis i in the dense layout (used for neighbour stencils).
    size_t stride(int axis) const {
        size_t s = 1;
        for (int i = dims - 1; i > axis; --i) s *= static_cast<size_t>(side());
        return s;
    }
};

std::string format_point(const Point& p, int dims);

}  // namespace polylab
