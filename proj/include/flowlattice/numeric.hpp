#pragma once

/**
 * @brief Exact integer / rational linear algebra.
 *
 * Everything downstream (polytopes, volumes, lattice charts) runs on
 * arbitrary-precision integers and rationals; no floating point anywhere.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace flowlattice {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;  ///< row-major; rows may be empty
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

/// A caller passed arguments outside a function's documented domain.
struct InvalidParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An internal precondition documented on the API was violated.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A computation exceeded a configured size/dimension cap.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An H-description turned out to have a non-integral vertex.
struct NonLatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// scalar helpers
// ---------------------------------------------------------------------------

inline Int floor_div(const Int& a, const Int& b) {
    if (b == 0) throw InvalidParameterError("floor_div: division by zero");
    Int q = a / b;  // truncates toward zero
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

/// Extended gcd: returns (g, x, y) with g = gcd(a,b) >= 0 and g = x*a + y*b.
inline std::tuple<Int, Int, Int> extended_gcd(Int a, Int b) {
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Int q = a / b;
        Int r = a - q * b;
        a = std::exchange(b, r);
        x0 = std::exchange(x1, x0 - q * x1);
        y0 = std::exchange(y1, y0 - q * y1);
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    return {a, x0, y0};
}

inline bool is_integral(const Rat& q) { return denominator(q) == 1; }

inline Int rat_floor(const Rat& q) { return floor_div(numerator(q), denominator(q)); }
inline Int rat_ceil(const Rat& q) { return ceil_div(numerator(q), denominator(q)); }

/// Exact Int from an integral rational.
inline Int to_int(const Rat& q) {
    if (!is_integral(q)) throw NonLatticeError("to_int: rational is not an integer");
    return numerator(q);
}

// ---------------------------------------------------------------------------
// vector / matrix helpers
// ---------------------------------------------------------------------------

inline Int dot(const IntVec& a, const IntVec& b) {
    if (a.size() != b.size()) throw InvalidParameterError("dot: size mismatch");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline bool is_zero(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

inline IntMat identity_matrix(std::size_t n) {
    IntMat m(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline IntMat transpose(const IntMat& a, std::size_t ncols) {
    IntMat t(ncols, IntVec(a.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != ncols) throw InvalidParameterError("transpose: ragged matrix");
        for (std::size_t j = 0; j < ncols; ++j) t[j][i] = a[i][j];
    }
    return t;
}

inline IntVec mat_vec(const IntMat& a, const IntVec& x) {
    IntVec y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = dot(a[i], x);
    return y;
}

inline IntMat mat_mul(const IntMat& a, const IntMat& b) {
    std::size_t n = b.empty() ? 0 : b[0].size();
    IntMat c(a.size(), IntVec(n, 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!b.empty() && a[i].size() != b.size())
            throw InvalidParameterError("mat_mul: shape mismatch");
        for (std::size_t k = 0; k < a[i].size(); ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    }
    return c;
}

/// Divide a vector by the gcd of its entries; returns that gcd (0 for the
/// zero vector, which is left untouched). Sign of the vector is preserved.
inline Int make_primitive(IntVec& v) {
    Int g = 0;
    for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
    if (g > 1)
        for (Int& x : v) x /= g;
    return g;
}

// ---------------------------------------------------------------------------
// Hermite normal form and integer kernels
// ---------------------------------------------------------------------------

struct HnfResult {
    IntMat h;          ///< row-style Hermite normal form of the input
    IntMat u;          ///< unimodular, u * a == h
    std::size_t rank;  ///< number of nonzero rows of h
};

/**
 * @brief Row-style Hermite normal form with transformation matrix.
 *
 * Pivots positive, zero below each pivot, entries above a pivot reduced into
 * [0, pivot). Zero rows are swept to the bottom; rank = nonzero rows.
 */
inline HnfResult hermite_normal_form(IntMat a) {
    const std::size_t m = a.size();
    const std::size_t n = m == 0 ? 0 : a[0].size();
    IntMat u = identity_matrix(m);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t piv = r;
        while (piv < m && a[piv][c] == 0) ++piv;
        if (piv == m) continue;
        std::swap(a[r], a[piv]);
        std::swap(u[r], u[piv]);
        for (std::size_t j = r + 1; j < m; ++j) {
            if (a[j][c] == 0) continue;
            auto [g, x, y] = extended_gcd(a[r][c], a[j][c]);
            Int ar = a[r][c] / g, aj = a[j][c] / g;
            for (std::size_t k = 0; k < n; ++k) {
                Int nr = x * a[r][k] + y * a[j][k];
                a[j][k] = ar * a[j][k] - aj * a[r][k];
                a[r][k] = nr;
            }
            for (std::size_t k = 0; k < m; ++k) {
                Int nr = x * u[r][k] + y * u[j][k];
                u[j][k] = ar * u[j][k] - aj * u[r][k];
                u[r][k] = nr;
            }
        }
        if (a[r][c] < 0) {
            for (auto& x : a[r]) x = -x;
            for (auto& x : u[r]) x = -x;
        }
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floor_div(a[i][c], a[r][c]);
            if (q == 0) continue;
            for (std::size_t k = 0; k < n; ++k) a[i][k] -= q * a[r][k];
            for (std::size_t k = 0; k < m; ++k) u[i][k] -= q * u[r][k];
        }
        ++r;
    }
    return {std::move(a), std::move(u), r};
}

/// Basis (as rows) of { x in Z^m : x * a == 0 }.
inline IntMat left_kernel(const IntMat& a) {
    auto res = hermite_normal_form(a);
    IntMat basis(res.u.begin() + static_cast<std::ptrdiff_t>(res.rank), res.u.end());
    return basis;
}

/// Basis (as rows) of { x in Z^ncols : a * x == 0 }. Always saturated.
inline IntMat kernel(const IntMat& a, std::size_t ncols) {
    if (a.empty()) return identity_matrix(ncols);
    return left_kernel(transpose(a, ncols));
}

/// Canonical basis of a row lattice: the nonzero rows of its HNF.
inline IntMat lattice_canonical(const IntMat& rows) {
    auto res = hermite_normal_form(rows);
    res.h.resize(res.rank);
    return res.h;
}

inline bool lattice_equal(const IntMat& a, const IntMat& b) {
    return lattice_canonical(a) == lattice_canonical(b);
}

/**
 * @brief Basis of the saturation of a row lattice inside Z^ncols.
 *
 * Saturation = (Q-span of the rows) ∩ Z^ncols; computed as the kernel of the
 * kernel, both of which are saturated by construction.
 */
inline IntMat saturate_rows(const IntMat& rows, std::size_t ncols) {
    return kernel(kernel(rows, ncols), ncols);
}

inline std::size_t rank_of(const IntMat& a) { return hermite_normal_form(a).rank; }

// ---------------------------------------------------------------------------
// determinants and linear solving
// ---------------------------------------------------------------------------

/// Exact determinant via Bareiss fraction-free elimination.
inline Int determinant(IntMat a) {
    const std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw InvalidParameterError("determinant: matrix not square");
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

/**
 * @brief Exact solution of a*x == b over the rationals.
 *
 * Returns any solution (free variables set to 0), or nullopt if the system is
 * inconsistent.
 */
inline std::optional<RatVec> solve(const IntMat& a, const IntVec& b) {
    const std::size_t m = a.size();
    if (b.size() != m) throw InvalidParameterError("solve: rhs size mismatch");
    const std::size_t n = m == 0 ? 0 : a[0].size();
    RatMat w(m, RatVec(n + 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) w[i][j] = Rat(a[i][j]);
        w[i][n] = Rat(b[i]);
    }
    std::vector<std::ptrdiff_t> pivot_col(m, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t piv = r;
        while (piv < m && w[piv][c] == 0) ++piv;
        if (piv == m) continue;
        std::swap(w[r], w[piv]);
        Rat p = w[r][c];
        for (std::size_t j = c; j <= n; ++j) w[r][j] /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || w[i][c] == 0) continue;
            Rat f = w[i][c];
            for (std::size_t j = c; j <= n; ++j) w[i][j] -= f * w[r][j];
        }
        pivot_col[r] = static_cast<std::ptrdiff_t>(c);
        ++r;
    }
    for (std::size_t i = r; i < m; ++i)
        if (w[i][n] != 0) return std::nullopt;
    RatVec x(n, Rat(0));
    for (std::size_t i = 0; i < r; ++i) x[static_cast<std::size_t>(pivot_col[i])] = w[i][n];
    return x;
}

/// Rational-matrix variant of solve().
inline std::optional<RatVec> solve_rat(const RatMat& a, const RatVec& b) {
    const std::size_t m = a.size();
    if (b.size() != m) throw InvalidParameterError("solve_rat: rhs size mismatch");
    const std::size_t n = m == 0 ? 0 : a[0].size();
    RatMat w(m, RatVec(n + 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) w[i][j] = a[i][j];
        w[i][n] = b[i];
    }
    std::vector<std::ptrdiff_t> pivot_col(m, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t piv = r;
        while (piv < m && w[piv][c] == 0) ++piv;
        if (piv == m) continue;
        std::swap(w[r], w[piv]);
        Rat p = w[r][c];
        for (std::size_t j = c; j <= n; ++j) w[r][j] /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || w[i][c] == 0) continue;
            Rat f = w[i][c];
            for (std::size_t j = c; j <= n; ++j) w[i][j] -= f * w[r][j];
        }
        pivot_col[r] = static_cast<std::ptrdiff_t>(c);
        ++r;
    }
    for (std::size_t i = r; i < m; ++i)
        if (w[i][n] != 0) return std::nullopt;
    RatVec x(n, Rat(0));
    for (std::size_t i = 0; i < r; ++i) x[static_cast<std::size_t>(pivot_col[i])] = w[i][n];
    return x;
}

inline Rat rat_dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw InvalidParameterError("rat_dot: size mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Smallest positive integer scale with scale*v integral; returns scale*v.
inline IntVec clear_denominators(const RatVec& v, Int& scale) {
    scale = 1;
    for (const Rat& q : v) scale = boost::multiprecision::lcm(scale, denominator(q));
    IntVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = numerator(Rat(v[i] * scale));
    return out;
}

inline RatVec to_rat(const IntVec& v) {
    RatVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
    return out;
}

}  // namespace flowlattice
