#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "field.hpp"

namespace mvd {

/// Univariate polynomial over the field K, coefficients stored lowest degree
/// first with no trailing zeros. The zero polynomial has no coefficients.
template <class K>
class UniPoly {
public:
    UniPoly() = default;

    explicit UniPoly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPoly constant(K c) { return UniPoly(std::vector<K>{std::move(c)}); }

    bool is_zero() const { return c_.empty(); }

    /// Degree of the polynomial; -1 for the zero polynomial.
    std::ptrdiff_t degree() const {
        return static_cast<std::ptrdiff_t>(c_.size()) - 1;
    }

    const std::vector<K>& coeffs() const { return c_; }

    /// Coefficient of x^i (zero beyond the stored range).
    K coeff(std::size_t i) const {
        return i < c_.size() ? c_[i] : field_traits<K>::from_int(0);
    }

    K leading() const {
        if (is_zero()) throw ZeroPolynomial("leading coefficient of zero polynomial");
        return c_.back();
    }

    bool operator==(const UniPoly& o) const { return c_ == o.c_; }

    UniPoly operator+(const UniPoly& o) const {
        std::vector<K> r(std::max(c_.size(), o.c_.size()), field_traits<K>::from_int(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = r[i] + c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] + o.c_[i];
        return UniPoly(std::move(r));
    }

    UniPoly operator-(const UniPoly& o) const {
        std::vector<K> r(std::max(c_.size(), o.c_.size()), field_traits<K>::from_int(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = r[i] + c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] - o.c_[i];
        return UniPoly(std::move(r));
    }

    UniPoly operator*(const UniPoly& o) const {
        if (is_zero() || o.is_zero()) return UniPoly();
        std::vector<K> r(c_.size() + o.c_.size() - 1, field_traits<K>::from_int(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                r[i + j] = r[i + j] + c_[i] * o.c_[j];
        return UniPoly(std::move(r));
    }

    UniPoly scaled(const K& s) const {
        std::vector<K> r = c_;
        for (auto& x : r) x = x * s;
        return UniPoly(std::move(r));
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<K> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            r[i - 1] = c_[i] * field_traits<K>::from_int(static_cast<long>(i));
        return UniPoly(std::move(r));
    }

    /// Euclidean division: returns (quotient, remainder) with
    /// *this = q * divisor + r and deg r < deg divisor.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& divisor) const {
        if (divisor.is_zero()) throw DivisionByZero("polynomial division by zero");
        std::vector<K> rem = c_;
        const std::size_t dn = divisor.c_.size();
        if (rem.size() < dn) return {UniPoly(), *this};
        std::vector<K> quo(rem.size() - dn + 1, field_traits<K>::from_int(0));
        const K lead = divisor.c_.back();
        for (std::size_t i = rem.size(); i >= dn; --i) {
            const std::size_t top = i - 1;
            if (field_traits<K>::is_zero(rem[top])) continue;
            const K f = rem[top] / lead;
            quo[top - (dn - 1)] = f;
            for (std::size_t j = 0; j < dn; ++j)
                rem[top - (dn - 1) + j] = rem[top - (dn - 1) + j] - f * divisor.c_[j];
        }
        return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
    }

    UniPoly monic() const {
        if (is_zero()) return UniPoly();
        return scaled(field_traits<K>::from_int(1) / c_.back());
    }

private:
    void trim() {
        while (!c_.empty() && field_traits<K>::is_zero(c_.back())) c_.pop_back();
    }

    std::vector<K> c_;
};

/// Horner evaluation of p at x.
template <class K>
K poly_eval(const UniPoly<K>& p, const K& x) {
    K acc = field_traits<K>::from_int(0);
    const auto& c = p.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

/// Lagrange interpolation through the given points; abscissas must be
/// pairwise distinct. Result has degree < #points.
template <class K>
UniPoly<K> poly_interpolate(std::span<const std::pair<K, K>> points) {
    if (points.empty()) throw EmptyInput("poly_interpolate needs at least one point");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first)
                throw DuplicateAbscissa("repeated interpolation abscissa");

    UniPoly<K> result;
    for (std::size_t i = 0; i < points.size(); ++i) {
        UniPoly<K> basis = UniPoly<K>::constant(field_traits<K>::from_int(1));
        K denom = field_traits<K>::from_int(1);
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            // multiply by (x - x_j)
            basis = basis * UniPoly<K>(std::vector<K>{
                        -points[j].first, field_traits<K>::from_int(1)});
            denom = denom * (points[i].first - points[j].first);
        }
        result = result + basis.scaled(points[i].second / denom);
    }
    return result;
}

template <class K>
UniPoly<K> poly_interpolate(const std::vector<std::pair<K, K>>& points) {
    return poly_interpolate(std::span<const std::pair<K, K>>(points));
}

/// Monic gcd over the field (Euclid).
template <class K>
UniPoly<K> poly_gcd(UniPoly<K> a, UniPoly<K> b) {
    static_assert(is_exact_v<K>, "polynomial gcd requires exact arithmetic");
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    a = a.monic();
    b = b.monic();
    while (!b.is_zero()) {
        UniPoly<K> r = a.divmod(b).second;
        a = std::move(b);
        b = r.is_zero() ? std::move(r) : r.monic();
    }
    return a;
}

/// p / gcd(p, p'): same distinct roots, all simple.
template <class K>
UniPoly<K> squarefree_part(const UniPoly<K>& p) {
    static_assert(is_exact_v<K>, "squarefree part requires exact arithmetic");
    if (p.is_zero()) throw ZeroPolynomial("squarefree part of zero polynomial");
    const UniPoly<K> g = poly_gcd(p, p.derivative());
    if (g.degree() <= 0) return p;
    auto [q, r] = p.divmod(g);
    // gcd divides p exactly
    if (!r.is_zero()) throw Error("squarefree division left a remainder");
    return q;
}

namespace detail {

/// Integer-coefficient view of a rational polynomial: scaled by the positive
/// lcm of denominators and divided by the gcd of numerators (primitive form).
inline std::vector<mpz_class> primitive_integer_coeffs(const UniPoly<Rational>& p) {
    const auto& c = p.coeffs();
    mpz_class lcm_den = 1;
    for (const auto& x : c) {
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), lcm_den.get_mpz_t(), x.denominator().get_mpz_t());
        lcm_den = l;
    }
    std::vector<mpz_class> z(c.size());
    mpz_class content = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        z[i] = c[i].numerator() * (lcm_den / c[i].denominator());
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), content.get_mpz_t(), z[i].get_mpz_t());
        content = g;
    }
    if (content > 1)
        for (auto& x : z) x /= content;
    return z;
}

inline int mpz_sign_of_eval(const std::vector<mpz_class>& c, const mpz_class& x) {
    mpz_class acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return sgn(acc);
}

/// Sturm chain of a squarefree integer polynomial. Each element is kept as a
/// primitive integer polynomial; only positive scalings are applied, so the
/// sign sequence is preserved.
struct SturmChain {
    std::vector<std::vector<mpz_class>> polys;

    explicit SturmChain(const std::vector<mpz_class>& f) {
        UniPoly<Rational> a(to_rational(f));
        UniPoly<Rational> b = a.derivative();
        polys.push_back(f);
        while (!b.is_zero()) {
            polys.push_back(primitive_integer_coeffs(b));
            UniPoly<Rational> r = a.divmod(b).second;
            a = std::move(b);
            b = r.is_zero() ? std::move(r)
                            : UniPoly<Rational>(to_rational(primitive_integer_coeffs(r))).scaled(Rational(-1));
        }
    }

    /// Number of sign changes in the chain evaluated at x (zeros skipped).
    int variations(const mpz_class& x) const {
        int count = 0;
        int prev = 0;
        for (const auto& poly : polys) {
            const int s = mpz_sign_of_eval(poly, x);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    }

private:
    static std::vector<Rational> to_rational(const std::vector<mpz_class>& z) {
        std::vector<Rational> r(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) r[i] = Rational(z[i]);
        return r;
    }
};

/// All integer roots of a squarefree monic integer polynomial, by Sturm
/// bisection down to unit-width intervals and exact verification.
inline std::vector<mpz_class> integer_roots_monic(const std::vector<mpz_class>& f) {
    std::vector<mpz_class> roots;
    if (f.size() <= 1) return roots;
    if (f.size() == 2) { // x + c
        roots.push_back(-f[0]);
        return roots;
    }
    // Cauchy bound: all roots of a monic polynomial satisfy |z| < 1 + max|a_i|.
    mpz_class bound = 0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        mpz_class a = abs(f[i]);
        if (a > bound) bound = a;
    }
    bound += 1;

    const SturmChain chain(f);
    struct Interval { mpz_class lo, hi; int vlo, vhi; };
    std::vector<Interval> stack;
    {
        mpz_class lo = -bound, hi = bound;
        stack.push_back({lo, hi, chain.variations(lo), chain.variations(hi)});
    }
    while (!stack.empty()) {
        Interval iv = std::move(stack.back());
        stack.pop_back();
        if (iv.vlo - iv.vhi <= 0) continue;
        if (iv.hi - iv.lo == 1) {
            if (mpz_sign_of_eval(f, iv.hi) == 0) roots.push_back(iv.hi);
            continue;
        }
        mpz_class mid;
        mpz_class span = iv.lo + iv.hi;
        mpz_fdiv_q_2exp(mid.get_mpz_t(), span.get_mpz_t(), 1);
        const int vmid = chain.variations(mid);
        stack.push_back({iv.lo, mid, iv.vlo, vmid});
        stack.push_back({mid, iv.hi, vmid, iv.vhi});
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace detail

/// All distinct rational roots of a nonzero rational polynomial, ascending.
/// The polynomial is reduced to its squarefree part first, then roots are
/// isolated exactly (Sturm bisection of the associated monic integer
/// polynomial) and verified by evaluation.
inline std::vector<Rational> rational_roots(const UniPoly<Rational>& p) {
    if (p.is_zero()) throw ZeroPolynomial("rational_roots of the zero polynomial");

    std::vector<Rational> roots;
    std::vector<Rational> c = p.coeffs();

    // strip the x^v factor: 0 is a root iff the constant term vanishes
    std::size_t v = 0;
    while (v < c.size() && c[v].is_zero()) ++v;
    if (v > 0) {
        roots.push_back(Rational(0));
        c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(v));
    }
    UniPoly<Rational> q{std::move(c)};
    if (q.degree() <= 0) return roots;

    const UniPoly<Rational> sf = squarefree_part(q);
    const std::vector<mpz_class> f = detail::primitive_integer_coeffs(sf);
    const std::size_t k = f.size() - 1; // degree >= 1 here

    if (k == 1) {
        roots.push_back(Rational(-f[0], f[1]));
    } else {
        // y = lead * x turns f into a monic integer polynomial in y:
        // G(y) = lead^(k-1) f(y/lead), so G_i = f_i lead^(k-1-i)
        const mpz_class lead = f.back();
        std::vector<mpz_class> monic(f.size());
        monic[k] = 1;
        mpz_class pw = 1;
        for (std::size_t i = k; i-- > 0;) {
            monic[i] = f[i] * pw;
            pw *= lead;
        }
        for (const mpz_class& y : detail::integer_roots_monic(monic))
            roots.push_back(Rational(y, lead));
    }

    for (const auto& r : roots)
        if (!poly_eval(p, r).is_zero())
            throw Error("rational root verification failed");
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

/// Float scalars do not support exact root extraction; the float pipeline
/// uses the eigendecomposition route instead.
inline std::vector<double> rational_roots(const UniPoly<double>&) {
    throw NotExactMode("rational_roots requires exact scalars");
}

} // namespace mvd
