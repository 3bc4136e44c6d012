#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace tilecoh {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int int_abs(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int int_gcd(Int a, Int b) {
    a = int_abs(a);
    b = int_abs(b);
    while (b != 0) {
        Int r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline Int int_lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return int_abs(a / int_gcd(a, b) * b);
}

inline bool divides(const Int& d, const Int& a) {
    if (d == 0) return a == 0;
    return a % d == 0;
}

inline Int int_pow(Int base, unsigned long e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

/// Prime factorization by trial division; fine for the small integers that
/// appear as eigenvalues, torsion orders and localization bases.
inline std::set<Int> prime_support(Int n) {
    n = int_abs(n);
    std::set<Int> ps;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.insert(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.insert(n);
    return ps;
}

/// Product of the distinct primes dividing n (radical); radical(1) = 1.
inline Int radical(const Int& n) {
    Int r = 1;
    for (const Int& p : prime_support(n)) r *= p;
    return r;
}

/// p-adic valuation of n (n != 0).
inline long valuation(Int n, const Int& p) {
    n = int_abs(n);
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// All positive divisors of |n|, n != 0.
inline std::vector<Int> divisors(const Int& n) {
    Int m = int_abs(n);
    std::vector<Int> small, large;
    for (Int d = 1; d * d <= m; ++d) {
        if (m % d == 0) {
            small.push_back(d);
            if (d * d != m) large.push_back(m / d);
        }
    }
    for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
    return small;
}

/// Strip from n every prime factor it shares with b.
inline Int coprime_part(Int n, const Int& b) {
    Int g = int_gcd(n, b);
    while (g > 1) {
        while (n % g == 0) n /= g;
        g = int_gcd(n, b);
    }
    return n;
}

inline std::string int_str(const Int& a) { return a.str(); }

} // namespace tilecoh
