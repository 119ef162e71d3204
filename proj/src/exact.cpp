// Copyright 2026 The pbv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pbv/exact.hpp"

#include <algorithm>
#include <cmath>

#include "pbv/errors.hpp"

namespace pbv {

namespace {

wide_int abs_wide(wide_int v) {
    return v < 0 ? -v : v;
}

wide_int gcd_wide(wide_int a, wide_int b) {
    a = abs_wide(a);
    b = abs_wide(b);
    while (b != 0) {
        wide_int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

[[noreturn]] void overflow(const char *op) {
    throw CapacityError(std::string("exact integer overflow in ") + op +
                        " (values beyond the signed 128-bit range are not supported)");
}

}  // namespace

wide_int checked_add(wide_int a, wide_int b) {
    wide_int out;
    if (__builtin_add_overflow(a, b, &out)) {
        overflow("addition");
    }
    return out;
}

wide_int checked_sub(wide_int a, wide_int b) {
    wide_int out;
    if (__builtin_sub_overflow(a, b, &out)) {
        overflow("subtraction");
    }
    return out;
}

wide_int checked_mul(wide_int a, wide_int b) {
    wide_int out;
    if (__builtin_mul_overflow(a, b, &out)) {
        overflow("multiplication");
    }
    return out;
}

wide_int checked_pow(wide_int base, std::uint64_t exponent) {
    wide_int result = 1;
    while (exponent > 0) {
        if (exponent & 1) {
            result = checked_mul(result, base);
        }
        exponent >>= 1;
        if (exponent > 0) {
            base = checked_mul(base, base);
        }
    }
    return result;
}

wide_int factorial(std::uint64_t n) {
    if (n > kMaxFactorialArg) {
        throw CapacityError("factorial argument " + std::to_string(n) + " exceeds the supported maximum of " +
                            std::to_string(kMaxFactorialArg));
    }
    wide_int out = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        out *= static_cast<wide_int>(i);
    }
    return out;
}

wide_int binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n) {
        return 0;
    }
    r = std::min(r, n - r);
    wide_int out = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        // out * (n - r + i) is divisible by i at every step.
        out = checked_mul(out, static_cast<wide_int>(n - r + i)) / static_cast<wide_int>(i);
    }
    return out;
}

std::string to_string(wide_int v) {
    if (v == 0) {
        return "0";
    }
    bool negative = v < 0;
    unsigned __int128 u = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string digits;
    while (u > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (negative) {
        digits.push_back('-');
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

Rational::Rational(wide_int num, wide_int den) {
    if (den == 0) {
        throw InputError("rational with zero denominator");
    }
    if (den < 0) {
        num = checked_sub(0, num);
        den = checked_sub(0, den);
    }
    wide_int g = gcd_wide(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num_ = num;
    den_ = den;
}

double Rational::to_double() const {
    // Split into integer part and remainder so that huge num/den pairs keep precision.
    wide_int whole = num_ / den_;
    wide_int rem = num_ % den_;
    return static_cast<double>(whole) + static_cast<double>(static_cast<long double>(rem) / static_cast<long double>(den_));
}

std::string Rational::str() const {
    return to_string(num_) + "/" + to_string(den_);
}

Rational operator+(const Rational &a, const Rational &b) {
    wide_int g = gcd_wide(a.den_, b.den_);
    wide_int lhs = checked_mul(a.num_, b.den_ / g);
    wide_int rhs = checked_mul(b.num_, a.den_ / g);
    return Rational(checked_add(lhs, rhs), checked_mul(a.den_ / g, b.den_));
}

Rational operator-(const Rational &a, const Rational &b) {
    return a + Rational(checked_sub(0, b.num_), b.den_);
}

Rational operator*(const Rational &a, const Rational &b) {
    wide_int g1 = gcd_wide(a.num_, b.den_);
    wide_int g2 = gcd_wide(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational &a, const Rational &b) {
    if (b.num_ == 0) {
        throw InputError("division by zero rational");
    }
    return a * Rational(b.den_, b.num_);
}

namespace {

wide_int floor_div(wide_int a, wide_int b) {
    wide_int q = a / b;
    return (a % b != 0 && a < 0) ? q - 1 : q;
}

// Three-way comparison of a/b and c/d (b, d > 0) by continued-fraction expansion;
// never multiplies, so it cannot overflow.
int compare_fractions(wide_int a, wide_int b, wide_int c, wide_int d) {
    for (;;) {
        wide_int qa = floor_div(a, b);
        wide_int qc = floor_div(c, d);
        if (qa != qc) return qa < qc ? -1 : 1;
        wide_int ra = a - qa * b;
        wide_int rc = c - qc * d;
        if (ra == 0 || rc == 0) {
            if (ra == rc) return 0;
            return ra == 0 ? -1 : 1;
        }
        // ra/b < rc/d  iff  d/rc < b/ra.
        wide_int na = d, nb = rc, nc = b, nd = ra;
        a = na, b = nb, c = nc, d = nd;
    }
}

}  // namespace

bool operator<(const Rational &a, const Rational &b) {
    return compare_fractions(a.num_, a.den_, b.num_, b.den_) < 0;
}

Rational min(const Rational &a, const Rational &b) {
    return b < a ? b : a;
}

}  // namespace pbv
