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

#ifndef PBV_EXACT_HPP
#define PBV_EXACT_HPP

#include <cstdint>
#include <string>

namespace pbv {

/// Signed 128-bit integer used for every exact count. All arithmetic helpers below are
/// overflow-checked and throw CapacityError rather than wrap.
using wide_int = __int128;

wide_int checked_add(wide_int a, wide_int b);
wide_int checked_sub(wide_int a, wide_int b);
wide_int checked_mul(wide_int a, wide_int b);
wide_int checked_pow(wide_int base, std::uint64_t exponent);

/// Largest argument accepted by `factorial`.
inline constexpr std::uint64_t kMaxFactorialArg = 20;

/// n! for n <= 20; CapacityError beyond.
wide_int factorial(std::uint64_t n);
/// C(n, r); zero when r > n.
wide_int binomial(std::uint64_t n, std::uint64_t r);

std::string to_string(wide_int v);

/// Reduced fraction with positive denominator.
class Rational {
   public:
    Rational() = default;
    Rational(wide_int num, wide_int den = 1);

    wide_int num() const {
        return num_;
    }
    wide_int den() const {
        return den_;
    }
    double to_double() const;
    std::string str() const;

    friend Rational operator+(const Rational &a, const Rational &b);
    friend Rational operator-(const Rational &a, const Rational &b);
    friend Rational operator*(const Rational &a, const Rational &b);
    friend Rational operator/(const Rational &a, const Rational &b);
    friend bool operator==(const Rational &a, const Rational &b) = default;
    friend bool operator<(const Rational &a, const Rational &b);
    friend bool operator<=(const Rational &a, const Rational &b) {
        return !(b < a);
    }

   private:
    wide_int num_ = 0;
    wide_int den_ = 1;
};

Rational min(const Rational &a, const Rational &b);

}  // namespace pbv

#endif
