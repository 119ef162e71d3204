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

#ifndef PBV_KEYSPACE_HPP
#define PBV_KEYSPACE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pbv/exact.hpp"

namespace pbv {

/// Widest key supported. Keys are packed into a uint64 with bit q holding the
/// coefficient of 2^q; 63 keeps 2^n representable.
inline constexpr std::size_t kMaxKeyBits = 63;

/// An n-bit key. Bit q of `value()` is s(q). Text I/O is most-significant-bit first,
/// so "0001" has value 1.
class SecretKey {
   public:
    SecretKey(std::uint64_t value, std::size_t num_bits);

    std::uint64_t value() const {
        return value_;
    }
    std::size_t num_bits() const {
        return num_bits_;
    }
    bool bit(std::size_t q) const {
        return (value_ >> q) & 1;
    }
    std::size_t popcount() const;
    std::string str() const;

    bool operator==(const SecretKey &) const = default;
    auto operator<=>(const SecretKey &) const = default;

   private:
    std::uint64_t value_;
    std::size_t num_bits_;
};

/// Parses an MSB-first binary string of exactly `num_bits` characters.
SecretKey parse_key(std::string_view text, std::size_t num_bits);

/// Formats the low `num_bits` bits of `value` MSB-first.
std::string format_bits(std::uint64_t value, std::size_t num_bits);

/// Σ_q x_q·s_q mod 2.
int dot_mod2(const SecretKey &x, const SecretKey &s);

inline int parity(std::uint64_t v) {
    return __builtin_parityll(v);
}

/// Ordered list of k keys sharing one width. Duplicates are allowed; position i
/// selects which controlled unitary the key drives.
class KeySet {
   public:
    KeySet(std::vector<SecretKey> keys);

    /// Parses each string as a key; the width is taken from the first one unless
    /// `num_bits` is given.
    static KeySet parse(std::span<const std::string> texts, std::size_t num_bits = 0);
    /// Parses a comma-separated list such as "011,101".
    static KeySet parse_list(std::string_view comma_separated, std::size_t num_bits = 0);

    std::size_t size() const {
        return keys_.size();
    }
    std::size_t num_bits() const {
        return num_bits_;
    }
    const SecretKey &operator[](std::size_t i) const {
        return keys_[i];
    }
    const std::vector<SecretKey> &keys() const {
        return keys_;
    }
    std::vector<std::uint64_t> values() const;
    std::vector<std::string> strings() const;
    bool all_distinct() const;

    auto begin() const {
        return keys_.begin();
    }
    auto end() const {
        return keys_.end();
    }

   private:
    std::vector<SecretKey> keys_;
    std::size_t num_bits_;
};

/// Number of keys with bit q set, for each q.
struct RqProfile {
    std::vector<std::size_t> counts;

    std::size_t num_bits() const {
        return counts.size();
    }
    /// Throws InputError if any count exceeds k.
    void validate(std::size_t k) const;
    /// Counts listed from q = n-1 down to q = 0, the order keys are written in.
    std::vector<std::size_t> msb_first() const;

    bool operator==(const RqProfile &) const = default;
};

RqProfile rq_profile(const KeySet &keys);

/// Distinct keys in first-occurrence order, their occurrence counts, and the number
/// of distinct orderings k!/Π b_i!.
struct KeyMultiplicity {
    std::vector<SecretKey> distinct;
    std::vector<std::size_t> counts;
    wide_int permutations;

    /// Repeats each distinct key by its count.
    std::vector<SecretKey> expand() const;
};

KeyMultiplicity multiplicity(const KeySet &keys);

}  // namespace pbv

#endif
