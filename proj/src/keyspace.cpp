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

#include "pbv/keyspace.hpp"

#include <algorithm>
#include <bit>

#include "pbv/errors.hpp"
#include "pbv/exact.hpp"

namespace pbv {

namespace {

void check_width(std::size_t num_bits) {
    if (num_bits == 0 || num_bits > kMaxKeyBits) {
        throw InputError("key width must be between 1 and " + std::to_string(kMaxKeyBits) + " bits, got " +
                         std::to_string(num_bits));
    }
}

}  // namespace

SecretKey::SecretKey(std::uint64_t value, std::size_t num_bits) : value_(value), num_bits_(num_bits) {
    check_width(num_bits);
    if (value >> num_bits) {
        throw InputError("key value " + std::to_string(value) + " does not fit in " + std::to_string(num_bits) +
                         " bits");
    }
}

std::size_t SecretKey::popcount() const {
    return static_cast<std::size_t>(std::popcount(value_));
}

std::string SecretKey::str() const {
    return format_bits(value_, num_bits_);
}

std::string format_bits(std::uint64_t value, std::size_t num_bits) {
    std::string out(num_bits, '0');
    for (std::size_t q = 0; q < num_bits; ++q) {
        if ((value >> q) & 1) {
            out[num_bits - 1 - q] = '1';
        }
    }
    return out;
}

SecretKey parse_key(std::string_view text, std::size_t num_bits) {
    check_width(num_bits);
    if (text.size() != num_bits) {
        throw InputError("key \"" + std::string(text) + "\" has length " + std::to_string(text.size()) +
                         ", expected " + std::to_string(num_bits));
    }
    std::uint64_t value = 0;
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c != '0' && c != '1') {
            throw InputError("key \"" + std::string(text) + "\" has non-binary character '" + std::string(1, c) +
                             "' at position " + std::to_string(pos));
        }
        value = (value << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return SecretKey(value, num_bits);
}

int dot_mod2(const SecretKey &x, const SecretKey &s) {
    if (x.num_bits() != s.num_bits()) {
        throw InputError("dot product of keys with different widths (" + std::to_string(x.num_bits()) + " vs " +
                         std::to_string(s.num_bits()) + ")");
    }
    return parity(x.value() & s.value());
}

KeySet::KeySet(std::vector<SecretKey> keys) : keys_(std::move(keys)), num_bits_(0) {
    if (keys_.empty()) {
        throw InputError("a key set needs at least one key");
    }
    num_bits_ = keys_.front().num_bits();
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        if (keys_[i].num_bits() != num_bits_) {
            throw InputError("key " + std::to_string(i) + " has width " + std::to_string(keys_[i].num_bits()) +
                             ", expected " + std::to_string(num_bits_));
        }
    }
    if (keys_.size() > (std::uint64_t{1} << num_bits_)) {
        throw InputError("key count " + std::to_string(keys_.size()) + " exceeds 2^n = " +
                         std::to_string(std::uint64_t{1} << num_bits_));
    }
}

KeySet KeySet::parse(std::span<const std::string> texts, std::size_t num_bits) {
    if (texts.empty()) {
        throw InputError("a key set needs at least one key");
    }
    if (num_bits == 0) {
        num_bits = texts.front().size();
    }
    std::vector<SecretKey> keys;
    keys.reserve(texts.size());
    for (const auto &t : texts) {
        keys.push_back(parse_key(t, num_bits));
    }
    return KeySet(std::move(keys));
}

KeySet KeySet::parse_list(std::string_view comma_separated, std::size_t num_bits) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = comma_separated.find(',', start);
        auto piece = comma_separated.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                    : comma - start);
        while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
        while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
        if (piece.empty()) {
            throw InputError("empty entry in key list \"" + std::string(comma_separated) + "\"");
        }
        parts.emplace_back(piece);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return parse(parts, num_bits);
}

std::vector<std::uint64_t> KeySet::values() const {
    std::vector<std::uint64_t> out;
    out.reserve(keys_.size());
    for (const auto &k : keys_) {
        out.push_back(k.value());
    }
    return out;
}

std::vector<std::string> KeySet::strings() const {
    std::vector<std::string> out;
    out.reserve(keys_.size());
    for (const auto &k : keys_) {
        out.push_back(k.str());
    }
    return out;
}

bool KeySet::all_distinct() const {
    auto v = values();
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

void RqProfile::validate(std::size_t k) const {
    if (counts.empty()) {
        throw InputError("empty r_q profile");
    }
    for (std::size_t q = 0; q < counts.size(); ++q) {
        if (counts[q] > k) {
            throw InputError("r_" + std::to_string(q) + " = " + std::to_string(counts[q]) + " exceeds k = " +
                             std::to_string(k));
        }
    }
}

std::vector<std::size_t> RqProfile::msb_first() const {
    return {counts.rbegin(), counts.rend()};
}

RqProfile rq_profile(const KeySet &keys) {
    RqProfile out{std::vector<std::size_t>(keys.num_bits(), 0)};
    for (const auto &key : keys) {
        for (std::size_t q = 0; q < keys.num_bits(); ++q) {
            out.counts[q] += key.bit(q);
        }
    }
    return out;
}

std::vector<SecretKey> KeyMultiplicity::expand() const {
    std::vector<SecretKey> out;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        out.insert(out.end(), counts[i], distinct[i]);
    }
    return out;
}

KeyMultiplicity multiplicity(const KeySet &keys) {
    KeyMultiplicity out;
    for (const auto &key : keys) {
        auto it = std::find(out.distinct.begin(), out.distinct.end(), key);
        if (it == out.distinct.end()) {
            out.distinct.push_back(key);
            out.counts.push_back(1);
        } else {
            ++out.counts[static_cast<std::size_t>(it - out.distinct.begin())];
        }
    }
    wide_int r = factorial(keys.size());
    for (std::size_t b : out.counts) {
        r /= factorial(b);
    }
    out.permutations = r;
    return out;
}

}  // namespace pbv
