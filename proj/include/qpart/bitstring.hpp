// bitstring.hpp - basis-index <-> bitstring conversions
//
// Convention used across the library: qubit/vertex q is the q-th least
// significant bit of the basis index; rendered strings put the most
// significant bit first, so to_bitstring(2, 2) == "10" (qubit 1 set).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpart/errors.hpp"

namespace qpart {

inline std::string to_bitstring(std::uint64_t mask, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q)
        if ((mask >> q) & 1ULL) s[static_cast<std::size_t>(n - 1 - q)] = '1';
    return s;
}

inline std::uint64_t bitstring_to_mask(const std::string& s) {
    if (s.size() > 64) throw ValidationError("bitstring longer than 64 bits");
    std::uint64_t mask = 0;
    const int n = static_cast<int>(s.size());
    for (int q = 0; q < n; ++q) {
        const char c = s[static_cast<std::size_t>(n - 1 - q)];
        if (c == '1')
            mask |= 1ULL << q;
        else if (c != '0')
            throw ValidationError("bitstring contains a character other than 0/1");
    }
    return mask;
}

inline std::vector<std::uint8_t> mask_to_bits(std::uint64_t mask, int n) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) bits[static_cast<std::size_t>(q)] = (mask >> q) & 1ULL;
    return bits;
}

inline std::uint64_t bits_to_mask(const std::vector<std::uint8_t>& bits) {
    if (bits.size() > 64) throw ValidationError("bit vector longer than 64 bits");
    std::uint64_t mask = 0;
    for (std::size_t q = 0; q < bits.size(); ++q)
        if (bits[q]) mask |= 1ULL << q;
    return mask;
}

inline std::vector<std::uint8_t> bitstring_to_bits(const std::string& s) {
    return mask_to_bits(bitstring_to_mask(s), static_cast<int>(s.size()));
}

inline std::string bits_to_bitstring(const std::vector<std::uint8_t>& bits) {
    return to_bitstring(bits_to_mask(bits), static_cast<int>(bits.size()));
}

} // namespace qpart
