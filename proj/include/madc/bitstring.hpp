#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace madc {

/// Fixed-length bit string, MSB-first within each byte. Bits past size() in
/// the last byte are kept zero so byte-wise equality matches bit equality.
class BitString {
  public:
    BitString() = default;
    explicit BitString(std::size_t bits) : bits_(bits), bytes_((bits + 7) / 8, 0) {}

    static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits) {
        if (bits > bytes.size() * 8) throw std::invalid_argument("BitString: not enough bytes");
        BitString out(bits);
        std::copy_n(bytes.begin(), out.bytes_.size(), out.bytes_.begin());
        out.clear_tail();
        return out;
    }

    std::size_t size() const noexcept { return bits_; }
    bool empty() const noexcept { return bits_ == 0; }
    std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

    bool bit(std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1U; }
    void set_bit(std::size_t i, bool v) {
        const auto mask = static_cast<std::uint8_t>(1U << (7 - i % 8));
        if (v) {
            bytes_[i / 8] |= mask;
        } else {
            bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
        }
    }
    void flip_bit(std::size_t i) { set_bit(i, !bit(i)); }

    void append(const BitString& other) {
        if (bits_ % 8 == 0) {
            bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
            bits_ += other.bits_;
            return;
        }
        const std::size_t start = bits_;
        bits_ += other.bits_;
        bytes_.resize((bits_ + 7) / 8, 0);
        for (std::size_t i = 0; i < other.bits_; ++i) set_bit(start + i, other.bit(i));
    }

    /// Bits [offset, offset + length).
    BitString slice(std::size_t offset, std::size_t length) const {
        if (offset + length > bits_) throw std::out_of_range("BitString::slice past end");
        BitString out(length);
        if (offset % 8 == 0) {
            std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(offset / 8), out.bytes_.size(),
                        out.bytes_.begin());
            out.clear_tail();
            return out;
        }
        for (std::size_t i = 0; i < length; ++i) out.set_bit(i, bit(offset + i));
        return out;
    }

    BitString& operator^=(const BitString& other) {
        if (other.bits_ != bits_) throw std::invalid_argument("BitString: XOR of unequal lengths");
        for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
        return *this;
    }
    friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

    /// Lowercase hex of the padded byte representation.
    std::string hex() const {
        static constexpr char kDigits[] = "0123456789abcdef";
        std::string out;
        out.reserve(bytes_.size() * 2);
        for (std::uint8_t b : bytes_) {
            out += kDigits[b >> 4];
            out += kDigits[b & 0xF];
        }
        return out;
    }

    friend bool operator==(const BitString&, const BitString&) = default;

  private:
    void clear_tail() {
        if (bits_ % 8 != 0) bytes_.back() &= static_cast<std::uint8_t>(0xFF << (8 - bits_ % 8));
    }

    std::size_t bits_ = 0;
    std::vector<std::uint8_t> bytes_;
};

}  // namespace madc
