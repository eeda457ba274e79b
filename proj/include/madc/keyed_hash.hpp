#pragma once

// Counter-mode keyed BLAKE2b (libsodium) used to generate file contents and to
// stand in for the map and reduce functions.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <sodium.h>

#include "madc/bitstring.hpp"

namespace madc {

namespace detail {

inline void ensure_sodium() {
    static const bool ready = sodium_init() >= 0;
    if (!ready) throw std::runtime_error("libsodium initialisation failed");
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace detail

/// Message builder for keyed_stream: fields are length-delimited so distinct
/// field sequences never collide.
class HashInput {
  public:
    explicit HashInput(std::string_view domain) {
        bytes_.assign(domain.begin(), domain.end());
        bytes_.push_back(0);
    }
    HashInput& u64(std::uint64_t v) {
        detail::put_u64(bytes_, v);
        return *this;
    }
    HashInput& bits(const BitString& b) {
        detail::put_u64(bytes_, b.size());
        bytes_.insert(bytes_.end(), b.bytes().begin(), b.bytes().end());
        return *this;
    }
    const std::vector<std::uint8_t>& data() const noexcept { return bytes_; }

  private:
    std::vector<std::uint8_t> bytes_;
};

/// `bits` output bits: BLAKE2b-512(key, message || counter) for counter = 0, 1, ...
inline BitString keyed_stream(std::uint64_t key, const HashInput& input, std::size_t bits) {
    detail::ensure_sodium();
    std::array<std::uint8_t, crypto_generichash_KEYBYTES> k{};
    for (int i = 0; i < 8; ++i) k[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(key >> (8 * i));
    constexpr std::string_view kPad = "madc-key-padding";
    for (std::size_t i = 8; i < k.size(); ++i) k[i] = static_cast<std::uint8_t>(kPad[i % kPad.size()]);

    std::vector<std::uint8_t> out;
    out.reserve((bits + 7) / 8 + crypto_generichash_BYTES_MAX);
    std::vector<std::uint8_t> msg = input.data();
    const std::size_t base = msg.size();
    for (std::uint64_t counter = 0; out.size() * 8 < bits; ++counter) {
        msg.resize(base);
        detail::put_u64(msg, counter);
        std::array<std::uint8_t, crypto_generichash_BYTES_MAX> block{};
        crypto_generichash(block.data(), block.size(), msg.data(), msg.size(), k.data(), k.size());
        out.insert(out.end(), block.begin(), block.end());
    }
    return BitString::from_bytes(out, bits);
}

}  // namespace madc
