#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace stixdesk::crypto {

void random_bytes(std::span<std::uint8_t> out);

/// `bytes` random bytes rendered as lowercase hex.
std::string random_hex(std::size_t bytes);

enum class HashCost { Interactive, Minimal };

/// Salted Argon2id digest in the libsodium string format.
std::string hash_password(std::string_view password, HashCost cost);
bool verify_password(const std::string& digest, std::string_view password);

/// Hex BLAKE2b digest; session tokens are stored only in this form.
std::string token_digest(std::string_view token);

}  // namespace stixdesk::crypto
