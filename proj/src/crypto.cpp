#include "crypto.hpp"

#include <sodium.h>

#include <stdexcept>

namespace stixdesk::crypto {

namespace {

void ensure_init() {
    static const bool ready = [] { return sodium_init() >= 0; }();
    if (!ready) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace

void random_bytes(std::span<std::uint8_t> out) {
    ensure_init();
    randombytes_buf(out.data(), out.size());
}

std::string random_hex(std::size_t bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string raw(bytes, '\0');
    random_bytes({reinterpret_cast<std::uint8_t*>(raw.data()), raw.size()});
    std::string out;
    out.reserve(bytes * 2);
    for (unsigned char c : raw) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

std::string hash_password(std::string_view password, HashCost cost) {
    ensure_init();
    const auto ops = cost == HashCost::Interactive ? crypto_pwhash_OPSLIMIT_INTERACTIVE : crypto_pwhash_OPSLIMIT_MIN;
    const auto mem = cost == HashCost::Interactive ? crypto_pwhash_MEMLIMIT_INTERACTIVE : crypto_pwhash_MEMLIMIT_MIN;
    char out[crypto_pwhash_STRBYTES];
    if (crypto_pwhash_str(out, password.data(), password.size(), ops, mem) != 0)
        throw std::runtime_error("password hashing ran out of memory");
    return out;
}

bool verify_password(const std::string& digest, std::string_view password) {
    ensure_init();
    return crypto_pwhash_str_verify(digest.c_str(), password.data(), password.size()) == 0;
}

std::string token_digest(std::string_view token) {
    ensure_init();
    static constexpr char digits[] = "0123456789abcdef";
    unsigned char out[crypto_generichash_BYTES];
    crypto_generichash(out, sizeof out, reinterpret_cast<const unsigned char*>(token.data()), token.size(), nullptr, 0);
    std::string hex;
    for (unsigned char c : out) {
        hex.push_back(digits[c >> 4]);
        hex.push_back(digits[c & 0xf]);
    }
    return hex;
}

}  // namespace stixdesk::crypto
