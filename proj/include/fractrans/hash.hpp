#pragma once

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "fractrans/error.hpp"

namespace fractrans {

/// Lowercase hex SHA-256 of a byte string.
inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
    throw IoError("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

inline std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return sha256_hex(std::string(std::istreambuf_iterator<char>(in), {}));
}

}  // namespace fractrans
