#include "qna/hash.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "qna/error.hpp"

namespace qna {

namespace {

std::string digest_hex(const unsigned char* md, unsigned len) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

void sha256_raw(const std::string& bytes, unsigned char* md, unsigned* len) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw Error("sha256: cannot allocate digest context");
  if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, md, len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256: digest failure");
  }
  EVP_MD_CTX_free(ctx);
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  sha256_raw(bytes, md, &len);
  return digest_hex(md, len);
}

std::string sha256_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for hashing: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::uint64_t derive_seed(std::uint64_t global_seed, const std::string& label) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  sha256_raw(label + ":" + std::to_string(global_seed), md, &len);
  std::uint64_t out = 0;
  for (int i = 7; i >= 0; --i) out = (out << 8) | md[i];
  return out;
}

}  // namespace qna
