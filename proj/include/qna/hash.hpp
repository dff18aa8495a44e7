#pragma once

#include <cstdint>
#include <string>

namespace qna {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file_hex(const std::string& path);  // throws when unreadable

// First 8 bytes of sha256(label + ":" + seed), little endian. Used to fan a
// global seed out into independent per-stage seeds.
std::uint64_t derive_seed(std::uint64_t global_seed, const std::string& label);

}  // namespace qna
