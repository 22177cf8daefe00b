#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace fpopt {

// Minimal SHA-256, used to stamp artifact manifests. Verified against the
// FIPS 180-2 test vectors in the unit tests.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t len);
  void update(std::string_view text) { update(text.data(), text.size()); }
  std::string hex_digest();  // finalizes; do not update afterwards

  static std::string of_string(std::string_view text);
  static std::string of_file(const std::string& path);  // throws IoError

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint64_t total_len_ = 0;
  std::uint8_t buffer_[64];
  std::size_t buffer_len_ = 0;
};

}  // namespace fpopt
