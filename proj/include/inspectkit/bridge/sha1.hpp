#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace inspectkit::git {

/// Incremental SHA-1 (FIPS 180-4).
class Sha1 {
 public:
  Sha1();
  void update(std::string_view data);
  std::array<std::uint8_t, 20> finish();

 private:
  void compress(const std::uint8_t* block);

  std::array<std::uint32_t, 5> h_;
  std::array<std::uint8_t, 64> buffer_{};
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
};

/// 20-byte object name.
class ObjectId {
 public:
  ObjectId() = default;
  explicit ObjectId(const std::array<std::uint8_t, 20>& bytes) : bytes_(bytes) {}

  static ObjectId of(std::string_view raw_object);
  /// Accepts 40 lower- or upper-case hex digits.
  static std::optional<ObjectId> from_hex(std::string_view hex);

  std::string hex() const;
  const std::array<std::uint8_t, 20>& bytes() const { return bytes_; }

  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;

 private:
  std::array<std::uint8_t, 20> bytes_{};
};

}  // namespace inspectkit::git
