#pragma once

// GF(2^m) arithmetic for m in {1, 2, 4, 8} and the linear algebra used to
// encode and decode inside a sub-generation.
//
// Payloads are byte strings. For m < 8 each byte packs 8/m field symbols and
// region operations act symbol-wise, so a GF(2) combination is a plain XOR.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sgnc {

using Element = std::uint8_t;
using Payload = std::vector<std::uint8_t>;

class Field {
 public:
  /// Shared, immutable field instance. Throws std::invalid_argument for
  /// unsupported degrees.
  static const Field& get(int bits);

  int bits() const noexcept { return bits_; }
  int size() const noexcept { return size_; }
  unsigned polynomial() const noexcept { return polynomial_; }

  static Element add(Element a, Element b) noexcept { return a ^ b; }
  static Element sub(Element a, Element b) noexcept { return a ^ b; }
  Element mul(Element a, Element b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  /// Throws DivisionByZero for 0.
  Element inv(Element a) const;
  Element div(Element a, Element b) const;

  /// dst[i] += c * src[i], symbol-wise.
  void mul_add_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, Element c) const;
  /// dst[i] *= c, symbol-wise.
  void scale_region(std::span<std::uint8_t> dst, Element c) const;

  /// Uniform element (zero included) from a random word.
  Element element_from(std::uint64_t word) const noexcept {
    return static_cast<Element>(word & static_cast<unsigned>(size_ - 1));
  }

 private:
  explicit Field(int bits);

  int bits_;
  int size_;
  unsigned polynomial_;
  std::array<Element, 512> exp_{};
  std::array<int, 256> log_{};
  // region_[c * 256 + b]: byte b with every packed symbol multiplied by c.
  std::vector<std::uint8_t> region_;
};

/// One coded transmission of a sub-generation.
struct CodedPacket {
  int subgen = 0;
  std::vector<Element> coefficients;  // one per sub-generation packet
  Payload payload;
};

/// payload = sum_k coefficients[k] * packets[k]. Throws LengthMismatch.
CodedPacket encode(const Field& field, std::span<const std::span<const std::uint8_t>> packets,
                   std::span<const Element> coefficients, int subgen = 0);
CodedPacket encode(const Field& field, const std::vector<Payload>& packets,
                   std::span<const Element> coefficients, int subgen = 0);

/// Removes the contribution of every known packet: `known[i]` points at the
/// payload of coefficient position i when the receiver already holds it.
/// Known positions end with a zero coefficient.
CodedPacket receiver_reduce(const Field& field, CodedPacket coded,
                            std::span<const Payload* const> known);

/// Incremental Gaussian elimination kept in reduced row echelon form.
class Decoder {
 public:
  Decoder(const Field& field, int unknowns, std::size_t payload_bytes);

  /// Adds an equation over the unknowns. Returns true when it raised the
  /// rank. A redundant equation with a nonzero residual payload throws
  /// InconsistentSystem.
  bool add(std::span<const Element> coefficients, std::span<const std::uint8_t> payload);

  int rank() const noexcept { return static_cast<int>(rows_.size()); }
  int unknowns() const noexcept { return unknowns_; }
  bool complete() const noexcept { return rank() == unknowns_; }
  const Field& field() const noexcept { return *field_; }

  /// Payload of unknown `index`; requires complete().
  std::span<const std::uint8_t> decoded(int index) const;

 private:
  struct Row {
    int pivot;
    std::vector<Element> coefficients;
    Payload payload;
  };

  const Field* field_;
  int unknowns_;
  std::size_t payload_bytes_;
  std::vector<Row> rows_;
  std::vector<int> row_of_pivot_;
};

struct SolveResult {
  int rank = 0;
  std::optional<std::vector<Payload>> decoded;  // present at full rank
};

/// Batch form of Decoder: rank of the system and, at full rank, every
/// unknown's payload. Throws LengthMismatch or InconsistentSystem.
SolveResult rank_and_solve(const Field& field, const std::vector<std::vector<Element>>& rows,
                           const std::vector<Payload>& payloads);

}  // namespace sgnc
