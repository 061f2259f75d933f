#include "sgnc/galois.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "sgnc/error.hpp"

namespace sgnc {

namespace {

unsigned reduction_polynomial(int bits) {
  switch (bits) {
    case 1: return 0x3;     // x + 1
    case 2: return 0x7;     // x^2 + x + 1
    case 4: return 0x13;    // x^4 + x + 1
    case 8: return 0x11D;   // x^8 + x^4 + x^3 + x^2 + 1
    default: throw std::invalid_argument("unsupported field degree " + std::to_string(bits));
  }
}

}  // namespace

Field::Field(int bits) : bits_(bits), size_(1 << bits), polynomial_(reduction_polynomial(bits)) {
  const int order = size_ - 1;
  if (bits_ == 1) {
    exp_.fill(1);
    log_.fill(0);
  } else {
    unsigned x = 1;
    for (int i = 0; i < order; ++i) {
      exp_[i] = static_cast<Element>(x);
      log_[x] = i;
      x <<= 1;
      if (x & static_cast<unsigned>(size_)) x ^= polynomial_;
    }
    for (int i = order; i < 512; ++i) exp_[i] = exp_[i % order];
  }

  const int per_byte = 8 / bits_;
  const unsigned symbol_mask = static_cast<unsigned>(size_ - 1);
  region_.assign(static_cast<std::size_t>(size_) * 256, 0);
  for (int c = 0; c < size_; ++c) {
    for (int b = 0; b < 256; ++b) {
      unsigned out = 0;
      for (int s = 0; s < per_byte; ++s) {
        const auto sym = static_cast<Element>((static_cast<unsigned>(b) >> (s * bits_)) & symbol_mask);
        out |= static_cast<unsigned>(mul(static_cast<Element>(c), sym)) << (s * bits_);
      }
      region_[static_cast<std::size_t>(c) * 256 + b] = static_cast<std::uint8_t>(out);
    }
  }
}

const Field& Field::get(int bits) {
  static const Field gf2(1);
  static const Field gf4(2);
  static const Field gf16(4);
  static const Field gf256(8);
  switch (bits) {
    case 1: return gf2;
    case 2: return gf4;
    case 4: return gf16;
    case 8: return gf256;
    default: throw std::invalid_argument("unsupported field degree " + std::to_string(bits));
  }
}

Element Field::inv(Element a) const {
  if (a == 0) throw DivisionByZero("zero has no inverse");
  if (bits_ == 1) return 1;
  return exp_[(size_ - 1 - log_[a]) % (size_ - 1)];
}

Element Field::div(Element a, Element b) const { return mul(a, inv(b)); }

void Field::mul_add_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, Element c) const {
  if (dst.size() != src.size()) throw LengthMismatch("region lengths differ");
  if (c == 0) return;
  if (c == 1) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return;
  }
  const std::uint8_t* table = region_.data() + static_cast<std::size_t>(c) * 256;
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= table[src[i]];
}

void Field::scale_region(std::span<std::uint8_t> dst, Element c) const {
  if (c == 1) return;
  const std::uint8_t* table = region_.data() + static_cast<std::size_t>(c) * 256;
  for (auto& b : dst) b = table[b];
}

CodedPacket encode(const Field& field, std::span<const std::span<const std::uint8_t>> packets,
                   std::span<const Element> coefficients, int subgen) {
  if (packets.size() != coefficients.size())
    throw LengthMismatch(std::to_string(coefficients.size()) + " coefficients for " +
                         std::to_string(packets.size()) + " packets");
  CodedPacket out;
  out.subgen = subgen;
  out.coefficients.assign(coefficients.begin(), coefficients.end());
  const std::size_t len = packets.empty() ? 0 : packets.front().size();
  out.payload.assign(len, 0);
  for (std::size_t k = 0; k < packets.size(); ++k) {
    if (packets[k].size() != len) throw LengthMismatch("payload lengths differ");
    field.mul_add_region(out.payload, packets[k], coefficients[k]);
  }
  return out;
}

CodedPacket encode(const Field& field, const std::vector<Payload>& packets,
                   std::span<const Element> coefficients, int subgen) {
  std::vector<std::span<const std::uint8_t>> views(packets.begin(), packets.end());
  return encode(field, views, coefficients, subgen);
}

CodedPacket receiver_reduce(const Field& field, CodedPacket coded, std::span<const Payload* const> known) {
  if (known.size() != coded.coefficients.size()) throw LengthMismatch("known map does not match coefficients");
  for (std::size_t i = 0; i < known.size(); ++i) {
    if (known[i] == nullptr) continue;
    if (known[i]->size() != coded.payload.size()) throw LengthMismatch("known payload length differs");
    field.mul_add_region(coded.payload, *known[i], coded.coefficients[i]);
    coded.coefficients[i] = 0;
  }
  return coded;
}

Decoder::Decoder(const Field& field, int unknowns, std::size_t payload_bytes)
    : field_(&field), unknowns_(unknowns), payload_bytes_(payload_bytes), row_of_pivot_(unknowns, -1) {
  if (unknowns < 0) throw LengthMismatch("negative unknown count");
}

bool Decoder::add(std::span<const Element> coefficients, std::span<const std::uint8_t> payload) {
  if (coefficients.size() != static_cast<std::size_t>(unknowns_)) throw LengthMismatch("coefficient count differs");
  if (payload.size() != payload_bytes_) throw LengthMismatch("payload length differs");
  const Field& f = *field_;

  Row row{-1, std::vector<Element>(coefficients.begin(), coefficients.end()),
          Payload(payload.begin(), payload.end())};
  for (const auto& existing : rows_) {
    const Element c = row.coefficients[existing.pivot];
    if (c == 0) continue;
    for (int j = 0; j < unknowns_; ++j) row.coefficients[j] ^= f.mul(c, existing.coefficients[j]);
    f.mul_add_region(row.payload, existing.payload, c);
  }
  auto lead = std::find_if(row.coefficients.begin(), row.coefficients.end(), [](Element e) { return e != 0; });
  if (lead == row.coefficients.end()) {
    if (std::any_of(row.payload.begin(), row.payload.end(), [](std::uint8_t b) { return b != 0; }))
      throw InconsistentSystem("redundant equation with nonzero residual");
    return false;
  }
  row.pivot = static_cast<int>(lead - row.coefficients.begin());
  const Element scale = f.inv(*lead);
  for (auto& e : row.coefficients) e = f.mul(e, scale);
  f.scale_region(row.payload, scale);

  for (auto& existing : rows_) {
    const Element c = existing.coefficients[row.pivot];
    if (c == 0) continue;
    for (int j = 0; j < unknowns_; ++j) existing.coefficients[j] ^= f.mul(c, row.coefficients[j]);
    f.mul_add_region(existing.payload, row.payload, c);
  }
  row_of_pivot_[row.pivot] = static_cast<int>(rows_.size());
  rows_.push_back(std::move(row));
  return true;
}

std::span<const std::uint8_t> Decoder::decoded(int index) const {
  if (!complete()) throw InconsistentSystem("decoder is not at full rank");
  return rows_.at(row_of_pivot_.at(index)).payload;
}

SolveResult rank_and_solve(const Field& field, const std::vector<std::vector<Element>>& rows,
                           const std::vector<Payload>& payloads) {
  if (rows.size() != payloads.size()) throw LengthMismatch("row and payload counts differ");
  const int unknowns = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  const std::size_t len = payloads.empty() ? 0 : payloads.front().size();
  Decoder decoder(field, unknowns, len);
  for (std::size_t i = 0; i < rows.size(); ++i) decoder.add(rows[i], payloads[i]);

  SolveResult result;
  result.rank = decoder.rank();
  if (decoder.complete()) {
    std::vector<Payload> out;
    for (int i = 0; i < unknowns; ++i) {
      auto p = decoder.decoded(i);
      out.emplace_back(p.begin(), p.end());
    }
    result.decoded = std::move(out);
  }
  return result;
}

}  // namespace sgnc
