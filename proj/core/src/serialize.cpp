#include "preciseum/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace preciseum {

namespace {

constexpr std::array<char, 5> kMagic = {'X', 'A', 'R', 'R', '1'};

template <class UInt>
void put_le(std::ostream& out, UInt v) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  }
  out.write(bytes.data(), bytes.size());
}

template <class UInt>
UInt get_le(std::istream& in) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw FormatError("XARR1 stream truncated");
  }
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(bytes[i]) << (8 * i);
  return v;
}

void put_value(std::ostream& out, double v, FloatFormat f) {
  switch (f) {
    case FloatFormat::binary64: put_le(out, std::bit_cast<std::uint64_t>(v)); break;
    case FloatFormat::binary32: put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); break;
    case FloatFormat::binary16: put_le(out, encode_binary16(v)); break;
    case FloatFormat::bfloat16: put_le(out, encode_bfloat16(v)); break;
  }
}

double get_value(std::istream& in, FloatFormat f) {
  switch (f) {
    case FloatFormat::binary64: return std::bit_cast<double>(get_le<std::uint64_t>(in));
    case FloatFormat::binary32: return static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>(in)));
    case FloatFormat::binary16: return decode_binary16(get_le<std::uint16_t>(in));
    case FloatFormat::bfloat16: return decode_bfloat16(get_le<std::uint16_t>(in));
  }
  return 0.0;
}

}  // namespace

void save(const XArray& a, std::ostream& sink) {
  sink.write(kMagic.data(), kMagic.size());
  put_le(sink, static_cast<std::uint8_t>(a.format()));
  put_le(sink, static_cast<std::uint8_t>(a.rank()));
  for (auto extent : a.shape()) put_le(sink, static_cast<std::uint64_t>(extent));
  for (double v : a.values()) put_value(sink, v, a.format());
  for (auto b : a.bits()) put_le(sink, b);
  if (!sink) throw Error("failed writing XARR1 stream");
}

XArray load(std::istream& source) {
  std::array<char, 5> magic{};
  if (!source.read(magic.data(), magic.size())) throw FormatError("XARR1 stream truncated");
  if (magic != kMagic) throw FormatError("bad XARR1 magic");
  const auto code = get_le<std::uint8_t>(source);
  if (!is_valid_format_code(code)) throw FormatError("unknown format code " + std::to_string(code));
  const auto format = static_cast<FloatFormat>(code);
  const auto rank = get_le<std::uint8_t>(source);
  if (rank > kMaxRank) throw FormatError("XARR1 rank exceeds 8");
  Shape shape(rank);
  for (auto& extent : shape) {
    const auto e = get_le<std::uint64_t>(source);
    if (e > (std::uint64_t{1} << 48)) throw FormatError("XARR1 extent exceeds 2^48");
    extent = static_cast<std::size_t>(e);
  }
  const std::size_t n = element_count(shape);
  std::vector<double> values;
  std::vector<std::uint8_t> bits;
  // Grow as data arrives so a lying header cannot force a huge allocation.
  for (std::size_t i = 0; i < n; ++i) values.push_back(get_value(source, format));
  const int m = mantissa_bits(format);
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = get_le<std::uint8_t>(source);
    if (b > m) {
      throw ValidationError("exact bit count " + std::to_string(b) + " exceeds " +
                            std::string(format_name(format)) + " mantissa");
    }
    bits.push_back(b);
  }
  return XArray(std::move(shape), std::move(values), std::move(bits), format);
}

void save_file(const XArray& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save(a, out);
}

XArray load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return load(in);
}

}  // namespace preciseum
