#include "cqed/serialize.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cqed {

namespace {

constexpr std::array<char, 8> kMagic{'C', 'Q', 'E', 'D', 'S', 'V', '0', '1'};
constexpr const char* kTextTag = "cqed-state";

HilbertSpace space_from_header(int atom_levels, int n_max_a, int n_max_b) {
  if (atom_levels == 1) return make_field_space(n_max_a, n_max_b);
  return make_space(atom_levels, n_max_a, n_max_b);
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t k = 0; k < sizeof(T); ++k) bytes[k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw ValidationError("binary state: unexpected end of data");
  U bits = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) bits |= static_cast<U>(bytes[k]) << (8 * k);
  return std::bit_cast<T>(bits);
}

// strtod rather than stod: subnormal amplitudes must round-trip, not throw.
double parse_double(const std::string& token) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') throw ValidationError("text state: bad number '" + token + "'");
  return value;
}

}  // namespace

void write_state_text(std::ostream& out, const StateVector& state) {
  const HilbertSpace& s = state.space();
  out << kTextTag << " 1 " << s.atom_levels() << ' ' << s.n_max_a() << ' ' << s.n_max_b() << '\n';
  char buf[64];
  for (const Scalar& z : state.amplitudes()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", z.real(), z.imag());
    out << buf;
  }
}

StateVector read_state_text(std::istream& in) {
  std::string tag;
  int version = 0, levels = 0, na = 0, nb = 0;
  if (!(in >> tag >> version >> levels >> na >> nb) || tag != kTextTag || version != 1) {
    throw ValidationError("text state: bad header");
  }
  const HilbertSpace space = space_from_header(levels, na, nb);
  Vector v(space.total_dim());
  std::string re, im;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!(in >> re >> im)) throw ValidationError("text state: truncated amplitude list");
    v[k] = Scalar{parse_double(re), parse_double(im)};
  }
  return StateVector(space, std::move(v));
}

void write_state_binary(std::ostream& out, const StateVector& state) {
  const HilbertSpace& s = state.space();
  out.write(kMagic.data(), kMagic.size());
  put_le<std::int32_t>(out, s.atom_levels());
  put_le<std::int32_t>(out, s.n_max_a());
  put_le<std::int32_t>(out, s.n_max_b());
  for (const Scalar& z : state.amplitudes()) {
    put_le<double>(out, z.real());
    put_le<double>(out, z.imag());
  }
}

StateVector read_state_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ValidationError("binary state: bad magic");
  const int levels = get_le<std::int32_t>(in);
  const int na = get_le<std::int32_t>(in);
  const int nb = get_le<std::int32_t>(in);
  const HilbertSpace space = space_from_header(levels, na, nb);
  Vector v(space.total_dim());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double re = get_le<double>(in);
    const double im = get_le<double>(in);
    v[k] = Scalar{re, im};
  }
  return StateVector(space, std::move(v));
}

void save_state(const std::string& path, const StateVector& state, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  if (binary) {
    write_state_binary(out, state);
  } else {
    write_state_text(out, state);
  }
}

StateVector load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  in.clear();
  in.seekg(0);
  if (head == kMagic) return read_state_binary(in);
  return read_state_text(in);
}

}  // namespace cqed
