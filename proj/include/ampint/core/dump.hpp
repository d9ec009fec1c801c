#pragma once

// Flat binary dump shared by envelopes (complex payload) and photocurrents (real
// payload). Little-endian, 64-byte header:
//
//   offset  size  field
//        0     8  magic "AMPINTDP"
//        8     4  format version (1)
//       12     4  payload kind: 0 = interleaved (re, im) float64, 1 = float64
//       16     8  dt [s]
//       24     8  n (samples)
//       32     8  omega0 [rad/s]
//       40     8  t0 [s]
//       48     8  valid_from (sample index)
//       56     4  polarization: 0 scalar, 1 x, 2 y
//       60     4  reserved (zero)

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "ampint/core/error.hpp"

namespace ampint::dump {

inline constexpr std::array<char, 8> kMagic{'A', 'M', 'P', 'I', 'N', 'T', 'D', 'P'};
inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 64;

enum class Payload : std::uint32_t { complex = 0, real = 1 };

struct Header {
    Payload payload = Payload::complex;
    double dt = 0.0;
    std::uint64_t n = 0;
    double omega0 = 0.0;
    double t0 = 0.0;
    std::uint64_t valid_from = 0;
    std::uint32_t pol = 0;
};

namespace detail {
template <class T> void put(std::array<char, kHeaderBytes> &buf, std::size_t off, T v) {
    std::memcpy(buf.data() + off, &v, sizeof(T));
}
template <class T> T get(const std::array<char, kHeaderBytes> &buf, std::size_t off) {
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    return v;
}
} // namespace detail

/// `values` holds n doubles (real payload) or 2n doubles (complex payload).
inline void write(const std::string &path, const Header &h, const std::vector<double> &values) {
    const std::size_t expect = h.payload == Payload::complex ? 2 * h.n : h.n;
    if (values.size() != expect) throw Error("dump: payload length does not match header");
    std::array<char, kHeaderBytes> buf{};
    std::memcpy(buf.data(), kMagic.data(), kMagic.size());
    detail::put(buf, 8, kVersion);
    detail::put(buf, 12, static_cast<std::uint32_t>(h.payload));
    detail::put(buf, 16, h.dt);
    detail::put(buf, 24, h.n);
    detail::put(buf, 32, h.omega0);
    detail::put(buf, 40, h.t0);
    detail::put(buf, 48, h.valid_from);
    detail::put(buf, 56, h.pol);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("dump: cannot open " + path + " for writing");
    out.write(buf.data(), buf.size());
    out.write(reinterpret_cast<const char *>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!out) throw Error("dump: write failed for " + path);
}

inline std::pair<Header, std::vector<double>> read(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("dump: cannot open " + path);
    std::array<char, kHeaderBytes> buf{};
    in.read(buf.data(), buf.size());
    if (!in || std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0) throw Error("dump: bad magic in " + path);
    if (detail::get<std::uint32_t>(buf, 8) != kVersion) throw Error("dump: unsupported version in " + path);
    Header h;
    h.payload = static_cast<Payload>(detail::get<std::uint32_t>(buf, 12));
    h.dt = detail::get<double>(buf, 16);
    h.n = detail::get<std::uint64_t>(buf, 24);
    h.omega0 = detail::get<double>(buf, 32);
    h.t0 = detail::get<double>(buf, 40);
    h.valid_from = detail::get<std::uint64_t>(buf, 48);
    h.pol = detail::get<std::uint32_t>(buf, 56);
    std::vector<double> values(h.payload == Payload::complex ? 2 * h.n : h.n);
    in.read(reinterpret_cast<char *>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw Error("dump: truncated payload in " + path);
    return {h, std::move(values)};
}

} // namespace ampint::dump
