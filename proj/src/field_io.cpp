#include "dislo/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace dislo {
namespace {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

constexpr char kMagic[4] = {'D', 'L', 'F', 'D'};

template <class T> void put(std::ofstream& out, T v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

template <class T> T get(std::ifstream& in, const std::string& path) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ValidationError("truncated field file: " + path);
  return v;
}

}  // namespace

void write_field(const std::string& path, const FourierField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write field file: " + path);
  out.write(kMagic, 4);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, std::uint32_t(f.n()));
  put<std::uint32_t>(out, std::uint32_t(f.count()));
  put<std::uint32_t>(out, 0);
  for (int c = 0; c < f.count(); ++c) {
    Eigen::ArrayXXd s = f.samples(c);
    for (int i1 = 0; i1 < f.n(); ++i1)
      for (int i2 = 0; i2 < f.n(); ++i2) put<double>(out, s(i1, i2));
  }
}

FourierField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open field file: " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("not a field file: " + path);
  if (get<std::uint32_t>(in, path) != 1) throw ValidationError("unsupported field file version: " + path);
  int n = int(get<std::uint32_t>(in, path));
  int comps = int(get<std::uint32_t>(in, path));
  if (get<std::uint32_t>(in, path) != 0) throw ValidationError("unsupported field layout: " + path);
  if (n < 2 || n > (1 << 14) || (n & (n - 1))) throw ValidationError("bad grid size in field file: " + path);
  std::vector<Eigen::ArrayXXd> samples(std::size_t(comps), Eigen::ArrayXXd(n, n));
  for (auto& s : samples)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) s(i1, i2) = get<double>(in, path);
  return FourierField::from_samples(samples);
}

void write_field_csv(const std::string& path, const FourierField& f) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write field csv: " + path);
  out.precision(17);
  out << "x1,x2";
  for (int c = 0; c < f.count(); ++c) out << ",c" << c;
  out << '\n';
  auto samples = f.all_samples();
  for (int i1 = 0; i1 < f.n(); ++i1)
    for (int i2 = 0; i2 < f.n(); ++i2) {
      out << grid_point(i1, f.n()) << ',' << grid_point(i2, f.n());
      for (const auto& s : samples) out << ',' << s(i1, i2);
      out << '\n';
    }
}

}  // namespace dislo
