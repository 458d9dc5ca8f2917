#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "riccilab/tensor.hpp"

namespace riccilab {

// Flat binary field layout (little-endian host):
//   "RLTF" | u32 version | u32 dim | u32 rank | rank x u8 slot |
//   dim x u64 extent | dim x f64 period | points x comps f64, point-major
//   (for each grid point in lexicographic order, all components in flat
//   component order).
namespace detail {

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("unexpected end of stream");
  return v;
}

}  // namespace detail

inline void write_field(std::ostream& os, const TensorField<double>& f) {
  os.write("RLTF", 4);
  detail::write_pod<std::uint32_t>(os, 1);
  detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(f.dim()));
  detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(f.rank()));
  for (Slot s : f.slots())
    detail::write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(s));
  for (int a = 0; a < f.dim(); ++a)
    detail::write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(f.chart()->extent(a)));
  for (int a = 0; a < f.dim(); ++a)
    detail::write_pod<double>(os, f.chart()->period(a));
  for (long p = 0; p < f.points(); ++p)
    for (long c = 0; c < f.comps(); ++c) detail::write_pod<double>(os, f.data()(p, c));
  if (!os) throw IoError("write_field: stream failure");
}

inline TensorField<double> read_field(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "RLTF")
    throw IoError("read_field: bad magic");
  const auto version = detail::read_pod<std::uint32_t>(is);
  if (version != 1) throw IoError("read_field: unsupported version");
  const int dim = static_cast<int>(detail::read_pod<std::uint32_t>(is));
  const int rank = static_cast<int>(detail::read_pod<std::uint32_t>(is));
  SlotList slots;
  for (int s = 0; s < rank; ++s)
    slots.push_back(static_cast<Slot>(detail::read_pod<std::uint8_t>(is)));
  std::vector<int> extents(dim);
  for (int a = 0; a < dim; ++a)
    extents[a] = static_cast<int>(detail::read_pod<std::uint64_t>(is));
  std::vector<double> periods(dim);
  for (int a = 0; a < dim; ++a) periods[a] = detail::read_pod<double>(is);

  TensorField<double> f(std::make_shared<const Chart>(dim, extents, periods),
                        slots);
  for (long p = 0; p < f.points(); ++p)
    for (long c = 0; c < f.comps(); ++c) f.data()(p, c) = detail::read_pod<double>(is);
  return f;
}

// Trajectory checkpoint: "RLCK" | f64 time | field record.
inline void write_checkpoint(std::ostream& os, double time,
                             const TensorField<double>& f) {
  os.write("RLCK", 4);
  detail::write_pod<double>(os, time);
  write_field(os, f);
}

inline std::pair<double, TensorField<double>> read_checkpoint(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "RLCK")
    throw IoError("read_checkpoint: bad magic");
  const double time = detail::read_pod<double>(is);
  return {time, read_field(is)};
}

inline void save_field(const std::string& path, const TensorField<double>& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_field(os, f);
}

inline TensorField<double> load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_field(is);
}

}  // namespace riccilab
