#include "swflow/snapshot.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace swflow {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian");

void write_snapshot(const std::string& base, const Field& f, const SnapshotMeta& meta) {
  const std::int64_t sites = f.grid.site_count();
  const int lanes = f.lanes();
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(sites) * lanes * 2);
  for (std::int64_t row = 0; row < sites; ++row) {
    for (int l = 0; l < lanes; ++l) {
      Complex v = f.data(row, l);
      buf.push_back(v.real());
      buf.push_back(v.imag());
    }
  }
  std::ofstream bin(base + ".f64", std::ios::binary | std::ios::trunc);
  if (!bin) throw std::runtime_error("write_snapshot: cannot open " + base + ".f64");
  bin.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!bin) throw std::runtime_error("write_snapshot: write failed for " + base + ".f64");
  bin.close();

  nlohmann::json j;
  j["n"] = f.grid.n;
  j["sizes"] = f.grid.sizes;
  j["lengths"] = f.grid.lengths;
  j["rank"] = f.rank;
  j["spinor_rank"] = f.spinor_rank;
  j["form_degree"] = f.form_degree;
  j["purely_imaginary"] = f.purely_imaginary;
  j["time"] = meta.time;
  j["k"] = meta.k;
  j["S0"] = meta.s0;
  j["layout"] = "row-major sites, per-site block tensor-major spinor-fastest, (re,im) f64 LE";
  std::ofstream side(base + ".json", std::ios::trunc);
  if (!side) throw std::runtime_error("write_snapshot: cannot open " + base + ".json");
  side << j.dump(2) << "\n";
}

LoadedSnapshot read_snapshot(const std::string& base) {
  std::ifstream side(base + ".json");
  if (!side) throw std::runtime_error("read_snapshot: cannot open " + base + ".json");
  nlohmann::json j = nlohmann::json::parse(side);

  TorusGrid grid = make_grid(j.at("n").get<int>(), j.at("sizes").get<std::vector<int>>(),
                             j.at("lengths").get<std::vector<double>>());
  Field f = make_field(grid, j.at("rank").get<int>(), j.at("spinor_rank").get<int>(),
                       j.value("form_degree", 0));
  f.purely_imaginary = j.value("purely_imaginary", false);

  const std::int64_t sites = grid.site_count();
  const int lanes = f.lanes();
  std::vector<double> buf(static_cast<std::size_t>(sites) * lanes * 2);
  std::ifstream bin(base + ".f64", std::ios::binary);
  if (!bin) throw std::runtime_error("read_snapshot: cannot open " + base + ".f64");
  bin.read(reinterpret_cast<char*>(buf.data()),
           static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (bin.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(double)))
    throw std::runtime_error("read_snapshot: short read from " + base + ".f64");

  std::size_t pos = 0;
  for (std::int64_t row = 0; row < sites; ++row) {
    for (int l = 0; l < lanes; ++l) {
      f.data(row, l) = Complex(buf[pos], buf[pos + 1]);
      pos += 2;
    }
  }
  SnapshotMeta meta;
  meta.time = j.at("time").get<double>();
  meta.k = j.at("k").get<int>();
  meta.s0 = j.at("S0").get<double>();
  return {std::move(f), meta};
}

}  // namespace swflow
