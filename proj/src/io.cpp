#include "mhdlab/io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace mhdlab {

namespace {

using nlohmann::json;

void write_bin(const std::filesystem::path& path, const Real* data, std::int64_t count) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  os.write(reinterpret_cast<const char*>(data), count * static_cast<std::int64_t>(sizeof(Real)));
}

std::vector<Real> read_bin(const std::filesystem::path& path, std::int64_t count) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open for reading: " + path.string());
  std::vector<Real> data(static_cast<size_t>(count));
  is.read(reinterpret_cast<char*>(data.data()), count * static_cast<std::int64_t>(sizeof(Real)));
  if (!is) throw ConfigError("short read: " + path.string());
  return data;
}

json grid_sidecar(const Grid& g) {
  json j;
  j["n"] = g.n;
  j["sizes"] = std::vector<int>(g.sizes.begin(), g.sizes.begin() + g.n);
  j["period"] = g.period;
  return j;
}

Grid grid_from_sidecar(const json& j) {
  Grid g;
  g.n = j.at("n").get<int>();
  auto sizes = j.at("sizes").get<std::vector<int>>();
  if (static_cast<int>(sizes.size()) != g.n) throw ConfigError("sidecar: sizes/n mismatch");
  for (int a = 0; a < g.n; ++a) g.sizes[a] = sizes[a];
  g.period = j.at("period").get<Real>();
  g.validate();
  return g;
}

json load_sidecar(const std::filesystem::path& base) {
  std::ifstream is(base.string() + ".json");
  if (!is) throw ConfigError("cannot open sidecar: " + base.string() + ".json");
  json j;
  is >> j;
  return j;
}

void save_sidecar(const std::filesystem::path& base, const json& j) {
  std::ofstream os(base.string() + ".json");
  os << j.dump(2) << "\n";
}

} // namespace

void dump_field(const std::filesystem::path& base, const Field& f) {
  write_bin(base.string() + ".bin", f.v.data(), f.grid.points());
  save_sidecar(base, grid_sidecar(f.grid));
}

Field load_field(const std::filesystem::path& base) {
  const json j = load_sidecar(base);
  const Grid g = grid_from_sidecar(j);
  auto data = read_bin(base.string() + ".bin", g.points());
  Field f(g);
  for (std::int64_t i = 0; i < g.points(); ++i) f.v[i] = data[static_cast<size_t>(i)];
  return f;
}

void dump_tensor(const std::filesystem::path& base, const TensorField& t) {
  const std::int64_t np = t.grid.points();
  std::vector<Real> all(static_cast<size_t>(np * t.grid.n * t.grid.n));
  for (size_t c = 0; c < t.comp.size(); ++c)
    for (std::int64_t i = 0; i < np; ++i) all[c * np + i] = t.comp[c].v[i];
  write_bin(base.string() + ".bin", all.data(), static_cast<std::int64_t>(all.size()));
  json j = grid_sidecar(t.grid);
  j["tensor_shape"] = {t.grid.n, t.grid.n};
  save_sidecar(base, j);
}

TensorField load_tensor(const std::filesystem::path& base) {
  const json j = load_sidecar(base);
  const Grid g = grid_from_sidecar(j);
  const std::int64_t np = g.points();
  auto data = read_bin(base.string() + ".bin", np * g.n * g.n);
  TensorField t(g);
  for (size_t c = 0; c < t.comp.size(); ++c)
    for (std::int64_t i = 0; i < np; ++i) t.comp[c].v[i] = data[c * np + i];
  return t;
}

void dump_spacetime(const std::filesystem::path& base, const SpaceTimeField& u) {
  const std::int64_t np = u.grid.points();
  std::vector<Real> all(static_cast<size_t>(np) * u.nt);
  for (int j = 0; j < u.nt; ++j)
    for (std::int64_t i = 0; i < np; ++i) all[static_cast<size_t>(j) * np + i] = u.slices[j].v[i];
  write_bin(base.string() + ".bin", all.data(), static_cast<std::int64_t>(all.size()));
  json j = grid_sidecar(u.grid);
  j["t0"] = u.t0;
  j["dt"] = u.dt;
  j["nt"] = u.nt;
  save_sidecar(base, j);
}

SpaceTimeField load_spacetime(const std::filesystem::path& base) {
  const json j = load_sidecar(base);
  const Grid g = grid_from_sidecar(j);
  SpaceTimeField u(g, j.at("t0").get<Real>(), j.at("dt").get<Real>(), j.at("nt").get<int>());
  const std::int64_t np = g.points();
  auto data = read_bin(base.string() + ".bin", np * u.nt);
  for (int s = 0; s < u.nt; ++s)
    for (std::int64_t i = 0; i < np; ++i) u.slices[s].v[i] = data[static_cast<size_t>(s) * np + i];
  return u;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path.string());
  os << text;
}

std::uint64_t fnv1a_bytes(const void* data, size_t size, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot hash missing file: " + path.string());
  std::uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (is) {
    is.read(buf, sizeof(buf));
    h = fnv1a_bytes(buf, static_cast<size_t>(is.gcount()), h);
  }
  return h;
}

} // namespace mhdlab
