#include "axmhd/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace axmhd {

namespace {
const char* const kArrayNames[] = {"wtheta", "H", "rho", "ur", "uz", "psi"};

std::vector<const ScalarField*> array_ptrs(const State& st) {
  return {&st.wtheta, &st.H, &st.rho, &st.ur, &st.uz, &st.psi};
}

std::vector<ScalarField*> array_ptrs(State& st) {
  return {&st.wtheta, &st.H, &st.rho, &st.ur, &st.uz, &st.psi};
}
} // namespace

void write_snapshot(const std::string& path, const State& st) {
  if (!st.cache_valid) throw std::logic_error("write_snapshot: cache not valid");
  const Grid& g = st.grid();
  const std::size_t bytes = g.cells() * sizeof(double);
  std::ostringstream header;
  header.precision(17);
  header << "axmhd-snap v1 nr=" << g.nr << " nz=" << g.nz << " R=" << g.R << " Lz=" << g.Lz
         << " t=" << st.t << " arrays=";
  const auto arrays = array_ptrs(st);
  for (std::size_t k = 0; k < arrays.size(); ++k)
    header << (k ? "," : "") << kArrayNames[k] << "@" << k * bytes;
  header << "\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_snapshot: cannot open '" + path + "'");
  const std::string h = header.str();
  f.write(h.data(), static_cast<std::streamsize>(h.size()));
  for (const ScalarField* a : arrays)
    f.write(reinterpret_cast<const char*>(a->data().data()), static_cast<std::streamsize>(bytes));
  if (!f) throw std::runtime_error("write_snapshot: write failed for '" + path + "'");
}

State read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_snapshot: cannot open '" + path + "'");
  std::string header;
  if (!std::getline(f, header)) throw std::runtime_error("read_snapshot: missing header");
  std::istringstream hs(header);
  std::string magic, ver;
  hs >> magic >> ver;
  if (magic != "axmhd-snap" || ver != "v1")
    throw std::runtime_error("read_snapshot: bad magic in '" + path + "'");
  int nr = 0, nz = 0;
  double R = 0, Lz = 0, t = 0;
  std::string arrays_spec;
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::runtime_error("read_snapshot: malformed header token");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "nr") nr = std::stoi(val);
    else if (key == "nz") nz = std::stoi(val);
    else if (key == "R") R = std::stod(val);
    else if (key == "Lz") Lz = std::stod(val);
    else if (key == "t") t = std::stod(val);
    else if (key == "arrays") arrays_spec = val;
    else throw std::runtime_error("read_snapshot: unknown header key '" + key + "'");
  }
  const Grid g = build_grid(nr, nz, R, Lz);
  State st(g);
  st.t = t;
  const std::size_t bytes = g.cells() * sizeof(double);
  const std::streampos data_start = f.tellg();

  auto targets = array_ptrs(st);
  std::istringstream as(arrays_spec);
  std::string entry;
  std::size_t seen = 0;
  while (std::getline(as, entry, ',')) {
    const auto at = entry.find('@');
    if (at == std::string::npos) throw std::runtime_error("read_snapshot: malformed array entry");
    const std::string name = entry.substr(0, at);
    const std::size_t off = std::stoull(entry.substr(at + 1));
    ScalarField* dst = nullptr;
    for (std::size_t k = 0; k < targets.size(); ++k)
      if (name == kArrayNames[k]) dst = targets[k];
    if (!dst) throw std::runtime_error("read_snapshot: unknown array '" + name + "'");
    f.seekg(data_start + static_cast<std::streamoff>(off));
    f.read(reinterpret_cast<char*>(dst->data().data()), static_cast<std::streamsize>(bytes));
    if (!f) throw std::runtime_error("read_snapshot: truncated array '" + name + "'");
    ++seen;
  }
  if (seen != targets.size()) throw std::runtime_error("read_snapshot: missing arrays");
  st.htheta = multiply_r(st.H);
  st.Omega = div_axis(st.wtheta);
  st.cache_valid = true;
  return st;
}

} // namespace axmhd
