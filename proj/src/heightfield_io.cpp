#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "gullivr/errors.hpp"
#include "gullivr/heightfield.hpp"

namespace gullivr {

namespace {

void expect_keyword(std::istream& in, const std::string& keyword) {
  std::string token;
  if (!(in >> token) || token != keyword) {
    throw ConfigError("heightfield file: expected '" + keyword + "', got '" + token + "'");
  }
}

template <typename T>
T read_value(std::istream& in, const char* what) {
  T value{};
  if (!(in >> value)) throw ConfigError(std::string("heightfield file: bad value for ") + what);
  return value;
}

}  // namespace

HeightField read_heightfield(std::istream& in) {
  expect_keyword(in, "heightfield");
  const int version = read_value<int>(in, "version");
  if (version != 1) {
    throw ConfigError("heightfield file: unsupported version " + std::to_string(version));
  }
  expect_keyword(in, "origin");
  Vec2 origin;
  origin.x = read_value<double>(in, "origin x");
  origin.z = read_value<double>(in, "origin z");
  expect_keyword(in, "cell_size");
  const double cell_size = read_value<double>(in, "cell_size");
  expect_keyword(in, "nx");
  const int nx = read_value<int>(in, "nx");
  expect_keyword(in, "nz");
  const int nz = read_value<int>(in, "nz");
  if (nx < 2 || nz < 2) throw ConfigError("heightfield file: nx and nz must be at least 2");
  expect_keyword(in, "heights");
  std::vector<double> heights;
  heights.reserve(static_cast<std::size_t>(nx) * nz);
  for (long i = 0; i < static_cast<long>(nx) * nz; ++i) {
    heights.push_back(read_value<double>(in, "height"));
  }
  return HeightField(origin, cell_size, nx, nz, std::move(heights));
}

HeightField load_heightfield(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open heightfield");
  try {
    return read_heightfield(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_heightfield(std::ostream& out, const HeightField& field) {
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "heightfield 1\n"
      << "origin " << num(field.origin().x) << ' ' << num(field.origin().z) << '\n'
      << "cell_size " << num(field.cell_size()) << '\n'
      << "nx " << field.nx() << '\n'
      << "nz " << field.nz() << '\n'
      << "heights\n";
  for (int iz = 0; iz < field.nz(); ++iz) {
    for (int ix = 0; ix < field.nx(); ++ix) {
      out << (ix ? " " : "") << num(field.at(ix, iz));
    }
    out << '\n';
  }
}

}  // namespace gullivr
