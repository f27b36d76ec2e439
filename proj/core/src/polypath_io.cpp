#include "raplab/polypath_io.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "raplab/error.hpp"
#include "raplab/signal_io.hpp"

namespace raplab {

namespace fs = std::filesystem;

void write_polypath(const fs::path& manifest, const PolyPath& p) {
  p.validate();
  const fs::path dir = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
  fs::create_directories(dir);
  nlohmann::ordered_json m;
  m["n"] = p.degree();
  m["files"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < p.degree(); ++k) {
    const std::string name = manifest.stem().string() + "_a" + std::to_string(k + 1) + ".csv";
    write_signal_csv(dir / name, p.coeffs[k]);
    m["files"].push_back(name);
  }
  const auto& c = p.coeffs.front();
  m["grid"] = {{"t0", c.t0()}, {"dt", c.dt()}, {"size", c.size()}};
  m["label"] = p.label;
  std::ofstream out(manifest);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + manifest.string());
  out << m.dump(2) << '\n';
}

PolyPath read_polypath(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + manifest.string());
  const auto m = nlohmann::json::parse(in, nullptr, false);
  if (m.is_discarded() || !m.is_object()) throw Error(ErrorCode::ParseError, manifest.string() + ": invalid JSON");
  if (!m.contains("n") || !m.contains("files") || !m["files"].is_array()) {
    throw Error(ErrorCode::ParseError, manifest.string() + ": need n and files");
  }
  const auto n = m["n"].get<std::size_t>();
  if (n != m["files"].size()) {
    throw Error(ErrorCode::ParseError, manifest.string() + ": n does not match the number of files");
  }
  const fs::path dir = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
  PolyPath p;
  p.label = m.value("label", manifest.stem().string());
  for (const auto& f : m["files"]) p.coeffs.push_back(read_signal_csv(dir / f.get<std::string>()));
  p.validate();
  if (m.contains("grid")) {
    const auto& g = m["grid"];
    const auto& c = p.coeffs.front();
    const double dt = g.value("dt", c.dt()), t0 = g.value("t0", c.t0());
    const auto size = g.value("size", c.size());
    if (size != c.size() || std::abs(dt - c.dt()) > 1e-9 * dt || std::abs(t0 - c.t0()) > 1e-9 * dt) {
      throw Error(ErrorCode::GridMismatch, manifest.string() + ": coefficient grid differs from the manifest grid");
    }
  }
  return p;
}

}  // namespace raplab
