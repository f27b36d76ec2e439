#include "raplab/signal_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "raplab/error.hpp"

namespace raplab {

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t lineno) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = line.find(',', pos);
    const std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

void write_signal_csv(const std::filesystem::path& csv, const SampledSignal& s) {
  if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
  std::ofstream out(csv);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + csv.string());
  out << "t";
  for (std::size_t k = 0; k < s.dim(); ++k) {
    if (s.is_complex()) {
      out << ",v" << k << "_re,v" << k << "_im";
    } else {
      out << ",v" << k;
    }
  }
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", s.time(i));
    out << buf;
    for (double v : s.at(i)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
  nlohmann::ordered_json meta;
  meta["dim"] = s.dim();
  meta["complex"] = s.is_complex();
  meta["label"] = s.label();
  std::ofstream side(sidecar_path(csv));
  if (!side) throw Error(ErrorCode::IoError, "cannot write sidecar for " + csv.string());
  side << meta.dump(2) << '\n';
}

SampledSignal read_signal_csv(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, csv.string() + ": empty file");
  if (line.rfind("t,", 0) != 0) throw Error(ErrorCode::ParseError, csv.string() + ": header must start with 't,'");

  std::vector<double> times;
  std::vector<double> values;
  std::size_t columns = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = parse_row(line, lineno);
    if (row.size() < 2) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": no value columns");
    if (columns == 0) columns = row.size() - 1;
    if (row.size() - 1 != columns) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": ragged row");
    }
    times.push_back(row[0]);
    values.insert(values.end(), row.begin() + 1, row.end());
  }
  if (times.empty()) throw Error(ErrorCode::ParseError, csv.string() + ": no samples");

  std::size_t dim = columns;
  bool is_complex = false;
  std::string label = csv.stem().string();
  const auto side = sidecar_path(csv);
  if (std::filesystem::exists(side)) {
    std::ifstream sin(side);
    const auto meta = nlohmann::json::parse(sin, nullptr, false);
    if (meta.is_discarded()) throw Error(ErrorCode::ParseError, side.string() + ": invalid JSON");
    dim = meta.value("dim", columns);
    is_complex = meta.value("complex", false);
    label = meta.value("label", label);
  }
  if ((is_complex ? 2 * dim : dim) != columns) {
    throw Error(ErrorCode::ParseError, csv.string() + ": column count does not match the sidecar descriptor");
  }

  double dt = 1.0;
  if (times.size() > 1) {
    dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0)) throw Error(ErrorCode::ParseError, csv.string() + ": times must be strictly increasing");
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double step = times[i] - times[i - 1];
      // Allow a few ulps of t on top of the relative jitter bound; grid times
      // far from the origin cannot be represented more finely than that.
      const double ulp = std::nextafter(std::abs(times[i]), INFINITY) - std::abs(times[i]);
      if (!(step > 0.0) || std::abs(step - dt) > 1e-9 * dt + 4.0 * ulp) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(i + 2) + ": non-uniform time spacing");
      }
    }
  }
  return SampledSignal(times.front(), dt, dim, is_complex, std::move(values), label);
}

}  // namespace raplab
