#pragma once

#include <map>
#include <string>
#include <vector>

#include "raplab/delay.hpp"
#include "raplab/flows.hpp"
#include "raplab/maps.hpp"

namespace raplab {

enum class CatalogKind { Forcing, Rhs, Map, Delay };

struct CatalogEntry {
  std::string id;
  CatalogKind kind;
  std::string formula;
  std::size_t dim = 1;
  /// Default parameter values; overridable by name.
  std::map<std::string, double> params;
};

std::string_view to_string(CatalogKind k);

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& id);

/// sin(t + ln(1 + t)) + sin(sqrt(2) t + ln(1 + sqrt(2) t)).
double heq1_forcing(double t);

Forcing catalog_forcing(const std::string& id, const std::map<std::string, double>& params = {});
Rhs catalog_rhs(const std::string& id, const std::map<std::string, double>& params = {});
MapSpec catalog_map(const std::string& id, const std::map<std::string, double>& params = {});
DelayRhs catalog_delay(const std::string& id, const std::map<std::string, double>& params = {});

}  // namespace raplab
