#pragma once

#include <string>
#include <vector>

#include "linbandit/types.hpp"

namespace linbandit {

/// Item features parsed from a catalog CSV. Columns of `points` follow file order.
struct CatalogData {
  std::vector<std::string> ids;
  Matrix points;
};

/// Parses `id,f1,...,fp` CSV text. Rows whose norm exceeds 1 + 1e-9 are
/// rejected unless `renormalize` is set, in which case every vector is divided
/// by the largest norm in the file. Errors are InputError naming the line.
CatalogData parse_catalog_csv(const std::string& text, bool renormalize);

CatalogData load_catalog_csv(const std::string& path, bool renormalize);

}  // namespace linbandit
