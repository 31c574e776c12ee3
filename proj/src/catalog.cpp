#include "linbandit/catalog.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace linbandit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("catalog line " + std::to_string(line) + ": " + what);
}

}  // namespace

CatalogData parse_catalog_csv(const std::string& text, bool renormalize) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw InputError("catalog line 1: missing header");
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_fields(trim(line));
  if (header.size() < 2 || trim(header[0]) != "id")
    fail(line_no, "header must be id,f1,...,fp");
  for (std::size_t k = 1; k < header.size(); ++k)
    if (trim(header[k]) != "f" + std::to_string(k))
      fail(line_no, "expected column f" + std::to_string(k) + ", found '" + trim(header[k]) + "'");
  const Index p = static_cast<Index>(header.size() - 1);

  std::vector<std::string> ids;
  std::vector<Vector> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(trim(line));
    if (static_cast<Index>(fields.size()) != p + 1)
      fail(line_no, "expected " + std::to_string(p + 1) + " fields, found " +
                        std::to_string(fields.size()));
    Vector v(p);
    for (Index k = 0; k < p; ++k) {
      const std::string f = trim(fields[static_cast<std::size_t>(k) + 1]);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != f.size() || !std::isfinite(value))
        fail(line_no, "field f" + std::to_string(k + 1) + " is not a finite number: '" + f + "'");
      v[k] = value;
    }
    const std::string id = trim(fields[0]);
    if (id.empty()) fail(line_no, "empty id");
    if (!renormalize && v.norm() > 1.0 + kNormTolerance)
      fail(line_no, "feature norm " + std::to_string(v.norm()) +
                        " exceeds 1 (use --renormalize to rescale)");
    ids.push_back(id);
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw InputError("catalog has no items");

  CatalogData data;
  data.ids = std::move(ids);
  data.points.resize(p, static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) data.points.col(static_cast<Index>(j)) = rows[j];
  if (renormalize) {
    const double max_norm = data.points.colwise().norm().maxCoeff();
    if (max_norm > 0.0) data.points /= max_norm;
  }
  return data;
}

CatalogData load_catalog_csv(const std::string& path, bool renormalize) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open catalog '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_catalog_csv(ss.str(), renormalize);
}

}  // namespace linbandit
