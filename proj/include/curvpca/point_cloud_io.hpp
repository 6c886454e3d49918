#ifndef CURVPCA_POINT_CLOUD_IO_HPP
#define CURVPCA_POINT_CLOUD_IO_HPP

// Point-cloud CSV: a "# dim=<d>" line, optional further "#" comment lines,
// then one point per line with d comma-separated coordinates and an optional
// trailing weight.

#include "curvpca/errors.hpp"
#include "curvpca/models.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace curvpca {

/// Shortest decimal with 17 significant digits.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_cloud(std::ostream& os, const PointCloud& cloud, const std::vector<std::string>& comments = {}) {
  cloud.validate();
  os << "# dim=" << cloud.dim << '\n';
  for (const auto& c : comments) os << "# " << c << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int r = 0; r < cloud.dim; ++r) {
      if (r) os << ',';
      os << format_double(cloud.points(r, static_cast<Eigen::Index>(i)));
    }
    if (cloud.weighted()) os << ',' << format_double(cloud.weights[i]);
    os << '\n';
  }
}

inline PointCloud read_cloud(std::istream& is) {
  std::string line;
  int dim = 0;
  std::size_t lineno = 0;
  std::vector<double> coords, weights;
  bool any_weight = false, any_plain = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("dim=");
      if (dim == 0 && pos != std::string::npos) {
        try {
          dim = std::stoi(line.substr(pos + 4));
        } catch (const std::exception&) {
          throw validation_error("cloud CSV: bad dim header on line " + std::to_string(lineno));
        }
        if (dim < 1) throw validation_error("cloud CSV: dim must be positive");
      }
      continue;
    }
    if (dim == 0) throw validation_error("cloud CSV: missing '# dim=<d>' header");
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw validation_error("cloud CSV: bad number on line " + std::to_string(lineno));
      }
    }
    if (static_cast<int>(row.size()) == dim) {
      any_plain = true;
    } else if (static_cast<int>(row.size()) == dim + 1) {
      any_weight = true;
      weights.push_back(row.back());
      row.pop_back();
    } else {
      throw validation_error("cloud CSV: line " + std::to_string(lineno) + " has " + std::to_string(row.size()) +
                             " fields, expected " + std::to_string(dim));
    }
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0) throw validation_error("cloud CSV: missing '# dim=<d>' header");
  if (any_weight && any_plain) throw validation_error("cloud CSV: weights must be given for all points or none");
  PointCloud cloud(dim, static_cast<Eigen::Index>(coords.size() / dim));
  for (std::size_t i = 0; i < coords.size(); ++i) cloud.points(static_cast<Eigen::Index>(i % dim), static_cast<Eigen::Index>(i / dim)) = coords[i];
  cloud.weights = std::move(weights);
  cloud.validate();
  return cloud;
}

inline PointCloud read_cloud_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open " + path);
  return read_cloud(in);
}

inline void write_cloud_file(const std::string& path, const PointCloud& cloud,
                             const std::vector<std::string>& comments = {}) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write " + path);
  write_cloud(out, cloud, comments);
}

} // namespace curvpca

#endif // CURVPCA_POINT_CLOUD_IO_HPP
