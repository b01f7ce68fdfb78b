#pragma once

#include "sdbdc/geometry.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sdbdc {

/// Dataset CSV: header `id,c0,...,c{d-1}` then one `id,x0,...` row per point.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& ds);
void write_dataset_csv(const std::string& path, const Dataset& ds);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

namespace detail {
std::vector<std::string_view> split_csv_line(std::string_view line);
double parse_double(std::string_view field, std::string_view what);
std::int64_t parse_int(std::string_view field, std::string_view what);
}  // namespace detail

}  // namespace sdbdc
