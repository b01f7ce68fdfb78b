#pragma once

#include "sdbdc/representatives.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sdbdc {

/// One JSON object per line:
///   {"site": <int>, "seq": <int>, "coords": [<float>...], "cov_rad": <float>, "cov_cnt": <int>}
/// Object ids are not transmitted; decoded records carry point.id == -1.
std::string encode_wire_record(const RepresentativeRecord& record);
RepresentativeRecord decode_wire_record(std::string_view line);

void write_wire_stream(std::ostream& out, const std::vector<RepresentativeRecord>& records);
/// Reads a JSON-lines stream; records of one site must appear with consecutive seq from 0.
std::vector<RepresentativeRecord> read_wire_stream(std::istream& in);
std::vector<RepresentativeRecord> read_wire_file(const std::string& path);

}  // namespace sdbdc
