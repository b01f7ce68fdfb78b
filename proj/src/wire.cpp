#include "sdbdc/wire.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace sdbdc {

std::string encode_wire_record(const RepresentativeRecord& record) {
    nlohmann::ordered_json j;
    j["site"] = record.site;
    j["seq"] = record.seq;
    auto coords = nlohmann::ordered_json::array();
    for (Index k = 0; k < record.point.coords.size(); ++k) coords.push_back(record.point.coords[k]);
    j["coords"] = std::move(coords);
    j["cov_rad"] = record.cov_rad;
    j["cov_cnt"] = record.cov_cnt;
    return j.dump();
}

RepresentativeRecord decode_wire_record(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("wire record: ") + e.what());
    }
    if (!j.is_object()) throw InputError("wire record: expected a JSON object");
    for (const char* key : {"site", "seq", "coords", "cov_rad", "cov_cnt"}) {
        if (!j.contains(key)) throw InputError(std::string("wire record: missing field ") + key);
    }
    const auto& coords = j.at("coords");
    if (!coords.is_array() || coords.empty()) throw InputError("wire record: coords must be a non-empty array");
    if (!j.at("site").is_number_integer() || !j.at("seq").is_number_integer() ||
        !j.at("cov_cnt").is_number_integer() || !j.at("cov_rad").is_number()) {
        throw InputError("wire record: field has the wrong type");
    }

    RepresentativeRecord r;
    r.point.id = -1;
    r.point.coords.resize(static_cast<Index>(coords.size()));
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (!coords[k].is_number()) throw InputError("wire record: non-numeric coordinate");
        r.point.coords[static_cast<Index>(k)] = coords[k].get<double>();
    }
    if (!r.point.coords.allFinite()) throw InputError("wire record: non-finite coordinate");
    r.site = j.at("site").get<SiteId>();
    r.seq = j.at("seq").get<Seq>();
    r.cov_rad = j.at("cov_rad").get<double>();
    r.cov_cnt = j.at("cov_cnt").get<std::int64_t>();
    if (r.seq < 0 || r.cov_cnt < 0 || !(r.cov_rad >= 0.0)) {
        throw InputError("wire record: seq, cov_cnt and cov_rad must be non-negative");
    }
    return r;
}

void write_wire_stream(std::ostream& out, const std::vector<RepresentativeRecord>& records) {
    for (const auto& r : records) out << encode_wire_record(r) << '\n';
}

std::vector<RepresentativeRecord> read_wire_stream(std::istream& in) {
    std::vector<RepresentativeRecord> out;
    std::map<SiteId, Seq> next_seq;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto r = decode_wire_record(line);
        Seq& expected = next_seq[r.site];
        if (r.seq != expected) {
            throw InputError("wire stream: site " + std::to_string(r.site) + " expected seq " +
                             std::to_string(expected) + ", got " + std::to_string(r.seq));
        }
        ++expected;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RepresentativeRecord> read_wire_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_wire_stream(in);
}

}  // namespace sdbdc
