#include "sdbdc/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace sdbdc {

namespace detail {

std::vector<std::string_view> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(std::string_view field, std::string_view what) {
    double v = 0.0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw InputError("cannot parse " + std::string(what) + " '" + std::string(field) + "' as a number");
    }
    return v;
}

std::int64_t parse_int(std::string_view field, std::string_view what) {
    std::int64_t v = 0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw InputError("cannot parse " + std::string(what) + " '" + std::string(field) + "' as an integer");
    }
    return v;
}

}  // namespace detail

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("dataset CSV: missing header");
    const auto header = detail::split_csv_line(line);
    if (header.size() < 2 || header[0] != "id") {
        throw InputError("dataset CSV: header must be id,c0,...,c{d-1}");
    }
    const auto dim = static_cast<Index>(header.size() - 1);
    for (Index k = 0; k < dim; ++k) {
        if (header[static_cast<std::size_t>(k + 1)] != "c" + std::to_string(k)) {
            throw InputError("dataset CSV: header column " + std::to_string(k + 1) + " must be c" +
                             std::to_string(k));
        }
    }

    Dataset ds(dim);
    Eigen::VectorXd x(dim);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split_csv_line(line);
        if (static_cast<Index>(fields.size()) != dim + 1) {
            throw InputError("dataset CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(dim + 1) + " fields");
        }
        const ObjectId id = detail::parse_int(fields[0], "id");
        for (Index k = 0; k < dim; ++k) x[k] = detail::parse_double(fields[static_cast<std::size_t>(k + 1)], "coordinate");
        ds.push_back(id, x);
    }
    return ds;
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
    out << "id";
    for (Index k = 0; k < ds.dim(); ++k) out << ",c" << k;
    out << '\n';
    for (Index i = 0; i < ds.size(); ++i) {
        out << ds.id(i);
        const auto x = ds.coords(i);
        for (Index k = 0; k < ds.dim(); ++k) out << ',' << format_double(x[k]);
        out << '\n';
    }
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    write_dataset_csv(out, ds);
}

}  // namespace sdbdc
