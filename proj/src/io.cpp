#include "hyperslice/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hyperslice/errors.hpp"

namespace hyperslice {

namespace {

std::vector<Vector> read_rows(std::istream& in)
{
    std::vector<Vector> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        Vector row;
        std::string token;
        while (ss >> token) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size()) {
                throw InvalidInput("line " + std::to_string(line_no) + ": '" + token + "' is not a number");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::ifstream open(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    return in;
}

void write_row(std::ostream& out, const Vector& v)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        out << v[i];
    }
    out << '\n';
    out.flags(flags);
    out.precision(precision);
}

}  // namespace

FlatOrientation parse_orientation(std::istream& in)
{
    std::vector<Vector> rows = read_rows(in);
    if (rows.empty()) throw InvalidInput("orientation file has no vectors");
    return FlatOrientation(std::move(rows));
}

FlatOrientation read_orientation_file(const std::filesystem::path& path)
{
    auto in = open(path);
    return parse_orientation(in);
}

void write_orientation(std::ostream& out, const FlatOrientation& orientation)
{
    for (const Vector& v : orientation.spans()) write_row(out, v);
}

Body parse_body(std::istream& in)
{
    std::vector<Vector> rows = read_rows(in);
    if (rows.empty() || rows.front().size() != 1) {
        throw InvalidInput("body file must start with a line holding n");
    }
    const double nd = rows.front()[0];
    if (!(nd >= 1.0) || nd != static_cast<double>(static_cast<std::size_t>(nd))) {
        throw InvalidInput("body dimension must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(nd);
    if (rows.size() != n + 2) {
        throw InvalidInput("body file for n=" + std::to_string(n) + " needs " + std::to_string(n) +
                           " generator rows and one base row, found " + std::to_string(rows.size() - 1) + " rows");
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != n) {
            throw InvalidInput("body row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                               " entries, expected " + std::to_string(n));
        }
    }
    VectorList gens(rows.begin() + 1, rows.begin() + 1 + static_cast<std::ptrdiff_t>(n));
    return Body::parallelotope(std::move(gens), std::move(rows.back()));
}

Body read_body_file(const std::filesystem::path& path)
{
    auto in = open(path);
    return parse_body(in);
}

void write_body(std::ostream& out, const Body& body)
{
    out << body.n() << '\n';
    for (const Vector& g : body.edge_generators()) write_row(out, g);
    write_row(out, body.base());
}

}  // namespace hyperslice
