#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "wedgeproj/core.hpp"
#include "wedgeproj/monotone.hpp"
#include "wedgeproj/wedge.hpp"

namespace wedgeproj {

using json = nlohmann::ordered_json;

/// Input that failed to parse or validate; maps to the input-error exit
/// code at the command surface.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/** A wedge description read from disk.  Two kinds: an explicit generator
 * list, or the nonincreasing-coordinates wedge selected by dimension.  The
 * original kind is kept so commands can dispatch to specialized routines.
 */
struct WedgeSpec {
    std::string kind;  ///< "generators" or "monotone"
    Index monotone_m = 0;
    GeneratedWedge wedge;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// FNV-1a 64-bit content digest, reported as 16 hex characters.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return std::string(out);
}

}  // namespace detail

/** Parses a wedge description.  Generators kind:
 *   {"kind":"generators", "ambient_dim":2, "generators":[[1,0],[-1,1]]}
 * with a rectangular, finite, nonempty generator list.  Monotone kind:
 *   {"kind":"monotone", "m":5}
 * with m >= 2.
 */
inline WedgeSpec parse_wedge_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("wedge file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ParseError("wedge file needs a string field \"kind\"");
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "monotone") {
        if (!j.contains("m") || !j["m"].is_number_integer())
            throw ParseError("monotone wedge needs an integer field \"m\"");
        const auto m = j["m"].get<long long>();
        if (m < 2) throw ParseError("monotone wedge needs m >= 2");
        return WedgeSpec{kind, static_cast<Index>(m), build_monotone_wedge(static_cast<Index>(m))};
    }
    if (kind == "generators") {
        if (!j.contains("ambient_dim") || !j["ambient_dim"].is_number_integer())
            throw ParseError("generators wedge needs an integer field \"ambient_dim\"");
        const auto dim = j["ambient_dim"].get<long long>();
        if (dim < 1) throw ParseError("ambient_dim must be >= 1");
        if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
            throw ParseError("generators wedge needs a nonempty array \"generators\"");
        const auto& rows = j["generators"];
        Matrix G(static_cast<Index>(dim), static_cast<Index>(rows.size()));
        for (size_t c = 0; c < rows.size(); ++c) {
            const auto& row = rows[c];
            if (!row.is_array() || row.size() != static_cast<size_t>(dim))
                throw ParseError("generator " + std::to_string(c) + " must be a list of " +
                                 std::to_string(dim) + " numbers");
            for (size_t i = 0; i < row.size(); ++i) {
                if (!row[i].is_number())
                    throw ParseError("generator " + std::to_string(c) + " has a non-number entry");
                const double v = row[i].get<double>();
                if (!std::isfinite(v))
                    throw ParseError("generator " + std::to_string(c) + " has a non-finite entry");
                G(static_cast<Index>(i), static_cast<Index>(c)) = v;
            }
        }
        return WedgeSpec{kind, 0, GeneratedWedge(std::move(G))};
    }
    throw ParseError("unknown wedge kind \"" + kind + "\" (expected generators or monotone)");
}

inline WedgeSpec load_wedge_spec(const std::string& path) {
    return parse_wedge_spec(detail::read_file(path));
}

/** Parses a points file: one whitespace-separated vector per line; blank
 * lines and lines starting with # are skipped.  Lines may differ in
 * length; commands enforce dimensions where they must match a wedge.
 */
inline std::vector<Vector> parse_points(const std::string& text) {
    std::vector<Vector> points;
    std::istringstream lines(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::vector<double> vals;
        double v;
        while (fields >> v) {
            if (!std::isfinite(v))
                throw ParseError("line " + std::to_string(lineno) + ": non-finite entry");
            vals.push_back(v);
        }
        if (!fields.eof())
            throw ParseError("line " + std::to_string(lineno) + ": non-numeric entry");
        if (vals.empty()) continue;
        Vector x(static_cast<Index>(vals.size()));
        for (size_t i = 0; i < vals.size(); ++i) x[static_cast<Index>(i)] = vals[i];
        points.push_back(std::move(x));
    }
    if (points.empty()) throw ParseError("points file contains no vectors");
    return points;
}

inline std::vector<Vector> load_points(const std::string& path) {
    return parse_points(detail::read_file(path));
}

inline json to_json(const Vector& v) {
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline json to_json(const std::vector<Vector>& vs) {
    json a = json::array();
    for (const Vector& v : vs) a.push_back(to_json(v));
    return a;
}

inline json to_json(const Tolerance& tol) {
    return json{{"eps_rank", tol.eps_rank}, {"eps_feas", tol.eps_feas}, {"eps_eq", tol.eps_eq}};
}

}  // namespace wedgeproj
