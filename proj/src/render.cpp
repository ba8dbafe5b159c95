#include "commands.hpp"

#include <sstream>

namespace wcs::cli {

namespace {

void flatten(const Json& v, std::vector<std::string>& out) {
    if (v.is_array()) {
        for (const auto& x : v) flatten(x, out);
    } else if (v.is_string()) {
        out.push_back(v.get<std::string>());
    } else {
        out.push_back(v.dump());
    }
}

// Arrays become space-separated lists; fields are quoted when needed.
std::string cell(const Json& v) {
    std::vector<std::string> parts;
    flatten(v, parts);
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " " : "") + parts[i];
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

std::string table(const std::vector<std::string>& columns, const std::vector<Json>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) os << ",";
            if (r.contains(columns[i])) os << cell(r[columns[i]]);
        }
        os << "\n";
    }
    return os.str();
}

void treeRows(const Json& t, int parent, std::vector<Json>& rows) {
    int id = static_cast<int>(rows.size());
    Json r = t;
    r.erase("children");
    r.erase("points");
    r["id"] = id;
    r["parent"] = parent;
    rows.push_back(r);
    for (const auto& c : t["children"]) treeRows(c, id, rows);
}

} // namespace

std::string render(const RunConfig& c, const std::string& command, const Json& doc) {
    if (c.format == "json") return doc.dump(2) + "\n";
    std::vector<Json> rows;
    if (command == "factorize") {
        for (const auto& r : doc["spectrum"]) rows.push_back(r);
        return table({"m", "n", "charge", "coeff", "achievedError"}, rows);
    }
    if (command == "periods") {
        rows.push_back(doc);
        return table({"u", "a", "aD", "tau", "A", "B", "achievedError", "maxResidue"}, rows);
    }
    if (command == "wall") {
        int line = 0;
        for (const auto& l : doc["lines"]) {
            int k = 0;
            for (const auto& p : l["points"])
                rows.push_back(Json{{"line", line}, {"index", k++}, {"re", p[0]}, {"im", p[1]}, {"closed", l["closed"]},
                                    {"achievedError", l["achievedError"]}});
            ++line;
        }
        return table({"line", "index", "re", "im", "closed", "achievedError"}, rows);
    }
    if (command == "tree") {
        for (const auto& t : doc["trees"]) treeRows(t, -1, rows);
        return table({"id", "parent", "charge", "theta", "omega", "end", "multiplicity", "vertex", "wallResidual",
                      "achievedError"},
                     rows);
    }
    if (command == "spectrum") {
        for (const auto& r : doc["spectrum"]) rows.push_back(r);
        return table({"charge", "omega", "trees", "exhaustive", "achievedError"}, rows);
    }
    throw AlgebraError("no csv layout for '" + command + "'");
}

} // namespace wcs::cli
