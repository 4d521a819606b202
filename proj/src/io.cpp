#include "gqe/io.hpp"

#include <fstream>
#include <sstream>

namespace gqe {

namespace {

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

std::string geometry_to_string(const Geometry& g) {
    std::ostringstream os;
    os << "geometry v1\n";
    os << "points " << g.points() << "\n";
    os << "lines " << g.lines() << "\n";
    for (int l = 0; l < g.lines(); ++l) {
        const auto& lp = g.line_points(l);
        for (size_t i = 0; i < lp.size(); ++i) os << (i ? " " : "") << lp[i];
        os << "\n";
    }
    return os.str();
}

Geometry geometry_from_string(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(is, line)) {
        std::string s = strip_comment(line);
        auto end = s.find_last_not_of(" \t\r");
        if (end == std::string::npos) continue;
        rows.push_back(s.substr(0, end + 1));
    }
    require(rows.size() >= 3, "geometry file too short");
    require(rows[0] == "geometry v1", "bad header: expected 'geometry v1'");
    int P = -1, L = -1;
    {
        std::istringstream h1(rows[1]), h2(rows[2]);
        std::string k1, k2;
        h1 >> k1 >> P;
        h2 >> k2 >> L;
        require(k1 == "points" && P >= 0, "bad points header");
        require(k2 == "lines" && L >= 0, "bad lines header");
    }
    require((int)rows.size() == 3 + L, "line record count mismatch");
    std::vector<std::vector<int>> lines(L);
    for (int l = 0; l < L; ++l) {
        std::istringstream r(rows[3 + l]);
        int id;
        int prev = -1;
        while (r >> id) {
            require(id > prev, "line record not strictly ascending");
            prev = id;
            lines[l].push_back(id);
        }
        require(!lines[l].empty(), "empty line record");
    }
    return build_geometry(std::move(lines), P);
}

void export_geometry(const Geometry& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    require(f.good(), "cannot open " + path + " for writing");
    f << geometry_to_string(g);
    require(f.good(), "write failed: " + path);
}

Geometry import_geometry(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return geometry_from_string(ss.str());
}

void write_model_file(const std::string& path, const std::map<std::string, std::string>& kv) {
    std::ofstream f(path, std::ios::binary);
    require(f.good(), "cannot open " + path + " for writing");
    for (const auto& [k, v] : kv) f << k << " " << v << "\n";
}

std::map<std::string, std::string> read_model_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), "cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(f, line)) {
        std::string s = strip_comment(line);
        std::istringstream r(s);
        std::string k;
        if (!(r >> k)) continue;
        std::string rest;
        std::getline(r, rest);
        auto b = rest.find_first_not_of(" \t");
        kv[k] = b == std::string::npos ? "" : rest.substr(b);
    }
    return kv;
}

void write_map_file(const std::string& path, const std::vector<int>& map) {
    std::ofstream f(path, std::ios::binary);
    require(f.good(), "cannot open " + path + " for writing");
    for (int v : map) f << v << "\n";
}

std::vector<int> read_map_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), "cannot open " + path);
    std::vector<int> out;
    std::string line;
    while (std::getline(f, line)) {
        std::string s = strip_comment(line);
        std::istringstream r(s);
        int v;
        if (r >> v) out.push_back(v);
    }
    return out;
}

}  // namespace gqe
