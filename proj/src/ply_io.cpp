// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include "gscodec/ply_io.hpp"

#include <fstream>
#include <sstream>

#include "gscodec/wire.hpp"

namespace gscodec::ply {

const std::vector<std::string>& expected_properties() {
    static const std::vector<std::string> props = [] {
        std::vector<std::string> p = {"x", "y", "z", "nx", "ny", "nz"};
        for (int i = 0; i < 3; ++i) p.push_back("f_dc_" + std::to_string(i));
        for (int i = 0; i < 45; ++i) p.push_back("f_rest_" + std::to_string(i));
        p.push_back("opacity");
        for (int i = 0; i < 3; ++i) p.push_back("scale_" + std::to_string(i));
        for (int i = 0; i < 4; ++i) p.push_back("rot_" + std::to_string(i));
        return p;
    }();
    return props;
}

namespace {

std::string next_header_line(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw HeaderError("PLY header ended prematurely");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

PlyHeaderInfo read_header(std::istream& is) {
    if (next_header_line(is) != "ply") throw HeaderError("missing 'ply' magic line");
    if (next_header_line(is) != "format binary_little_endian 1.0")
        throw HeaderError("only 'format binary_little_endian 1.0' is supported");

    PlyHeaderInfo info;
    bool in_vertex = false;
    bool saw_vertex = false;
    for (;;) {
        std::string line = next_header_line(is);
        if (line == "end_header") break;
        auto tok = split_ws(line);
        if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
        if (tok[0] == "element") {
            if (tok.size() != 3) throw HeaderError("malformed element line: " + line);
            if (tok[1] == "vertex") {
                if (saw_vertex) throw HeaderError("duplicate vertex element");
                saw_vertex = true;
                in_vertex = true;
                try {
                    info.vertex_count = std::stoull(tok[2]);
                } catch (const std::exception&) {
                    throw HeaderError("bad vertex count: " + tok[2]);
                }
            } else {
                throw LayoutError("unexpected element '" + tok[1] + "'");
            }
        } else if (tok[0] == "property") {
            if (!in_vertex) throw HeaderError("property outside element: " + line);
            if (tok.size() != 3) throw HeaderError("malformed property line: " + line);
            if (tok[1] != "float")
                throw LayoutError("property '" + tok[2] + "' has type '" + tok[1] +
                                  "', expected float");
            info.property_names.push_back(tok[2]);
        } else {
            throw HeaderError("unrecognized header line: " + line);
        }
    }
    if (!saw_vertex) throw HeaderError("no vertex element declared");
    if (info.property_names != expected_properties()) {
        std::string msg = "unexpected property set (" +
                          std::to_string(info.property_names.size()) + " properties, expected " +
                          std::to_string(kPropertyCount) + ")";
        throw LayoutError(msg);
    }
    return info;
}

GaussianCloud read_ply(std::istream& is) {
    PlyHeaderInfo info = read_header(is);
    const std::size_t n = info.vertex_count;
    GaussianCloud cloud = GaussianCloud::zeros(n);

    std::vector<float> row(kPropertyCount);
    for (std::size_t i = 0; i < n; ++i) {
        wire::read_f32_span(is, row);
        for (int c = 0; c < 3; ++c) cloud.position[i * 3 + c] = row[c];
        // row[3..5] are normals, discarded.
        for (int c = 0; c < 3; ++c) cloud.color_dc[i * 3 + c] = row[6 + c];
        for (int c = 0; c < 45; ++c) cloud.color_sh[i * 45 + c] = row[9 + c];
        cloud.logit_opacity[i] = row[54];
        for (int c = 0; c < 3; ++c) cloud.log_scale[i * 3 + c] = row[55 + c];
        for (int c = 0; c < 4; ++c) cloud.rotation[i * 4 + c] = row[58 + c];
    }

    auto issues = validate(cloud);
    if (!issues.empty()) throw ValueError("PLY payload invalid: " + issues.front().message);
    return cloud;
}

void write_ply(std::ostream& os, const GaussianCloud& cloud) {
    os << "ply\n"
       << "format binary_little_endian 1.0\n"
       << "element vertex " << cloud.count << "\n";
    for (const auto& name : expected_properties()) os << "property float " << name << "\n";
    os << "end_header\n";

    std::vector<float> row(kPropertyCount, 0.0f);
    for (std::size_t i = 0; i < cloud.count; ++i) {
        for (int c = 0; c < 3; ++c) row[c] = cloud.position[i * 3 + c];
        row[3] = row[4] = row[5] = 0.0f;  // normals
        for (int c = 0; c < 3; ++c) row[6 + c] = cloud.color_dc[i * 3 + c];
        for (int c = 0; c < 45; ++c) row[9 + c] = cloud.color_sh[i * 45 + c];
        row[54] = cloud.logit_opacity[i];
        for (int c = 0; c < 3; ++c) row[55 + c] = cloud.log_scale[i * 3 + c];
        for (int c = 0; c < 4; ++c) row[58 + c] = cloud.rotation[i * 4 + c];
        wire::write_f32_span(os, row);
    }
    if (!os) throw IoError("failed writing PLY payload");
}

GaussianCloud read_ply_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    return read_ply(f);
}

void write_ply_file(const std::string& path, const GaussianCloud& cloud) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    write_ply(f, cloud);
    if (!f) throw IoError("failed writing " + path);
}

}  // namespace gscodec::ply
