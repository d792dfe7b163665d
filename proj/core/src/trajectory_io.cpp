#include <cstdio>
#include <fstream>
#include <sstream>

#include "streamsage/harness.hpp"

namespace streamsage {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void export_trajectory(const Trajectory& traj, const StreamSchema& schema,
                       const std::string& path) {
    if (schema.dim() != traj.dim && !(traj.points.empty() && traj.dim == 0))
        throw ConfigError("trajectory does not match the schema");
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");

    out << "t,loss,concept";
    for (const auto& f : schema.features()) out << ",phi_" << f.name;
    out << "\n";
    for (const auto& p : traj.points) {
        out << p.t << "," << fmt_double(p.loss) << "," << p.concept_id;
        for (double v : p.phi) out << "," << fmt_double(v);
        out << "\n";
    }
    if (!out) throw ParseError("failed writing '" + path + "'");
}

Trajectory parse_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) header.push_back(tok);
    }
    if (header.size() < 4 || header[0] != "t" || header[1] != "loss" || header[2] != "concept")
        throw ParseError("'" + path + "' does not look like a trajectory file");
    for (std::size_t i = 3; i < header.size(); ++i)
        if (header[i].rfind("phi_", 0) != 0)
            throw ParseError("unexpected trajectory column '" + header[i] + "'");
    const std::size_t d = header.size() - 3;

    Trajectory traj;
    traj.dim = static_cast<int>(d);
    std::size_t row = 1;
    std::uint64_t prev_t = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cells.push_back(tok);
        if (cells.size() != header.size())
            throw ParseError("trajectory row " + std::to_string(row) + " has " +
                             std::to_string(cells.size()) + " columns, expected " +
                             std::to_string(header.size()));
        try {
            TrajectoryPoint p;
            p.t = std::stoull(cells[0]);
            p.loss = std::stod(cells[1]);
            p.concept_id = std::stoi(cells[2]);
            for (std::size_t i = 0; i < d; ++i) p.phi.push_back(std::stod(cells[3 + i]));
            if (!traj.points.empty() && p.t <= prev_t)
                throw ParseError("trajectory steps are not strictly increasing at row " +
                                 std::to_string(row));
            prev_t = p.t;
            traj.points.push_back(std::move(p));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("trajectory row " + std::to_string(row) + " has a malformed value");
        }
    }
    return traj;
}

} // namespace streamsage
