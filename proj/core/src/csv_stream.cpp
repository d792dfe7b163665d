#include <fstream>
#include <sstream>

#include "streamsage/error.hpp"
#include "streamsage/streams.hpp"

namespace streamsage {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

[[noreturn]] void cell_error(std::size_t row, const std::string& column, const std::string& what) {
    throw ParseError("row " + std::to_string(row) + ", column '" + column + "': " + what);
}

double parse_cell_double(std::size_t row, const std::string& column, const std::string& cell) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        cell_error(row, column, "expected a number, got '" + cell + "'");
    }
}

} // namespace

CsvStream::CsvStream(const std::string& path, StreamSchema schema, bool shuffle,
                     std::uint64_t seed)
    : schema_(std::move(schema)) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
    const std::vector<std::string> header = split_row(strip_cr(line));
    const std::size_t want = static_cast<std::size_t>(schema_.dim()) + 1;
    if (header.size() != want)
        throw ParseError("header has " + std::to_string(header.size()) + " columns, schema needs " +
                         std::to_string(want));
    for (int i = 0; i < schema_.dim(); ++i)
        if (header[static_cast<std::size_t>(i)] != schema_.feature(i).name)
            throw ParseError("header column " + std::to_string(i + 1) + " is '" +
                             header[static_cast<std::size_t>(i)] + "', schema expects '" +
                             schema_.feature(i).name + "'");
    if (header.back() != schema_.target().name)
        throw ParseError("last header column is '" + header.back() + "', schema expects target '" +
                         schema_.target().name + "'");

    std::size_t row = 0; // data rows, 1-based in diagnostics
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        ++row;
        const std::vector<std::string> cells = split_row(line);
        if (cells.size() != want)
            throw ParseError("row " + std::to_string(row) + " has " +
                             std::to_string(cells.size()) + " columns, expected " +
                             std::to_string(want));
        Instance x;
        x.reserve(static_cast<std::size_t>(schema_.dim()));
        for (int i = 0; i < schema_.dim(); ++i) {
            const auto& f = schema_.feature(i);
            const std::string& cell = cells[static_cast<std::size_t>(i)];
            if (f.kind == FeatureKind::numeric) {
                x.push_back(FeatureValue::numeric(parse_cell_double(row, f.name, cell)));
            } else {
                try {
                    x.push_back(FeatureValue::categorical(schema_.symbol_index(i, cell)));
                } catch (const SchemaError&) {
                    cell_error(row, f.name, "symbol '" + cell + "' is not in the alphabet");
                }
            }
        }
        Target y = Target::real(0.0);
        const std::string& tcell = cells.back();
        const std::string& tname = schema_.target().name;
        if (schema_.target().kind == TargetKind::klass) {
            int label = 0;
            try {
                std::size_t pos = 0;
                label = std::stoi(tcell, &pos);
                if (pos != tcell.size()) throw std::invalid_argument(tcell);
            } catch (const std::exception&) {
                cell_error(row, tname, "expected a class index, got '" + tcell + "'");
            }
            if (label < 0 || label >= schema_.target().num_classes)
                cell_error(row, tname, "class " + std::to_string(label) + " is out of range");
            y = Target::klass(label);
        } else {
            y = Target::real(parse_cell_double(row, tname, tcell));
        }
        schema_.validate_instance(x);
        rows_.push_back({std::move(x), std::move(y)});
    }

    if (shuffle) {
        RngHandle rng(seed);
        for (std::size_t i = rows_.size(); i > 1; --i)
            std::swap(rows_[i - 1], rows_[rng.below(i)]);
    }
}

const StreamSchema& CsvStream::schema() const { return schema_; }

std::optional<StreamRecord> CsvStream::next() {
    if (pos_ >= rows_.size()) return std::nullopt;
    StreamRecord rec;
    rec.sample = rows_[pos_++];
    return rec;
}

} // namespace streamsage
