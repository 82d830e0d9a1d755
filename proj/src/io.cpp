#include "slab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace slab {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_grid_function(std::ostream& os, const Field3& f, double time) {
    const SlabGrid& g = f.grid();
    os << "slabgrid,L1,L2,d,N1,N2,Nz,time\n";
    os << "slabgrid," << format_full(g.domain.L1) << ',' << format_full(g.domain.L2) << ','
       << format_full(g.domain.d) << ',' << g.N1 << ',' << g.N2 << ',' << g.Nz << ','
       << format_full(time) << '\n';
    for (int i1 = 0; i1 < g.N1; ++i1) {
        for (int i2 = 0; i2 < g.N2; ++i2) {
            auto col = f.column(i1, i2);
            for (int k = 0; k < g.Nz; ++k) {
                if (k) os << ',';
                os << format_full(col[k]);
            }
            os << '\n';
        }
    }
}

GridFunctionFile read_grid_function(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("slabgrid,", 0) != 0)
        throw ConfigError("grid function file: missing header line");
    if (!std::getline(is, line)) throw ConfigError("grid function file: missing header values");
    std::istringstream hs(line);
    std::string tok;
    std::getline(hs, tok, ','); // "slabgrid"
    SlabGrid g;
    auto next_double = [&]() {
        if (!std::getline(hs, tok, ',')) throw ConfigError("grid function file: short header");
        return std::stod(tok);
    };
    g.domain.L1 = next_double();
    g.domain.L2 = next_double();
    g.domain.d = next_double();
    g.N1 = static_cast<int>(next_double());
    g.N2 = static_cast<int>(next_double());
    g.Nz = static_cast<int>(next_double());
    const double time = next_double();
    g.validate();

    GridFunctionFile out;
    out.time = time;
    out.field = Field3(g);
    for (int i1 = 0; i1 < g.N1; ++i1) {
        for (int i2 = 0; i2 < g.N2; ++i2) {
            if (!std::getline(is, line)) throw ConfigError("grid function file: truncated data");
            std::istringstream ls(line);
            auto col = out.field.column(i1, i2);
            for (int k = 0; k < g.Nz; ++k) {
                if (!std::getline(ls, tok, ','))
                    throw ConfigError("grid function file: short data row");
                col[k] = std::stod(tok);
            }
        }
    }
    return out;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), ncols_(columns.size()) {
    auto* os = new std::ofstream(path);
    if (!*os) {
        delete os;
        throw ConfigError("cannot open output file: " + path);
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) (*os) << ',';
        (*os) << columns[i];
    }
    (*os) << '\n';
    os_ = os;
}

CsvWriter::~CsvWriter() {
    auto* os = static_cast<std::ofstream*>(os_);
    delete os;
}

void CsvWriter::row(const std::vector<double>& values) {
    auto* os = static_cast<std::ofstream*>(os_);
    if (values.size() != ncols_) throw ConfigError("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) (*os) << ',';
        (*os) << format_full(values[i]);
    }
    (*os) << '\n';
}

} // namespace slab
