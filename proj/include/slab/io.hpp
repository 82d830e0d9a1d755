#pragma once

#include "slab/grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace slab {

/// Grid-function CSV layout (stable across versions):
///   line 1: "slabgrid,L1,L2,d,N1,N2,Nz,time"
///   line 2: the header values
///   then one line per (i1, i2) pair in row-major order (i1 outer), holding
///   the Nz comma-separated node values bottom-to-top.
void write_grid_function(std::ostream& os, const Field3& f, double time);
struct GridFunctionFile {
    Field3 field;
    double time = 0.0;
};
GridFunctionFile read_grid_function(std::istream& is);

/// Minimal CSV table writer with full double round-trip precision.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::size_t ncols_;
    void* os_; // std::ofstream, kept out of the header
};

std::string format_full(double v);

} // namespace slab
