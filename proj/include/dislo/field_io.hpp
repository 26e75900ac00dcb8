#pragma once

#include "dislo/spectral.hpp"

#include <string>

namespace dislo {

// Binary layout, little-endian:
//   char[4] "DLFD", uint32 version = 1, uint32 N, uint32 components, uint32 layout = 0 (row-major),
//   then components x N x N float64 samples; within a component the x1 index is the slow one.
void write_field(const std::string& path, const FourierField& f);
FourierField read_field(const std::string& path);
// Columns x1,x2,c0[,c1,...] with one row per grid point.
void write_field_csv(const std::string& path, const FourierField& f);

}  // namespace dislo
