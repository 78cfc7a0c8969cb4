#pragma once

#include <string>

#include "wwl/field.hpp"

namespace wwl {

/// WWL1 binary field format: little-endian header
///   magic "WWL1", u32 Nx, u32 Ny, f64 Lx, f64 Ly, f64 eps, f64 sigma,
///   u8 parity tag (0 none, 1 Hox, 2 He, 3 Hoy, 4 Hoo)
/// followed by Nx*Ny f64 row-major samples (x is the row axis).
void write_wwl1(const std::string& path, const RealField& f);
RealField read_wwl1(const std::string& path);

}  // namespace wwl
