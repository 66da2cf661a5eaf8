#pragma once

#include <iosfwd>
#include <string>

#include "spectl/linalg.hpp"

namespace spectl {

/// Coordinate-format reader: real or complex, general or symmetric (symmetric
/// storage is mirrored on load). Throws IoError, ParseError (with the line
/// number) or UnsupportedField for pattern/integer files.
CMatrix load_matrix_market(const std::string& path);
CMatrix read_matrix_market(std::istream& in);

/// Writes general coordinate format, real when every imaginary part is zero,
/// entries in %.16e.
void save_matrix_market(const CMatrix& m, const std::string& path);
void write_matrix_market(const CMatrix& m, std::ostream& out);

}  // namespace spectl
