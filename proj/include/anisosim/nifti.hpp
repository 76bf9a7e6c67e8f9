#pragma once

#include <string>

#include "anisosim/volume.hpp"

namespace anisosim {

/// Reads a NIfTI-1 file (.nii, .nii.gz, or .hdr/.img pair). Scalar single
/// frame volumes only; intensities are promoted to float32 once at load,
/// honoring scl_slope/scl_inter. Geometry comes from the sform when
/// sform_code > 0, else the qform, else identity. Both endiannesses are
/// accepted (detected via sizeof_hdr).
Volume3 read_nifti(const std::string& path);

/// Writes a little-endian NIfTI-1 float32 file carrying the volume geometry
/// in the sform (sform_code = 1, scl_slope = 1, scl_inter = 0). Output is
/// gzip-compressed when the path ends in ".gz".
void write_nifti(const Volume3& v, const std::string& path);

}  // namespace anisosim
