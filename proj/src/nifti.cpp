#include "anisosim/nifti.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace anisosim {

namespace {

#pragma pack(push, 1)
struct Nifti1Header {
  std::int32_t sizeof_hdr;  // must be 348
  char data_type[10];
  char db_name[18];
  std::int32_t extents;
  std::int16_t session_error;
  char regular;
  char dim_info;
  std::int16_t dim[8];
  float intent_p1, intent_p2, intent_p3;
  std::int16_t intent_code;
  std::int16_t datatype;
  std::int16_t bitpix;
  std::int16_t slice_start;
  float pixdim[8];
  float vox_offset;
  float scl_slope;
  float scl_inter;
  std::int16_t slice_end;
  char slice_code;
  char xyzt_units;
  float cal_max, cal_min;
  float slice_duration;
  float toffset;
  std::int32_t glmax, glmin;
  char descrip[80];
  char aux_file[24];
  std::int16_t qform_code;
  std::int16_t sform_code;
  float quatern_b, quatern_c, quatern_d;
  float qoffset_x, qoffset_y, qoffset_z;
  float srow_x[4];
  float srow_y[4];
  float srow_z[4];
  char intent_name[16];
  char magic[4];
};
#pragma pack(pop)
static_assert(sizeof(Nifti1Header) == 348, "NIfTI-1 header must be 348 bytes");

constexpr std::int16_t DT_UINT8 = 2;
constexpr std::int16_t DT_INT16 = 4;
constexpr std::int16_t DT_INT32 = 8;
constexpr std::int16_t DT_FLOAT32 = 16;
constexpr std::int16_t DT_FLOAT64 = 64;

template <typename T>
T bswap(T v) {
  auto bytes = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(v);
  std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

void swap_header(Nifti1Header& h) {
  h.sizeof_hdr = bswap(h.sizeof_hdr);
  for (auto& d : h.dim) d = bswap(d);
  h.intent_code = bswap(h.intent_code);
  h.datatype = bswap(h.datatype);
  h.bitpix = bswap(h.bitpix);
  for (auto& p : h.pixdim) p = bswap(p);
  h.vox_offset = bswap(h.vox_offset);
  h.scl_slope = bswap(h.scl_slope);
  h.scl_inter = bswap(h.scl_inter);
  h.qform_code = bswap(h.qform_code);
  h.sform_code = bswap(h.sform_code);
  h.quatern_b = bswap(h.quatern_b);
  h.quatern_c = bswap(h.quatern_c);
  h.quatern_d = bswap(h.quatern_d);
  h.qoffset_x = bswap(h.qoffset_x);
  h.qoffset_y = bswap(h.qoffset_y);
  h.qoffset_z = bswap(h.qoffset_z);
  for (auto& s : h.srow_x) s = bswap(s);
  for (auto& s : h.srow_y) s = bswap(s);
  for (auto& s : h.srow_z) s = bswap(s);
}

// gzopen reads plain files transparently, so it serves both .nii and .nii.gz.
struct GzFile {
  gzFile f = nullptr;
  explicit GzFile(const std::string& path, const char* mode) {
    f = gzopen(path.c_str(), mode);
    if (!f) throw std::runtime_error("cannot open " + path);
  }
  ~GzFile() {
    if (f) gzclose(f);
  }
  GzFile(const GzFile&) = delete;
  GzFile& operator=(const GzFile&) = delete;

  void read(void* dst, std::size_t bytes, const std::string& what) {
    std::size_t done = 0;
    auto* p = static_cast<char*>(dst);
    while (done < bytes) {
      const unsigned chunk = unsigned(std::min<std::size_t>(bytes - done, 1u << 30));
      const int got = gzread(f, p + done, chunk);
      if (got <= 0) throw std::runtime_error("truncated or unreadable " + what);
      done += std::size_t(got);
    }
  }
  void write(const void* src, std::size_t bytes) {
    std::size_t done = 0;
    auto* p = static_cast<const char*>(src);
    while (done < bytes) {
      const unsigned chunk = unsigned(std::min<std::size_t>(bytes - done, 1u << 30));
      const int put = gzwrite(f, p + done, chunk);
      if (put <= 0) throw std::runtime_error("NIfTI write failure");
      done += std::size_t(put);
    }
  }
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Eigen::Matrix3d qform_rotation(const Nifti1Header& h) {
  const double b = h.quatern_b, c = h.quatern_c, d = h.quatern_d;
  double a2 = 1.0 - (b * b + c * c + d * d);
  const double a = a2 > 0 ? std::sqrt(a2) : 0.0;
  Eigen::Matrix3d r;
  r << a * a + b * b - c * c - d * d, 2 * b * c - 2 * a * d, 2 * b * d + 2 * a * c,
      2 * b * c + 2 * a * d, a * a + c * c - b * b - d * d, 2 * c * d - 2 * a * b,
      2 * b * d - 2 * a * c, 2 * c * d + 2 * a * b, a * a + d * d - c * c - b * b;
  const double qfac = h.pixdim[0] < 0 ? -1.0 : 1.0;
  r.col(2) *= qfac;
  return r;
}

template <typename T>
void convert_voxels(const std::vector<char>& raw, bool swapped, float slope, float inter,
                    Eigen::ArrayXf& out) {
  const T* src = reinterpret_cast<const T*>(raw.data());
  const std::int64_t n = out.size();
  for (std::int64_t i = 0; i < n; ++i) {
    T v = src[i];
    if constexpr (sizeof(T) > 1) {
      if (swapped) v = bswap(v);
    }
    out[i] = slope * float(v) + inter;
  }
}

}  // namespace

Volume3 read_nifti(const std::string& path) {
  GzFile in(path, "rb");
  Nifti1Header h{};
  in.read(&h, sizeof(h), path + " (header)");

  bool swapped = false;
  if (h.sizeof_hdr != 348) {
    if (bswap(h.sizeof_hdr) == 348) {
      swapped = true;
      swap_header(h);
    } else {
      throw std::runtime_error(path + ": corrupt NIfTI header (sizeof_hdr != 348)");
    }
  }

  const bool single = std::strncmp(h.magic, "n+1", 3) == 0;
  const bool pair = std::strncmp(h.magic, "ni1", 3) == 0;
  if (!single && !pair) throw std::runtime_error(path + ": not a NIfTI-1 file (bad magic)");

  if (h.dim[0] < 3) throw std::runtime_error(path + ": expected a 3D volume");
  for (int d = 4; d <= h.dim[0] && d < 8; ++d)
    if (h.dim[d] > 1) throw std::runtime_error(path + ": multi-frame volumes are unsupported");

  Volume3 v;
  for (int a = 0; a < 3; ++a) {
    v.dims[a] = h.dim[a + 1];
    v.spacing[a] = std::abs(h.pixdim[a + 1]);
    if (v.dims[a] <= 0) throw std::runtime_error(path + ": non-positive dimension");
    if (!(v.spacing[a] > 0)) throw std::runtime_error(path + ": non-positive pixdim");
  }

  if (h.sform_code > 0) {
    Eigen::Matrix3d m;
    m << h.srow_x[0], h.srow_x[1], h.srow_x[2], h.srow_y[0], h.srow_y[1], h.srow_y[2],
        h.srow_z[0], h.srow_z[1], h.srow_z[2];
    for (int j = 0; j < 3; ++j) {
      const double len = m.col(j).norm();
      if (len > 0) v.orientation.col(j) = m.col(j) / len;
    }
    v.origin = Eigen::Vector3d(h.srow_x[3], h.srow_y[3], h.srow_z[3]);
  } else if (h.qform_code > 0) {
    v.orientation = qform_rotation(h);
    v.origin = Eigen::Vector3d(h.qoffset_x, h.qoffset_y, h.qoffset_z);
  }

  float slope = h.scl_slope;
  if (slope == 0.0f || !std::isfinite(slope)) slope = 1.0f;
  float inter = std::isfinite(h.scl_inter) ? h.scl_inter : 0.0f;

  int bytes_per_voxel = 0;
  switch (h.datatype) {
    case DT_UINT8: bytes_per_voxel = 1; break;
    case DT_INT16: bytes_per_voxel = 2; break;
    case DT_INT32: bytes_per_voxel = 4; break;
    case DT_FLOAT32: bytes_per_voxel = 4; break;
    case DT_FLOAT64: bytes_per_voxel = 8; break;
    default:
      throw std::runtime_error(path + ": unsupported datatype " + std::to_string(h.datatype));
  }

  const std::int64_t nvox = v.size();
  std::vector<char> raw(std::size_t(nvox) * bytes_per_voxel);
  if (single) {
    const long skip = long(h.vox_offset) - long(sizeof(h));
    if (skip < 0) throw std::runtime_error(path + ": vox_offset below header size");
    if (skip > 0) {
      std::vector<char> pad(std::size_t(skip));
      in.read(pad.data(), pad.size(), path + " (extensions)");
    }
    in.read(raw.data(), raw.size(), path + " (voxel data)");
  } else {
    // .hdr/.img pair: voxel data lives in the sibling .img file
    std::string img = path;
    for (const char* suf : {".hdr.gz", ".hdr"}) {
      if (ends_with(img, suf)) {
        img = img.substr(0, img.size() - std::strlen(suf)) + ".img";
        break;
      }
    }
    GzFile imgf(img, "rb");
    if (h.vox_offset > 0) {
      std::vector<char> pad(std::size_t(h.vox_offset));
      imgf.read(pad.data(), pad.size(), img + " (offset)");
    }
    imgf.read(raw.data(), raw.size(), img + " (voxel data)");
  }

  v.data.resize(nvox);
  switch (h.datatype) {
    case DT_UINT8: convert_voxels<std::uint8_t>(raw, swapped, slope, inter, v.data); break;
    case DT_INT16: convert_voxels<std::int16_t>(raw, swapped, slope, inter, v.data); break;
    case DT_INT32: convert_voxels<std::int32_t>(raw, swapped, slope, inter, v.data); break;
    case DT_FLOAT32: convert_voxels<float>(raw, swapped, slope, inter, v.data); break;
    case DT_FLOAT64: {
      const double* src = reinterpret_cast<const double*>(raw.data());
      for (std::int64_t i = 0; i < nvox; ++i) {
        double d = src[i];
        if (swapped) d = bswap(d);
        v.data[i] = slope * float(d) + inter;
      }
      break;
    }
  }
  validate(v);
  return v;
}

void write_nifti(const Volume3& v, const std::string& path) {
  static_assert(std::endian::native == std::endian::little,
                "writer assumes a little-endian host");
  validate(v);

  Nifti1Header h{};
  h.sizeof_hdr = 348;
  h.regular = 'r';
  h.dim[0] = 3;
  for (int a = 0; a < 3; ++a) h.dim[a + 1] = std::int16_t(v.dims[a]);
  for (int d = 4; d < 8; ++d) h.dim[d] = 1;
  h.datatype = DT_FLOAT32;
  h.bitpix = 32;
  h.pixdim[0] = 1.0f;
  for (int a = 0; a < 3; ++a) h.pixdim[a + 1] = float(v.spacing[a]);
  h.vox_offset = 352.0f;
  h.scl_slope = 1.0f;
  h.scl_inter = 0.0f;
  h.xyzt_units = 2;  // NIFTI_UNITS_MM
  h.qform_code = 0;
  h.sform_code = 1;
  const Eigen::Matrix3d m = v.orientation * v.spacing.asDiagonal();
  for (int j = 0; j < 3; ++j) {
    h.srow_x[j] = float(m(0, j));
    h.srow_y[j] = float(m(1, j));
    h.srow_z[j] = float(m(2, j));
  }
  h.srow_x[3] = float(v.origin[0]);
  h.srow_y[3] = float(v.origin[1]);
  h.srow_z[3] = float(v.origin[2]);
  std::strncpy(h.magic, "n+1", 4);

  const bool gz = ends_with(path, ".gz");
  GzFile out(path, gz ? "wb" : "wbT");  // 'T' stores uncompressed
  out.write(&h, sizeof(h));
  const char pad[4] = {0, 0, 0, 0};
  out.write(pad, 4);
  out.write(v.data.data(), std::size_t(v.size()) * sizeof(float));
}

}  // namespace anisosim
