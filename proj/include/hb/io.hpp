#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hb/types.hpp"

namespace hb {

/// Binary field format "HBF1", version 1, little-endian:
///   magic[4] = "HBF1", u16 version,
///   u32 d, u32 n_t, u32 n_x, f64 t_max, f64 L,
///   u32 q, f64 H[d+1],
///   f64 values[] until end of file, row-major in (t, x_1, ..., x_d).
/// The field kind is recovered from the value count: the sheet, cell and
/// solution extents are pairwise distinct for any valid grid. White-noise
/// fields record q = 0 and an all-zero H vector.
void write_field_bin(const std::filesystem::path& path, const FieldSample& field, int q,
                     const std::vector<double>& H);
void write_field_bin(const std::filesystem::path& path, const FieldSample& field);

struct FieldFile {
    FieldSample field;
    int q = 0;
    std::vector<double> H;
};

FieldFile read_field_bin(const std::filesystem::path& path);

/// CSV export: mandatory header, one row per lattice point, coordinates
/// first and the value last. Cell-indexed fields use the cell's lower
/// corner as its coordinate.
void write_field_csv(const std::filesystem::path& path, const FieldSample& field);

std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_file(const std::filesystem::path& path);

} // namespace hb
