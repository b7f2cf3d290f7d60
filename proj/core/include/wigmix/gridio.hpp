#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wigmix/flowlines.hpp"
#include "wigmix/grid.hpp"
#include "wigmix/observables.hpp"

namespace wigmix {

/// Text-format grid I/O.
///
/// Every file is pure text: a block of "# key: value" header lines (grid
/// extents, point counts, meaning, mode, tau, column names) followed by CSV
/// data rows in fixed row-major order. Numbers are written with 17
/// significant digits via std::to_chars, so identical in-memory data always
/// produces byte-identical files and values round-trip exactly.

/// Shortest round-trip decimal form (up to 17 significant digits).
std::string format_double(double v);

/// Scalar field plus the identity header entries that ScalarField itself
/// does not carry.
struct ScalarFieldFile {
  ScalarField field;
  Mode mode = Mode::b;
  double tau = 0.0;
};

void write_scalar_field(const std::filesystem::path& path,
                        const ScalarField& field, Mode mode, double tau);
ScalarFieldFile read_scalar_field(const std::filesystem::path& path);

void write_vector_field(const std::filesystem::path& path,
                        const VectorField& field);
VectorField read_vector_field(const std::filesystem::path& path);

/// Velocity grid: rows "x,p,wx,wp,valid" where masked cells carry zeros and
/// valid=0; the resolved threshold and j_floor are in the header.
void write_velocity_field(const std::filesystem::path& path,
                          const VelocityField& field, Mode mode, double tau);

/// Lifted-degeneracy cells of a velocity field, rows "i,j,x,p".
void write_singular_cells(const std::filesystem::path& path,
                          const VelocityField& field, Mode mode, double tau);

/// Streamline polylines: per line a "# line" annotation with the two
/// termination reasons, then rows "line,vertex,x,p,speed".
void write_field_lines(const std::filesystem::path& path,
                       const std::vector<FieldLine>& lines, Mode mode,
                       double tau);

/// Observables table, one CSV row per sweep record.
void write_sweep_records(const std::filesystem::path& path,
                         const std::vector<SweepRecord>& records);

/// Hex-encoded SHA-256 of a file's bytes (for the run manifest).
std::string sha256_file(const std::filesystem::path& path);

}  // namespace wigmix
