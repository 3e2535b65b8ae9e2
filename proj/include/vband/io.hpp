#ifndef VBAND_IO_HPP_
#define VBAND_IO_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vband/diagnostics.hpp"
#include "vband/driver.hpp"

namespace vband {

// CSV values use 17 significant digits in scientific notation and LF line
// endings, so reading a file back reproduces the doubles exactly.

inline constexpr const char* kSeriesHeader =
    "time,e_l2,field_energy,m0,m1,m2,m3,m4,total_energy";
inline constexpr const char* kSnapshotHeader = "x,v,f";

/// "%.16e" equivalent.
std::string format_scientific(double value);

void write_series(const std::vector<SeriesPoint>& series, const std::filesystem::path& path);
std::vector<SeriesPoint> read_series(const std::filesystem::path& path);

void write_snapshot(const PdfSnapshot& snapshot, const std::filesystem::path& path);
/// Time is not stored in the file; the returned snapshot has time 0.
PdfSnapshot read_snapshot(const std::filesystem::path& path);

/// Header `x,rho`.
void write_density(const DensityProfile& density, const std::filesystem::path& path);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Flat `key=value` lines.
void write_metadata(const Metadata& metadata, const std::filesystem::path& path);
Metadata read_metadata(const std::filesystem::path& path);

/// Resolved config, status, errors, fits and timing of one run.
Metadata run_metadata(const RunResult& result);

/// Writes series.csv, snapshot_<k>.csv, density_<k>.csv and metadata.txt
/// into config.output_dir. Returns the paths written.
std::vector<std::filesystem::path> write_run_outputs(const RunResult& result);

/// Metadata for a run that failed before producing a result.
void write_failure_metadata(const std::filesystem::path& dir, const std::string& reason,
                            const Metadata& extra = {});

/// Code version string recorded in metadata.
std::string code_version();

}  // namespace vband

#endif  // VBAND_IO_HPP_
