#include "vband/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vband/config.hpp"
#include "vband/error.hpp"

namespace vband {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          const std::string& header, std::size_t columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw IoError(path.string() + ": unexpected header");
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + comma, v);
      if (ec != std::errc() || ptr != line.data() + comma) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number");
      }
      row.push_back(v);
      pos = comma + 1;
    }
    if (row.size() != columns) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_row(std::ofstream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_scientific(v);
    first = false;
  }
  out << '\n';
}

}  // namespace

std::string format_scientific(double value) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 16);
  return std::string(buf, ptr);
}

void write_series(const std::vector<SeriesPoint>& series, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << kSeriesHeader << '\n';
  for (const SeriesPoint& p : series) {
    write_row(out, {p.time, p.e_l2, p.field_energy, p.moments[0], p.moments[1], p.moments[2],
                    p.moments[3], p.moments[4], p.total_energy});
  }
  finish(out, path);
}

std::vector<SeriesPoint> read_series(const std::filesystem::path& path) {
  std::vector<SeriesPoint> out;
  for (const auto& r : read_csv(path, kSeriesHeader, 9)) {
    SeriesPoint p;
    p.time = r[0];
    p.e_l2 = r[1];
    p.field_energy = r[2];
    for (int l = 0; l < kMomentCount; ++l) p.moments[l] = r[3 + l];
    p.total_energy = r[8];
    out.push_back(p);
  }
  return out;
}

void write_snapshot(const PdfSnapshot& snapshot, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << kSnapshotHeader << '\n';
  for (std::size_t i = 0; i < snapshot.f.size(); ++i) {
    write_row(out, {snapshot.x[i], snapshot.v[i], snapshot.f[i]});
  }
  finish(out, path);
}

PdfSnapshot read_snapshot(const std::filesystem::path& path) {
  PdfSnapshot s;
  for (const auto& r : read_csv(path, kSnapshotHeader, 3)) {
    s.x.push_back(r[0]);
    s.v.push_back(r[1]);
    s.f.push_back(r[2]);
  }
  return s;
}

void write_density(const DensityProfile& density, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "x,rho\n";
  for (std::size_t i = 0; i < density.x.size(); ++i) {
    write_row(out, {density.x[i], density.rho[i]});
  }
  finish(out, path);
}

void write_metadata(const Metadata& metadata, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : metadata) {
    std::string v = value;
    for (char& ch : v) {
      if (ch == '\n' || ch == '\r') ch = ' ';
    }
    out << key << '=' << v << '\n';
  }
  finish(out, path);
}

Metadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Metadata out;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

std::string code_version() { return "vband 1.0.0"; }

Metadata run_metadata(const RunResult& result) {
  Metadata m;
  m.emplace_back("code_version", code_version());
  m.emplace_back("status", result.ok ? "ok" : "failed");
  if (!result.ok) m.emplace_back("failure_reason", result.failure);
  for (const auto& kv : config_entries(result.config)) m.push_back(kv);
  m.emplace_back("field_boundary_condition",
                 result.config.gauge == Gauge::kZeroMean
                     ? "zero-mean E at t=0"
                     : "E(x_min)=" + format_double(result.config.gauge_anchor) + " at t=0");
  m.emplace_back("final_time", format_scientific(result.state.time));
  m.emplace_back("steps", std::to_string(result.state.steps));
  m.emplace_back("rho0", format_scientific(result.state.e.rho0));
  m.emplace_back("j0", format_scientific(result.state.e.j0));
  if (result.moment_error) m.emplace_back("moment_l2_error", format_scientific(*result.moment_error));
  if (result.band_moment_error) {
    m.emplace_back("band_moment_l2_error", format_scientific(*result.band_moment_error));
  }
  if (result.field_error) m.emplace_back("field_l2_error", format_scientific(*result.field_error));
  auto fit = [&](const char* name, const std::optional<RateFit>& f, const std::string& err) {
    if (f) {
      m.emplace_back(std::string(name) + "_rate", format_scientific(f->rate));
      m.emplace_back(std::string(name) + "_peaks", std::to_string(f->peak_times.size()));
    } else if (!err.empty()) {
      m.emplace_back(std::string(name) + "_error", err);
    }
  };
  fit("decay_fit", result.decay_fit, result.decay_fit_error);
  fit("growth_fit", result.growth_fit, result.growth_fit_error);
  m.emplace_back("wall_seconds", format_scientific(result.wall_seconds));
  return m;
}

std::vector<std::filesystem::path> write_run_outputs(const RunResult& result) {
  const std::filesystem::path dir = result.config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  Metadata meta = run_metadata(result);
  // Metadata goes first so that a later I/O failure still leaves a record.
  write_metadata(meta, dir / "metadata.txt");
  written.push_back(dir / "series.csv");
  write_series(result.state.series, written.back());
  for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
    written.push_back(dir / ("snapshot_" + std::to_string(k) + ".csv"));
    write_snapshot(result.snapshots[k], written.back());
    meta.emplace_back("snapshot_" + std::to_string(k) + "_time",
                      format_scientific(result.snapshots[k].time));
  }
  for (std::size_t k = 0; k < result.densities.size(); ++k) {
    written.push_back(dir / ("density_" + std::to_string(k) + ".csv"));
    write_density(result.densities[k], written.back());
  }
  write_metadata(meta, dir / "metadata.txt");
  written.push_back(dir / "metadata.txt");
  return written;
}

void write_failure_metadata(const std::filesystem::path& dir, const std::string& reason,
                            const Metadata& extra) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  Metadata m{{"code_version", code_version()}, {"status", "failed"}, {"failure_reason", reason}};
  m.insert(m.end(), extra.begin(), extra.end());
  write_metadata(m, dir / "metadata.txt");
}

}  // namespace vband
