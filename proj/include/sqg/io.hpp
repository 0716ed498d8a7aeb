#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "sqg/experiments.hpp"

namespace sqg {

struct Checkpoint {
    SpectralField theta;
    double t = 0.0;
    double alpha = 0.0;
    double nu = 0.0;
};

/// Binary checkpoint, little-endian: magic "SQGF", version u32 = 1, N u32,
/// L f64, t f64, alpha f64, nu f64, then N*N coefficients as (re, im) f64
/// pairs, row-major with the k2 index fastest (FFT storage order).
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Decimal CSV with a fixed column order; floats at 17 significant digits so
/// doubles round-trip exactly.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
    void write_row(const std::vector<double>& values);
    void close();

  private:
    std::ofstream out_;
    std::size_t ncols_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

std::string format_double(double v);  // %.17g
std::string sha256_hex(const std::filesystem::path& path);

struct RunManifest {
    std::string config_echo;
    std::string code_version;
    std::string started_at;
    std::string finished_at;
    std::map<std::string, std::string> file_digests;  // name -> sha256
};

void write_manifest(const std::filesystem::path& path, const RunManifest& m);

std::string iso_timestamp_now();

/// Fixed-order columns t, besov_w, l2_w, linf_theta1, linf_theta2, force_gap,
/// then shell_q{-1..q_max}_w.
std::vector<std::string> sync_csv_columns(int q_max);
void write_sync_csv(const std::filesystem::path& path, const SyncResult& r);

struct SweepCsvRow {
    std::uint64_t seed = 0;
    SweepRow row;
};
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepCsvRow>& rows);

}  // namespace sqg
