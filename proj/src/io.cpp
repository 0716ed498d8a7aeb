#include "sqg/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sqg {

namespace {

constexpr char kMagic[4] = {'S', 'Q', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    std::array<unsigned char, 4> b;
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    std::array<unsigned char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint32_t get_u32(std::istream& is) {
    std::array<unsigned char, 4> b;
    is.read(reinterpret_cast<char*>(b.data()), 4);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    std::array<unsigned char, 8> b;
    is.read(reinterpret_cast<char*>(b.data()), 8);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("checkpoint: cannot open " + path.string() + " for writing");
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(cp.theta.domain().N));
    put_f64(os, cp.theta.domain().L);
    put_f64(os, cp.t);
    put_f64(os, cp.alpha);
    put_f64(os, cp.nu);
    for (const auto& z : cp.theta.coeffs()) {
        put_f64(os, z.real());
        put_f64(os, z.imag());
    }
    if (!os) throw std::runtime_error("checkpoint: write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path.string());
    const std::uint32_t version = get_u32(is);
    if (version != kVersion)
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    const std::uint32_t N = get_u32(is);
    const double L = get_f64(is);
    if (N < 8 || N % 2 != 0 || !(L > 0.0))
        throw std::runtime_error("checkpoint: invalid header in " + path.string());

    Checkpoint cp{SpectralField(make_domain(L, static_cast<int>(N))), 0.0, 0.0, 0.0};
    cp.t = get_f64(is);
    cp.alpha = get_f64(is);
    cp.nu = get_f64(is);
    auto c = cp.theta.mutable_coeffs();
    for (auto& z : c) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        z = {re, im};
    }
    // Must be exactly at EOF.
    is.peek();
    if (!is.eof()) throw std::runtime_error("checkpoint: trailing bytes in " + path.string());
    cp.theta.validate();
    return cp;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : out_(path), ncols_(columns.size()) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::write_row(const std::vector<double>& values) {
    if (values.size() != ncols_) throw std::invalid_argument("csv: row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format_double(values[i]);
    out_ << "\n";
}

void CsvWriter::close() { out_.close(); }

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("csv: cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("csv: empty file " + path.string());
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != t.columns.size())
            throw std::runtime_error("csv: ragged row in " + path.string());
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<double> CsvTable::column(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j] == name) {
            std::vector<double> v;
            v.reserve(rows.size());
            for (const auto& r : rows) v.push_back(r[j]);
            return v;
        }
    }
    throw std::invalid_argument("csv: no column named " + name);
}

std::string sha256_hex(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("digest: cannot open " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof buf);
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        char b[3];
        std::snprintf(b, sizeof b, "%02x", md[i]);
        hex += b;
    }
    return hex;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    nlohmann::json j;
    j["config"] = m.config_echo;
    j["code_version"] = m.code_version;
    j["started_at"] = m.started_at;
    j["finished_at"] = m.finished_at;
    j["files"] = nlohmann::json::object();
    for (const auto& [name, digest] : m.file_digests) j["files"][name] = digest;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("manifest: cannot open " + path.string());
    os << j.dump(2) << "\n";
}

std::string iso_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

std::vector<std::string> sync_csv_columns(int q_max) {
    std::vector<std::string> cols = {"t",           "besov_w",     "l2_w",
                                     "linf_theta1", "linf_theta2", "force_gap"};
    for (int q = -1; q <= q_max; ++q) cols.push_back("shell_q" + std::to_string(q) + "_w");
    return cols;
}

void write_sync_csv(const std::filesystem::path& path, const SyncResult& r) {
    CsvWriter csv(path, sync_csv_columns(r.q_max));
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        std::vector<double> row = {r.times[i],       r.besov_w[i],     r.l2_w[i],
                                   r.linf_theta1[i], r.linf_theta2[i], r.force_gap[i]};
        row.insert(row.end(), r.shells_w[i].begin(), r.shells_w[i].end());
        csv.write_row(row);
    }
    csv.close();
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepCsvRow>& rows) {
    CsvWriter csv(path, {"seed", "Q", "synchronized", "fitted_rate", "fit_r2", "decades"});
    for (const auto& r : rows)
        csv.write_row({double(r.seed), double(r.row.Q),
                       r.row.verdict == Verdict::synchronized ? 1.0 : 0.0, r.row.fitted_rate,
                       r.row.fit_r2, r.row.decades});
    csv.close();
}

}  // namespace sqg
