#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "haptowave/snapshot.hpp"

namespace haptowave {

/// Full-precision scientific notation; round-trips doubles bit-exactly.
std::string format_sci(double v);

uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

/// Summary CSV: t,x,rho,M,E,ybar (ybar is nan outside the support).
void write_summary_csv(const std::string& path,
                       const std::vector<FieldSnapshot>& snaps, double rho_max,
                       double support_threshold_frac);

/// Full-field CSV: t,x,y,n.
void write_field_csv(const std::string& path,
                     const std::vector<FieldSnapshot>& snaps);

/// 2D variants: t,x1,x2,rho,M,E,ybar and t,x1,x2,y,n.
void write_summary_csv_2d(const std::string& path,
                          const std::vector<FieldSnapshot2D>& snaps,
                          double rho_max, double support_threshold_frac);
void write_field_csv_2d(const std::string& path,
                        const std::vector<FieldSnapshot2D>& snaps);

/// Transect CSV: t,r,rho,M,E,ybar,sigma_y,cells.
void write_transect_csv(const std::string& path,
                        const std::vector<TransectProfile>& transects);

/// Reads a full-field CSV back into snapshots (grouped by t). Values are
/// reconstructed bit-exactly from the emitted text.
std::vector<FieldSnapshot> read_field_csv(const std::string& path);

/// One row per x of oracle vs measured fields (compare mode plotting aid).
struct OracleFieldRow {
    double t, x, rho_ib, rho_cont, rho_oracle, M_cont, M_oracle, E_cont,
        E_oracle, ybar;
};
void write_oracle_fields_csv(const std::string& path,
                             const std::vector<OracleFieldRow>& rows);

/// Append-safe NDJSON run log. Records carry no wall-clock data so artifact
/// bytes depend only on (config, seed).
class NdjsonLog {
public:
    explicit NdjsonLog(const std::string& path);
    void record(const std::string& json_line);
    ~NdjsonLog();

private:
    std::ofstream out_;
};

}  // namespace haptowave
