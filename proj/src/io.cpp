#include "haptowave/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "haptowave/params.hpp"
#include "haptowave/wave.hpp"

namespace haptowave {

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return buf;
}

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // \n only, on every platform
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

}  // namespace

void write_summary_csv(const std::string& path,
                       const std::vector<FieldSnapshot>& snaps, double rho_max,
                       double support_threshold_frac) {
    std::ofstream f = open_out(path);
    f << "t,x,rho,M,E,ybar\n";
    for (const FieldSnapshot& s : snaps) {
        std::vector<std::optional<double>> ybar;
        if (!s.n.empty()) {
            ybar = extract_ybar(s, rho_max, support_threshold_frac);
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (int i = 0; i <= s.nx(); ++i) {
            const double yb =
                (!ybar.empty() && ybar[i]) ? *ybar[i] : nan;
            f << format_sci(s.t) << ',' << format_sci(s.x[i]) << ','
              << format_sci(s.rho[i]) << ',' << format_sci(s.M[i]) << ','
              << format_sci(s.E[i]) << ',' << format_sci(yb) << '\n';
        }
    }
}

void write_field_csv(const std::string& path,
                     const std::vector<FieldSnapshot>& snaps) {
    std::ofstream f = open_out(path);
    f << "t,x,y,n\n";
    for (const FieldSnapshot& s : snaps) {
        for (int i = 0; i <= s.nx(); ++i) {
            for (int j = 0; j <= s.ny(); ++j) {
                f << format_sci(s.t) << ',' << format_sci(s.x[i]) << ','
                  << format_sci(s.y[j]) << ',' << format_sci(s.n_at(i, j))
                  << '\n';
            }
        }
    }
}

void write_summary_csv_2d(const std::string& path,
                          const std::vector<FieldSnapshot2D>& snaps,
                          double rho_max, double support_threshold_frac) {
    std::ofstream f = open_out(path);
    f << "t,x1,x2,rho,M,E,ybar\n";
    const double thr_frac = support_threshold_frac;
    for (const FieldSnapshot2D& s : snaps) {
        const double thr = thr_frac * rho_max;
        const int ny = s.ny();
        for (int i1 = 0; i1 <= s.nx1(); ++i1) {
            for (int i2 = 0; i2 <= s.nx2(); ++i2) {
                const int c = s.col(i1, i2);
                double yb = std::numeric_limits<double>::quiet_NaN();
                if (!s.n.empty() && s.rho[c] > thr) {
                    int jbest = 0;
                    double best = s.n[c * (ny + 1)];
                    for (int j = 1; j <= ny; ++j) {
                        const double v = s.n[c * (ny + 1) + j];
                        if (v > best) {
                            best = v;
                            jbest = j;
                        }
                    }
                    yb = s.y[jbest];
                }
                f << format_sci(s.t) << ',' << format_sci(s.x1[i1]) << ','
                  << format_sci(s.x2[i2]) << ',' << format_sci(s.rho[c]) << ','
                  << format_sci(s.M[c]) << ',' << format_sci(s.E[c]) << ','
                  << format_sci(yb) << '\n';
            }
        }
    }
}

void write_field_csv_2d(const std::string& path,
                        const std::vector<FieldSnapshot2D>& snaps) {
    std::ofstream f = open_out(path);
    f << "t,x1,x2,y,n\n";
    for (const FieldSnapshot2D& s : snaps) {
        const int ny = s.ny();
        for (int i1 = 0; i1 <= s.nx1(); ++i1) {
            for (int i2 = 0; i2 <= s.nx2(); ++i2) {
                const int c = s.col(i1, i2);
                for (int j = 0; j <= ny; ++j) {
                    f << format_sci(s.t) << ',' << format_sci(s.x1[i1]) << ','
                      << format_sci(s.x2[i2]) << ',' << format_sci(s.y[j])
                      << ',' << format_sci(s.n[c * (ny + 1) + j]) << '\n';
                }
            }
        }
    }
}

void write_transect_csv(const std::string& path,
                        const std::vector<TransectProfile>& transects) {
    std::ofstream f = open_out(path);
    f << "t,r,rho,M,E,ybar,sigma_y,cells\n";
    for (const TransectProfile& tp : transects) {
        for (size_t b = 0; b < tp.r.size(); ++b) {
            f << format_sci(tp.t) << ',' << format_sci(tp.r[b]) << ','
              << format_sci(tp.rho[b]) << ',' << format_sci(tp.M[b]) << ','
              << format_sci(tp.E[b]) << ',' << format_sci(tp.ybar[b]) << ','
              << format_sci(tp.sigma_y[b]) << ',' << tp.cells[b] << '\n';
        }
    }
}

std::vector<FieldSnapshot> read_field_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line) || line != "t,x,y,n") {
        throw IoError("'" + path + "': expected header t,x,y,n");
    }
    struct Row {
        double t, x, y, n;
    };
    std::vector<Row> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        Row r;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r.t, &r.x, &r.y,
                        &r.n) != 4) {
            throw IoError("'" + path + "': malformed row '" + line + "'");
        }
        rows.push_back(r);
    }
    // group by t in file order; grids reconstructed from unique coordinates
    std::vector<FieldSnapshot> snaps;
    size_t q = 0;
    while (q < rows.size()) {
        const double t = rows[q].t;
        size_t end = q;
        while (end < rows.size() && rows[end].t == t) ++end;
        FieldSnapshot s;
        s.t = t;
        std::vector<double> xs, ys;
        for (size_t k = q; k < end; ++k) {
            if (xs.empty() || rows[k].x != xs.back()) xs.push_back(rows[k].x);
        }
        for (size_t k = q; k < end && rows[k].x == rows[q].x; ++k) {
            ys.push_back(rows[k].y);
        }
        s.x = xs;
        s.y = ys;
        s.n.resize(xs.size() * ys.size());
        if ((end - q) != s.n.size()) {
            throw IoError("'" + path + "': ragged snapshot at t=" + format_sci(t));
        }
        for (size_t k = q; k < end; ++k) s.n[k - q] = rows[k].n;
        // rho/M/E not stored in field files; rho recomputed by trapezoid
        s.rho.assign(xs.size(), 0.0);
        const double dy = ys.size() > 1 ? ys[1] - ys[0] : 1.0;
        const int ny = static_cast<int>(ys.size()) - 1;
        for (size_t i = 0; i < xs.size(); ++i) {
            double acc = 0.0;
            for (int j = 0; j <= ny; ++j) {
                const double w = (j == 0 || j == ny) ? 0.5 : 1.0;
                acc += w * s.n[i * (ny + 1) + j];
            }
            s.rho[i] = acc * dy;
        }
        s.M.assign(xs.size(), 0.0);
        s.E.assign(xs.size(), 0.0);
        snaps.push_back(std::move(s));
        q = end;
    }
    return snaps;
}

void write_oracle_fields_csv(const std::string& path,
                             const std::vector<OracleFieldRow>& rows) {
    std::ofstream f = open_out(path);
    f << "t,x,rho_ib,rho_cont,rho_oracle,M_cont,M_oracle,E_cont,E_oracle,"
         "ybar\n";
    for (const OracleFieldRow& r : rows) {
        f << format_sci(r.t) << ',' << format_sci(r.x) << ','
          << format_sci(r.rho_ib) << ',' << format_sci(r.rho_cont) << ','
          << format_sci(r.rho_oracle) << ',' << format_sci(r.M_cont) << ','
          << format_sci(r.M_oracle) << ',' << format_sci(r.E_cont) << ','
          << format_sci(r.E_oracle) << ',' << format_sci(r.ybar) << '\n';
    }
}

NdjsonLog::NdjsonLog(const std::string& path)
    : out_(path, std::ios::binary | std::ios::app) {
    if (!out_) throw IoError("cannot open '" + path + "' for appending");
}

void NdjsonLog::record(const std::string& json_line) {
    out_ << json_line << '\n';
    out_.flush();
}

NdjsonLog::~NdjsonLog() = default;

}  // namespace haptowave
