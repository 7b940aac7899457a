#include "powerloop/csvio.hpp"

#include "powerloop/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace powerloop {

std::string format_shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_g9(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    (void)ec;
    return std::string(buf, ptr);
}

std::string trace_csv(const SimTrace& trace) {
    std::string out = "t_s,p_rf_dbm,p_est_dbm,e_db,u_raw_db,u_applied_db,link_atten_db\n";
    for (const TraceRow& r : trace.rows) {
        out += format_g9(r.t_s);
        out += ',';
        out += format_g9(r.p_rf_dbm);
        out += ',';
        out += format_g9(r.p_est_dbm);
        out += ',';
        out += format_g9(r.e_db);
        out += ',';
        out += format_g9(r.u_raw_db);
        out += ',';
        out += format_g9(r.u_applied_db);
        out += ',';
        out += format_g9(r.link_atten_db);
        out += '\n';
    }
    return out;
}

std::string evm_csv(const std::vector<EvmCurve>& curves) {
    std::string out = "atten_db,drive_dbm,p_out_dbm,evm_pct\n";
    for (const EvmCurve& curve : curves) {
        for (const EvmPoint& p : curve.points) {
            out += format_g9(curve.atten_db);
            out += ',';
            out += format_g9(p.drive_dbm);
            out += ',';
            out += format_g9(p.p_out_dbm);
            out += ',';
            out += format_g9(p.evm_pct);
            out += '\n';
        }
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    if (f.bad()) throw IoError("read failed: " + path);
    return buf.str();
}

void write_trace_csv(const SimTrace& trace, const std::string& path) {
    write_text_file(path, trace_csv(trace));
}

void write_evm_csv(const std::vector<EvmCurve>& curves, const std::string& path) {
    write_text_file(path, evm_csv(curves));
}

} // namespace powerloop
