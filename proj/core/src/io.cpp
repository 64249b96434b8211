#include "spdc/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

// Six significant digits; "-0" printed as "0".
std::ostream& number(std::ostream& out, double v) {
    if (v == 0.0) v = 0.0;
    return out << std::setprecision(6) << v;
}

} // namespace

void write_emission_map_csv(std::ostream& out, const EmissionTimeMap& map) {
    out << "phi_deg,t_1e_fs,t_1o_fs,t_2e_fs,t_2o_fs\n";
    for (std::size_t i = 0; i < map.phi.size(); ++i) {
        const auto& t = map.times[i];
        number(out, rad_to_deg(map.phi[i])) << ',';
        number(out, t.e1) << ',';
        number(out, t.o1) << ',';
        number(out, t.e2) << ',';
        number(out, t.o2) << '\n';
    }
}

void write_scan_csv(std::ostream& out, const ScanSeries& series) {
    out << abscissa_label(series.kind) << ',' << series.ordinate << '\n';
    for (const auto& p : series.points) {
        number(out, p.x) << ',';
        number(out, p.value) << '\n';
    }
}

std::string summary_json(const VisibilitySummary& summary) {
    nlohmann::ordered_json j;
    j["visibility"] = summary.visibility;
    if (summary.fringe_period_fs)
        j["fringe_period_fs"] = *summary.fringe_period_fs;
    else
        j["fringe_period_fs"] = nullptr;
    j["tau_A_fs"] = summary.tau_a_fs;
    j["tau_B_fs"] = summary.tau_b_fs;
    return j.dump();
}

void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& fill) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        try {
            fill(out);
        } catch (...) {
            out.close();
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw;
        }
        out.flush();
        if (!out) {
            out.close();
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
    }
}

} // namespace spdc
