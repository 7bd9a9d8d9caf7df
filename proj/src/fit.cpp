#include "sadic/fit.hpp"

#include <algorithm>
#include <map>

namespace sadic {

HolderFit fit_holder(const CsvTable& table) {
    int col_r = table.column("R");
    int col_abs = table.column("abs");
    int col_omega = table.column("omega");
    if (col_r < 0 || col_abs < 0)
        throw std::invalid_argument("fit_holder: table needs columns R and abs");

    std::map<double, double> worst; // R -> max |S_R| over omega
    std::map<double, int> omegas_seen;
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
        double r = table.number(row, col_r);
        double value = table.number(row, col_abs);
        auto [it, fresh] = worst.try_emplace(r, value);
        if (!fresh) it->second = std::max(it->second, value);
        if (col_omega >= 0) omegas_seen[table.number(row, col_omega)] = 1;
    }
    if (worst.size() < 3) throw std::invalid_argument("fit_holder: need at least 3 distinct R values");

    std::vector<double> r_values, rms_values;
    for (const auto& [r, v] : worst) {
        r_values.push_back(r);
        rms_values.push_back(v);
    }
    PowerFit fit = fit_power_law(r_values, rms_values);
    HolderFit out;
    out.alpha = fit.alpha;
    out.gamma = fit.gamma;
    out.r0 = fit.r0;
    out.c1 = fit.c1;
    out.residual = fit.residual;
    out.points = fit.points;
    out.omegas = omegas_seen.empty() ? 1 : omegas_seen.size();
    return out;
}

HolderFit fit_holder_file(const std::string& path) { return fit_holder(read_csv(path)); }

} // namespace sadic
