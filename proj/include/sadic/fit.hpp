// Holder-exponent fitting from spectral sweep tables.
#pragma once

#include "sadic/birkhoff.hpp"
#include "sadic/csv.hpp"

namespace sadic {

struct HolderFit {
    double alpha = 0.0;
    double gamma = 0.0;   // 2 (1 - alpha)
    double r0 = 0.0;      // start of the fitted R range
    double c1 = 0.0;      // envelope constant on the fitted range
    double residual = 0.0;
    int points = 0;
    std::size_t omegas = 0;
};

// Fits the uniform growth law over the omega band of a spectral table
// (columns omega, R, abs): for every R the largest |S_R| over omega is used.
// Needs at least three distinct R values.
HolderFit fit_holder(const CsvTable& table);
HolderFit fit_holder_file(const std::string& path);

} // namespace sadic
