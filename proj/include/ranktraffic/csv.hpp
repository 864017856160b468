#pragma once

#include <string>

#include "ranktraffic/analysis.hpp"
#include "ranktraffic/hit_sim.hpp"

namespace ranktraffic {

// Raw curve CSV: metadata comment lines, then header "R,t" and one row per
// rank. Doubles are printed with round-trip precision so identical curves
// produce byte-identical files.
void write_traffic_csv(const TrafficCurve& curve, const std::string& path);
TrafficCurve read_traffic_csv(const std::string& path);

// Binned curve CSV: "bin_center,t_mean,t_stderr,count".
void write_binned_csv(const BinnedCurve& curve, const std::string& path);
BinnedCurve read_binned_csv(const std::string& path);

std::string format_double(double v);

}  // namespace ranktraffic
