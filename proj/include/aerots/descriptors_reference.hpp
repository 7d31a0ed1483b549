#pragma once

#include <span>

#include "aerots/descriptors.hpp"

namespace aerots::descriptors::reference {

// Serial reference path. Every descriptor is recomputed from its definition
// by direct summation, independently of the others and of the optimized
// kernel; featurize_serial is a plain single-threaded loop. The test suite
// checks the OpenMP kernel against this path, and the benchmark target
// compares their wall-clock behaviour.

double mean(std::span<const double> w);
double population_std(std::span<const double> w);
double minimum(std::span<const double> w);
double maximum(std::span<const double> w);
double range(std::span<const double> w);
double quantile(std::span<const double> w, double p);
double first_value(std::span<const double> w);
double last_value(std::span<const double> w);
double drift(std::span<const double> w);
double diff_mean(std::span<const double> w);
double diff_population_std(std::span<const double> w);
double diff_abs_mean(std::span<const double> w);
double diff_abs_max(std::span<const double> w);
double lag1_autocorr(std::span<const double> w);

void describe_channel(std::span<const double> w, std::span<double> out);

FeatureMatrix featurize_serial(const WindowSet& ws, const GroupSet& groups);

}  // namespace aerots::descriptors::reference
