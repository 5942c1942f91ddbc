// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "metriclab/correspondence.hpp"
#include "metriclab/metric_space.hpp"
#include "metriclab/norms.hpp"

namespace metriclab::io {

// reports and documents use stable key order for diffability
using json = nlohmann::ordered_json;

json space_to_json(const MetricSpace& s);
json space_to_json(const RationalSpace& s);

/// Accepts numbers or decimal/fraction strings in "d".
MetricSpace space_from_json(const json& doc);
RationalSpace rational_space_from_json(const json& doc);

json witness_to_json(const Witness& w);
Witness witness_from_json(const json& doc);

json certificate_to_json(const Certificate<double>& c);
json certificate_to_json(const Certificate<Rat>& c);

/// {"kind":"euclidean"|"coeff_norm"|"max_functionals", ...}
norms::NormOracle norm_from_json(const json& doc);
json norm_to_json(const norms::NormOracle& o);  // euclidean only round-trips fully
json coeff_norm_to_json(const norms::CoefficientNorm& n);
norms::CoefficientNorm coeff_norm_from_json(const json& doc);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& doc);

} // namespace metriclab::io
