#pragma once

#include "nbinv/element_ops.hpp"
#include "nbinv/inversion.hpp"
#include "nbinv/matrix.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace nbinv {

struct ExperimentOutcome;

// JSON wire formats. Matrix files: {"n": .., "descriptor": {..}, "entries": [[..]]}
// with instance payloads as [re, im] pair arrays. Dumps are canonical (sorted
// keys, shortest round-trip doubles), so scalar-backed payloads round-trip
// byte-identically.

nlohmann::json descriptor_to_json(const Descriptor& d);
Descriptor descriptor_from_json(const nlohmann::json& j); // throws Parse

nlohmann::json element_to_json(const Element& e);
Element element_from_json(const Descriptor& d, const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

std::string matrix_to_string(const Matrix& m);
Matrix matrix_from_string(const std::string& text);

nlohmann::json certificate_to_json(const InversionCertificate& cert);
nlohmann::json spectral_report_to_json(const SpectralReport& report);
nlohmann::json outcome_to_json(const ExperimentOutcome& outcome);

// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path); // throws Io

} // namespace nbinv
