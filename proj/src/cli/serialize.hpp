#pragma once

#include <json.hpp>

#include "config.hpp"
#include "nlse/oscillator.hpp"
#include "nlse/stitching.hpp"

namespace nlse::cli {

/// omega, E, lambda (1), epsilon (1), c (0), nonlinearity ("cubic").
WaveParams read_wave(const Config& c, bool need_omega = true, bool need_energy = true);
nlohmann::json wave_json(const WaveParams& p);

/// Segment-list document: per-segment parameters, sign, offset and domain,
/// stitch points and mismatch report.
nlohmann::json to_json(const PiecewiseSolution& s);
PiecewiseSolution piecewise_from_json(const nlohmann::json& doc);

}  // namespace nlse::cli
