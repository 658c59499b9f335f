#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tspkit/acoustics.hpp"
#include "tspkit/classify.hpp"
#include "tspkit/decompose.hpp"
#include "tspkit/signal_gen.hpp"
#include "tspkit/simchannel.hpp"
#include "tspkit/structured.hpp"

namespace tspkit {

using json = nlohmann::json;

// FNV-1a 64-bit digest, 16 hex chars; used for input provenance in reports.
std::string fnv1a_hex(const void* data, std::size_t size);
std::string digest_file(const std::string& path);

json capricep_spec_json(const CapricepSpec& spec);
CapricepSpec capricep_spec_from_json(const json& j);

// Stimulus sidecar: everything `measure` needs to redo the recovery, i.e. the
// layout, the allocation scheme, the gain, and the unit generation recipes.
json stimulus_sidecar(const StructuredTestSignal& s, const std::vector<CapricepSpec>& unit_specs,
                      const std::string& waveform_digest,
                      const std::vector<SegmentMarker>& segments = {});

struct SidecarContents {
    StructuredTestSignal structured;
    std::vector<CapricepSpec> unit_specs;
    std::vector<SegmentMarker> segments;
    std::string waveform_digest;
};

// Rebuilds the structured signal from its sidecar by regenerating the units
// (generation is deterministic) and recomposing.
SidecarContents structured_from_sidecar(const json& j);

json decomposition_document(const Decomposition& d, const json& config_echo,
                            const json& provenance);
Decomposition decomposition_from_document(const json& j);

// The analysis report: decomposition summary plus acoustic attributes. Bulky
// curves are left to the CSV exports.
json report_document(const Decomposition::Levels& levels, const AcousticReport& report,
                     const json& config_echo, const json& provenance);

// Scalar parts of the acoustic report back from a report document (curves and
// the per-bin response are not stored there).
AcousticReport acoustic_report_from_document(const json& j);

json class_result_json(const ClassResult& result);

// Channel description for `simulate`: fir from inline taps, a wav file, or a
// synthetic room spec; optional nonlinearity, noise and drift.
SimulatedChannel channel_from_json(const json& j, int sample_rate_hz);

void write_decay_csv(const std::string& path, const std::vector<NamedDecayCurve>& curves);
void write_response_csv(const std::string& path, const AcousticReport& report);

// Shared helpers for CLI output.
void write_text_file(const std::string& path, const std::string& contents);
json load_json_file(const std::string& path);

} // namespace tspkit
