#include "tspkit/serialize.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "tspkit/errors.hpp"
#include "tspkit/fft.hpp"
#include "tspkit/version.hpp"
#include "tspkit/wav.hpp"

namespace tspkit {

namespace {

constexpr const char* kAllocationScheme = "sylvester-slot-signs";

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json base_document(const char* type) {
    json j;
    j["schema"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["type"] = type;
    return j;
}

void require_type(const json& j, const char* type) {
    if (!j.is_object() || j.value("type", "") != std::string(type))
        throw DataError(std::string("document is not of type '") + type + "'");
    if (j.value("schema", -1) != kSchemaVersion)
        throw DataError("unsupported schema version");
}

[[noreturn]] void rethrow_json(const char* what, const std::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
}

} // namespace

std::string fnv1a_hex(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("digest: cannot open " + path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fnv1a_hex(bytes.data(), bytes.size());
}

json capricep_spec_json(const CapricepSpec& spec) {
    return {
        {"fft_length", spec.fft_length},
        {"n_sections", spec.n_sections},
        {"gd_sigma_samples", spec.gd_sigma_samples},
        {"gd_magnitude_samples", spec.gd_magnitude_samples},
        {"seed", spec.seed},
        {"effective_length", spec.effective_length},
    };
}

CapricepSpec capricep_spec_from_json(const json& j) {
    try {
        CapricepSpec spec;
        spec.fft_length = j.at("fft_length").get<std::size_t>();
        spec.n_sections = j.at("n_sections").get<int>();
        spec.gd_sigma_samples = j.at("gd_sigma_samples").get<double>();
        spec.gd_magnitude_samples = j.at("gd_magnitude_samples").get<double>();
        spec.seed = j.at("seed").get<std::uint64_t>();
        spec.effective_length = j.at("effective_length").get<std::size_t>();
        return spec;
    } catch (const json::exception& e) {
        rethrow_json("capricep spec", e);
    }
}

json stimulus_sidecar(const StructuredTestSignal& s, const std::vector<CapricepSpec>& unit_specs,
                      const std::string& waveform_digest,
                      const std::vector<SegmentMarker>& segments) {
    if (unit_specs.size() != s.units.size())
        throw ConfigError("sidecar: one generation spec per unit required");
    json j = base_document("structured-stimulus");
    j["sample_rate_hz"] = s.waveform.sample_rate_hz;
    j["hadamard_order"] = s.hadamard_order;
    j["period_samples"] = s.period_samples;
    j["repetitions"] = s.repetitions;
    j["allocation_scheme"] = kAllocationScheme;
    j["allocation"] = s.allocation;
    j["normalization_gain"] = s.normalization_gain;
    j["units"] = json::array();
    for (const auto& spec : unit_specs)
        j["units"].push_back({{"type", "capricep"}, {"spec", capricep_spec_json(spec)}});
    if (!segments.empty()) {
        j["segments"] = json::array();
        for (const auto& seg : segments)
            j["segments"].push_back(
                {{"label", seg.label}, {"start", seg.start}, {"length", seg.length}});
    }
    j["waveform_digest"] = waveform_digest;
    return j;
}

SidecarContents structured_from_sidecar(const json& j) {
    require_type(j, "structured-stimulus");
    try {
        SidecarContents out;
        const int rate = j.at("sample_rate_hz").get<int>();
        if (j.value("allocation_scheme", "") != kAllocationScheme)
            throw DataError("sidecar: unknown allocation scheme");

        std::vector<SampledSignal> units;
        for (const auto& u : j.at("units")) {
            if (u.value("type", "") != "capricep")
                throw DataError("sidecar: unsupported unit type");
            const auto spec = capricep_spec_from_json(u.at("spec"));
            out.unit_specs.push_back(spec);
            units.push_back(gen_unit_capricep(spec, rate).signal);
        }
        out.structured = compose_structured(units, j.at("period_samples").get<std::size_t>(),
                                            j.at("repetitions").get<std::size_t>());
        if (out.structured.hadamard_order != j.at("hadamard_order").get<std::size_t>())
            throw DataError("sidecar: hadamard_order does not match the unit count");
        if (j.contains("allocation") &&
            j.at("allocation").get<std::vector<std::vector<int>>>() != out.structured.allocation)
            throw DataError("sidecar: allocation matrix does not match the declared scheme");
        const double gain = j.at("normalization_gain").get<double>();
        if (std::abs(gain - out.structured.normalization_gain) >
            1e-9 * out.structured.normalization_gain)
            throw DataError("sidecar: normalization gain does not match the regenerated signal");

        if (j.contains("segments"))
            for (const auto& seg : j.at("segments"))
                out.segments.push_back({seg.at("label").get<std::string>(),
                                        seg.at("start").get<std::size_t>(),
                                        seg.at("length").get<std::size_t>()});
        out.waveform_digest = j.value("waveform_digest", "");
        return out;
    } catch (const json::exception& e) {
        rethrow_json("sidecar", e);
    }
}

json decomposition_document(const Decomposition& d, const json& config_echo,
                            const json& provenance) {
    json j = base_document("decomposition");
    j["sample_rate_hz"] = d.lti_ir.sample_rate_hz;
    j["ir_length"] = d.lti_ir.size();
    j["levels_db"] = {{"lti_db", d.levels_db.lti_db},
                      {"rtv_db", d.levels_db.rtv_db},
                      {"sdti_db", d.levels_db.sdti_db}};
    j["lti_ir"] = d.lti_ir.samples;
    j["rtv_power_spectrum"] = d.rtv_power_spectrum;
    j["sdti_power_spectrum"] = d.sdti_power_spectrum;
    j["config_echo"] = config_echo;
    j["provenance"] = provenance;
    return j;
}

Decomposition decomposition_from_document(const json& j) {
    require_type(j, "decomposition");
    try {
        Decomposition d;
        d.lti_ir.sample_rate_hz = j.at("sample_rate_hz").get<int>();
        d.lti_ir.samples = j.at("lti_ir").get<std::vector<double>>();
        d.rtv_power_spectrum = j.at("rtv_power_spectrum").get<std::vector<double>>();
        d.sdti_power_spectrum = j.at("sdti_power_spectrum").get<std::vector<double>>();
        const auto& levels = j.at("levels_db");
        d.levels_db.lti_db = levels.at("lti_db").get<double>();
        d.levels_db.rtv_db = levels.at("rtv_db").get<double>();
        d.levels_db.sdti_db = levels.at("sdti_db").get<double>();

        const std::size_t bins = d.lti_ir.size() / 2 + 1;
        if (d.lti_ir.empty() || d.rtv_power_spectrum.size() != bins ||
            d.sdti_power_spectrum.size() != bins)
            throw DataError("decomposition document: inconsistent array sizes");
        d.lti_spectrum = rfft(d.lti_ir.samples, d.lti_ir.size());
        return d;
    } catch (const json::exception& e) {
        rethrow_json("decomposition document", e);
    }
}

json report_document(const Decomposition::Levels& levels, const AcousticReport& report,
                     const json& config_echo, const json& provenance) {
    json j = base_document("report");
    j["sample_rate_hz"] = report.sample_rate_hz;
    j["n_fft"] = report.n_fft;
    j["decomposition"] = {{"lti_db", levels.lti_db},
                          {"rtv_db", levels.rtv_db},
                          {"sdti_db", levels.sdti_db}};

    json acoustics;
    acoustics["band_snr_db"] = json::array();
    for (const auto& b : report.band_snr_db)
        acoustics["band_snr_db"].push_back({{"band", b.label}, {"snr_db", b.value_db}});
    acoustics["rt_seconds"] = json::array();
    for (const auto& rt : report.rt_seconds) {
        json row{{"band", rt.label}};
        if (rt.t20_s) row["t20_s"] = *rt.t20_s;
        if (rt.t30_s) row["t30_s"] = *rt.t30_s;
        acoustics["rt_seconds"].push_back(std::move(row));
    }
    acoustics["drr_db"] = report.drr_db;
    acoustics["direct_peak_index"] = report.direct_peak_index;
    if (report.source_distance_m) acoustics["source_distance_m"] = *report.source_distance_m;
    if (report.reverberation_radius_m)
        acoustics["reverberation_radius_m"] = *report.reverberation_radius_m;
    if (report.placement_ok) acoustics["placement_ok"] = *report.placement_ok;
    acoustics["model_notes"] = json::array(
        {"reverberation radius assumes an inverse-square direct field and a "
         "distance-independent diffuse field",
         "radius is derived from the measured DRR at the probe distance"});
    j["acoustics"] = std::move(acoustics);
    j["config_echo"] = config_echo;
    j["provenance"] = provenance;
    return j;
}

AcousticReport acoustic_report_from_document(const json& j) {
    require_type(j, "report");
    try {
        AcousticReport report;
        report.sample_rate_hz = j.at("sample_rate_hz").get<int>();
        report.n_fft = j.at("n_fft").get<std::size_t>();
        const auto& acoustics = j.at("acoustics");
        for (const auto& b : acoustics.at("band_snr_db"))
            report.band_snr_db.push_back(
                {b.at("band").get<std::string>(), b.at("snr_db").get<double>()});
        for (const auto& row : acoustics.at("rt_seconds")) {
            BandRt rt;
            rt.label = row.at("band").get<std::string>();
            if (row.contains("t20_s")) rt.t20_s = row.at("t20_s").get<double>();
            if (row.contains("t30_s")) rt.t30_s = row.at("t30_s").get<double>();
            report.rt_seconds.push_back(std::move(rt));
        }
        report.drr_db = acoustics.at("drr_db").get<double>();
        report.direct_peak_index = acoustics.at("direct_peak_index").get<std::size_t>();
        if (acoustics.contains("source_distance_m"))
            report.source_distance_m = acoustics.at("source_distance_m").get<double>();
        if (acoustics.contains("reverberation_radius_m"))
            report.reverberation_radius_m = acoustics.at("reverberation_radius_m").get<double>();
        if (acoustics.contains("placement_ok"))
            report.placement_ok = acoustics.at("placement_ok").get<bool>();
        return report;
    } catch (const json::exception& e) {
        rethrow_json("report document", e);
    }
}

json class_result_json(const ClassResult& result) {
    json j;
    j["class_label"] = result.class_label;
    j["reusability_note"] = result.reusability_note;
    j["rules_version"] = result.rules_version;
    j["reasons"] = json::array();
    for (const auto& r : result.reasons)
        j["reasons"].push_back({{"criterion", r.criterion}, {"passed", r.passed}});
    return j;
}

SimulatedChannel channel_from_json(const json& j, int sample_rate_hz) {
    try {
        SimulatedChannel ch;
        const auto& fir = j.at("fir");
        if (fir.contains("taps")) {
            ch.fir = fir.at("taps").get<std::vector<double>>();
        } else if (fir.contains("wav")) {
            const auto ir = read_wav(fir.at("wav").get<std::string>());
            if (ir.sample_rate_hz != sample_rate_hz)
                throw ConfigError("channel: fir wav sample rate does not match the stimulus");
            ch.fir = ir.samples;
        } else if (fir.contains("room")) {
            const auto& room = fir.at("room");
            RoomIrSpec spec;
            spec.direct_delay_s = room.value("direct_delay_s", spec.direct_delay_s);
            spec.direct_gain = room.value("direct_gain", spec.direct_gain);
            spec.t60_s = room.value("t60_s", spec.t60_s);
            spec.tail_gain = room.value("tail_gain", spec.tail_gain);
            spec.tail_onset_s = room.value("tail_onset_s", spec.tail_onset_s);
            spec.length_s = room.value("length_s", spec.length_s);
            spec.seed = room.value("seed", spec.seed);
            ch.fir = synth_room_ir(spec, sample_rate_hz).samples;
        } else {
            throw ConfigError("channel: fir must give taps, wav, or room");
        }

        if (j.contains("nonlinearity")) {
            const auto& nl = j.at("nonlinearity");
            const auto type = nl.value("type", "none");
            if (type == "none") {
                ch.nonlinearity.kind = NonlinearityKind::none;
            } else if (type == "cubic") {
                ch.nonlinearity.kind = NonlinearityKind::cubic;
                ch.nonlinearity.cubic_coefficient = nl.value("c", 0.0);
            } else if (type == "tanh") {
                ch.nonlinearity.kind = NonlinearityKind::tanh_drive;
                ch.nonlinearity.tanh_drive = nl.value("drive", 1.0);
            } else {
                throw ConfigError("channel: unknown nonlinearity type '" + type + "'");
            }
        }
        ch.noise_rms = j.value("noise_rms", 0.0);
        if (j.contains("drift")) {
            DriftSpec drift;
            drift.gain_mod_depth = j.at("drift").value("gain_mod_depth", 0.0);
            drift.gain_mod_period_s = j.at("drift").value("gain_mod_period_s", 1.0);
            ch.drift = drift;
        }
        ch.seed = j.value("seed", std::uint64_t{0});
        return ch;
    } catch (const json::exception& e) {
        rethrow_json("channel spec", e);
    }
}

void write_decay_csv(const std::string& path, const std::vector<NamedDecayCurve>& curves) {
    std::ostringstream out;
    out << "time_s,value_db,band_label\n";
    for (const auto& named : curves)
        for (std::size_t i = 0; i < named.curve.level_db.size(); ++i)
            out << format_double(static_cast<double>(i) * named.curve.sample_period_s) << ','
                << format_double(named.curve.level_db[i]) << ',' << named.label << '\n';
    write_text_file(path, out.str());
}

void write_response_csv(const std::string& path, const AcousticReport& report) {
    std::ostringstream out;
    out << "freq_hz,value_db,band_label\n";
    const double hz_per_bin =
        static_cast<double>(report.sample_rate_hz) / static_cast<double>(report.n_fft);
    for (std::size_t k = 0; k < report.lti_magnitude_db.size(); ++k)
        out << format_double(static_cast<double>(k) * hz_per_bin) << ','
            << format_double(report.lti_magnitude_db[k]) << ",full\n";
    write_text_file(path, out.str());
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot open " + path + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw DataError("write failed for " + path);
}

json load_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParseError("json: " + std::string(e.what()), e.byte);
    }
}

} // namespace tspkit
