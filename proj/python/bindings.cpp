#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tspkit/acoustics.hpp"
#include "tspkit/classify.hpp"
#include "tspkit/decompose.hpp"
#include "tspkit/deconv.hpp"
#include "tspkit/errors.hpp"
#include "tspkit/serialize.hpp"
#include "tspkit/signal_gen.hpp"
#include "tspkit/simchannel.hpp"
#include "tspkit/structured.hpp"
#include "tspkit/version.hpp"
#include "tspkit/wav.hpp"

namespace py = pybind11;
using namespace tspkit;

PYBIND11_MODULE(_core, m) {
    m.doc() = "time-stretched-pulse measurement toolkit";
    m.attr("__version__") = kToolVersion;

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<SampledSignal>(m, "SampledSignal")
        .def(py::init<>())
        .def(py::init([](std::vector<double> samples, int rate) {
                 return SampledSignal{std::move(samples), rate};
             }),
             py::arg("samples"), py::arg("sample_rate_hz"))
        .def_readwrite("samples", &SampledSignal::samples)
        .def_readwrite("sample_rate_hz", &SampledSignal::sample_rate_hz)
        .def_property_readonly("duration_s", &SampledSignal::duration_s)
        .def("__len__", &SampledSignal::size);

    py::class_<CapricepSpec>(m, "CapricepSpec")
        .def(py::init<>())
        .def_readwrite("fft_length", &CapricepSpec::fft_length)
        .def_readwrite("n_sections", &CapricepSpec::n_sections)
        .def_readwrite("gd_sigma_samples", &CapricepSpec::gd_sigma_samples)
        .def_readwrite("gd_magnitude_samples", &CapricepSpec::gd_magnitude_samples)
        .def_readwrite("seed", &CapricepSpec::seed)
        .def_readwrite("effective_length", &CapricepSpec::effective_length);

    m.def(
        "gen_unit_capricep",
        [](const CapricepSpec& spec, int rate) {
            auto unit = gen_unit_capricep(spec, rate);
            return py::make_tuple(std::move(unit.signal), unit.truncated_energy_fraction);
        },
        py::arg("spec"), py::arg("sample_rate_hz") = 44100,
        "returns (signal, truncated_energy_fraction)");
    m.def("gen_mls", &gen_mls, py::arg("order"), py::arg("sample_rate_hz") = 44100);
    m.def(
        "gen_swept_sine",
        [](double f_start, double f_end, double duration, const std::string& law, int rate) {
            SweptSineSpec spec{f_start, f_end, duration,
                               law == "linear" ? SweepLaw::linear : SweepLaw::logarithmic};
            return gen_swept_sine(spec, rate);
        },
        py::arg("f_start_hz"), py::arg("f_end_hz"), py::arg("duration_s"),
        py::arg("law") = "log", py::arg("sample_rate_hz") = 44100);
    m.def("gen_calibration_tone", &gen_calibration_tone, py::arg("freq_hz"),
          py::arg("rms_level_dbfs"), py::arg("duration_s"), py::arg("sample_rate_hz") = 44100);

    py::class_<StructuredTestSignal>(m, "StructuredTestSignal")
        .def_readonly("units", &StructuredTestSignal::units)
        .def_readonly("hadamard_order", &StructuredTestSignal::hadamard_order)
        .def_readonly("period_samples", &StructuredTestSignal::period_samples)
        .def_readonly("repetitions", &StructuredTestSignal::repetitions)
        .def_readonly("waveform", &StructuredTestSignal::waveform)
        .def_readonly("allocation", &StructuredTestSignal::allocation)
        .def_readonly("normalization_gain", &StructuredTestSignal::normalization_gain);

    m.def("walsh_hadamard", &walsh_hadamard, py::arg("order"));
    m.def("compose_structured", &compose_structured, py::arg("units"), py::arg("period_samples"),
          py::arg("repetitions"));

    py::class_<SafeguardConfig>(m, "SafeguardConfig")
        .def(py::init<>())
        .def_readwrite("relative_floor_db", &SafeguardConfig::relative_floor_db)
        .def_readwrite("smoothing_bandwidth_octaves",
                       &SafeguardConfig::smoothing_bandwidth_octaves)
        .def_property(
            "shaping",
            [](const SafeguardConfig& c) {
                return c.shaping == SafeguardShaping::flat ? "flat" : "smoothed_magnitude";
            },
            [](SafeguardConfig& c, const std::string& v) {
                c.shaping = v == "smoothed_magnitude" ? SafeguardShaping::smoothed_magnitude
                                                      : SafeguardShaping::flat;
            });

    m.def("measure_ir_linear", &measure_ir_linear, py::arg("x"), py::arg("y"), py::arg("config"),
          py::arg("ir_length"));

    py::class_<IrGrid>(m, "IrGrid")
        .def_readonly("irs", &IrGrid::irs)
        .def_property_readonly("units", &IrGrid::units)
        .def_property_readonly("repetitions", &IrGrid::repetitions);

    m.def("recover_channels", &recover_channels, py::arg("structured"), py::arg("recording"),
          py::arg("config"));
    m.def(
        "align_to_stimulus",
        [](const SampledSignal& recording, const StructuredTestSignal& structured) {
            const auto r = align_to_stimulus(recording, structured);
            return py::make_tuple(r.offset, r.confidence);
        },
        py::arg("recording"), py::arg("structured"), "returns (offset, confidence)");

    py::class_<Decomposition>(m, "Decomposition")
        .def_readonly("lti_ir", &Decomposition::lti_ir)
        .def_readonly("rtv_power_spectrum", &Decomposition::rtv_power_spectrum)
        .def_readonly("sdti_power_spectrum", &Decomposition::sdti_power_spectrum)
        .def_property_readonly("levels_db", [](const Decomposition& d) {
            py::dict out;
            out["lti_db"] = d.levels_db.lti_db;
            out["rtv_db"] = d.levels_db.rtv_db;
            out["sdti_db"] = d.levels_db.sdti_db;
            return out;
        });

    m.def("decompose", &decompose, py::arg("grid"));

    py::class_<RoomIrSpec>(m, "RoomIrSpec")
        .def(py::init<>())
        .def_readwrite("direct_delay_s", &RoomIrSpec::direct_delay_s)
        .def_readwrite("direct_gain", &RoomIrSpec::direct_gain)
        .def_readwrite("t60_s", &RoomIrSpec::t60_s)
        .def_readwrite("tail_gain", &RoomIrSpec::tail_gain)
        .def_readwrite("tail_onset_s", &RoomIrSpec::tail_onset_s)
        .def_readwrite("length_s", &RoomIrSpec::length_s)
        .def_readwrite("seed", &RoomIrSpec::seed);

    m.def("synth_room_ir", &synth_room_ir, py::arg("spec"), py::arg("sample_rate_hz"));
    m.def(
        "apply_channel",
        [](const SampledSignal& x, std::vector<double> fir, const std::string& nonlinearity,
           double coefficient, double noise_rms, double drift_depth, double drift_period_s,
           std::uint64_t seed) {
            SimulatedChannel ch;
            ch.fir = std::move(fir);
            if (nonlinearity == "cubic") {
                ch.nonlinearity.kind = NonlinearityKind::cubic;
                ch.nonlinearity.cubic_coefficient = coefficient;
            } else if (nonlinearity == "tanh") {
                ch.nonlinearity.kind = NonlinearityKind::tanh_drive;
                ch.nonlinearity.tanh_drive = coefficient;
            }
            ch.noise_rms = noise_rms;
            if (drift_depth != 0.0) ch.drift = DriftSpec{drift_depth, drift_period_s};
            ch.seed = seed;
            return apply_channel(x, ch);
        },
        py::arg("x"), py::arg("fir"), py::arg("nonlinearity") = "none",
        py::arg("coefficient") = 0.0, py::arg("noise_rms") = 0.0, py::arg("drift_depth") = 0.0,
        py::arg("drift_period_s") = 1.0, py::arg("seed") = 0);

    m.def(
        "analyze_report_json",
        [](const Decomposition& d, const std::string& bands, double f_min, double f_max,
           double direct_window_ms, std::optional<double> distance_m) {
            AnalyzeOptions opts;
            opts.bands.kind = bands == "third" ? BandKind::third_octave : BandKind::octave;
            opts.bands.f_min_hz = f_min;
            opts.bands.f_max_hz = f_max;
            opts.direct_window_ms = direct_window_ms;
            opts.source_distance_m = distance_m;
            const auto report = analyze(d, opts);
            return report_document(d.levels_db, report, json::object(), json::object()).dump();
        },
        py::arg("decomposition"), py::arg("bands") = "octave", py::arg("f_min_hz") = 50.0,
        py::arg("f_max_hz") = 16000.0, py::arg("direct_window_ms") = 2.5,
        py::arg("source_distance_m") = std::nullopt,
        "full acoustic report as a JSON string");

    m.def(
        "classify_json",
        [](const std::optional<std::string>& report_json, const std::string& spl,
           const std::string& annotations, bool background, bool field_test_signal) {
            std::optional<AcousticReport> report;
            if (report_json)
                report = acoustic_report_from_document(json::parse(*report_json));
            MaterialMetadata meta;
            meta.spl_calibrated = spl == "precise"      ? SplQuality::precise
                                  : spl == "sufficient" ? SplQuality::sufficient
                                                        : SplQuality::none;
            meta.annotation_quality = annotations == "detailed"   ? AnnotationQuality::detailed
                                      : annotations == "relevant" ? AnnotationQuality::relevant
                                      : annotations == "basic"    ? AnnotationQuality::basic
                                                                  : AnnotationQuality::none;
            meta.background_recorded = background;
            meta.field_test_signal_present = field_test_signal;
            return class_result_json(classify_material(report, meta)).dump();
        },
        py::arg("report_json") = std::nullopt, py::arg("spl") = "none",
        py::arg("annotations") = "none", py::arg("background") = false,
        py::arg("field_test_signal") = false, "classification result as a JSON string");

    m.def(
        "read_wav",
        [](const std::string& path) {
            std::string warning;
            auto s = read_wav(path, &warning);
            return py::make_tuple(std::move(s), warning);
        },
        py::arg("path"), "returns (signal, warning)");
    m.def(
        "write_wav",
        [](const std::string& path, const SampledSignal& s, const std::string& format) {
            WavFormat f = WavFormat::float32;
            if (format == "pcm16") f = WavFormat::pcm16;
            else if (format == "pcm24") f = WavFormat::pcm24;
            else if (format != "float32") throw ConfigError("unknown wav format " + format);
            write_wav(path, s, f);
        },
        py::arg("path"), py::arg("signal"), py::arg("format") = "float32");
}
