// tsp: command-line front end for the toolkit.
//
// gen      unit test signals (capricep, sweep, mls, tone)
// compose  structured multi-unit stimulus + sidecar
// fieldsig field test signal (structured | silence | calibration tone)
// simulate apply a simulated acoustic channel to a stimulus
// measure  recording + sidecar -> LTI/RTV/SDTI decomposition
// analyze  decomposition -> acoustic report + CSV curves
// classify report + metadata -> recording-condition class

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tspkit/acoustics.hpp"
#include "tspkit/classify.hpp"
#include "tspkit/decompose.hpp"
#include "tspkit/errors.hpp"
#include "tspkit/serialize.hpp"
#include "tspkit/signal_gen.hpp"
#include "tspkit/simchannel.hpp"
#include "tspkit/structured.hpp"
#include "tspkit/version.hpp"
#include "tspkit/wav.hpp"

namespace fs = std::filesystem;
using namespace tspkit;

namespace {

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void emit(const json& doc, bool as_json, const std::string& plain) {
    if (as_json)
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << plain << "\n";
}

std::string derived_path(const std::string& in, const char* suffix) {
    fs::path p(in);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

json wav_provenance(const std::string& path) {
    return {{"path", path}, {"digest", digest_file(path)}};
}

struct GenArgs {
    std::string kind = "capricep";
    std::string out;
    int rate = 44100;
    std::uint64_t seed = 1;
    bool as_json = false;
    CapricepSpec capricep;
    SweptSineSpec sweep;
    int mls_order = 10;
    double tone_freq_hz = 1000.0;
    double tone_level_dbfs = -20.0;
    double tone_duration_s = 3.0;
};

int run_gen(const GenArgs& a) {
    SampledSignal signal;
    json info{{"type", "gen"}, {"kind", a.kind}};
    if (a.kind == "capricep") {
        CapricepSpec spec = a.capricep;
        spec.seed = a.seed;
        const auto unit = gen_unit_capricep(spec, a.rate);
        signal = unit.signal;
        info["spec"] = capricep_spec_json(spec);
        info["truncated_energy_fraction"] = unit.truncated_energy_fraction;
    } else if (a.kind == "sweep") {
        signal = gen_swept_sine(a.sweep, a.rate);
        info["f_start_hz"] = a.sweep.f_start_hz;
        info["f_end_hz"] = a.sweep.f_end_hz;
        info["duration_s"] = a.sweep.duration_s;
        info["law"] = a.sweep.sweep_law == SweepLaw::logarithmic ? "log" : "linear";
    } else if (a.kind == "mls") {
        signal = gen_mls(a.mls_order, a.rate);
        info["order"] = a.mls_order;
    } else {
        signal = gen_calibration_tone(a.tone_freq_hz, a.tone_level_dbfs, a.tone_duration_s,
                                      a.rate);
        info["freq_hz"] = a.tone_freq_hz;
        info["rms_level_dbfs"] = a.tone_level_dbfs;
        info["duration_s"] = a.tone_duration_s;
    }
    write_wav(a.out, signal);
    info["sample_rate_hz"] = signal.sample_rate_hz;
    info["samples"] = signal.size();
    info["out"] = wav_provenance(a.out);
    emit(info, a.as_json,
         "wrote " + a.out + " (" + std::to_string(signal.size()) + " samples)");
    return 0;
}

struct ComposeArgs {
    std::string out;
    std::string sidecar;  // default <out stem>.json
    std::size_t units = 4;
    std::size_t period = 16384;
    std::size_t reps = 4;
    int rate = 44100;
    std::uint64_t seed = 1;
    bool as_json = false;
    CapricepSpec unit_spec;
    // fieldsig extras
    bool field = false;
    double tone_freq_hz = 1000.0;
    double tone_level_dbfs = -20.0;
    double tone_duration_s = 3.0;
};

int run_compose(const ComposeArgs& a) {
    std::vector<CapricepSpec> specs;
    std::vector<SampledSignal> units;
    for (std::size_t i = 0; i < a.units; ++i) {
        CapricepSpec spec = a.unit_spec;
        spec.seed = a.seed + i;
        specs.push_back(spec);
        units.push_back(gen_unit_capricep(spec, a.rate).signal);
    }
    const auto structured = compose_structured(units, a.period, a.reps);

    std::vector<SegmentMarker> segments;
    SampledSignal waveform = structured.waveform;
    if (a.field) {
        const auto tone =
            gen_calibration_tone(a.tone_freq_hz, a.tone_level_dbfs, a.tone_duration_s, a.rate);
        auto field = gen_field_test_signal(structured.waveform, tone);
        waveform = std::move(field.signal);
        segments = std::move(field.segments);
    }

    write_wav(a.out, waveform);
    const std::string sidecar_path = a.sidecar.empty() ? derived_path(a.out, ".json") : a.sidecar;
    const auto sidecar = stimulus_sidecar(structured, specs, digest_file(a.out), segments);
    write_json_file(sidecar_path, sidecar);
    emit(sidecar, a.as_json,
         "wrote " + a.out + " + " + sidecar_path + " (M=" + std::to_string(a.units) +
             " R=" + std::to_string(a.reps) + " period=" + std::to_string(a.period) + ")");
    return 0;
}

struct SimulateArgs {
    std::string in;
    std::string channel;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t delay = 0;
    bool as_json = false;
};

int run_simulate(const SimulateArgs& a) {
    const auto stimulus = read_wav(a.in);
    auto ch = channel_from_json(load_json_file(a.channel), stimulus.sample_rate_hz);
    if (a.seed) ch.seed = *a.seed;
    auto recording = apply_channel(stimulus, ch);
    if (a.delay > 0)
        recording.samples.insert(recording.samples.begin(), a.delay, 0.0);
    write_wav(a.out, recording);
    json info{{"type", "simulate"},
              {"in", wav_provenance(a.in)},
              {"channel", a.channel},
              {"delay_samples", a.delay},
              {"out", wav_provenance(a.out)},
              {"sample_rate_hz", recording.sample_rate_hz},
              {"samples", recording.size()}};
    emit(info, a.as_json,
         "wrote " + a.out + " (" + std::to_string(recording.size()) + " samples)");
    return 0;
}

struct MeasureArgs {
    std::string in;
    std::string sidecar;
    std::string out;  // default <in stem>.decomp.json
    std::string align = "auto";
    double safeguard_db = -60.0;
    std::string shaping = "flat";
    double smoothing_octaves = 1.0 / 3.0;
    bool as_json = false;
};

int run_measure(const MeasureArgs& a) {
    if (a.sidecar.empty()) throw DataError("missing stimulus sidecar");
    const auto contents = structured_from_sidecar(load_json_file(a.sidecar));
    const auto recording = read_wav(a.in);
    require_same_rate(recording, contents.structured.waveform, "measure");

    std::size_t offset = 0;
    json align_info{{"mode", a.align}};
    if (a.align == "auto") {
        const auto result = align_to_stimulus(recording, contents.structured);
        offset = result.offset;
        align_info["confidence"] = result.confidence;
    } else if (a.align != "none") {
        try {
            offset = std::stoull(a.align);
        } catch (const std::exception&) {
            throw ConfigError("measure: --align takes auto, none, or a sample offset");
        }
    }
    align_info["offset"] = offset;
    if (offset >= recording.size())
        throw InsufficientDataError("measure: alignment offset beyond the recording");

    SampledSignal aligned;
    aligned.sample_rate_hz = recording.sample_rate_hz;
    aligned.samples.assign(recording.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                           recording.samples.end());

    SafeguardConfig cfg;
    cfg.relative_floor_db = a.safeguard_db;
    if (a.shaping == "smoothed")
        cfg.shaping = SafeguardShaping::smoothed_magnitude;
    else if (a.shaping != "flat")
        throw ConfigError("measure: --shaping takes flat or smoothed");
    cfg.smoothing_bandwidth_octaves = a.smoothing_octaves;

    const auto grid = recover_channels(contents.structured, aligned, cfg);
    const auto d = decompose(grid);

    const json config_echo{{"safeguard_floor_db", a.safeguard_db},
                           {"shaping", a.shaping},
                           {"smoothing_bandwidth_octaves", a.smoothing_octaves},
                           {"alignment", align_info}};
    const json provenance{{"recording", wav_provenance(a.in)},
                          {"sidecar", {{"path", a.sidecar}, {"digest", digest_file(a.sidecar)}}},
                          {"stimulus_digest", contents.waveform_digest},
                          {"grid", {{"units", grid.units()}, {"repetitions", grid.repetitions()}}}};
    const auto doc = decomposition_document(d, config_echo, provenance);
    const std::string out = a.out.empty() ? derived_path(a.in, ".decomp.json") : a.out;
    write_json_file(out, doc);
    char levels[96];
    std::snprintf(levels, sizeof levels, "rtv %.1f dB, sdti %.1f dB", d.levels_db.rtv_db,
                  d.levels_db.sdti_db);
    emit(doc, a.as_json, "wrote " + out + " (" + levels + ")");
    return 0;
}

struct AnalyzeArgs {
    std::string in;
    std::string dir;
    std::string out;
    std::string decay_csv;
    std::string response_csv;
    std::string bands = "octave";
    double f_min_hz = 50.0;
    double f_max_hz = 16000.0;
    double direct_window_ms = 2.5;
    double smoothing_octaves = 0.0;
    std::optional<double> distance_m;
    unsigned jobs = 0;
    bool as_json = false;
};

AnalyzeOptions analyze_options(const AnalyzeArgs& a) {
    AnalyzeOptions opts;
    if (a.bands == "third")
        opts.bands.kind = BandKind::third_octave;
    else if (a.bands != "octave")
        throw ConfigError("analyze: --bands takes octave or third");
    opts.bands.f_min_hz = a.f_min_hz;
    opts.bands.f_max_hz = a.f_max_hz;
    opts.direct_window_ms = a.direct_window_ms;
    opts.response_smoothing_octaves = a.smoothing_octaves;
    opts.source_distance_m = a.distance_m;
    return opts;
}

json analyze_one(const AnalyzeArgs& a, const AnalyzeOptions& opts, const std::string& in,
                 const std::string& out, const std::string& decay_csv,
                 const std::string& response_csv) {
    const auto d = decomposition_from_document(load_json_file(in));
    const auto report = analyze(d, opts);
    const json config_echo{{"bands", a.bands},
                           {"f_min_hz", a.f_min_hz},
                           {"f_max_hz", a.f_max_hz},
                           {"direct_window_ms", a.direct_window_ms},
                           {"response_smoothing_octaves", a.smoothing_octaves}};
    const json provenance{
        {"decomposition", {{"path", in}, {"digest", digest_file(in)}}}};
    const auto doc = report_document(d.levels_db, report, config_echo, provenance);
    write_json_file(out, doc);
    write_decay_csv(decay_csv, report.decay_curves);
    write_response_csv(response_csv, report);
    return doc;
}

int run_analyze(const AnalyzeArgs& a) {
    const auto opts = analyze_options(a);
    make_bands(opts.bands, 44100);  // fail fast on a bad band spec

    if (a.dir.empty()) {
        if (a.in.empty()) throw ConfigError("analyze: need --in or --dir");
        const std::string stem = a.in;
        const auto doc = analyze_one(
            a, opts, a.in, a.out.empty() ? derived_path(stem, ".report.json") : a.out,
            a.decay_csv.empty() ? derived_path(stem, ".decay.csv") : a.decay_csv,
            a.response_csv.empty() ? derived_path(stem, ".response.csv") : a.response_csv);
        emit(doc, a.as_json, "wrote " + (a.out.empty() ? derived_path(stem, ".report.json") : a.out));
        return 0;
    }

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(a.dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        const auto j = load_json_file(entry.path().string());
        if (j.is_object() && j.value("type", "") == "decomposition")
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("analyze: no decomposition documents in " + a.dir);

    const unsigned workers = std::min<unsigned>(
        {a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency()),
         static_cast<unsigned>(files.size()), 8u});
    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(files.size());
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < files.size(); i = next.fetch_add(1)) {
            try {
                analyze_one(a, opts, files[i], derived_path(files[i], ".report.json"),
                            derived_path(files[i], ".decay.csv"),
                            derived_path(files[i], ".response.csv"));
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    int failed = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (failures[i].empty()) {
            std::cout << files[i] << ": ok\n";
        } else {
            std::cerr << files[i] << ": " << failures[i] << "\n";
            ++failed;
        }
    }
    if (failed) throw DataError(std::to_string(failed) + " of " +
                                std::to_string(files.size()) + " analyses failed");
    return 0;
}

struct ClassifyArgs {
    std::string report;
    std::string out;
    std::string spl = "none";
    std::string annotations = "none";
    bool background = false;
    bool field_signal = false;
    bool as_json = false;
};

int run_classify(const ClassifyArgs& a) {
    static const std::map<std::string, SplQuality> spl_map{
        {"none", SplQuality::none},
        {"sufficient", SplQuality::sufficient},
        {"precise", SplQuality::precise}};
    static const std::map<std::string, AnnotationQuality> ann_map{
        {"none", AnnotationQuality::none},
        {"basic", AnnotationQuality::basic},
        {"relevant", AnnotationQuality::relevant},
        {"detailed", AnnotationQuality::detailed}};
    if (!spl_map.count(a.spl)) throw ConfigError("classify: unknown --spl value '" + a.spl + "'");
    if (!ann_map.count(a.annotations))
        throw ConfigError("classify: unknown --annotations value '" + a.annotations + "'");

    MaterialMetadata meta;
    meta.spl_calibrated = spl_map.at(a.spl);
    meta.annotation_quality = ann_map.at(a.annotations);
    meta.background_recorded = a.background;
    meta.field_test_signal_present = a.field_signal;

    std::optional<AcousticReport> report;
    json provenance = json::object();
    if (!a.report.empty()) {
        report = acoustic_report_from_document(load_json_file(a.report));
        provenance["report"] = {{"path", a.report}, {"digest", digest_file(a.report)}};
    }

    const auto result = classify_material(report, meta);
    json doc = class_result_json(result);
    doc["schema"] = kSchemaVersion;
    doc["tool_version"] = kToolVersion;
    doc["type"] = "classification";
    doc["config_echo"] = {{"spl", a.spl},
                          {"annotations", a.annotations},
                          {"background", a.background},
                          {"field_test_signal", a.field_signal}};
    doc["provenance"] = provenance;
    if (!a.out.empty()) write_json_file(a.out, doc);
    emit(doc, a.as_json,
         "class " + std::to_string(result.class_label) + ": " + result.reusability_note);
    return 0;
}

void add_capricep_flags(CLI::App* cmd, CapricepSpec& spec) {
    cmd->add_option("--fft-length", spec.fft_length, "design FFT length (power of two)");
    cmd->add_option("--sections", spec.n_sections, "group-delay bumps");
    cmd->add_option("--gd-sigma", spec.gd_sigma_samples, "bump width, samples");
    cmd->add_option("--gd-magnitude", spec.gd_magnitude_samples, "bump height, samples");
    cmd->add_option("--effective-length", spec.effective_length, "truncation length");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-stretched-pulse measurement toolkit"};
    app.set_version_flag("--version", std::string("tsp ") + kToolVersion);
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a unit test signal");
    gen_cmd->add_option("--kind", gen.kind, "capricep | sweep | mls | tone")
        ->check(CLI::IsMember({"capricep", "sweep", "mls", "tone"}));
    gen_cmd->add_option("--out", gen.out, "output wav")->required();
    gen_cmd->add_option("--rate", gen.rate, "sample rate, Hz");
    gen_cmd->add_option("--seed", gen.seed, "random seed");
    gen_cmd->add_flag("--json", gen.as_json, "print metadata as JSON");
    add_capricep_flags(gen_cmd, gen.capricep);
    gen_cmd->add_option("--f-start", gen.sweep.f_start_hz, "sweep start, Hz");
    gen_cmd->add_option("--f-end", gen.sweep.f_end_hz, "sweep end, Hz");
    gen_cmd->add_option_function<double>(
        "--duration",
        [&gen](double v) {
            gen.sweep.duration_s = v;
            gen.tone_duration_s = v;
        },
        "sweep/tone duration, s");
    gen_cmd
        ->add_option_function<std::string>(
            "--law",
            [&gen](const std::string& v) {
                gen.sweep.sweep_law = v == "linear" ? SweepLaw::linear : SweepLaw::logarithmic;
            },
            "sweep law: log | linear")
        ->check(CLI::IsMember({"log", "linear"}));
    gen_cmd->add_option("--order", gen.mls_order, "MLS register order (2..24)");
    gen_cmd->add_option("--freq", gen.tone_freq_hz, "tone frequency, Hz");
    gen_cmd->add_option("--level-dbfs", gen.tone_level_dbfs, "tone RMS level, dBFS");

    ComposeArgs compose;
    auto* compose_cmd = app.add_subcommand("compose", "compose a structured stimulus + sidecar");
    ComposeArgs fieldsig;
    fieldsig.field = true;
    auto* fieldsig_cmd =
        app.add_subcommand("fieldsig", "field test signal (structured | silence | tone)");
    for (auto [cmd, args] : {std::pair{compose_cmd, &compose}, std::pair{fieldsig_cmd, &fieldsig}}) {
        cmd->add_option("--out", args->out, "output wav")->required();
        cmd->add_option("--sidecar", args->sidecar, "sidecar path (default: <out>.json)");
        cmd->add_option("--units", args->units, "number of unit signals M (power of two)");
        cmd->add_option("--period", args->period, "slot period, samples");
        cmd->add_option("--reps", args->reps, "super-period repetitions R");
        cmd->add_option("--rate", args->rate, "sample rate, Hz");
        cmd->add_option("--seed", args->seed, "base seed; unit i uses seed + i");
        cmd->add_flag("--json", args->as_json, "print the sidecar as JSON");
        add_capricep_flags(cmd, args->unit_spec);
        if (args->field) {
            cmd->add_option("--tone-freq", args->tone_freq_hz, "calibration tone, Hz");
            cmd->add_option("--tone-level-dbfs", args->tone_level_dbfs, "tone RMS, dBFS");
            cmd->add_option("--tone-duration", args->tone_duration_s, "tone duration, s");
        }
    }

    SimulateArgs simulate;
    auto* sim_cmd = app.add_subcommand("simulate", "run a stimulus through a simulated channel");
    sim_cmd->add_option("--in", simulate.in, "stimulus wav")->required();
    sim_cmd->add_option("--channel", simulate.channel, "channel description JSON")->required();
    sim_cmd->add_option("--out", simulate.out, "recording wav")->required();
    sim_cmd->add_option("--seed", simulate.seed, "override the channel seed");
    sim_cmd->add_option("--delay", simulate.delay, "prepend this many zero samples");
    sim_cmd->add_flag("--json", simulate.as_json, "print metadata as JSON");

    MeasureArgs measure;
    auto* measure_cmd = app.add_subcommand("measure", "decompose a recording into LTI/RTV/SDTI");
    measure_cmd->add_option("--in", measure.in, "recording wav")->required();
    measure_cmd->add_option("--sidecar", measure.sidecar, "stimulus sidecar JSON");
    measure_cmd->add_option("--out", measure.out, "output (default: <in>.decomp.json)");
    measure_cmd->add_option("--align", measure.align, "auto | none | <sample offset>");
    measure_cmd->add_option("--safeguard-db", measure.safeguard_db,
                            "deconvolution floor re max |X|, dB");
    measure_cmd->add_option("--shaping", measure.shaping, "safeguard shaping: flat | smoothed");
    measure_cmd->add_option("--smoothing-octaves", measure.smoothing_octaves,
                            "envelope smoothing width for --shaping smoothed");
    measure_cmd->add_flag("--json", measure.as_json, "print the decomposition as JSON");

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "acoustic report from a decomposition");
    analyze_cmd->add_option("--in", analyze_args.in, "decomposition JSON");
    analyze_cmd->add_option("--dir", analyze_args.dir, "process every decomposition in a directory");
    analyze_cmd->add_option("--out", analyze_args.out, "report path (default: <in>.report.json)");
    analyze_cmd->add_option("--decay-csv", analyze_args.decay_csv, "decay curve CSV path");
    analyze_cmd->add_option("--response-csv", analyze_args.response_csv, "response CSV path");
    analyze_cmd->add_option("--bands", analyze_args.bands, "octave | third");
    analyze_cmd->add_option("--fmin", analyze_args.f_min_hz, "lowest band center, Hz");
    analyze_cmd->add_option("--fmax", analyze_args.f_max_hz, "highest band center, Hz");
    analyze_cmd->add_option("--direct-window-ms", analyze_args.direct_window_ms,
                            "direct-sound window after the peak, ms");
    analyze_cmd->add_option("--smoothing", analyze_args.smoothing_octaves,
                            "response smoothing, octaves");
    analyze_cmd->add_option("--distance", analyze_args.distance_m,
                            "source distance, m (enables placement verdict)");
    analyze_cmd->add_option("--jobs", analyze_args.jobs, "worker threads for --dir");
    analyze_cmd->add_flag("--json", analyze_args.as_json, "print the report as JSON");

    ClassifyArgs classify;
    auto* classify_cmd = app.add_subcommand("classify", "recording-condition class 1..4");
    classify_cmd->add_option("--report", classify.report, "acoustic report JSON");
    classify_cmd->add_option("--out", classify.out, "write the result here too");
    classify_cmd->add_option("--spl", classify.spl, "SPL calibration: none | sufficient | precise");
    classify_cmd->add_option("--annotations", classify.annotations,
                             "annotation quality: none | basic | relevant | detailed");
    classify_cmd->add_flag("--background", classify.background, "background noise was recorded");
    classify_cmd->add_flag("--field-test-signal", classify.field_signal,
                           "a field test signal recording exists");
    classify_cmd->add_flag("--json", classify.as_json, "print the result as JSON");

    try {
        app.parse(argc, argv);
        if (gen_cmd->parsed()) return run_gen(gen);
        if (compose_cmd->parsed()) return run_compose(compose);
        if (fieldsig_cmd->parsed()) return run_compose(fieldsig);
        if (sim_cmd->parsed()) return run_simulate(simulate);
        if (measure_cmd->parsed()) return run_measure(measure);
        if (analyze_cmd->parsed()) return run_analyze(analyze_args);
        if (classify_cmd->parsed()) return run_classify(classify);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
