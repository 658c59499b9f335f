#include "tspkit/classify.hpp"

#include <algorithm>

#include "tspkit/errors.hpp"

namespace tspkit {

namespace {

constexpr double kClass1SnrDb = 30.0;
constexpr double kClass2SnrDb = 20.0;

std::string note_for(int label) {
    switch (label) {
    case 1: return "appropriate for analyzing all acoustic attributes";
    case 2: return "appropriate for analyzing many acoustic attributes";
    case 3: return "appropriate for analyzing some acoustic attributes";
    default:
        return "acoustic attributes analysis can be possible with preprocessing; "
               "usable for training";
    }
}

} // namespace

ClassResult classify_material(const std::optional<AcousticReport>& report,
                              const MaterialMetadata& meta) {
    ClassResult result;
    auto note = [&result](std::string criterion, bool passed) {
        result.reasons.push_back({std::move(criterion), passed});
        return passed;
    };

    const bool have_acoustics = report && !report->band_snr_db.empty();
    double min_snr = 0.0;
    if (have_acoustics) {
        min_snr = report->band_snr_db[0].value_db;
        for (const auto& b : report->band_snr_db) min_snr = std::min(min_snr, b.value_db);
    }
    const bool placement_ok = have_acoustics && report->placement_ok.value_or(false);

    const bool snr_class1 = note("min band SNR > 30 dB", have_acoustics && min_snr > kClass1SnrDb);
    const bool snr_class2 = note("min band SNR > 20 dB", have_acoustics && min_snr > kClass2SnrDb);
    const bool placement = note("reverberation minimal (distance under half radius)", placement_ok);
    const bool spl_precise = note("precise SPL calibration", meta.spl_calibrated == SplQuality::precise);
    const bool spl_any = note("SPL calibrated", meta.spl_calibrated != SplQuality::none);
    const bool ann_detailed =
        note("detailed annotation", meta.annotation_quality == AnnotationQuality::detailed);
    const bool ann_relevant =
        note("relevant annotation", meta.annotation_quality >= AnnotationQuality::relevant);
    const bool ann_basic =
        note("basic annotation", meta.annotation_quality >= AnnotationQuality::basic);
    const bool background = note("background recorded", meta.background_recorded);
    const bool field_signal = note("field test signal recorded", meta.field_test_signal_present);

    if (snr_class1 && placement && spl_precise && ann_detailed && background)
        result.class_label = 1;
    else if (snr_class2 && placement && spl_any && ann_relevant && background)
        result.class_label = 2;
    else if (background && spl_any && ann_basic)
        result.class_label = 3;
    else if (report || field_signal)
        result.class_label = 4;
    else
        throw IncompleteInputError(
            "classify: no acoustic report, no field test signal, and metadata does not reach "
            "class 3");

    result.reusability_note = note_for(result.class_label);
    return result;
}

} // namespace tspkit
