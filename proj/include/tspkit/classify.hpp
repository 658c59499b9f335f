#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tspkit/acoustics.hpp"

namespace tspkit {

// Operator-supplied facts about how the material was acquired and annotated.
enum class SplQuality { none, sufficient, precise };
enum class AnnotationQuality { none, basic, relevant, detailed };

struct MaterialMetadata {
    SplQuality spl_calibrated = SplQuality::none;
    AnnotationQuality annotation_quality = AnnotationQuality::none;
    bool background_recorded = false;
    bool field_test_signal_present = false;
    std::optional<double> source_distance_m;
};

struct CriterionResult {
    std::string criterion;
    bool passed = false;
};

struct ClassResult {
    int class_label = 4;  // 1 (best) .. 4
    std::vector<CriterionResult> reasons;
    std::string reusability_note;
    std::string rules_version = "v1";
};

// Rule cascade over the acoustic report (when available) and the metadata.
// Classes 1 and 2 need measured acoustics; class 3 is metadata-only; class 4
// is the fallback for anything with a report or a field test signal recording.
ClassResult classify_material(const std::optional<AcousticReport>& report,
                              const MaterialMetadata& meta);

} // namespace tspkit
