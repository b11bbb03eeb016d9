#pragma once
// JSON encodings of configs, reports and run records. Every top-level
// document carries "schema_version"; the schemas live in schemas/.

#include <json.hpp>

#include "ordsoft/metrics.hpp"
#include "ordsoft/protocol.hpp"
#include "ordsoft/stat_tests.hpp"
#include "ordsoft/synth.hpp"
#include "ordsoft/trainer.hpp"

namespace ordsoft::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(const softlabel::SmoothingParams& p);
softlabel::SmoothingParams smoothing_from_json(const json& j, softlabel::SmoothingParams base = {});

json to_json(const TrainConfig& c);
// Missing keys keep the values of `base`.
TrainConfig train_config_from_json(const json& j, TrainConfig base = {});

json to_json(const SearchSpace& s);
SearchSpace search_space_from_json(const json& j, SearchSpace base = {});

json to_json(const metrics::MetricReport& r);
metrics::MetricReport metric_report_from_json(const json& j);

json to_json(const stats::TestResult& t);
json to_json(const stats::AnovaTable& t);

json to_json(const TrainHistory& h);
json to_json(const ClassifierModel& m);
ClassifierModel model_from_json(const json& j);

// Run record; probabilities are included only when requested.
json to_json(const RunResult& r, bool with_probabilities = false);
RunResult run_result_from_json(const json& j);

json to_json(const synth::SynthSpec& s);
synth::SynthSpec synth_spec_from_json(const json& j, synth::SynthSpec base = {});
json to_json(const synth::PairedSampleSpec& s);
synth::PairedSampleSpec paired_spec_from_json(const json& j, synth::PairedSampleSpec base = {});

json to_json(const SummaryRow& row);

json grid_to_json(const joint::Grid& g);

// Doubles that may be +/-inf or NaN are written as null.
json number_or_null(double v);

}  // namespace ordsoft::io
