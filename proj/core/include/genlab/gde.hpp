#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "genlab/errors.hpp"

namespace genlab {

// One-hot predictions of M models on n examples, plus optional true labels.
struct PredictionTable {
    std::size_t models = 0;
    std::size_t examples = 0;
    std::size_t K = 0;
    std::vector<int> pred;  // model-major: pred[model * examples + example]
    std::vector<int> labels;
    bool has_labels = false;

    int at(std::size_t model, std::size_t example) const {
        return pred[model * examples + example];
    }
    int& at(std::size_t model, std::size_t example) {
        return pred[model * examples + example];
    }
};

// Per-example ensemble confidence h~(x): class frequencies over the M models
// (every entry a multiple of 1/M).
struct ConfidenceProfile {
    std::size_t K = 0;
    std::size_t models = 0;
    std::vector<std::vector<double>> h;  // one length-K row per example
};

double disagreement_rate(const PredictionTable& table, std::size_t i, std::size_t j);
double test_error(const PredictionTable& table, std::size_t i);
ConfidenceProfile confidence_profile(const PredictionTable& table);

enum class EdrEstimator { WithReplacement, DistinctPairs };

// mean_x sum_k h~_k (1 - h~_k); equals the average over ordered model pairs
// (including i = j) of pairwise disagreement. DistinctPairs applies the
// M/(M-1) correction.
double expected_disagreement(const ConfidenceProfile& profile,
                             EdrEstimator est = EdrEstimator::WithReplacement);

// mean_x (1 - h~_Y(x)); equals the mean of the per-model test errors.
double expected_test_error(const ConfidenceProfile& profile, const std::vector<int>& labels);

struct CalibrationBin {
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;
    double conf = 0.0;  // mean confidence in the bin
    double acc = 0.0;   // accuracy mass in the bin
};

struct CaceResult {
    double value = 0.0;
    std::vector<CalibrationBin> bins;
};

// Class-aggregated calibration error: bins pool (example, class) pairs across
// all K classes; bin weights are |B_i| / n_examples, so the value lives in
// [0, K]. Bins are [lo, hi) with the last bin closed.
CaceResult cace(const ConfidenceProfile& profile, const std::vector<int>& labels,
                std::size_t bins = 10);
// One bin per attainable confidence value (multiples of 1/M): the deviation
// theorem |ETE - EDR| <= CACE holds with zero binning slack in this mode.
CaceResult cace_exact(const ConfidenceProfile& profile, const std::vector<int>& labels);

// Top-class expected calibration error (in [0, 1]).
double ece(const ConfidenceProfile& profile, const std::vector<int>& labels,
           std::size_t bins = 10);

struct GdeReport {
    std::vector<double> test_err_per_model;
    std::vector<double> dis_per_pair;  // ordered pairs i < j
    double ete = 0.0;
    double edr = 0.0;
    double gap = 0.0;
    double cace_value = 0.0;
    double ece_value = 0.0;
    bool deviation_verdict = false;
    std::string to_json() const;
};

GdeReport gde_report(const PredictionTable& table);
bool deviation_check(const GdeReport& report);

struct GdeScatterRow {
    double disagreement = 0.0;
    double test_error = 0.0;
    std::string mode;
};

void save_scatter_csv(const std::vector<GdeScatterRow>& rows, const std::string& path,
                      const std::string& metadata_comment);

// CSV: one row per example, columns = model predictions, optional last
// column "label".
void save_table_csv(const PredictionTable& table, const std::string& path);
PredictionTable load_table_csv(const std::string& path);

}  // namespace genlab
