#include "genlab/gde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace genlab {

namespace {

void check_table(const PredictionTable& t) {
    if (t.models == 0 || t.examples == 0) throw InvalidInput("empty prediction table");
    if (t.pred.size() != t.models * t.examples)
        throw InvalidInput("prediction table is not rectangular");
    if (t.has_labels && t.labels.size() != t.examples)
        throw InvalidInput("label count mismatch");
}

}  // namespace

double disagreement_rate(const PredictionTable& table, std::size_t i, std::size_t j) {
    check_table(table);
    if (i >= table.models || j >= table.models)
        throw InvalidInput("disagreement_rate: model index out of range");
    std::size_t diff = 0;
    for (std::size_t e = 0; e < table.examples; ++e)
        if (table.at(i, e) != table.at(j, e)) ++diff;
    return static_cast<double>(diff) / static_cast<double>(table.examples);
}

double test_error(const PredictionTable& table, std::size_t i) {
    check_table(table);
    if (!table.has_labels) throw InvalidInput("test_error: table has no labels");
    if (i >= table.models) throw InvalidInput("test_error: model index out of range");
    std::size_t wrong = 0;
    for (std::size_t e = 0; e < table.examples; ++e)
        if (table.at(i, e) != table.labels[e]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(table.examples);
}

ConfidenceProfile confidence_profile(const PredictionTable& table) {
    check_table(table);
    std::size_t K = table.K;
    if (K == 0) {
        int mx = 0;
        for (int p : table.pred) mx = std::max(mx, p);
        if (table.has_labels)
            for (int y : table.labels) mx = std::max(mx, y);
        K = static_cast<std::size_t>(mx) + 1;
    }
    ConfidenceProfile prof;
    prof.K = K;
    prof.models = table.models;
    prof.h.assign(table.examples, std::vector<double>(K, 0.0));
    const double inv_m = 1.0 / static_cast<double>(table.models);
    for (std::size_t m = 0; m < table.models; ++m)
        for (std::size_t e = 0; e < table.examples; ++e) {
            const int p = table.at(m, e);
            if (p < 0 || static_cast<std::size_t>(p) >= K)
                throw InvalidInput("confidence_profile: prediction out of range");
            prof.h[e][static_cast<std::size_t>(p)] += inv_m;
        }
    return prof;
}

double expected_disagreement(const ConfidenceProfile& profile, EdrEstimator est) {
    if (profile.h.empty()) throw InvalidInput("expected_disagreement: empty profile");
    double sum = 0.0;
    for (const auto& h : profile.h) {
        double s = 0.0;
        for (double v : h) s += v * v;
        sum += 1.0 - s;
    }
    double edr = sum / static_cast<double>(profile.h.size());
    if (est == EdrEstimator::DistinctPairs) {
        if (profile.models < 2)
            throw InvalidInput("expected_disagreement: distinct-pair estimator needs M >= 2");
        edr *= static_cast<double>(profile.models) /
               static_cast<double>(profile.models - 1);
    }
    return edr;
}

double expected_test_error(const ConfidenceProfile& profile, const std::vector<int>& labels) {
    if (profile.h.size() != labels.size())
        throw InvalidInput("expected_test_error: label count mismatch");
    if (profile.h.empty()) throw InvalidInput("expected_test_error: empty profile");
    double sum = 0.0;
    for (std::size_t e = 0; e < labels.size(); ++e) {
        const int y = labels[e];
        if (y < 0 || static_cast<std::size_t>(y) >= profile.K)
            throw InvalidInput("expected_test_error: label out of range");
        sum += 1.0 - profile.h[e][static_cast<std::size_t>(y)];
    }
    return sum / static_cast<double>(labels.size());
}

namespace {

CaceResult cace_impl(const ConfidenceProfile& profile, const std::vector<int>& labels,
                     std::vector<CalibrationBin> bins,
                     const std::function<std::size_t(double)>& bin_of) {
    if (labels.empty() || profile.h.size() != labels.size())
        throw InvalidInput("cace: labels required and must match the profile");
    const std::size_t n = profile.h.size();
    std::vector<double> conf_sum(bins.size(), 0.0);
    std::vector<std::size_t> correct(bins.size(), 0);
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t k = 0; k < profile.K; ++k) {
            const double c = profile.h[e][k];
            const std::size_t b = bin_of(c);
            bins[b].count += 1;
            conf_sum[b] += c;
            if (static_cast<std::size_t>(labels[e]) == k) correct[b] += 1;
        }
    CaceResult res;
    for (std::size_t b = 0; b < bins.size(); ++b) {
        if (bins[b].count > 0) {
            bins[b].conf = conf_sum[b] / static_cast<double>(bins[b].count);
            bins[b].acc =
                static_cast<double>(correct[b]) / static_cast<double>(bins[b].count);
            // bin weight follows the |B_i| / |D_test| convention, so the total
            // mass across classes is K, not 1
            res.value += static_cast<double>(bins[b].count) / static_cast<double>(n) *
                         std::fabs(bins[b].acc - bins[b].conf);
        }
    }
    res.bins = std::move(bins);
    return res;
}

}  // namespace

CaceResult cace(const ConfidenceProfile& profile, const std::vector<int>& labels,
                std::size_t n_bins) {
    if (n_bins < 1) throw InvalidInput("cace: bins must be >= 1");
    std::vector<CalibrationBin> bins(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        bins[b].lo = static_cast<double>(b) / static_cast<double>(n_bins);
        bins[b].hi = static_cast<double>(b + 1) / static_cast<double>(n_bins);
    }
    const double nb = static_cast<double>(n_bins);
    return cace_impl(profile, labels, std::move(bins), [nb](double c) {
        const auto b = static_cast<std::size_t>(c * nb);
        return std::min(b, static_cast<std::size_t>(nb) - 1);
    });
}

CaceResult cace_exact(const ConfidenceProfile& profile, const std::vector<int>& labels) {
    const std::size_t M = profile.models;
    if (M == 0) throw InvalidInput("cace_exact: profile must record model count");
    std::vector<CalibrationBin> bins(M + 1);
    for (std::size_t b = 0; b <= M; ++b)
        bins[b].lo = bins[b].hi = static_cast<double>(b) / static_cast<double>(M);
    const double Md = static_cast<double>(M);
    return cace_impl(profile, labels, std::move(bins), [Md](double c) {
        return static_cast<std::size_t>(std::lround(c * Md));
    });
}

double ece(const ConfidenceProfile& profile, const std::vector<int>& labels,
           std::size_t n_bins) {
    if (n_bins < 1) throw InvalidInput("ece: bins must be >= 1");
    if (labels.empty() || profile.h.size() != labels.size())
        throw InvalidInput("ece: labels required and must match the profile");
    const std::size_t n = profile.h.size();
    std::vector<std::size_t> count(n_bins, 0), correct(n_bins, 0);
    std::vector<double> conf_sum(n_bins, 0.0);
    for (std::size_t e = 0; e < n; ++e) {
        std::size_t top = 0;
        for (std::size_t k = 1; k < profile.K; ++k)
            if (profile.h[e][k] > profile.h[e][top]) top = k;
        const double c = profile.h[e][top];
        const std::size_t b =
            std::min(static_cast<std::size_t>(c * static_cast<double>(n_bins)), n_bins - 1);
        count[b] += 1;
        conf_sum[b] += c;
        if (static_cast<std::size_t>(labels[e]) == top) correct[b] += 1;
    }
    double value = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (count[b] == 0) continue;
        const double acc = static_cast<double>(correct[b]) / static_cast<double>(count[b]);
        const double conf = conf_sum[b] / static_cast<double>(count[b]);
        value += static_cast<double>(count[b]) / static_cast<double>(n) *
                 std::fabs(acc - conf);
    }
    return value;
}

GdeReport gde_report(const PredictionTable& table) {
    check_table(table);
    if (!table.has_labels) throw InvalidInput("gde_report: labels required");
    GdeReport rep;
    for (std::size_t i = 0; i < table.models; ++i)
        rep.test_err_per_model.push_back(test_error(table, i));
    for (std::size_t i = 0; i < table.models; ++i)
        for (std::size_t j = i + 1; j < table.models; ++j)
            rep.dis_per_pair.push_back(disagreement_rate(table, i, j));
    const ConfidenceProfile prof = confidence_profile(table);
    rep.ete = expected_test_error(prof, table.labels);
    rep.edr = expected_disagreement(prof);
    rep.gap = std::fabs(rep.ete - rep.edr);
    rep.cace_value = cace_exact(prof, table.labels).value;
    rep.ece_value = ece(prof, table.labels);
    rep.deviation_verdict = rep.gap <= rep.cace_value + 1e-12;
    return rep;
}

bool deviation_check(const GdeReport& report) {
    return report.gap <= report.cace_value + 1e-12;
}

std::string GdeReport::to_json() const {
    nlohmann::json j;
    j["test_err_per_model"] = test_err_per_model;
    j["dis_per_pair"] = dis_per_pair;
    j["ete"] = ete;
    j["edr"] = edr;
    j["gap"] = gap;
    j["cace"] = cace_value;
    j["ece"] = ece_value;
    j["deviation_verdict"] = deviation_verdict;
    return j.dump(2);
}

void save_scatter_csv(const std::vector<GdeScatterRow>& rows, const std::string& path,
                      const std::string& metadata_comment) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("save_scatter_csv: cannot open " + path);
    out << "disagreement,test_error,mode\n";
    char buf[96];
    for (const GdeScatterRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", r.disagreement, r.test_error);
        out << buf << r.mode << "\n";
    }
    out << "# " << metadata_comment << "\n";
}

void save_table_csv(const PredictionTable& table, const std::string& path) {
    check_table(table);
    std::ofstream out(path);
    if (!out) throw InvalidInput("save_table_csv: cannot open " + path);
    for (std::size_t m = 0; m < table.models; ++m)
        out << "m" << m << (m + 1 < table.models || table.has_labels ? "," : "");
    if (table.has_labels) out << "label";
    out << "\n";
    for (std::size_t e = 0; e < table.examples; ++e) {
        for (std::size_t m = 0; m < table.models; ++m)
            out << table.at(m, e) << (m + 1 < table.models || table.has_labels ? "," : "");
        if (table.has_labels) out << table.labels[e];
        out << "\n";
    }
}

PredictionTable load_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path, 0);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty prediction CSV: " + path, 0);
    std::vector<std::string> headers;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) headers.push_back(cell);
    }
    const bool has_labels = !headers.empty() && headers.back() == "label";
    const std::size_t models = headers.size() - (has_labels ? 1 : 0);
    std::vector<std::vector<int>> rows;
    std::size_t offset = line.size() + 1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<int> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stoi(cell));
        if (row.size() != headers.size())
            throw FormatError("ragged prediction CSV row in " + path, offset);
        rows.push_back(std::move(row));
        offset += line.size() + 1;
    }
    PredictionTable t;
    t.models = models;
    t.examples = rows.size();
    t.has_labels = has_labels;
    t.pred.resize(models * rows.size());
    int mx = 0;
    for (std::size_t e = 0; e < rows.size(); ++e) {
        for (std::size_t m = 0; m < models; ++m) {
            t.at(m, e) = rows[e][m];
            mx = std::max(mx, rows[e][m]);
        }
        if (has_labels) {
            t.labels.push_back(rows[e].back());
            mx = std::max(mx, rows[e].back());
        }
    }
    t.K = static_cast<std::size_t>(mx) + 1;
    return t;
}

}  // namespace genlab
