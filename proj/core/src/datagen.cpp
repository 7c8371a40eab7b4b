#include "genlab/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "genlab/errors.hpp"

namespace genlab {

double LinearSetupParams::c2() { return std::sqrt(15.0 / 16.0); }
double LinearSetupParams::c3() { return std::sqrt(17.0 / 16.0); }
double LinearSetupParams::c4() { return std::sqrt(2.0); }

namespace {

Vector random_direction(std::size_t dim, double target_norm, Rng& rng) {
    Vector u(dim);
    double norm = 0.0;
    while (norm == 0.0) {
        for (double& v : u) v = rng.gaussian();
        norm = l2_norm(u);
    }
    for (double& v : u) v *= target_norm / norm;
    return u;
}

}  // namespace

LabeledDataset gen_linear(const LinearSetupParams& params, Rng& rng) {
    if (params.m == 0) throw InvalidInput("gen_linear: m must be >= 1");
    if (params.N == 0 || params.K == 0) throw InvalidInput("gen_linear: N, K must be >= 1");
    LabeledDataset S;
    const double u_norm = 1.0 / std::sqrt(static_cast<double>(params.m));
    Vector u = random_direction(params.K, u_norm, rng);
    const double noise_std = std::sqrt(32.0 / static_cast<double>(params.N));
    for (std::size_t i = 0; i < params.m; ++i) {
        const int y = (rng.next_u64() & 1) ? 1 : -1;
        Vector x(params.K + params.N);
        for (std::size_t j = 0; j < params.K; ++j) x[j] = 2.0 * y * u[j];
        for (std::size_t j = 0; j < params.N; ++j)
            x[params.K + j] = rng.gaussian(noise_std);
        S.inputs.push_back(std::move(x));
        S.labels.push_back(y);
    }
    S.meta = ScenarioMeta{std::move(u), params.K, params.N};
    return S;
}

LabeledDataset linear_bad_dataset(const LabeledDataset& S) {
    if (!S.meta) throw InvalidInput("linear_bad_dataset: missing scenario metadata");
    LabeledDataset Sp = S;
    const std::size_t K = S.meta->K;
    for (Vector& x : Sp.inputs)
        for (std::size_t j = K; j < x.size(); ++j) x[j] = -x[j];
    return Sp;
}

bool linear_conditions(const LinearSetupParams& p, double eps, double delta) {
    if (delta >= 0.25) throw InvalidInput("linear_conditions: requires delta < 1/4");
    if (eps <= 0.0 || delta <= 0.0) throw InvalidInput("linear_conditions: eps, delta > 0");
    const double m = static_cast<double>(p.m);
    const double N = static_cast<double>(p.N);
    const double c2sq = 15.0 / 16.0;
    const double ratio = 4.0 * LinearSetupParams::c4() * LinearSetupParams::c3() / c2sq;
    const double log_term = std::log(6.0 * m / delta);
    const bool d1 = N >= log_term / LinearSetupParams::c1;
    const bool d2 = N >= m * ratio * ratio * log_term;
    const bool d3 = N >= m * ratio * ratio * 2.0 * std::log(2.0 / eps);
    return d1 && d2 && d3;
}

LabeledDataset gen_hypersphere(std::size_t m, std::size_t dim, double r_in, double r_out,
                               Rng& rng) {
    if (m == 0 || dim == 0) throw InvalidInput("gen_hypersphere: m, dim must be >= 1");
    if (!(0.0 < r_in && r_in < r_out))
        throw InvalidInput("gen_hypersphere: need 0 < r_in < r_out");
    LabeledDataset S;
    for (std::size_t i = 0; i < m; ++i) {
        const bool inner = (i % 2 == 0);
        const double r = inner ? r_in : r_out;
        S.inputs.push_back(random_direction(dim, r, rng));
        S.labels.push_back(inner ? 0 : 1);
    }
    return S;
}

LabeledDataset hypersphere_bad_dataset(const LabeledDataset& S, double r_in, double r_out) {
    LabeledDataset Sp = S;
    for (std::size_t i = 0; i < Sp.size(); ++i) {
        const double norm = l2_norm(Sp.inputs[i]);
        if (norm == 0.0) throw InvalidInput("hypersphere_bad_dataset: zero-norm point");
        const double r_other = (Sp.labels[i] == 0) ? r_out : r_in;
        for (double& v : Sp.inputs[i]) v *= r_other / norm;
        Sp.labels[i] = 1 - Sp.labels[i];
    }
    return Sp;
}

LabeledDataset gen_exp(std::size_t m, std::size_t N, Rng& rng) {
    if (m == 0 || N == 0) throw InvalidInput("gen_exp: m, N must be >= 1");
    LabeledDataset S;
    Vector u = random_direction(N, std::sqrt(static_cast<double>(N)) / 2.0, rng);
    for (std::size_t i = 0; i < m; ++i) {
        const int y = (rng.next_u64() & 1) ? 1 : -1;
        Vector x(2 * N);
        for (std::size_t j = 0; j < N; ++j) x[j] = y * u[j];
        for (std::size_t j = 0; j < N; ++j) x[N + j] = rng.gaussian();
        S.inputs.push_back(std::move(x));
        S.labels.push_back(y);
    }
    S.meta = ScenarioMeta{std::move(u), N, N};
    return S;
}

LabeledDataset exp_bad_dataset(const LabeledDataset& S) {
    if (!S.meta) throw InvalidInput("exp_bad_dataset: missing scenario metadata");
    LabeledDataset Sp = S;
    const std::size_t N = S.meta->N;
    for (std::size_t i = 0; i < Sp.size(); ++i) {
        for (std::size_t j = 0; j < N; ++j) Sp.inputs[i][j] = -Sp.inputs[i][j];
        Sp.labels[i] = -Sp.labels[i];
    }
    return Sp;
}

bool exp_conditions(std::size_t m_, std::size_t N_, double eps, double delta) {
    if (eps <= 0.0 || delta <= 0.0 || eps >= 1.0 || delta >= 1.0)
        throw InvalidInput("exp_conditions: eps, delta in (0,1)");
    const double m = static_cast<double>(m_);
    const double N = static_cast<double>(N_);
    const double c2_inv = 1.0 / LinearSetupParams::c2();
    const double c3 = LinearSetupParams::c3();
    const double c4 = LinearSetupParams::c4();
    const double lead = std::max(c2_inv, (16.0 * c3 * c4) * (16.0 * c3 * c4));
    const bool d4 = N >= lead * 2.0 * std::log(6.0 * m / eps);
    const bool d5 = N >= lead * 2.0 * std::log(6.0 * m / delta);
    const bool d6 = N >= 6.0 * std::log(2.0 * m);
    const bool m_ok = m > 8.0 * std::log(6.0 / delta);
    return d4 && d5 && d6 && m_ok;
}

LabeledDataset corrupt_labels(const LabeledDataset& S, double fraction, std::size_t K,
                              Rng& rng) {
    if (fraction < 0.0 || fraction > 1.0)
        throw InvalidInput("corrupt_labels: fraction in [0,1]");
    if (K < 2) throw InvalidInput("corrupt_labels: K must be >= 2");
    LabeledDataset out = S;
    const std::size_t n_corrupt =
        static_cast<std::size_t>(fraction * static_cast<double>(S.size()));
    if (n_corrupt == 0) return out;
    const bool pm1 = std::any_of(S.labels.begin(), S.labels.end(),
                                 [](int y) { return y < 0; });
    // partial Fisher-Yates picks the corrupted subset uniformly
    std::vector<std::size_t> idx(S.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < n_corrupt; ++i) {
        const std::size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
        const int draw = static_cast<int>(rng.below(K));
        out.labels[idx[i]] = pm1 ? (draw == 0 ? -1 : 1) : draw;
    }
    return out;
}

namespace {

std::uint32_t read_be_u32(std::ifstream& in, std::size_t& offset, const std::string& path) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw FormatError("truncated IDX file: " + path, offset);
    offset += 4;
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw FormatError("cannot open " + images_path, 0);
    std::size_t off = 0;
    if (read_be_u32(img, off, images_path) != 0x00000803u)
        throw FormatError("bad image magic in " + images_path, 0);
    const std::uint32_t n_img = read_be_u32(img, off, images_path);
    const std::uint32_t rows = read_be_u32(img, off, images_path);
    const std::uint32_t cols = read_be_u32(img, off, images_path);
    const std::size_t pixels = std::size_t(rows) * cols;

    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw FormatError("cannot open " + labels_path, 0);
    std::size_t loff = 0;
    if (read_be_u32(lab, loff, labels_path) != 0x00000801u)
        throw FormatError("bad label magic in " + labels_path, 0);
    const std::uint32_t n_lab = read_be_u32(lab, loff, labels_path);
    if (n_lab != n_img)
        throw FormatError("image/label count mismatch (" + std::to_string(n_img) + " vs " +
                              std::to_string(n_lab) + ")",
                          loff - 4);

    LabeledDataset S;
    std::vector<unsigned char> buf(pixels);
    for (std::uint32_t i = 0; i < n_img; ++i) {
        img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
        if (!img) throw FormatError("truncated image data in " + images_path, off);
        off += pixels;
        Vector x(pixels);
        for (std::size_t p = 0; p < pixels; ++p) x[p] = buf[p] / 255.0;
        S.inputs.push_back(std::move(x));
        char c;
        lab.read(&c, 1);
        if (!lab) throw FormatError("truncated label data in " + labels_path, loff);
        ++loff;
        S.labels.push_back(static_cast<unsigned char>(c));
    }
    return S;
}

void save_csv(const LabeledDataset& S, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("save_csv: cannot open " + path);
    const std::size_t d = S.dim();
    for (std::size_t j = 0; j < d; ++j) out << "x" << j << ",";
    out << "label\n";
    char buf[64];
    for (std::size_t i = 0; i < S.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", S.inputs[i][j]);
            out << buf << ",";
        }
        out << S.labels[i] << "\n";
    }
}

LabeledDataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path, 0);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty CSV: " + path, 0);
    LabeledDataset S;
    std::size_t offset = line.size() + 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.empty()) throw FormatError("bad CSV row in " + path, offset);
        S.labels.push_back(static_cast<int>(vals.back()));
        vals.pop_back();
        S.inputs.push_back(std::move(vals));
        offset += line.size() + 1;
    }
    return S;
}

LabeledDataset gen_gaussian_mixture(std::size_t m, std::size_t dim, std::size_t K,
                                    double center_scale, double noise_sigma, Rng& rng,
                                    std::uint64_t center_seed) {
    if (m == 0 || dim == 0 || K == 0) throw InvalidInput("gen_gaussian_mixture: bad sizes");
    std::vector<Vector> centers;
    for (std::size_t k = 0; k < K; ++k) {
        Rng center_rng = Rng(center_seed).split(k);
        centers.push_back(random_direction(dim, center_scale, center_rng));
    }
    LabeledDataset S;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t k = i % K;
        Vector x(dim);
        for (std::size_t j = 0; j < dim; ++j)
            x[j] = centers[k][j] + rng.gaussian(noise_sigma);
        S.inputs.push_back(std::move(x));
        S.labels.push_back(static_cast<int>(k));
    }
    return S;
}

}  // namespace genlab
