#include "sscosamp/sensing.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sscosamp {

namespace {

CVector fill_coefficients(const Dictionary& dict, const std::vector<int>& sorted_support, Rng& rng,
                          const CoefficientModel& model) {
    CVector coefficients = CVector::Zero(dict.d());
    for (int idx : sorted_support) {
        Complex value;
        if (model.kind == ValueModel::UnitPhase) {
            value = std::polar(model.magnitude, 2.0 * M_PI * rng.uniform());
        } else {
            value = model.magnitude * Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
        }
        coefficients[idx] = value;
    }
    return coefficients;
}

SparseRepresentation make_representation(const Dictionary& dict, std::vector<int> indices, Rng& rng,
                                         const CoefficientModel& model) {
    SparseRepresentation rep;
    rep.support = SupportSet(std::move(indices), dict.d());
    rep.k = rep.support.size();
    rep.coefficients = fill_coefficients(dict, rep.support.indices, rng, model);
    return rep;
}

CVector synthesize_sparse(const Dictionary& dict, const SparseRepresentation& rep) {
    CVector x = CVector::Zero(dict.n());
    for (int idx : rep.support.indices) x += dict.entries().col(idx) * rep.coefficients[idx];
    return x;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

SupportStructure structure_from_name(const std::string& name) {
    if (name == "clustered") return SupportStructure::Clustered;
    if (name == "separated") return SupportStructure::Separated;
    throw std::invalid_argument("unknown support structure: " + name);
}

std::string to_string(SupportStructure structure) {
    return structure == SupportStructure::Clustered ? "clustered" : "separated";
}

RMatrix gaussian_matrix(int m, int n, std::uint64_t seed) {
    if (m < 1 || m > n) throw std::invalid_argument("gaussian_matrix: need 1 <= m <= n");
    Rng rng(seed);
    RMatrix A(m, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) A(i, j) = rng.normal() * scale;
    return A;
}

SparseRepresentation gen_clustered(const Dictionary& dict, int k, std::uint64_t seed,
                                   const CoefficientModel& model) {
    if (k < 1 || k > dict.d()) throw std::invalid_argument("gen_clustered: invalid k");
    Rng rng(seed);
    int start = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(dict.d())));
    std::vector<int> indices(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) indices[static_cast<std::size_t>(i)] = (start + i) % dict.d();
    return make_representation(dict, std::move(indices), rng, model);
}

SparseRepresentation gen_separated(const Dictionary& dict, int k, int h_min, std::uint64_t seed,
                                   const CoefficientModel& model) {
    if (k < 1) throw std::invalid_argument("gen_separated: invalid k");
    if (h_min < 1 || static_cast<long long>(k) * h_min > dict.d())
        throw std::invalid_argument("gen_separated: no support with the requested separation exists");
    Rng rng(seed);
    const int d = dict.d();
    // random rotation of an equally spaced template, with per-atom jitter
    // small enough to keep every cyclic gap at h_min or above
    const int spacing = d / k;
    const int jitter = (spacing - h_min) / 2;
    int offset = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d)));
    std::vector<int> indices(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        int base = static_cast<int>((static_cast<long long>(i) * d) / k);
        int shift = jitter > 0 ? static_cast<int>(rng.uniform_int(2ull * jitter + 1)) - jitter : 0;
        indices[static_cast<std::size_t>(i)] = (offset + base + shift % d + d) % d;
    }
    SparseRepresentation rep = make_representation(dict, std::move(indices), rng, model);
    if (rep.support.size() != k || (k > 1 && rep.support.min_separation() < h_min))
        throw std::logic_error("gen_separated: generated support violates its separation");
    return rep;
}

double snr_db(const CVector& x, const CVector& xhat) {
    double signal = x.norm();
    if (signal == 0.0) throw std::invalid_argument("snr_db: zero signal");
    double error = (x - xhat).norm();
    if (error == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(signal / error);
}

CVector add_noise(const CVector& x_meas, double epsilon, std::uint64_t seed) {
    if (epsilon < 0.0) throw std::invalid_argument("add_noise: epsilon must be nonnegative");
    const int m = static_cast<int>(x_meas.size());
    if (epsilon == 0.0) return CVector::Zero(m);
    Rng rng(seed);
    CVector direction(m);
    for (int i = 0; i < m; ++i) direction[i] = Complex(rng.normal(), rng.normal());
    // strictly inside the noise ball
    return direction * (epsilon * (1.0 - 1e-9) / direction.norm());
}

SensingInstance make_instance(const Dictionary& dict, int m, int k, const InstanceOptions& options,
                              std::uint64_t seed) {
    SensingInstance instance;
    instance.dict = &dict;
    instance.epsilon = options.epsilon;
    instance.seed = seed;
    instance.structure = options.structure;
    instance.h_min = options.structure == SupportStructure::Separated ? options.h_min : 0;
    instance.identity_a = options.identity_a;

    if (options.identity_a) {
        if (m != dict.n()) throw std::invalid_argument("make_instance: identity A requires m == n");
        instance.A = RMatrix::Identity(m, dict.n());
    } else {
        instance.A = gaussian_matrix(m, dict.n(), derive_seed(seed, 0));
    }
    instance.alpha_true =
        options.structure == SupportStructure::Clustered
            ? gen_clustered(dict, k, derive_seed(seed, 1), options.model)
            : gen_separated(dict, k, options.h_min, derive_seed(seed, 1), options.model);
    instance.x_true = synthesize_sparse(dict, instance.alpha_true);
    CVector measured = instance.A * instance.x_true.real() +
                       Complex(0.0, 1.0) * (instance.A * instance.x_true.imag());
    instance.e = add_noise(measured, options.epsilon, derive_seed(seed, 2));
    instance.y = measured + instance.e;
    return instance;
}

RecoveryReport evaluate(const SensingInstance& instance, const CVector& xhat,
                        const SSCoSaMPState& state, double wall_time) {
    RecoveryReport report;
    report.snr_db = snr_db(instance.x_true, xhat);
    report.perfect = report.snr_db > 100.0;
    report.iterations = state.iteration;
    report.residual_history = state.residual_history;
    report.support_recovered = state.support.indices == instance.alpha_true.support.indices;
    report.wall_time = wall_time;
    return report;
}

InstanceData to_data(const SensingInstance& instance) {
    InstanceData data;
    data.n = instance.dict->n();
    data.d = instance.dict->d();
    data.m = static_cast<int>(instance.A.rows());
    data.k = instance.alpha_true.k;
    data.epsilon = instance.epsilon;
    data.seed = instance.seed;
    data.structure = instance.structure;
    data.h_min = instance.h_min;
    data.identity_a = instance.identity_a;
    data.support = instance.alpha_true.support.indices;
    for (int idx : data.support) data.coefficients.push_back(instance.alpha_true.coefficients[idx]);
    return data;
}

void save_instance(const InstanceData& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_instance: cannot open " + path);
    out << "sscosamp-instance v1\n";
    out << "n " << data.n << "\nd " << data.d << "\nm " << data.m << "\nk " << data.k << "\n";
    out << "epsilon " << format_real(data.epsilon) << "\n";
    out << "seed " << data.seed << "\n";
    out << "structure " << to_string(data.structure) << "\n";
    out << "h_min " << data.h_min << "\n";
    out << "a_kind " << (data.identity_a ? "identity" : "gaussian") << "\n";
    out << "support";
    for (int idx : data.support) out << " " << idx;
    out << "\n";
    for (const Complex& c : data.coefficients)
        out << "coeff " << format_real(c.real()) << " " << format_real(c.imag()) << "\n";
    out << "end\n";
    if (!out) throw std::runtime_error("save_instance: write failed for " + path);
}

InstanceData load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_instance: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "sscosamp-instance v1")
        throw std::runtime_error("load_instance: unrecognized header in " + path);
    InstanceData data;
    while (std::getline(in, line)) {
        if (line == "end") return data;
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key == "n") fields >> data.n;
        else if (key == "d") fields >> data.d;
        else if (key == "m") fields >> data.m;
        else if (key == "k") fields >> data.k;
        else if (key == "epsilon") fields >> data.epsilon;
        else if (key == "seed") fields >> data.seed;
        else if (key == "h_min") fields >> data.h_min;
        else if (key == "structure") {
            std::string name;
            fields >> name;
            data.structure = structure_from_name(name);
        } else if (key == "a_kind") {
            std::string name;
            fields >> name;
            data.identity_a = name == "identity";
        } else if (key == "support") {
            int idx;
            while (fields >> idx) data.support.push_back(idx);
            // the extraction loop stops on end of line; only a bad token is an error
            if (fields.eof()) fields.clear();
        } else if (key == "coeff") {
            double re = 0.0, im = 0.0;
            fields >> re >> im;
            data.coefficients.emplace_back(re, im);
        } else {
            throw std::runtime_error("load_instance: unknown field '" + key + "' in " + path);
        }
        if (fields.fail()) throw std::runtime_error("load_instance: malformed line '" + line + "'");
    }
    throw std::runtime_error("load_instance: missing end marker in " + path);
}

SensingInstance materialize(const InstanceData& data, const Dictionary& dict) {
    if (dict.n() != data.n || dict.d() != data.d)
        throw std::invalid_argument("materialize: dictionary dimensions do not match the instance");
    if (data.support.size() != data.coefficients.size())
        throw std::invalid_argument("materialize: support and coefficient counts differ");
    SensingInstance instance;
    instance.dict = &dict;
    instance.epsilon = data.epsilon;
    instance.seed = data.seed;
    instance.structure = data.structure;
    instance.h_min = data.h_min;
    instance.identity_a = data.identity_a;
    instance.A = data.identity_a ? RMatrix(RMatrix::Identity(data.m, data.n))
                                 : gaussian_matrix(data.m, data.n, derive_seed(data.seed, 0));
    instance.alpha_true.support = SupportSet(data.support, data.d);
    instance.alpha_true.k = instance.alpha_true.support.size();
    instance.alpha_true.coefficients = CVector::Zero(data.d);
    for (std::size_t i = 0; i < data.support.size(); ++i)
        instance.alpha_true.coefficients[data.support[i]] = data.coefficients[i];
    instance.x_true = synthesize_sparse(dict, instance.alpha_true);
    CVector measured = instance.A * instance.x_true.real() +
                       Complex(0.0, 1.0) * (instance.A * instance.x_true.imag());
    instance.e = add_noise(measured, data.epsilon, derive_seed(data.seed, 2));
    instance.y = measured + instance.e;
    return instance;
}

} // namespace sscosamp
