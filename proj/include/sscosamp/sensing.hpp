#pragma once

// Measurement ensembles and structured sparse signal generation: Gaussian
// sensing matrices, clustered and minimum-separation supports, bounded noise,
// and the recovery metrics used by the experiments. Every generator is a pure
// function of its seed.

#include <cstdint>
#include <string>
#include <vector>

#include "sscosamp/dictionary.hpp"
#include "sscosamp/recovery.hpp"
#include "sscosamp/rng.hpp"

namespace sscosamp {

struct SparseRepresentation {
    CVector coefficients; // length d, vanishing off the support
    SupportSet support;
    int k = 0;
};

enum class SupportStructure { Clustered, Separated };
SupportStructure structure_from_name(const std::string& name);
std::string to_string(SupportStructure structure);

enum class ValueModel { UnitPhase, ComplexGaussian };

struct CoefficientModel {
    ValueModel kind = ValueModel::UnitPhase;
    double magnitude = 1.0; // scales every coefficient; unit-phase values sit exactly at it
};

struct SensingInstance {
    RMatrix A;
    const Dictionary* dict = nullptr;
    SparseRepresentation alpha_true;
    CVector x_true; // D * alpha
    CVector e;      // ||e|| strictly below epsilon
    CVector y;      // A x_true + e
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    SupportStructure structure = SupportStructure::Separated;
    int h_min = 0;
    bool identity_a = false;
};

struct RecoveryReport {
    double snr_db = 0.0;
    bool perfect = false; // snr_db strictly above 100
    int iterations = 0;
    std::vector<double> residual_history;
    bool support_recovered = false;
    double wall_time = 0.0; // seconds; informational only, never serialized
};

RMatrix gaussian_matrix(int m, int n, std::uint64_t seed);

SparseRepresentation gen_clustered(const Dictionary& dict, int k, std::uint64_t seed,
                                   const CoefficientModel& model = {});
SparseRepresentation gen_separated(const Dictionary& dict, int k, int h_min, std::uint64_t seed,
                                   const CoefficientModel& model = {});

double snr_db(const CVector& x, const CVector& xhat);

// Random direction with norm epsilon*(1 - 1e-9); the length is taken from x_meas.
CVector add_noise(const CVector& x_meas, double epsilon, std::uint64_t seed);

struct InstanceOptions {
    SupportStructure structure = SupportStructure::Separated;
    int h_min = 1;
    double epsilon = 0.0;
    CoefficientModel model{};
    bool identity_a = false; // use A = I (requires m == n) instead of Gaussian
};

// Assembles a full instance; sub-seeds for A, coefficients and noise are
// derived from the instance seed so any piece can be regenerated on its own.
SensingInstance make_instance(const Dictionary& dict, int m, int k, const InstanceOptions& options,
                              std::uint64_t seed);

RecoveryReport evaluate(const SensingInstance& instance, const CVector& xhat,
                        const SSCoSaMPState& state, double wall_time = 0.0);

// Replayable plain-text image of an instance (support and coefficients are
// explicit; A and e are regenerated from the recorded seeds).
struct InstanceData {
    int n = 0, d = 0, m = 0, k = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    SupportStructure structure = SupportStructure::Separated;
    int h_min = 0;
    bool identity_a = false;
    std::vector<int> support;
    std::vector<Complex> coefficients;
};

InstanceData to_data(const SensingInstance& instance);
void save_instance(const InstanceData& data, const std::string& path);
InstanceData load_instance(const std::string& path);
SensingInstance materialize(const InstanceData& data, const Dictionary& dict);

} // namespace sscosamp
