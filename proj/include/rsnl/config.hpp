#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsnl/forcing.hpp"
#include "rsnl/kernel.hpp"
#include "rsnl/spectrum.hpp"

namespace rsnl {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One JSON document drives every subcommand; sections are optional and
/// default-constructed, unknown keys are rejected. See the README for the
/// schema.
struct RunConfig {
    // params
    double alpha = 0.5;
    double gamma = 1.0;

    // problem
    double beta = 2.0;
    double t0 = 1.0;
    double T = 1.0;

    // operator
    enum class OperatorKind { Interval, Rectangle, Table };
    OperatorKind op_kind = OperatorKind::Interval;
    double length = M_PI;
    double rect_a = M_PI;
    double rect_b = M_PI;
    std::string table_path;
    int n_modes = 16;

    // phi
    enum class PhiKind { Zero, Coeffs, Basis };
    PhiKind phi_kind = PhiKind::Zero;
    std::vector<double> phi_values;
    int phi_basis_k = 1;
    double phi_basis_scale = 1.0;

    // forcing
    enum class ForcingKind { Zero, Constant, Polynomial, LinearRamp, Samples };
    ForcingKind forcing_kind = ForcingKind::Zero;
    std::vector<double> forcing_coeffs;
    std::vector<std::pair<int, std::vector<double>>> forcing_poly;
    int forcing_ramp_mode = 1;
    double forcing_samples_t_end = 1.0;
    std::vector<std::pair<int, std::vector<double>>> forcing_samples;

    QuadConfig quad;
    int oracle_steps = 1024;
    int compare_base_steps = 8192;
    double k0_tol = 1e-9;
    int solution_steps = 100;
    unsigned seed = 42;

    std::vector<double> beta_list;
    std::vector<double> kernel_lambdas;
    std::vector<double> kernel_times;
    std::optional<double> kernel_T;

    FracParams frac_params() const { return FracParams(alpha, gamma); }
    Spectrum build_spectrum() const;
    Forcing build_forcing(const Spectrum& spectrum) const;
    CoeffVector build_phi(const Spectrum& spectrum) const;
    double bounds_horizon() const;
    void validate() const;
};

/// Parses and validates a config file; throws ConfigError on any problem
/// (missing file, malformed JSON, unknown keys, violated invariants).
RunConfig load_config(const std::string& path);

}  // namespace rsnl
