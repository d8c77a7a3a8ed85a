#include "rsnl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"

namespace rsnl {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw ConfigError(std::string("'") + key + "' must be an integer");
    return obj[key].get<int>();
}

std::vector<double> get_array(const json& obj, const char* key) {
    if (!obj[key].is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<double> log_spaced(double lo_exp, double hi_exp, int count) {
    if (count < 1) throw ConfigError("lambda_count must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = std::pow(10.0, lo_exp);
        return out;
    }
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] =
            std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / (count - 1));
    return out;
}

std::vector<std::pair<int, std::vector<double>>> get_mode_arrays(const json& arr,
                                                                 const char* field) {
    std::vector<std::pair<int, std::vector<double>>> out;
    for (const auto& entry : arr) {
        reject_unknown(entry, "forcing mode entry", {"mode", field});
        if (!entry.contains("mode") || !entry.contains(field))
            throw ConfigError("forcing mode entries need 'mode' and '" + std::string(field) + "'");
        out.emplace_back(entry["mode"].get<int>(), get_array(entry, field));
    }
    return out;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    reject_unknown(doc, "config root",
                   {"params", "problem", "operator", "phi", "forcing", "quadrature",
                    "oracle", "k0_tol", "kernel_grid", "beta_list", "output", "seed"});

    RunConfig cfg;

    if (doc.contains("params")) {
        const json& p = doc["params"];
        reject_unknown(p, "params", {"alpha", "gamma"});
        cfg.alpha = get_num(p, "alpha", cfg.alpha);
        cfg.gamma = get_num(p, "gamma", cfg.gamma);
    }
    if (doc.contains("problem")) {
        const json& p = doc["problem"];
        reject_unknown(p, "problem", {"beta", "t0", "T"});
        cfg.beta = get_num(p, "beta", cfg.beta);
        cfg.t0 = get_num(p, "t0", cfg.t0);
        cfg.T = get_num(p, "T", cfg.T);
    }
    if (doc.contains("operator")) {
        const json& p = doc["operator"];
        reject_unknown(p, "operator", {"type", "length", "a", "b", "path", "K"});
        const std::string type = p.value("type", "interval");
        if (type == "interval")
            cfg.op_kind = RunConfig::OperatorKind::Interval;
        else if (type == "rectangle")
            cfg.op_kind = RunConfig::OperatorKind::Rectangle;
        else if (type == "table")
            cfg.op_kind = RunConfig::OperatorKind::Table;
        else
            throw ConfigError("operator.type must be interval|rectangle|table");
        cfg.length = get_num(p, "length", cfg.length);
        cfg.rect_a = get_num(p, "a", cfg.rect_a);
        cfg.rect_b = get_num(p, "b", cfg.rect_b);
        if (p.contains("path")) cfg.table_path = p["path"].get<std::string>();
        cfg.n_modes = get_int(p, "K", cfg.n_modes);
    }
    if (doc.contains("phi")) {
        const json& p = doc["phi"];
        reject_unknown(p, "phi", {"type", "values", "k", "scale"});
        const std::string type = p.value("type", "zero");
        if (type == "zero") {
            cfg.phi_kind = RunConfig::PhiKind::Zero;
        } else if (type == "coeffs") {
            cfg.phi_kind = RunConfig::PhiKind::Coeffs;
            if (!p.contains("values")) throw ConfigError("phi.values required for type coeffs");
            cfg.phi_values = get_array(p, "values");
        } else if (type == "basis") {
            cfg.phi_kind = RunConfig::PhiKind::Basis;
            cfg.phi_basis_k = get_int(p, "k", 1);
            cfg.phi_basis_scale = get_num(p, "scale", 1.0);
        } else {
            throw ConfigError("phi.type must be zero|coeffs|basis");
        }
    }
    if (doc.contains("forcing")) {
        const json& p = doc["forcing"];
        reject_unknown(p, "forcing", {"type", "coeffs", "modes", "mode", "t_end", "samples"});
        const std::string type = p.value("type", "zero");
        if (type == "zero") {
            cfg.forcing_kind = RunConfig::ForcingKind::Zero;
        } else if (type == "constant") {
            cfg.forcing_kind = RunConfig::ForcingKind::Constant;
            if (!p.contains("coeffs")) throw ConfigError("forcing.coeffs required");
            cfg.forcing_coeffs = get_array(p, "coeffs");
        } else if (type == "polynomial") {
            cfg.forcing_kind = RunConfig::ForcingKind::Polynomial;
            if (!p.contains("modes")) throw ConfigError("forcing.modes required");
            cfg.forcing_poly = get_mode_arrays(p["modes"], "coeffs");
        } else if (type == "linear_ramp") {
            cfg.forcing_kind = RunConfig::ForcingKind::LinearRamp;
            cfg.forcing_ramp_mode = get_int(p, "mode", 1);
        } else if (type == "samples") {
            cfg.forcing_kind = RunConfig::ForcingKind::Samples;
            cfg.forcing_samples_t_end = get_num(p, "t_end", cfg.T);
            if (!p.contains("modes")) throw ConfigError("forcing.modes required");
            cfg.forcing_samples = get_mode_arrays(p["modes"], "samples");
        } else {
            throw ConfigError("forcing.type must be zero|constant|polynomial|linear_ramp|samples");
        }
    }
    if (doc.contains("quadrature")) {
        const json& p = doc["quadrature"];
        reject_unknown(p, "quadrature",
                       {"rel_tol", "abs_tol", "max_subdivisions", "duhamel_panels"});
        cfg.quad.rel_tol = get_num(p, "rel_tol", cfg.quad.rel_tol);
        cfg.quad.abs_tol = get_num(p, "abs_tol", cfg.quad.abs_tol);
        cfg.quad.max_subdivisions = get_int(p, "max_subdivisions", cfg.quad.max_subdivisions);
        cfg.quad.duhamel_panels = get_int(p, "duhamel_panels", cfg.quad.duhamel_panels);
    }
    if (doc.contains("oracle")) {
        const json& p = doc["oracle"];
        reject_unknown(p, "oracle", {"n_steps", "compare_base_steps"});
        cfg.oracle_steps = get_int(p, "n_steps", cfg.oracle_steps);
        cfg.compare_base_steps = get_int(p, "compare_base_steps", cfg.compare_base_steps);
    }
    if (doc.contains("k0_tol")) cfg.k0_tol = get_num(doc, "k0_tol", cfg.k0_tol);
    if (doc.contains("kernel_grid")) {
        const json& p = doc["kernel_grid"];
        reject_unknown(p, "kernel_grid",
                       {"lambdas", "lambda_log10_min", "lambda_log10_max", "lambda_count",
                        "times", "T"});
        if (p.contains("lambdas")) {
            cfg.kernel_lambdas = get_array(p, "lambdas");
        } else if (p.contains("lambda_count")) {
            cfg.kernel_lambdas = log_spaced(get_num(p, "lambda_log10_min", 0.0),
                                            get_num(p, "lambda_log10_max", 4.0),
                                            get_int(p, "lambda_count", 25));
        }
        if (p.contains("times")) cfg.kernel_times = get_array(p, "times");
        if (p.contains("T")) cfg.kernel_T = get_num(p, "T", 0.0);
    }
    if (doc.contains("beta_list")) cfg.beta_list = get_array(doc, "beta_list");
    if (doc.contains("output")) {
        const json& p = doc["output"];
        reject_unknown(p, "output", {"solution_steps"});
        cfg.solution_steps = get_int(p, "solution_steps", cfg.solution_steps);
    }
    if (doc.contains("seed")) cfg.seed = static_cast<unsigned>(get_int(doc, "seed", 42));

    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("params.alpha must lie in (0,1)");
    if (!(gamma > 0.0)) throw ConfigError("params.gamma must be positive");
    if (!(T > 0.0)) throw ConfigError("problem.T must be positive");
    if (!(t0 > 0.0 && t0 <= T)) throw ConfigError("problem.t0 must lie in (0, T]");
    if (!std::isfinite(beta)) throw ConfigError("problem.beta must be finite");
    if (n_modes < 1) throw ConfigError("operator.K must be >= 1");
    if (op_kind == OperatorKind::Interval && !(length > 0.0))
        throw ConfigError("operator.length must be positive");
    if (op_kind == OperatorKind::Rectangle && (!(rect_a > 0.0) || !(rect_b > 0.0)))
        throw ConfigError("operator sides must be positive");
    if (op_kind == OperatorKind::Table && table_path.empty())
        throw ConfigError("operator.path required for table spectra");
    try {
        quad.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("quadrature: ") + e.what());
    }
    if (oracle_steps < 2) throw ConfigError("oracle.n_steps must be >= 2");
    if (compare_base_steps < 64) throw ConfigError("oracle.compare_base_steps must be >= 64");
    if (!(k0_tol > 0.0)) throw ConfigError("k0_tol must be positive");
    if (solution_steps < 2) throw ConfigError("output.solution_steps must be >= 2");
    for (double lam : kernel_lambdas)
        if (!(lam > 0.0)) throw ConfigError("kernel_grid lambdas must be positive");
    for (double t : kernel_times)
        if (t < 0.0) throw ConfigError("kernel_grid times must be nonnegative");
    if (kernel_T && !(*kernel_T > 0.0)) throw ConfigError("kernel_grid.T must be positive");
}

Spectrum RunConfig::build_spectrum() const {
    switch (op_kind) {
        case OperatorKind::Interval:
            return Spectrum::dirichlet_interval(length, n_modes);
        case OperatorKind::Rectangle:
            return Spectrum::dirichlet_rectangle(rect_a, rect_b, n_modes);
        case OperatorKind::Table: {
            Spectrum s = Spectrum::load_csv(table_path);
            if (s.size() < n_modes) return s;
            return Spectrum::from_eigenvalues(
                std::vector<double>(s.eigenvalues().begin(), s.eigenvalues().begin() + n_modes));
        }
    }
    throw ConfigError("unreachable operator kind");
}

Forcing RunConfig::build_forcing(const Spectrum& spectrum) const {
    switch (forcing_kind) {
        case ForcingKind::Zero:
            return Forcing::zero();
        case ForcingKind::Constant:
            return Forcing::constant(forcing_coeffs);
        case ForcingKind::Polynomial: {
            std::map<int, std::vector<double>> modes(forcing_poly.begin(), forcing_poly.end());
            return Forcing::polynomial(std::move(modes));
        }
        case ForcingKind::LinearRamp: {
            if (forcing_ramp_mode < 1 || forcing_ramp_mode > spectrum.size())
                throw ConfigError("forcing.mode out of range");
            return Forcing::linear_ramp(frac_params(), spectrum.eigenvalue(forcing_ramp_mode),
                                        forcing_ramp_mode);
        }
        case ForcingKind::Samples: {
            if (forcing_samples.empty()) throw ConfigError("forcing.modes empty");
            const int n = static_cast<int>(forcing_samples.front().second.size()) - 1;
            if (n < 2) throw ConfigError("forcing samples need at least 3 points");
            std::map<int, std::vector<double>> modes(forcing_samples.begin(),
                                                     forcing_samples.end());
            return Forcing::samples(TimeGrid(forcing_samples_t_end, n), std::move(modes));
        }
    }
    throw ConfigError("unreachable forcing kind");
}

CoeffVector RunConfig::build_phi(const Spectrum& spectrum) const {
    const int K = spectrum.size();
    switch (phi_kind) {
        case PhiKind::Zero:
            return CoeffVector::zeros(K);
        case PhiKind::Coeffs: {
            CoeffVector v = CoeffVector::zeros(K);
            if (static_cast<int>(phi_values.size()) > K)
                throw ConfigError("phi.values longer than the spectrum truncation");
            std::copy(phi_values.begin(), phi_values.end(), v.c.begin());
            return v;
        }
        case PhiKind::Basis:
            if (phi_basis_k < 1 || phi_basis_k > K) throw ConfigError("phi.k out of range");
            return CoeffVector::basis(K, phi_basis_k, phi_basis_scale);
    }
    throw ConfigError("unreachable phi kind");
}

double RunConfig::bounds_horizon() const {
    if (kernel_T) return *kernel_T;
    if (!kernel_times.empty())
        return *std::max_element(kernel_times.begin(), kernel_times.end());
    return T;
}

}  // namespace rsnl
