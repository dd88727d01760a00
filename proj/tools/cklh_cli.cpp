// cklh — command-line front door for the curved Lie–Hamilton toolkit:
// scenario simulation, property-suite verification, superposition-rule
// reconstruction, reference-table reproduction, and flat-limit sweeps.
// Structured JSON configs in; CSV/JSON (optionally SVG) artifacts out.
//
// Exit codes: 0 success / all checks passed, 1 at least one verification
// failure, 2 configuration or usage error.
//
// Environment: CKLH_THREADS caps worker parallelism of the check suites.
#include "cklh/cklh.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// errors and config source bookkeeping
// ---------------------------------------------------------------------------

/// Anything wrong with usage or configuration; mapped to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raw config text kept around so validation messages can cite line numbers.
struct ConfigSource {
    std::string path;
    std::string text;

    /// 1-based line of the first occurrence of the quoted key; 0 if absent.
    [[nodiscard]] int key_line(const std::string& key) const
    {
        const std::size_t pos = text.find("\"" + key + "\"");
        if (pos == std::string::npos) {
            return 0;
        }
        return 1
               + static_cast<int>(std::count(text.begin(),
                                             text.begin() + static_cast<std::ptrdiff_t>(pos),
                                             '\n'));
    }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const
    {
        std::string where = path;
        if (const int line = key_line(key); line > 0) {
            where += ":" + std::to_string(line);
        }
        throw ConfigError(where + ": key '" + key + "': " + message);
    }
};

[[nodiscard]] ConfigSource read_source(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return {path, buf.str()};
}

[[nodiscard]] json parse_json(const ConfigSource& src)
{
    try {
        return json::parse(src.text);
    } catch (const json::parse_error& e) {
        // e.byte is the 1-based byte offset of the failure.
        int line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < src.text.size(); ++i) {
            if (src.text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(src.path + ":" + std::to_string(line) + ":" + std::to_string(col)
                          + ": JSON parse error: " + std::string(e.what()));
    }
}

// ---------------------------------------------------------------------------
// small output helpers
// ---------------------------------------------------------------------------

[[nodiscard]] std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[nodiscard]] const char* status_name(cklh::TrajectoryStatus s)
{
    switch (s) {
    case cklh::TrajectoryStatus::Complete:
        return "complete";
    case cklh::TrajectoryStatus::DomainExit:
        return "domain_exit";
    default:
        return "blow_up";
    }
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write output file: " + path.string());
    }
    out << content;
    if (!out) {
        throw ConfigError("write failed: " + path.string());
    }
}

// ---------------------------------------------------------------------------
// typed config field access
// ---------------------------------------------------------------------------

[[nodiscard]] const json* find_member(const json& obj, const std::string& key)
{
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void check_allowed_keys(const ConfigSource& src, const json& obj,
                        const std::vector<std::string>& allowed)
{
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            std::string list;
            for (const std::string& a : allowed) {
                list += (list.empty() ? "" : ", ") + a;
            }
            src.fail(item.key(), "unknown key (allowed here: " + list + ")");
        }
    }
}

[[nodiscard]] double get_double(const ConfigSource& src, const json& obj, const std::string& key,
                                std::optional<double> fallback = std::nullopt)
{
    const json* v = find_member(obj, key);
    if (v == nullptr) {
        if (fallback) {
            return *fallback;
        }
        src.fail(key, "required number is missing");
    }
    if (!v->is_number()) {
        src.fail(key, "expected a number");
    }
    const double d = v->get<double>();
    if (!std::isfinite(d)) {
        src.fail(key, "number must be finite");
    }
    return d;
}

[[nodiscard]] int get_int(const ConfigSource& src, const json& obj, const std::string& key,
                          int fallback, int lo, int hi)
{
    const json* v = find_member(obj, key);
    if (v == nullptr) {
        return fallback;
    }
    if (!v->is_number_integer()) {
        src.fail(key, "expected an integer");
    }
    const auto i = v->get<long long>();
    if (i < lo || i > hi) {
        src.fail(key, "value out of range [" + std::to_string(lo) + ", " + std::to_string(hi)
                          + "]");
    }
    return static_cast<int>(i);
}

[[nodiscard]] std::string get_string(const ConfigSource& src, const json& obj,
                                     const std::string& key)
{
    const json* v = find_member(obj, key);
    if (v == nullptr) {
        src.fail(key, "required string is missing");
    }
    if (!v->is_string()) {
        src.fail(key, "expected a string");
    }
    return v->get<std::string>();
}

[[nodiscard]] std::vector<double> get_double_array(const ConfigSource& src, const json& v,
                                                   const std::string& key)
{
    if (!v.is_array()) {
        src.fail(key, "expected an array of numbers");
    }
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number() || !std::isfinite(e.get<double>())) {
            src.fail(key, "expected finite numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

// ---------------------------------------------------------------------------
// coefficient presets
// ---------------------------------------------------------------------------

[[nodiscard]] cklh::Coefficient parse_coefficient(const ConfigSource& src, const json& v,
                                                  const std::string& key)
{
    if (v.is_number()) {
        return cklh::Coefficient::constant(v.get<double>());
    }
    if (!v.is_object()) {
        src.fail(key, "expected a number or a coefficient object with a 'preset' field");
    }
    const std::string preset = get_string(src, v, "preset");
    if (preset == "zero") {
        check_allowed_keys(src, v, {"preset"});
        return cklh::Coefficient{};
    }
    if (preset == "constant") {
        check_allowed_keys(src, v, {"preset", "value"});
        return cklh::Coefficient::constant(get_double(src, v, "value"));
    }
    if (preset == "polynomial") {
        check_allowed_keys(src, v, {"preset", "coeffs"});
        const json* c = find_member(v, "coeffs");
        if (c == nullptr) {
            src.fail(key, "polynomial preset needs a 'coeffs' array");
        }
        return cklh::Coefficient::polynomial(get_double_array(src, *c, "coeffs"));
    }
    if (preset == "sinusoid") {
        check_allowed_keys(src, v, {"preset", "amplitude", "omega", "phase", "offset"});
        return cklh::Coefficient::sinusoid(get_double(src, v, "amplitude"),
                                           get_double(src, v, "omega"),
                                           get_double(src, v, "phase", 0.0),
                                           get_double(src, v, "offset", 0.0));
    }
    if (preset == "piecewise_linear") {
        check_allowed_keys(src, v, {"preset", "times", "values"});
        const json* ts = find_member(v, "times");
        const json* vs = find_member(v, "values");
        if (ts == nullptr || vs == nullptr) {
            src.fail(key, "piecewise_linear preset needs 'times' and 'values' arrays");
        }
        try {
            return cklh::Coefficient::piecewise_linear(get_double_array(src, *ts, "times"),
                                                       get_double_array(src, *vs, "values"));
        } catch (const cklh::DomainError& e) {
            src.fail(key, e.what());
        }
    }
    src.fail(key, "unknown preset '" + preset
                      + "' (zero|constant|polynomial|sinusoid|piecewise_linear)");
}

// ---------------------------------------------------------------------------
// scenario schema
// ---------------------------------------------------------------------------

/// Static description of one simulable system identifier.
struct SystemTraits {
    int kappa_arity = 1;                     ///< number of curvature labels
    std::size_t dim = 2;                     ///< state dimension
    std::vector<std::string> state_names;    ///< CSV column names
    std::vector<std::string> coeff_keys;     ///< accepted "coefficients" keys
    bool needs_lambda = false;               ///< params.lambda required
};

[[nodiscard]] const std::vector<std::pair<std::string, SystemTraits>>& system_registry()
{
    static const std::vector<std::pair<std::string, SystemTraits>> reg = {
        {"class_i4", {1, 2, {"x", "y"}, {"b1", "b2", "b3"}, false}},
        {"class_p2", {2, 2, {"x", "y"}, {"b1", "b2", "b3"}, false}},
        {"riccati_1d", {1, 1, {"x"}, {"b1", "b2", "b3"}, false}},
        {"sc_riccati", {1, 2, {"u", "v"}, {"b1", "b2", "b3"}, false}},
        {"diffusion", {1, 2, {"u", "v"}, {"a", "b", "c"}, false}},
        {"ks_neg", {1, 2, {"u", "v"}, {"eta"}, true}},
        {"ks_pos", {2, 2, {"u", "v"}, {"eta"}, true}},
        {"ermakov_neg", {1, 2, {"u", "v"}, {"omega"}, true}},
        {"ermakov_pos", {2, 2, {"u", "v"}, {"omega"}, true}},
    };
    return reg;
}

enum class Mode { Simulate, Superpose };

/// Parsed and validated scenario config.
struct Scenario {
    std::string system;
    SystemTraits traits;
    std::vector<double> kappas;
    double lambda = 1.0;
    std::vector<cklh::Coefficient> coeffs; ///< aligned with traits.coeff_keys
    std::vector<cklh::StateVector> initial_states; ///< simulate mode
    std::vector<cklh::StateVector> particulars;    ///< superpose mode
    std::optional<cklh::StateVector> hidden;       ///< superpose mode
    std::vector<double> mu;                        ///< superpose mode
    double t_start = 0.0;
    double t_end = 5.0;
    int samples = 201;
    double rtol = 1e-10;
    double atol = 1e-12;
    double superpose_tol = 1e-6;
    bool want_csv = true;
    bool want_manifest = true;
    bool want_svg = false;
};

[[nodiscard]] cklh::StateVector parse_state(const ConfigSource& src, const json& v,
                                            const std::string& key, std::size_t dim)
{
    const std::vector<double> s = get_double_array(src, v, key);
    if (s.size() != dim) {
        src.fail(key, "state needs exactly " + std::to_string(dim) + " component(s), got "
                          + std::to_string(s.size()));
    }
    return s;
}

[[nodiscard]] Scenario parse_scenario(const ConfigSource& src, const json& j, Mode mode)
{
    if (!j.is_object()) {
        throw ConfigError(src.path + ": top-level JSON value must be an object");
    }
    const std::string schema = get_string(src, j, "schema");
    if (schema != "cklh-scenario/1") {
        src.fail("schema", "unsupported schema '" + schema + "' (expected \"cklh-scenario/1\")");
    }

    std::vector<std::string> top = {"schema", "system", "kappas", "params",
                                    "coefficients", "time", "tolerances"};
    if (mode == Mode::Simulate) {
        top.push_back("initial_states");
        top.push_back("outputs");
    } else {
        top.push_back("particulars");
        top.push_back("mu");
        top.push_back("hidden");
    }
    check_allowed_keys(src, j, top);

    Scenario sc;
    sc.system = get_string(src, j, "system");
    const auto& reg = system_registry();
    const auto reg_it = std::find_if(reg.begin(), reg.end(),
                                     [&sc](const auto& p) { return p.first == sc.system; });
    if (reg_it == reg.end()) {
        std::string names;
        for (const auto& p : reg) {
            names += (names.empty() ? "" : "|") + p.first;
        }
        src.fail("system", "unknown system '" + sc.system + "' (" + names + ")");
    }
    sc.traits = reg_it->second;

    // Curvature labels: a bare number is accepted for one-label systems.
    const json* kv = find_member(j, "kappas");
    if (kv == nullptr) {
        src.fail("kappas", "required curvature label(s) missing");
    }
    sc.kappas = kv->is_number() ? std::vector<double>{kv->get<double>()}
                                : get_double_array(src, *kv, "kappas");
    if (static_cast<int>(sc.kappas.size()) != sc.traits.kappa_arity) {
        src.fail("kappas", "system '" + sc.system + "' takes "
                               + std::to_string(sc.traits.kappa_arity)
                               + " curvature label(s), got " + std::to_string(sc.kappas.size()));
    }

    // Model parameters.
    const json* params = find_member(j, "params");
    if (sc.traits.needs_lambda) {
        if (params == nullptr || !params->is_object()) {
            src.fail("params", "system '" + sc.system + "' needs params.lambda");
        }
        check_allowed_keys(src, *params, {"lambda"});
        sc.lambda = get_double(src, *params, "lambda");
        if (sc.lambda == 0.0) {
            src.fail("lambda", "lambda must be nonzero");
        }
    } else if (params != nullptr && !(params->is_object() && params->empty())) {
        src.fail("params", "system '" + sc.system + "' takes no parameters");
    }

    // Coefficients, aligned with the per-system key list; missing keys are
    // the zero coefficient.
    sc.coeffs.assign(sc.traits.coeff_keys.size(), cklh::Coefficient{});
    if (const json* cs = find_member(j, "coefficients"); cs != nullptr) {
        if (!cs->is_object()) {
            src.fail("coefficients", "expected an object");
        }
        check_allowed_keys(src, *cs, sc.traits.coeff_keys);
        for (std::size_t i = 0; i < sc.traits.coeff_keys.size(); ++i) {
            const std::string& key = sc.traits.coeff_keys[i];
            if (const json* c = find_member(*cs, key); c != nullptr) {
                sc.coeffs[i] = parse_coefficient(src, *c, key);
            }
        }
    }

    // Time window and output sampling.
    if (const json* tw = find_member(j, "time"); tw != nullptr) {
        if (!tw->is_object()) {
            src.fail("time", "expected an object");
        }
        check_allowed_keys(src, *tw, {"start", "end", "samples"});
        sc.t_start = get_double(src, *tw, "start", 0.0);
        sc.t_end = get_double(src, *tw, "end", 5.0);
        sc.samples = get_int(src, *tw, "samples", 201, 2, 1000001);
    }
    if (!(sc.t_end > sc.t_start)) {
        src.fail("time", "the window needs end > start");
    }

    // Integration tolerances.
    if (const json* tol = find_member(j, "tolerances"); tol != nullptr) {
        if (!tol->is_object()) {
            src.fail("tolerances", "expected an object");
        }
        check_allowed_keys(src, *tol, {"rtol", "atol", "superpose"});
        sc.rtol = get_double(src, *tol, "rtol", 1e-10);
        sc.atol = get_double(src, *tol, "atol", 1e-12);
        sc.superpose_tol = get_double(src, *tol, "superpose", 1e-6);
        if (!(sc.rtol > 0.0) || !(sc.atol > 0.0) || !(sc.superpose_tol > 0.0)) {
            src.fail("tolerances", "tolerances must be positive");
        }
    }

    if (mode == Mode::Simulate) {
        const json* is = find_member(j, "initial_states");
        if (is == nullptr || !is->is_array() || is->empty() || is->size() > 3) {
            src.fail("initial_states", "expected an array of 1 to 3 states");
        }
        for (const json& s : *is) {
            sc.initial_states.push_back(parse_state(src, s, "initial_states", sc.traits.dim));
        }
        if (const json* outs = find_member(j, "outputs"); outs != nullptr) {
            if (!outs->is_array()) {
                src.fail("outputs", "expected an array of output names");
            }
            sc.want_csv = sc.want_manifest = sc.want_svg = false;
            for (const json& o : *outs) {
                const std::string name = o.is_string() ? o.get<std::string>() : std::string();
                if (name == "csv") {
                    sc.want_csv = true;
                } else if (name == "manifest") {
                    sc.want_manifest = true;
                } else if (name == "svg") {
                    sc.want_svg = true;
                } else {
                    src.fail("outputs", "unknown output '" + name + "' (csv|manifest|svg)");
                }
            }
        }
    } else {
        const std::size_t need = (sc.system == "riccati_1d") ? 3 : 2;
        const json* ps = find_member(j, "particulars");
        if (ps == nullptr || !ps->is_array() || ps->size() != need) {
            src.fail("particulars", "system '" + sc.system + "' needs exactly "
                                        + std::to_string(need) + " particular solutions");
        }
        for (const json& s : *ps) {
            sc.particulars.push_back(parse_state(src, s, "particulars", sc.traits.dim));
        }
        const json* hv = find_member(j, "hidden");
        const json* mv = find_member(j, "mu");
        if ((hv == nullptr) == (mv == nullptr)) {
            src.fail("particulars",
                     "give exactly one of 'hidden' (a reference state) or 'mu' (constants)");
        }
        if (hv != nullptr) {
            sc.hidden = parse_state(src, *hv, "hidden", sc.traits.dim);
        } else {
            const std::size_t n_mu = (sc.system == "riccati_1d") ? 1 : 2;
            sc.mu = get_double_array(src, *mv, "mu");
            if (sc.mu.size() != n_mu) {
                src.fail("mu", "system '" + sc.system + "' takes " + std::to_string(n_mu)
                                   + " superposition constant(s)");
            }
        }
    }
    return sc;
}

// ---------------------------------------------------------------------------
// system construction and state validation
// ---------------------------------------------------------------------------

[[nodiscard]] cklh::CoefficientSet as_set(const Scenario& sc)
{
    return {sc.coeffs[0], sc.coeffs[1], sc.coeffs[2]};
}

[[nodiscard]] cklh::ModelParams model_params(const Scenario& sc)
{
    if (sc.system == "ks_neg") {
        return cklh::ModelParams::kummer_schwarz(cklh::ModelClass::NegC, sc.lambda);
    }
    if (sc.system == "ks_pos") {
        return cklh::ModelParams::kummer_schwarz(cklh::ModelClass::PosC, sc.lambda);
    }
    if (sc.system == "ermakov_neg") {
        return cklh::ModelParams::ermakov(cklh::ModelClass::NegC, sc.lambda);
    }
    return cklh::ModelParams::ermakov(cklh::ModelClass::PosC, sc.lambda);
}

[[nodiscard]] cklh::KappaSignature signature(const Scenario& sc)
{
    if (sc.kappas.size() == 2) {
        return {sc.kappas[0], sc.kappas[1]};
    }
    return {sc.kappas[0], 0.0};
}

/// The integrable right-hand side plus the planar admissibility predicate
/// (null when the system has no domain restriction worth enforcing).
struct BuiltSystem {
    cklh::SystemRHS rhs;
    std::function<bool(double, double)> plane_ok;
};

[[nodiscard]] BuiltSystem build_system(const Scenario& sc)
{
    using namespace cklh;
    if (sc.system == "class_i4") {
        return {i4_system(sc.kappas[0], as_set(sc)), nullptr};
    }
    if (sc.system == "class_p2") {
        return {p2_system(signature(sc), as_set(sc)), nullptr};
    }
    if (sc.system == "riccati_1d") {
        const double kappa = sc.kappas[0];
        const CoefficientSet set = as_set(sc);
        SystemRHS rhs = [kappa, set](double t, const StateVector& s, StateVector& ds) {
            const double b1 = set.b1(t), b2 = set.b2(t), b3 = set.b3(t);
            for (std::size_t i = 0; i < s.size(); ++i) {
                ds[i] = b1 + b2 * sk(kappa, s[i]) + 2.0 * b3 * vk(kappa, s[i]);
            }
        };
        return {std::move(rhs), nullptr};
    }
    if (sc.system == "sc_riccati") {
        return {sc_riccati_system(sc.kappas[0], as_set(sc)),
                sc_riccati_bundle(sc.kappas[0]).change.source_ok};
    }
    if (sc.system == "diffusion") {
        return {diffusion_system(sc.kappas[0], sc.coeffs[0], sc.coeffs[1], sc.coeffs[2]),
                diffusion_bundle(sc.kappas[0]).change.source_ok};
    }
    const ModelParams params = model_params(sc);
    const KappaSignature k = signature(sc);
    if (sc.system == "ks_neg") {
        return {ks_system(ModelClass::NegC, k, params, sc.coeffs[0]),
                ks_neg_bundle(k.kappa1, params).change.source_ok};
    }
    if (sc.system == "ks_pos") {
        return {ks_system(ModelClass::PosC, k, params, sc.coeffs[0]),
                ks_pos_bundle(k, params).change.source_ok};
    }
    if (sc.system == "ermakov_neg") {
        return {ermakov_system(ModelClass::NegC, k, params, sc.coeffs[0]),
                ermakov_neg_bundle(k.kappa1, params).change.source_ok};
    }
    return {ermakov_system(ModelClass::PosC, k, params, sc.coeffs[0]),
            ermakov_pos_bundle(k, params).change.source_ok};
}

/// Reject initial data that sits on a structural singularity of the system.
void validate_state(const ConfigSource& src, const Scenario& sc, const BuiltSystem& sys,
                    const cklh::StateVector& s, const std::string& key, std::size_t ordinal)
{
    const std::string who = "state #" + std::to_string(ordinal + 1);
    if (sc.system == "class_i4") {
        if (std::fabs(s[0] - s[1]) < 1e-12) {
            src.fail(key, who
                              + ": class_i4 requires x != y (the symplectic structure "
                                "degenerates on the diagonal x = y)");
        }
        return;
    }
    if (sc.system == "class_p2") {
        if (std::fabs(cklh::sk(signature(sc).k12(), s[1])) < 1e-12) {
            src.fail(key, who
                              + ": class_p2 requires S(kappa1*kappa2, y) != 0 (the line y = 0 "
                                "and its periodic images are singular)");
        }
        return;
    }
    if (sys.plane_ok && !sys.plane_ok(s[0], s[1])) {
        src.fail(key, who + ": outside the admissible domain of system '" + sc.system + "'");
    }
}

/// Convert mid-step domain violations of the library (thrown as exceptions)
/// into non-finite derivatives, so the integrator backs off and truncates
/// instead of crashing.
[[nodiscard]] cklh::SystemRHS guarded(cklh::SystemRHS inner)
{
    return [inner = std::move(inner)](double t, const cklh::StateVector& s,
                                      cklh::StateVector& ds) {
        try {
            inner(t, s, ds);
        } catch (const cklh::DomainError&) {
            std::fill(ds.begin(), ds.end(), std::numeric_limits<double>::quiet_NaN());
        }
    };
}

[[nodiscard]] cklh::IntegrateOptions integrate_options(const Scenario& sc,
                                                       const BuiltSystem& sys)
{
    cklh::IntegrateOptions io;
    io.rtol = sc.rtol;
    io.atol = sc.atol;
    if (sys.plane_ok) {
        const auto ok = sys.plane_ok;
        io.domain_ok = [ok](double, const cklh::StateVector& s) { return ok(s[0], s[1]); };
    }
    return io;
}

// ---------------------------------------------------------------------------
// CSV / SVG emission
// ---------------------------------------------------------------------------

using SampleRows = std::vector<std::pair<double, cklh::StateVector>>;

[[nodiscard]] SampleRows sampled_rows(const cklh::Trajectory& tr, int samples)
{
    if (!tr.segments.empty()) {
        return tr.sample_grid(samples);
    }
    SampleRows rows; // no dense output (immediate truncation): raw accepted steps
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        rows.emplace_back(tr.times[i], tr.states[i]);
    }
    return rows;
}

[[nodiscard]] std::string csv_from_rows(const std::vector<std::string>& names,
                                        const SampleRows& rows)
{
    std::string out = "t";
    for (const std::string& n : names) {
        out += "," + n;
    }
    out += "\n";
    for (const auto& [t, s] : rows) {
        out += fmt17(t);
        for (double v : s) {
            out += "," + fmt17(v);
        }
        out += "\n";
    }
    return out;
}

/// Minimal self-contained line plot: one polyline per state component over t.
[[nodiscard]] std::string svg_from_rows(const std::vector<std::string>& names,
                                        const SampleRows& rows)
{
    const double W = 720, H = 420, ml = 64, mr = 16, mt = 16, mb = 44;
    double t_lo = 0, t_hi = 1, v_lo = 0, v_hi = 1;
    if (!rows.empty()) {
        t_lo = rows.front().first;
        t_hi = rows.back().first;
        v_lo = std::numeric_limits<double>::infinity();
        v_hi = -v_lo;
        for (const auto& [t, s] : rows) {
            for (double v : s) {
                v_lo = std::min(v_lo, v);
                v_hi = std::max(v_hi, v);
            }
        }
    }
    if (!(t_hi > t_lo)) {
        t_hi = t_lo + 1.0;
    }
    if (!(v_hi > v_lo)) {
        v_hi = v_lo + 1.0;
        v_lo -= 1.0;
    }
    const auto px = [&](double t) { return ml + (W - ml - mr) * (t - t_lo) / (t_hi - t_lo); };
    const auto py = [&](double v) { return H - mb - (H - mt - mb) * (v - v_lo) / (v_hi - v_lo); };
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c"};

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"420\" "
                      "viewBox=\"0 0 720 420\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"420\" fill=\"white\"/>\n";
    svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(W - ml - mr)
           + "\" height=\"" + num(H - mt - mb) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (std::size_t c = 0; c < names.size(); ++c) {
        std::string pts;
        for (const auto& [t, s] : rows) {
            if (!std::isfinite(s[c])) {
                continue;
            }
            pts += num(px(t)) + "," + num(py(s[c])) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(palette[c % 3])
               + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        svg += "<text x=\"" + num(ml + 10 + 90 * static_cast<double>(c)) + "\" y=\""
               + num(mt + 16) + "\" fill=\"" + palette[c % 3] + "\" font-size=\"13\">"
               + names[c] + "</text>\n";
    }
    svg += "<text x=\"" + num(ml) + "\" y=\"" + num(H - mb + 18)
           + "\" font-size=\"12\">t = " + num(t_lo) + "</text>\n";
    svg += "<text x=\"" + num(W - mr - 90) + "\" y=\"" + num(H - mb + 18)
           + "\" font-size=\"12\">t = " + num(t_hi) + "</text>\n";
    svg += "<text x=\"4\" y=\"" + num(py(v_lo)) + "\" font-size=\"12\">" + num(v_lo)
           + "</text>\n";
    svg += "<text x=\"4\" y=\"" + num(py(v_hi) + 10) + "\" font-size=\"12\">" + num(v_hi)
           + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& config_path, const std::string& out_dir, bool svg_flag)
{
    const ConfigSource src = read_source(config_path);
    const json config = parse_json(src);
    Scenario sc = parse_scenario(src, config, Mode::Simulate);
    if (svg_flag) {
        sc.want_svg = true;
    }
    const BuiltSystem sys = build_system(sc);
    for (std::size_t i = 0; i < sc.initial_states.size(); ++i) {
        validate_state(src, sc, sys, sc.initial_states[i], "initial_states", i);
    }

    fs::create_directories(out_dir);
    const cklh::SystemRHS rhs = guarded(sys.rhs);
    const cklh::IntegrateOptions io = integrate_options(sc, sys);

    json manifest;
    manifest["schema"] = "cklh-run/1";
    manifest["command"] = "simulate";
    manifest["config"] = config;
    manifest["trajectories"] = json::array();

    for (std::size_t i = 0; i < sc.initial_states.size(); ++i) {
        const cklh::Trajectory tr =
            cklh::integrate(rhs, sc.initial_states[i], sc.t_start, sc.t_end, io);
        const SampleRows rows = sampled_rows(tr, sc.samples);
        const std::string stem = "trajectory_" + std::to_string(i);

        json rec;
        rec["status"] = status_name(tr.status);
        rec["blow_up"] = tr.status == cklh::TrajectoryStatus::BlowUp;
        rec["domain_exit"] = tr.status == cklh::TrajectoryStatus::DomainExit;
        rec["steps"] = tr.steps;
        rec["rejected"] = tr.rejected;
        rec["max_error_estimate"] = tr.max_error_estimate;
        rec["t_begin"] = tr.t_begin();
        rec["t_end"] = tr.t_end();
        rec["rows"] = rows.size();
        if (sc.want_csv) {
            write_file(fs::path(out_dir) / (stem + ".csv"),
                       csv_from_rows(sc.traits.state_names, rows));
            rec["file"] = stem + ".csv";
        }
        if (sc.want_svg) {
            write_file(fs::path(out_dir) / (stem + ".svg"),
                       svg_from_rows(sc.traits.state_names, rows));
            rec["svg"] = stem + ".svg";
        }
        manifest["trajectories"].push_back(rec);

        std::cout << stem << ": " << status_name(tr.status) << ", t in [" << fmt17(tr.t_begin())
                  << ", " << fmt17(tr.t_end()) << "], " << tr.steps << " steps ("
                  << tr.rejected << " rejected), " << rows.size() << " rows\n";
    }
    if (sc.want_manifest) {
        write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
        std::cout << "wrote " << (fs::path(out_dir) / "manifest.json").string() << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const std::string& suite, std::uint64_t seed, int samples,
               const std::string& out_dir)
{
    const std::vector<std::string> names = cklh::verify_suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::string list;
        for (const std::string& n : names) {
            list += (list.empty() ? "" : "|") + n;
        }
        throw ConfigError("unknown verification suite '" + suite + "' (" + list + ")");
    }
    cklh::VerifyOptions opt;
    opt.seed = seed;
    opt.samples = samples;
    const std::vector<cklh::CheckResult> results = cklh::run_suite(suite, opt);

    json report;
    report["schema"] = "cklh-verify/1";
    report["suite"] = suite;
    report["seed"] = seed;
    report["samples"] = samples;
    report["checks"] = json::array();
    int passed = 0;
    for (const cklh::CheckResult& r : results) {
        json c;
        c["name"] = r.name;
        c["samples"] = r.samples;
        c["residual"] = r.residual;
        c["threshold"] = r.threshold;
        c["pass"] = r.pass;
        c["note"] = r.note;
        report["checks"].push_back(c);
        passed += r.pass ? 1 : 0;
        std::printf("[%s] %-44s residual=%-12.3e threshold=%-8.0e%s%s\n",
                    r.pass ? "PASS" : "FAIL", r.name.c_str(), r.residual, r.threshold,
                    r.note.empty() ? "" : "  ", r.note.c_str());
    }
    const bool all = passed == static_cast<int>(results.size());
    report["passed"] = passed;
    report["failed"] = static_cast<int>(results.size()) - passed;
    report["pass"] = all;

    fs::create_directories(out_dir);
    const fs::path out = fs::path(out_dir) / ("verify_" + suite + ".json");
    write_file(out, report.dump(2) + "\n");
    std::cout << "suite " << suite << ": " << passed << "/" << results.size()
              << " checks passed; report " << out.string() << "\n";
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// superpose
// ---------------------------------------------------------------------------

/// Branch-resolved reconstruction candidates at one time sample.
[[nodiscard]] std::vector<cklh::StateVector>
reconstruction_candidates(const Scenario& sc, const std::vector<cklh::StateVector>& parts,
                          const std::vector<double>& mu)
{
    using namespace cklh;
    std::vector<StateVector> out;
    if (sc.system == "class_i4") {
        for (Branch br : {Branch::Plus, Branch::Minus}) {
            try {
                const I4State s = i4_superpose(sc.kappas[0], {parts[0][0], parts[0][1]},
                                               {parts[1][0], parts[1][1]}, mu[0], mu[1], br);
                out.push_back({s.x, s.y});
            } catch (const DomainError&) {
            }
        }
        return out;
    }
    if (sc.system == "riccati_1d") {
        try {
            out.push_back({riccati_superpose(sc.kappas[0], parts[0][0], parts[1][0],
                                             parts[2][0], mu[0])});
        } catch (const DomainError&) {
        }
        return out;
    }
    // class_p2, one curvature label zero.
    if (sc.kappas[0] == 0.0) {
        for (Branch by : {Branch::Plus, Branch::Minus}) {
            for (Branch bx : {Branch::Plus, Branch::Minus}) {
                try {
                    const P2State s =
                        p2_superpose_flat(sc.kappas[1], {parts[0][0], parts[0][1]},
                                          {parts[1][0], parts[1][1]}, mu[0], mu[1], {by, bx});
                    out.push_back({s.x, s.y});
                } catch (const DomainError&) {
                }
            }
        }
        return out;
    }
    for (Branch br : {Branch::Plus, Branch::Minus}) {
        try {
            const P2State s = p2_superpose_nonrel(sc.kappas[0], {parts[0][0], parts[0][1]},
                                                  {parts[1][0], parts[1][1]}, mu[0], mu[1], br);
            out.push_back({s.x, s.y});
        } catch (const DomainError&) {
        }
    }
    return out;
}

/// Superposition constants from a hidden reference state at t_start.
[[nodiscard]] std::vector<double> constants_from_hidden(const ConfigSource& src,
                                                        const Scenario& sc)
{
    using namespace cklh;
    const StateVector& h = *sc.hidden;
    try {
        if (sc.system == "class_i4") {
            const I4State s1{h[0], h[1]};
            return {-i4_F2(sc.kappas[0], s1, {sc.particulars[0][0], sc.particulars[0][1]}),
                    -i4_F2(sc.kappas[0], s1, {sc.particulars[1][0], sc.particulars[1][1]})};
        }
        if (sc.system == "class_p2") {
            const KappaSignature k = signature(sc);
            const P2State s1{h[0], h[1]};
            return {p2_F2(k, s1, {sc.particulars[0][0], sc.particulars[0][1]}),
                    p2_F2(k, s1, {sc.particulars[1][0], sc.particulars[1][1]})};
        }
        const double kappa = sc.kappas[0];
        const auto half_tan = [kappa](double x) { return tk(kappa, 0.5 * x); };
        const double T0 = half_tan(h[0]);
        const double T1 = half_tan(sc.particulars[0][0]);
        const double T2 = half_tan(sc.particulars[1][0]);
        const double T3 = half_tan(sc.particulars[2][0]);
        const double denom = (T2 - T1) * (T3 - T0);
        if (std::fabs(denom) < 1e-300) {
            src.fail("hidden", "degenerate configuration: the cross-ratio denominator vanishes");
        }
        return {((T3 - T2) * (T0 - T1)) / denom};
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        src.fail("hidden", std::string("cannot compute superposition constants: ") + e.what());
    }
}

int cmd_superpose(const std::string& config_path, const std::string& out_dir, bool svg_flag)
{
    using namespace cklh;
    const ConfigSource src = read_source(config_path);
    const json config = parse_json(src);
    Scenario sc = parse_scenario(src, config, Mode::Superpose);
    if (svg_flag) {
        sc.want_svg = true;
    }

    if (sc.system != "class_i4" && sc.system != "class_p2" && sc.system != "riccati_1d") {
        src.fail("system", "superpose supports class_i4, riccati_1d, and class_p2 "
                           "(with kappa1 = 0 or kappa2 = 0)");
    }
    if (sc.system == "class_p2" && sc.kappas[0] != 0.0 && sc.kappas[1] != 0.0) {
        src.fail("kappas", "the closed-form class_p2 rules cover kappa1 = 0 (flat family) or "
                           "kappa2 = 0 (non-relativistic family)");
    }
    const BuiltSystem sys = build_system(sc);
    for (std::size_t i = 0; i < sc.particulars.size(); ++i) {
        validate_state(src, sc, sys, sc.particulars[i], "particulars", i);
    }
    for (std::size_t i = 0; i < sc.particulars.size(); ++i) {
        for (std::size_t l = i + 1; l < sc.particulars.size(); ++l) {
            double gap = 0.0;
            for (std::size_t d = 0; d < sc.traits.dim; ++d) {
                gap = std::max(gap, std::fabs(sc.particulars[i][d] - sc.particulars[l][d]));
            }
            if (gap < 1e-9) {
                src.fail("particulars", "particular solutions #" + std::to_string(i + 1)
                                            + " and #" + std::to_string(l + 1)
                                            + " coincide; the rule degenerates");
            }
        }
    }
    if (sc.hidden) {
        validate_state(src, sc, sys, *sc.hidden, "hidden", 0);
    }

    const std::vector<double> mu = sc.hidden ? constants_from_hidden(src, sc) : sc.mu;

    // Integrate the particular solutions (and the hidden reference).
    const SystemRHS rhs = guarded(sys.rhs);
    const IntegrateOptions io = integrate_options(sc, sys);
    std::vector<Trajectory> part_trajs;
    for (const StateVector& s : sc.particulars) {
        part_trajs.push_back(integrate(rhs, s, sc.t_start, sc.t_end, io));
    }
    std::optional<Trajectory> hidden_traj;
    if (sc.hidden) {
        hidden_traj = integrate(rhs, *sc.hidden, sc.t_start, sc.t_end, io);
    }

    double t_hi = sc.t_end;
    for (const Trajectory& tr : part_trajs) {
        if (tr.segments.empty()) {
            throw ConfigError("a particular solution could not leave its initial point "
                              "(immediate blow-up or domain exit)");
        }
        t_hi = std::min(t_hi, tr.t_end());
    }
    if (hidden_traj) {
        t_hi = std::min(t_hi, hidden_traj->t_end());
    }
    const bool truncated = t_hi < sc.t_end - 1e-12;

    // Walk the output grid, tracking the branch nearest to the previous
    // accepted reconstruction; samples with no admissible branch are gaps.
    SampleRows rows;
    std::vector<double> deviations;
    std::vector<std::array<double, 2>> gap_windows;
    int gap_samples = 0;
    double max_dev = 0.0;
    bool have_prev = false;
    StateVector prev;
    if (sc.hidden) {
        prev = *sc.hidden;
        have_prev = true;
    }
    bool in_gap = false;
    double gap_start = sc.t_start;
    double last_gap_t = sc.t_start;
    for (int i = 0; i < sc.samples; ++i) {
        const double t =
            sc.t_start + (t_hi - sc.t_start) * static_cast<double>(i) / (sc.samples - 1);
        std::vector<StateVector> parts;
        parts.reserve(part_trajs.size());
        for (const Trajectory& tr : part_trajs) {
            parts.push_back(tr.sample(t));
        }
        const std::vector<StateVector> cand = reconstruction_candidates(sc, parts, mu);
        if (cand.empty()) {
            ++gap_samples;
            if (!in_gap) {
                in_gap = true;
                gap_start = t;
            }
            last_gap_t = t;
            continue;
        }
        if (in_gap) {
            gap_windows.push_back({gap_start, last_gap_t});
            in_gap = false;
        }
        StateVector best = cand.front();
        if (have_prev) {
            double best_d = std::numeric_limits<double>::infinity();
            for (const StateVector& c : cand) {
                double d = 0.0;
                for (std::size_t j = 0; j < c.size(); ++j) {
                    d = std::max(d, std::fabs(c[j] - prev[j]));
                }
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
        }
        prev = best;
        have_prev = true;
        if (hidden_traj) {
            const StateVector ref = hidden_traj->sample(t);
            double dev = 0.0;
            for (std::size_t j = 0; j < ref.size(); ++j) {
                dev = std::max(dev, std::fabs(best[j] - ref[j]));
            }
            max_dev = std::max(max_dev, dev);
            deviations.push_back(dev);
            StateVector row = best;
            row.insert(row.end(), ref.begin(), ref.end());
            row.push_back(dev);
            rows.emplace_back(t, row);
        } else {
            rows.emplace_back(t, best);
        }
    }
    if (in_gap) {
        gap_windows.push_back({gap_start, last_gap_t});
    }

    // Emit the reconstruction CSV (+ optional SVG) and the JSON report.
    fs::create_directories(out_dir);
    std::vector<std::string> cols = sc.traits.state_names;
    if (hidden_traj) {
        for (const std::string& n : sc.traits.state_names) {
            cols.push_back("ref_" + n);
        }
        cols.push_back("deviation");
    }
    write_file(fs::path(out_dir) / "reconstruction.csv", csv_from_rows(cols, rows));
    if (sc.want_svg) {
        write_file(fs::path(out_dir) / "reconstruction.svg", svg_from_rows(cols, rows));
    }

    json report;
    report["schema"] = "cklh-superpose/1";
    report["command"] = "superpose";
    report["config"] = config;
    report["mu"] = mu;
    report["window"] = {sc.t_start, t_hi};
    report["window_truncated"] = truncated;
    report["samples"] = sc.samples;
    report["reconstructed"] = rows.size();
    report["gap_samples"] = gap_samples;
    report["gaps"] = json::array();
    for (const auto& w : gap_windows) {
        report["gaps"].push_back({{"t_first", w[0]}, {"t_last", w[1]}});
    }
    report["csv"] = "reconstruction.csv";
    bool pass = true;
    if (hidden_traj) {
        report["max_deviation"] = max_dev;
        report["tolerance"] = sc.superpose_tol;
        pass = !rows.empty() && max_dev <= sc.superpose_tol;
        report["pass"] = pass;
    }
    write_file(fs::path(out_dir) / "superpose.json", report.dump(2) + "\n");

    std::cout << "reconstructed " << rows.size() << "/" << sc.samples << " samples";
    if (gap_samples > 0) {
        std::cout << " (" << gap_samples << " gap samples in " << gap_windows.size()
                  << " window(s): no admissible branch)";
    }
    std::cout << "\n";
    if (truncated) {
        std::cout << "window truncated to [" << fmt17(sc.t_start) << ", " << fmt17(t_hi)
                  << "]: a trajectory left its domain\n";
    }
    if (hidden_traj) {
        std::cout << "max deviation vs integrated reference: " << fmt17(max_dev)
                  << (pass ? " <= " : " > ") << fmt17(sc.superpose_tol) << " => "
                  << (pass ? "PASS" : "FAIL") << "\n";
    }
    std::cout << "wrote " << (fs::path(out_dir) / "superpose.json").string() << "\n";
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

int cmd_table(const std::string& which, double x, double y, const std::string& out_dir)
{
    static const char* slot_names[10] = {"X1.x", "X1.y", "X2.x", "X2.y", "X3.x",
                                         "X3.y", "h1",   "h2",   "h3",   "W"};
    std::vector<cklh::TableRow> rows;
    try {
        rows = cklh::table_rows(which);
    } catch (const cklh::DomainError& e) {
        throw ConfigError(e.what());
    }

    json report;
    report["schema"] = "cklh-table/1";
    report["table"] = which;
    report["point"] = {x, y};
    report["rows"] = json::array();

    int evaluated = 0, skipped = 0, mismatched = 0;
    std::printf("%s at point (%s, %s)\n", which.c_str(), fmt17(x).c_str(), fmt17(y).c_str());
    for (const cklh::TableRow& row : rows) {
        const cklh::TableEvaluation ev = cklh::evaluate_row(row, x, y);
        json jr;
        jr["label"] = ev.label;
        jr["kappas"] = {row.k.kappa1, row.k.kappa2};
        jr["skipped"] = ev.skipped;
        jr["note"] = ev.note;
        if (ev.skipped) {
            ++skipped;
            std::printf("\nrow %-28s SKIPPED: %s\n", ev.label.c_str(), ev.note.c_str());
            report["rows"].push_back(jr);
            continue;
        }
        ++evaluated;
        if (!ev.pass()) {
            ++mismatched;
        }
        jr["max_mismatch"] = ev.max_mismatch;
        jr["pass"] = ev.pass();
        jr["slots"] = json::array();
        std::printf("\nrow %-28s kappa=(%s, %s)\n", ev.label.c_str(),
                    fmt17(row.k.kappa1).c_str(), fmt17(row.k.kappa2).c_str());
        std::printf("  %-5s %-25s %-25s %s\n", "slot", "quoted", "general", "|diff|");
        for (int s = 0; s < 10; ++s) {
            const auto idx = static_cast<std::size_t>(s);
            std::printf("  %-5s %-25.17g %-25.17g %.2e\n", slot_names[idx], ev.quoted[idx],
                        ev.general[idx], std::fabs(ev.quoted[idx] - ev.general[idx]));
            json slot;
            slot["name"] = slot_names[idx];
            slot["quoted"] = ev.quoted[idx];
            slot["general"] = ev.general[idx];
            jr["slots"].push_back(slot);
        }
        std::printf("  agreement %.3e %s %.0e => %s\n", ev.max_mismatch,
                    ev.pass() ? "<=" : ">", cklh::kTableAgreementTolerance,
                    ev.pass() ? "PASS" : "FAIL");
        report["rows"].push_back(jr);
    }

    const bool pass = evaluated > 0 && mismatched == 0;
    report["evaluated"] = evaluated;
    report["skipped"] = skipped;
    report["pass"] = pass;
    fs::create_directories(out_dir);
    const fs::path out = fs::path(out_dir) / ("table_" + which + ".json");
    write_file(out, report.dump(2) + "\n");
    std::printf("\n%d row(s) evaluated, %d skipped, %d mismatched; report %s\n", evaluated,
                skipped, mismatched, out.string().c_str());
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const std::string& out_dir)
{
    const std::vector<double> eps = cklh::contraction_epsilons();
    std::string csv = "case,epsilon,distance\n";
    json report;
    report["schema"] = "cklh-sweep/1";
    report["epsilons"] = eps;
    report["cases"] = json::array();
    bool all_pass = true;

    for (const cklh::ContractionCase& c : cklh::contraction_cases()) {
        std::vector<double> dist;
        for (double e : eps) {
            dist.push_back(c.deviation(e));
            csv += c.name + "," + fmt17(e) + "," + fmt17(dist.back()) + "\n";
        }
        const double slope = cklh::detail::loglog_slope(eps, dist);
        const double calibration = 1.5 * dist[0] / eps[0];
        bool linear = true;
        for (std::size_t j = 0; j < eps.size(); ++j) {
            linear = linear && dist[j] <= calibration * eps[j];
        }
        const bool pass = linear && std::fabs(slope - 1.0) <= 0.1;
        all_pass = all_pass && pass;

        json jc;
        jc["name"] = c.name;
        jc["slope"] = slope;
        jc["calibration"] = calibration;
        jc["linear_bound_holds"] = linear;
        jc["pass"] = pass;
        report["cases"].push_back(jc);
        std::printf("[%s] %-26s slope=%.6f (target [0.9, 1.1]), C=%.4g\n",
                    pass ? "PASS" : "FAIL", c.name.c_str(), slope, calibration);
    }
    report["pass"] = all_pass;

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "sweep.csv", csv);
    write_file(fs::path(out_dir) / "sweep.json", report.dump(2) + "\n");
    std::cout << "wrote " << (fs::path(out_dir) / "sweep.csv").string() << " and "
              << (fs::path(out_dir) / "sweep.json").string() << "\n";
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"curved Lie-Hamilton systems: simulate scenarios, verify properties, "
                 "reconstruct solutions by superposition, reproduce reference tables, "
                 "and sweep flat limits"};
    app.require_subcommand(1);
    app.footer("Environment: CKLH_THREADS caps worker parallelism.\n"
               "Exit codes: 0 success / all checks passed, 1 verification failure, "
               "2 config or usage error.");

    std::string config_path;
    std::string out_dir = ".";
    std::string suite;
    std::string which;
    std::uint64_t seed = 1;
    int samples = 100;
    bool svg = false;
    std::vector<double> point = {0.3, 0.7};

    CLI::App* sim = app.add_subcommand(
        "simulate", "Integrate a scenario config; write CSV trajectories and a JSON manifest");
    sim->add_option("--config", config_path, "Scenario JSON (schema cklh-scenario/1)")
        ->required();
    sim->add_option("--out", out_dir, "Output directory (default: current)");
    sim->add_flag("--svg", svg, "Also write a line plot per trajectory");

    CLI::App* ver = app.add_subcommand(
        "verify", "Run one property suite; print per-check lines and write a JSON report");
    ver->add_option("suite", suite,
                    "identities|brackets|poisson|hamiltonian|killing|pushforward|contraction")
        ->required();
    ver->add_option("--seed", seed, "Sampling seed (default 1)");
    ver->add_option("--samples", samples, "Sample points per check (default 100)")
        ->check(CLI::PositiveNumber);
    ver->add_option("--out", out_dir, "Output directory (default: current)");

    CLI::App* sup = app.add_subcommand(
        "superpose",
        "Reconstruct a solution from integrated particular solutions via a superposition rule");
    sup->add_option("--config", config_path, "Scenario JSON (schema cklh-scenario/1)")
        ->required();
    sup->add_option("--out", out_dir, "Output directory (default: current)");
    sup->add_flag("--svg", svg, "Also write a line plot of the reconstruction");

    CLI::App* tab = app.add_subcommand(
        "table", "Evaluate quoted table rows against the general formulas, side by side");
    tab->add_option("which", which, "table1|table2|table3")->required();
    tab->add_option("--point", point, "Evaluation point: two coordinates (default 0.3 0.7)")
        ->expected(2);
    tab->add_option("--out", out_dir, "Output directory (default: current)");

    CLI::App* swp = app.add_subcommand(
        "sweep", "Flat-limit curvature sweep: per-epsilon distances plus fitted slopes");
    swp->add_option("--out", out_dir, "Output directory (default: current)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(config_path, out_dir, svg);
        }
        if (ver->parsed()) {
            return cmd_verify(suite, seed, samples, out_dir);
        }
        if (sup->parsed()) {
            return cmd_superpose(config_path, out_dir, svg);
        }
        if (tab->parsed()) {
            return cmd_table(which, point[0], point[1], out_dir);
        }
        return cmd_sweep(out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cklh::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
