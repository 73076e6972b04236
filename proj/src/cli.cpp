#include "hardy/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hardy/corona.hpp"
#include "hardy/duality.hpp"
#include "hardy/problem_file.hpp"
#include "hardy/solve.hpp"

namespace hardy::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kDefaultRadial = 32;
constexpr int kDefaultAngular = 128;
constexpr double kDefaultRadius = 0.995;
constexpr int kDefaultDegree = 10;
constexpr int kDefaultSamples = 512;

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

Json cjson(Complex z) { return Json::array({z.real(), z.imag()}); }

Json vec_json(const Eigen::VectorXcd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cjson(v(i)));
    return a;
}

Json real_vec_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json mat_json(const Eigen::MatrixXcd& m) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
    return a;
}

Json algebra_json(const AlgebraSpec& algebra) {
    Json j;
    j["name"] = algebra_name(algebra);
    if (const BlaschkeProduct* b = inner_factor(algebra)) {
        Json zeros = Json::array();
        for (const Complex a : b->zeros()) zeros.push_back(cjson(a));
        j["blaschke_zeros"] = std::move(zeros);
        j["blaschke_constant"] = cjson(b->unimodular_constant());
    }
    return j;
}

Json function_json(const VectorAnalyticFunction& f) {
    Json j;
    j["algebra"] = algebra_json(f.algebra());
    j["degree"] = f.degree();
    j["coefficients"] = mat_json(f.coefficients());
    if (f.denominator().size() > 0) j["denominator"] = vec_json(f.denominator());
    return j;
}

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorCode::InvalidInput, "solution certificate: expected a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Eigen::VectorXcd vec_from_json(const Json& j) {
    if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "solution certificate: expected an array");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

VectorAnalyticFunction function_from_json(const Json& j) {
    try {
        const Json& alg = j.at("algebra");
        AlgebraSpec algebra = FullHinf{};
        if (alg.at("name") == "cplusb") {
            const Eigen::VectorXcd zeros = vec_from_json(alg.at("blaschke_zeros"));
            algebra = CplusB{BlaschkeProduct(std::vector<Complex>(zeros.data(), zeros.data() + zeros.size()),
                                             complex_from_json(alg.at("blaschke_constant")))};
        } else if (alg.at("name") != "hinf") {
            throw Error(ErrorCode::InvalidInput, "solution certificate: unknown algebra");
        }
        const int degree = j.at("degree").get<int>();
        const Json& rows = j.at("coefficients");
        if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::InvalidInput, "solution certificate: no coefficients");
        Eigen::MatrixXcd c(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const Eigen::VectorXcd row = vec_from_json(rows[k]);
            if (row.size() != c.cols()) throw Error(ErrorCode::InvalidInput, "solution certificate: ragged coefficients");
            c.row(static_cast<Eigen::Index>(k)) = row.transpose();
        }
        Eigen::VectorXcd den;
        if (j.contains("denominator")) den = vec_from_json(j.at("denominator"));
        return VectorAnalyticFunction(std::move(algebra), degree, std::move(c), std::move(den));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("solution certificate: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string inline_text(const Json& j) {
    if (j.is_number_float()) return format_number(j.get<double>());
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_text(j[i]);
        return s + "]";
    }
    return j.dump();
}

bool is_flat(const Json& j) {
    if (j.is_object()) return false;
    if (j.is_array()) {
        for (const auto& x : j) {
            if (!is_flat(x)) return false;
        }
    }
    return true;
}

void render_text(const Json& j, const std::string& indent, std::string& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        if (is_flat(v)) {
            out += indent + it.key() + ": " + inline_text(v) + "\n";
        } else if (v.is_object()) {
            out += indent + it.key() + ":\n";
            render_text(v, indent + "  ", out);
        } else {
            out += indent + it.key() + ":\n";
            for (const auto& item : v) {
                out += indent + "  -\n";
                if (item.is_object()) {
                    render_text(item, indent + "    ", out);
                } else {
                    out += indent + "    " + inline_text(item) + "\n";
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Problem payloads
// ---------------------------------------------------------------------------

struct Run {
    const ProblemFile& file;
    const Settings& settings;
    Json cert;

    Json& evidence() { return cert["evidence"]; }
    Json& config() { return cert["config"]; }
};

int positive_int(const ProblemFile& f, std::string_view key, std::optional<int> flag, int fallback) {
    if (flag) {
        if (*flag < 1) throw Error(ErrorCode::InvalidInput, "--" + std::string(key) + " must be positive");
        return *flag;
    }
    if (const auto v = f.optional_integer(key)) {
        if (*v < 1 || *v > 1'000'000) f.fail(f.require(key), 0, "'" + std::string(key) + "' must be a positive integer");
        return static_cast<int>(*v);
    }
    return fallback;
}

double resolve_tol(Run& r, double fallback) {
    const double tol = r.settings.tol ? *r.settings.tol : r.file.optional_real("tol").value_or(fallback);
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tolerance must be positive");
    r.config()["tol"] = tol;
    return tol;
}

int resolve_degree(Run& r, std::string_view key = "degree") {
    const ProblemFile& f = r.file;
    int degree = kDefaultDegree;
    if (r.settings.degree) {
        degree = *r.settings.degree;
    } else if (const auto v = f.optional_integer(key)) {
        if (*v < 0 || *v > 1000) f.fail(f.require(key), 0, "degree must lie in [0, 1000]");
        degree = static_cast<int>(*v);
    }
    if (degree < 0) throw Error(ErrorCode::InvalidInput, "--degree must be nonnegative");
    r.config()["degree"] = degree;
    return degree;
}

DiskGrid resolve_grid(Run& r) {
    const ProblemFile& f = r.file;
    const int radial = positive_int(f, "grid_radial", r.settings.grid_radial, kDefaultRadial);
    const int angular = positive_int(f, "grid_angular", r.settings.grid_angular, kDefaultAngular);
    const double radius = r.settings.grid_radius ? *r.settings.grid_radius
                                                 : f.optional_real("grid_radius").value_or(kDefaultRadius);
    r.config()["grid"] = {{"radial", radial}, {"angular", angular}, {"radius", radius}};
    return disk_grid(radial, angular, radius);
}

std::uint64_t resolve_seed(Run& r) {
    std::uint64_t seed = 0;
    if (r.settings.seed) {
        seed = *r.settings.seed;
    } else if (const auto v = r.file.optional_integer("seed")) {
        if (*v < 0) r.file.fail(r.file.require("seed"), 0, "seed must be nonnegative");
        seed = static_cast<std::uint64_t>(*v);
    }
    r.config()["seed"] = seed;
    return seed;
}

FamilyOptions resolve_family(Run& r, double tol) {
    FamilyOptions o;
    o.samples = positive_int(r.file, "samples", r.settings.samples, kDefaultSamples);
    o.seed = resolve_seed(r);
    o.tol = tol;
    r.config()["samples"] = o.samples;
    r.config()["refine_steps"] = o.refine_steps;
    return o;
}

BlaschkeProduct read_blaschke(const ProblemFile& f) {
    const auto& entry = f.require("blaschke_zeros");
    const auto zeros = f.complex_list(entry);
    Complex constant = 1.0;
    if (const auto* c = f.find("blaschke_constant")) {
        const auto v = f.complex_list(*c);
        if (v.size() != 1) f.fail(*c, std::string::npos, "'blaschke_constant' takes one re/im pair");
        constant = v[0];
    }
    try {
        return BlaschkeProduct(zeros, constant);
    } catch (const Error& e) {
        f.fail(entry, std::string::npos, e.what());
    }
}

AlgebraSpec read_algebra(const ProblemFile& f) {
    const std::string name = f.optional_word("algebra").value_or("hinf");
    if (name == "hinf") {
        if (const auto* e = f.find("blaschke_zeros")) f.fail(*e, std::string::npos, "blaschke_zeros requires algebra cplusb");
        return FullHinf{};
    }
    if (name == "cplusb") return CplusB{read_blaschke(f)};
    f.fail(f.require("algebra"), 0, "algebra must be 'hinf' or 'cplusb'");
}

Eigen::VectorXcd to_vector(const std::vector<Complex>& v) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

Eigen::VectorXcd read_points(const ProblemFile& f, const ProblemFile::Entry& e) {
    const auto pts = f.complex_list(e);
    if (pts.empty()) f.fail(e, std::string::npos, "'" + e.key + "' needs at least one point");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(std::abs(pts[i]) < 1.0)) f.fail(e, 2 * i, "point outside the open unit disk");
    }
    return to_vector(pts);
}

TangentialProblem read_tangential(const ProblemFile& f) {
    TangentialProblem p;
    p.algebra = read_algebra(f);
    p.points = read_points(f, f.require("points"));
    const Eigen::Index n = p.points.size();
    const auto& te = f.require("targets");
    p.targets = to_vector(f.complex_list(te));
    if (p.targets.size() != n) f.fail(te, std::string::npos, "'targets' must list one value per point");
    const auto dirs = f.all("direction");
    if (dirs.empty()) {
        p.directions = Eigen::MatrixXcd::Ones(1, n);
    } else {
        if (static_cast<Eigen::Index>(dirs.size()) != n) {
            f.fail(*dirs.back(), std::string::npos, "one 'direction' line is required per point");
        }
        const auto m = static_cast<Eigen::Index>(f.complex_list(*dirs[0]).size());
        if (m < 1) f.fail(*dirs[0], std::string::npos, "direction vectors need at least one component");
        p.directions.resize(m, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto v = f.complex_list(*dirs[static_cast<std::size_t>(j)]);
            if (static_cast<Eigen::Index>(v.size()) != m) {
                f.fail(*dirs[static_cast<std::size_t>(j)], std::string::npos, "direction vectors differ in length");
            }
            if (to_vector(v).norm() == 0.0) f.fail(*dirs[static_cast<std::size_t>(j)], std::string::npos, "direction vector is zero");
            p.directions.col(j) = to_vector(v);
        }
    }
    const auto& ae = f.require("alpha");
    p.alpha = f.real("alpha");
    if (!(p.alpha > 0.0)) f.fail(ae, 0, "alpha must be positive");
    p.validate();
    return p;
}

KernelSpec cyclic_for(const ProblemFile& f, const BlaschkeProduct& b) {
    if (const auto* e = f.find("model_vector")) {
        const auto v = f.complex_list(*e);
        if (static_cast<std::size_t>(v.size()) != b.degree()) {
            f.fail(*e, std::string::npos, "model_vector needs one coefficient per Blaschke zero");
        }
        return KernelSpec::cyclic(b, ModelVector{to_vector(v)});
    }
    Eigen::VectorXcd v = ModelSpaceBasis(b).projection_of_one();
    v.normalize();
    return KernelSpec::cyclic(b, ModelVector{v});
}

KernelSpec kernel_for(const ProblemFile& f, const AlgebraSpec& algebra) {
    if (const BlaschkeProduct* b = inner_factor(algebra)) return cyclic_for(f, *b);
    if (const auto* e = f.find("model_vector")) f.fail(*e, std::string::npos, "model_vector requires algebra cplusb");
    return KernelSpec::szego();
}

Json report_json(const FeasibilityReport& rep) {
    Json j;
    j["verdict"] = to_string(rep.verdict);
    j["min_eig"] = rep.worst_min_eig;
    j["samples_tested"] = rep.samples_tested;
    if (rep.worst_parameter) j["worst_model_vector"] = vec_json(rep.worst_parameter->coefficients);
    if (rep.guarantee_level) j["guarantee_level"] = *rep.guarantee_level;
    j["conditional"] = rep.conditional;
    return j;
}

void echo_problem(Run& r, const TangentialProblem& p) {
    r.config()["algebra"] = algebra_json(p.algebra);
    r.config()["nodes"] = p.nodes();
    r.config()["components"] = p.components();
    r.config()["alpha"] = p.alpha;
}

constexpr std::array<std::string_view, 7> kTangentialKeys = {
    "algebra", "blaschke_zeros", "blaschke_constant", "points", "direction", "targets", "alpha"};

std::vector<std::string_view> keys(std::initializer_list<std::string_view> extra) {
    std::vector<std::string_view> out(kTangentialKeys.begin(), kTangentialKeys.end());
    out.insert(out.end(), extra);
    return out;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_kernel(Run& r) {
    const ProblemFile& f = r.file;
    f.check_keys({"kernel", "blaschke_zeros", "blaschke_constant", "model_vector", "pair"}, {"pair"});
    const std::string name = f.word("kernel");
    std::optional<KernelSpec> kernel;
    if (name == "szego") {
        kernel = KernelSpec::szego();
    } else if (name == "model_space") {
        kernel = KernelSpec::model_space(read_blaschke(f));
    } else if (name == "cyclic") {
        kernel = cyclic_for(f, read_blaschke(f));
    } else {
        f.fail(f.require("kernel"), 0, "kernel must be szego, model_space or cyclic");
    }
    const auto pairs = f.all("pair");
    if (pairs.empty()) f.fail_missing("pair");
    Json values = Json::array();
    for (const auto* e : pairs) {
        const auto zw = f.complex_list(*e);
        if (zw.size() != 2) f.fail(*e, std::string::npos, "'pair' takes two points (z re im, w re im)");
        for (std::size_t i = 0; i < 2; ++i) {
            if (!(std::abs(zw[i]) < 1.0)) f.fail(*e, 2 * i, "point outside the open unit disk");
        }
        values.push_back({{"z", cjson(zw[0])}, {"w", cjson(zw[1])}, {"value", cjson((*kernel)(zw[0], zw[1]))}});
    }
    r.cert["verdict"] = "Evaluated";
    r.evidence()["kernel"] = kernel->tag();
    r.evidence()["values"] = std::move(values);
    return kSuccess;
}

int cmd_pick(Run& r) {
    const ProblemFile& f = r.file;
    f.check_keys(keys({"model_vector", "tol"}), {"direction"});
    const TangentialProblem p = read_tangential(f);
    echo_problem(r, p);
    const double tol = resolve_tol(r, kDefaultPsdTol);
    const KernelSpec kernel = kernel_for(f, p.algebra);
    const PickMatrix q = build_pick_matrix(p, kernel);
    const PsdVerdict v = is_psd(q.matrix, tol);
    r.cert["verdict"] = v.psd ? "PSD" : "NotPSD";
    r.evidence()["kernel"] = q.kernel_tag;
    r.evidence()["min_eig"] = v.min_eig;
    r.evidence()["matrix"] = mat_json(q.matrix);
    return v.psd ? kSuccess : kNegative;
}

int cmd_feasible(Run& r) {
    const ProblemFile& f = r.file;
    f.check_keys(keys({"mode", "model_vector", "similarity_bound", "tol", "samples", "seed"}),
          {"direction"});
    const TangentialProblem p = read_tangential(f);
    echo_problem(r, p);
    const bool cplusb = inner_factor(p.algebra) != nullptr;
    const std::string mode = f.optional_word("mode").value_or(cplusb ? "family" : "single");
    r.config()["mode"] = mode;
    const double tol = resolve_tol(r, kDefaultPsdTol);
    FeasibilityReport rep;
    if (mode == "single") {
        const KernelSpec kernel = kernel_for(f, p.algebra);
        r.evidence()["kernel"] = kernel.tag();
        rep = feasible_single(p, kernel, tol);
    } else if (mode == "family") {
        if (!cplusb) f.fail(f.require("mode"), 0, "mode family requires algebra cplusb");
        rep = feasible_family(p, resolve_family(r, tol));
    } else if (mode == "scaled") {
        if (!cplusb) f.fail(f.require("mode"), 0, "mode scaled requires algebra cplusb");
        const double c = f.real("similarity_bound");
        r.config()["similarity_bound"] = c;
        rep = scaled_single_kernel_check(p, c, tol);
    } else {
        f.fail(f.require("mode"), 0, "mode must be single, family or scaled");
    }
    r.cert["verdict"] = to_string(rep.verdict);
    r.evidence().update(report_json(rep));
    return rep.verdict == Verdict::Feasible ? kSuccess : kNegative;
}

void solution_evidence(Run& r, const VectorAnalyticFunction& fn, const TangentialProblem& p, const DiskGrid& grid) {
    const Eigen::VectorXd res = constraint_residuals(fn, p);
    r.evidence()["solution"] = function_json(fn);
    r.evidence()["residuals"] = real_vec_json(res);
    r.evidence()["max_residual"] = res.maxCoeff();
    r.evidence()["grid_norm"] = fn.grid_norm(grid);
}

int cmd_solve(Run& r) {
    const ProblemFile& f = r.file;
    f.check_keys(keys({"method", "degree", "grid_radial", "grid_angular", "grid_radius", "tol", "level",
                                    "similarity_bound"}),
          {"direction"});
    const TangentialProblem p = read_tangential(f);
    echo_problem(r, p);
    const std::string method = f.optional_word("method").value_or("tangential");
    r.config()["method"] = method;
    if (method == "schur") {
        if (inner_factor(p.algebra) != nullptr || p.components() != 1) {
            f.fail(f.require("method"), 0, "method schur needs algebra hinf and scalar data");
        }
        const DiskGrid grid = resolve_grid(r);
        const Eigen::VectorXcd values = p.targets.cwiseQuotient(p.directions.row(0).transpose().conjugate());
        const VectorAnalyticFunction fn = schur_interpolate(p.points, values, p.alpha);
        r.cert["verdict"] = "Solved";
        solution_evidence(r, fn, p, grid);
        return kSuccess;
    }
    if (method == "witness") {
        const int degree = resolve_degree(r);
        const DiskGrid grid = resolve_grid(r);
        const WitnessConstruction w = witness_interpolant(p, degree);
        r.cert["verdict"] = "Solved";
        solution_evidence(r, w.function, p, grid);
        Json xi = Json::array();
        for (const auto& v : w.class_vectors) xi.push_back(vec_json(v));
        r.evidence()["class_vectors"] = std::move(xi);
        r.evidence()["class_count"] = w.partition.class_count();
        return kSuccess;
    }
    if (method != "tangential") f.fail(f.require("method"), 0, "method must be schur, witness or tangential");

    const int degree = resolve_degree(r);
    const DiskGrid grid = resolve_grid(r);
    const double tol = resolve_tol(r, kSolveTol);
    double level = p.alpha;
    if (const auto c = f.optional_real("similarity_bound")) {
        if (!(*c >= 1.0)) f.fail(f.require("similarity_bound"), 0, "similarity_bound must be at least 1");
        level = p.alpha * *c;
    }
    if (const auto l = f.optional_real("level")) level = *l;
    r.config()["level"] = level;
    try {
        const TangentialSolution ts = tangential_solve(p, degree, grid, level, tol);
        r.cert["verdict"] = ts.meets_level ? "Solved" : "NormAboveLevel";
        solution_evidence(r, ts.function, p, grid);
        r.evidence()["level"] = level;
        r.evidence()["meets_level"] = ts.meets_level;
        r.evidence()["newton_steps"] = ts.iterations;
        return ts.meets_level ? kSuccess : kNegative;
    } catch (const NotConvergedError& e) {
        solution_evidence(r, VectorAnalyticFunction(p.algebra, degree, e.best().coefficients), p, grid);
        r.evidence()["lower_bound"] = e.best().lower_bound;
        throw;
    }
}

VectorAnalyticFunction read_row(const ProblemFile& f, const AlgebraSpec& algebra) {
    const auto& de = f.require("row_degree");
    const long degree = f.integer(de, 0);
    if (degree < 0 || degree > 1000) f.fail(de, 0, "row_degree must lie in [0, 1000]");
    const Eigen::Index nb = basis_size(algebra, static_cast<int>(degree));
    const auto rows = f.all("row");
    if (rows.empty()) f.fail_missing("row");
    Eigen::MatrixXcd c(static_cast<Eigen::Index>(rows.size()), nb);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto v = f.complex_list(*rows[k]);
        if (static_cast<Eigen::Index>(v.size()) != nb) {
            f.fail(*rows[k], std::string::npos, "'row' needs " + std::to_string(nb) + " coefficients");
        }
        c.row(static_cast<Eigen::Index>(k)) = to_vector(v).transpose();
    }
    return VectorAnalyticFunction(algebra, static_cast<int>(degree), std::move(c));
}

int cmd_corona(Run& r) {
    const ProblemFile& f = r.file;
    f.check_keys({"algebra", "blaschke_zeros", "blaschke_constant", "row_degree", "row", "delta", "mode", "point_set",
              "nodes", "degree", "grid_radial", "grid_angular", "grid_radius", "samples", "seed", "tol"},
          {"row", "point_set"});
    const AlgebraSpec algebra = read_algebra(f);
    const VectorAnalyticFunction row = read_row(f, algebra);
    r.config()["algebra"] = algebra_json(algebra);
    r.config()["row"] = function_json(row);
    const std::string mode = f.optional_word("mode").value_or("check");
    r.config()["mode"] = mode;

    const auto& de = f.require("delta");
    double delta = 0.0;
    std::optional<DiskGrid> grid;
    if (de.tokens.size() == 1 && de.tokens[0] == "grid-minimum") {
        grid = resolve_grid(r);
        delta = grid_minimum_delta(row, *grid);
        r.config()["delta_source"] = "grid-minimum";
    } else {
        delta = f.real("delta");
        if (!(delta > 0.0)) f.fail(de, 0, "delta must be positive");
        r.config()["delta_source"] = "file";
    }
    r.config()["delta"] = delta;
    const CoronaProblem cp{row, delta};

    if (mode == "check") {
        const auto sets = f.all("point_set");
        if (sets.empty()) f.fail_missing("point_set");
        std::vector<Eigen::VectorXcd> ys;
        for (const auto* e : sets) ys.push_back(read_points(f, *e));
        const double tol = resolve_tol(r, kDefaultPsdTol);
        FamilyOptions opts;
        opts.tol = tol;
        if (inner_factor(algebra) != nullptr) opts = resolve_family(r, tol);
        const CoronaReport rep = corona_check(cp, ys, opts);
        r.cert["verdict"] = to_string(rep.verdict);
        r.evidence()["sets_tested"] = rep.sets_tested;
        r.evidence()["kernels_tested"] = rep.kernels_tested;
        r.evidence()["min_eig"] = rep.worst_min_eig;
        if (rep.worst_point_set) r.evidence()["worst_point_set"] = vec_json(*rep.worst_point_set);
        if (rep.worst_parameter) r.evidence()["worst_model_vector"] = vec_json(rep.worst_parameter->coefficients);
        return rep.verdict == CoronaVerdict::Passed ? kSuccess : kNegative;
    }
    if (mode != "solve") f.fail(f.require("mode"), 0, "mode must be check or solve");
    const Eigen::VectorXcd nodes = read_points(f, f.require("nodes"));
    const int degree = resolve_degree(r);
    if (!grid) grid = resolve_grid(r);
    const double tol = resolve_tol(r, kSolveTol);
    const CoronaSolution sol = corona_solve(cp, nodes, degree, *grid, tol);
    r.cert["verdict"] = to_string(sol.report.verdict);
    r.evidence()["solution"] = function_json(sol.solution);
    r.evidence()["node_residual"] = sol.report.node_residual;
    r.evidence()["grid_residual"] = sol.report.grid_residual;
    r.evidence()["solution_norm"] = sol.report.solution_norm;
    r.evidence()["slack"] = sol.report.slack;
    return kSuccess;
}

Eigen::MatrixXcd read_operator(const ProblemFile& f, const ProblemFile::Entry& e, Eigen::Index rows, Eigen::Index cols) {
    const auto v = f.complex_list(e);
    if (static_cast<Eigen::Index>(v.size()) != rows * cols) {
        f.fail(e, std::string::npos, "'" + e.key + "' needs rows*cols = " + std::to_string(rows * cols) + " entries");
    }
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v[static_cast<std::size_t>(i * cols + j)];
    }
    return m;
}

int cmd_distance(Run& r) {
    const ProblemFile& f = r.file;
    f.check_keys({"rows", "cols", "target", "subspace", "tensor_rank", "starts", "steps", "seed", "tol"}, {"subspace"});
    TruncatedDistanceProblem p;
    const auto n2 = f.optional_integer("rows");
    const auto n1 = f.optional_integer("cols");
    if (!n2) f.fail_missing("rows");
    if (!n1) f.fail_missing("cols");
    if (*n2 < 1 || *n2 > 64) f.fail(f.require("rows"), 0, "rows must lie in [1, 64]");
    if (*n1 < 1 || *n1 > 64) f.fail(f.require("cols"), 0, "cols must lie in [1, 64]");
    p.target = read_operator(f, f.require("target"), *n2, *n1);
    for (const auto* e : f.all("subspace")) p.subspace.push_back(read_operator(f, *e, *n2, *n1));
    p.tensor_rank = static_cast<int>(f.optional_integer("tensor_rank").value_or(*n1));
    DualOptions dual;
    dual.starts = positive_int(f, "starts", std::nullopt, dual.starts);
    dual.steps = positive_int(f, "steps", std::nullopt, dual.steps);
    dual.seed = resolve_seed(r);
    const double tol = resolve_tol(r, 1e-10);
    r.config()["rows"] = *n2;
    r.config()["cols"] = *n1;
    r.config()["subspace_dimension"] = p.subspace.size();
    r.config()["tensor_rank"] = p.tensor_rank;
    r.config()["starts"] = dual.starts;
    r.config()["steps"] = dual.steps;

    const PrimalResult primal = distance_primal(p, tol);
    const DualResult d = distance_dual(p, tol, dual);
    r.cert["verdict"] = "Computed";
    r.evidence()["primal"] = primal.value;
    r.evidence()["primal_lower_bound"] = primal.lower_bound;
    r.evidence()["dual"] = d.value;
    r.evidence()["gap"] = primal.value - d.value;
    r.evidence()["weak_duality"] = d.value <= primal.value + tol;
    r.evidence()["coefficients"] = vec_json(primal.coefficients);
    r.evidence()["best_start"] = d.best_start;
    return kSuccess;
}

int cmd_verify(Run& r) {
    const ProblemFile& f = r.file;
    f.check_keys(keys({"solution_degree", "solution_row", "solution_denominator", "grid_radial",
                                    "grid_angular", "grid_radius", "samples", "seed", "tol", "residual_tol"}),
          {"direction", "solution_row"});
    const TangentialProblem p = read_tangential(f);
    echo_problem(r, p);
    std::optional<VectorAnalyticFunction> fn;
    if (!r.settings.solution_path.empty()) {
        std::ifstream in(r.settings.solution_path, std::ios::binary);
        if (!in) throw Error(ErrorCode::InvalidInput, "cannot open solution file '" + r.settings.solution_path + "'");
        Json cert;
        try {
            cert = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidInput, std::string("solution file is not JSON: ") + e.what());
        }
        const Json* sol = nullptr;
        if (cert.contains("evidence") && cert["evidence"].contains("solution")) sol = &cert["evidence"]["solution"];
        if (sol == nullptr) throw Error(ErrorCode::InvalidInput, "solution file carries no evidence.solution");
        fn = function_from_json(*sol);
    } else {
        const auto& de = f.require("solution_degree");
        const long degree = f.integer(de, 0);
        if (degree < 0 || degree > 1000) f.fail(de, 0, "solution_degree must lie in [0, 1000]");
        const Eigen::Index nb = basis_size(p.algebra, static_cast<int>(degree));
        const auto rows = f.all("solution_row");
        if (rows.empty()) f.fail_missing("solution_row");
        Eigen::MatrixXcd c(static_cast<Eigen::Index>(rows.size()), nb);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto v = f.complex_list(*rows[k]);
            if (static_cast<Eigen::Index>(v.size()) != nb) {
                f.fail(*rows[k], std::string::npos, "'solution_row' needs " + std::to_string(nb) + " coefficients");
            }
            c.row(static_cast<Eigen::Index>(k)) = to_vector(v).transpose();
        }
        Eigen::VectorXcd den;
        if (const auto* e = f.find("solution_denominator")) den = to_vector(f.complex_list(*e));
        fn.emplace(p.algebra, static_cast<int>(degree), std::move(c), std::move(den));
    }
    if (fn->components() != p.components()) {
        throw Error(ErrorCode::InvalidInput, "solution and directions differ in component count");
    }
    const DiskGrid grid = resolve_grid(r);
    const double tol = resolve_tol(r, 1e-6);
    const double residual_tol = f.optional_real("residual_tol").value_or(1e-8);
    r.config()["residual_tol"] = residual_tol;
    FamilyOptions opts;
    if (inner_factor(p.algebra) != nullptr) opts = resolve_family(r, tol);
    const VerificationReport rep = verify_solution(*fn, p, grid, tol, opts);
    const bool ok = rep.max_residual <= residual_tol;
    r.cert["verdict"] = ok ? "Verified" : "ResidualAboveTolerance";
    r.evidence()["residuals"] = real_vec_json(rep.residuals);
    r.evidence()["max_residual"] = rep.max_residual;
    r.evidence()["grid_norm"] = rep.grid_norm;
    r.evidence()["pick"] = report_json(rep.pick);
    return ok ? kSuccess : kNegative;
}

bool is_input_error(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidInput:
    case ErrorCode::InvalidMatrix:
    case ErrorCode::InvalidRadius:
    case ErrorCode::NotNormalized:
    case ErrorCode::NotLogIntegrable:
    case ErrorCode::KernelMismatch:
    case ErrorCode::DuplicateNodes:
        return true;
    default:
        return false;
    }
}

}  // namespace

int run_command(const std::string& command, const std::string& problem_path, const Settings& settings,
                std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    std::optional<ProblemFile> file;
    try {
        file = ProblemFile::load(problem_path);
        if (file->kind() != command) {
            throw Error(ErrorCode::InvalidInput,
                        problem_path + ": problem kind '" + file->kind() + "' does not match command '" + command + "'");
        }
    } catch (const Error& e) {
        err << "hardy-interp: " << e.what() << "\n";
        return kInputError;
    }

    Run r{*file, settings, Json::object()};
    r.cert["format"] = "hardy-interp certificate";
    r.cert["version"] = 1;
    r.cert["command"] = command;
    r.cert["verdict"] = "";
    r.cert["evidence"] = Json::object();
    r.cert["config"] = Json::object();

    int code = kSuccess;
    try {
        if (command == "kernel") code = cmd_kernel(r);
        else if (command == "pick") code = cmd_pick(r);
        else if (command == "feasible") code = cmd_feasible(r);
        else if (command == "solve") code = cmd_solve(r);
        else if (command == "corona") code = cmd_corona(r);
        else if (command == "distance") code = cmd_distance(r);
        else if (command == "verify") code = cmd_verify(r);
        else throw Error(ErrorCode::InvalidInput, "unknown command '" + command + "'");
    } catch (const NotConvergedError& e) {
        r.cert["verdict"] = "NotConverged";
        r.evidence()["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
        code = kNotConverged;
    } catch (const Error& e) {
        if (is_input_error(e.code())) {
            err << "hardy-interp: " << e.what() << "\n";
            return kInputError;
        }
        r.cert["verdict"] = to_string(e.code());
        r.evidence()["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
        code = kNegative;
    }

    std::string text;
    if (settings.output == "text") {
        render_text(r.cert, "", text);
    } else {
        text = r.cert.dump(2) + "\n";
    }
    out << text << std::flush;
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    err << "hardy-interp: " << command << " finished in " << std::fixed << std::setprecision(1) << ms << " ms (exit " << code << ")\n";
    return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tangential Nevanlinna-Pick interpolation and Toeplitz-corona solver", "hardy-interp"};
    app.require_subcommand(1, 1);

    Settings settings;
    std::string path;
    double tol = 0.0, radius = 0.0;
    int radial = 0, angular = 0, degree = 0, samples = 0;
    std::uint64_t seed = 0;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"kernel", "evaluate a kernel on point pairs"},
        {"pick", "build a Pick matrix and report its smallest eigenvalue"},
        {"feasible", "single-kernel, kernel-family or scaled feasibility verdict"},
        {"solve", "Schur, witness or norm-minimizing tangential interpolant"},
        {"corona", "check the corona hypothesis or solve FG = 1 on a node set"},
        {"distance", "primal and dual distance to a subspace of operators"},
        {"verify", "residual, norm and Pick report for a supplied solution"},
    };
    struct Flags {
        CLI::Option *tol, *radial, *angular, *radius, *degree, *samples, *seed;
    };
    std::vector<std::pair<CLI::App*, Flags>> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("problem", path, "problem file")->required();
        Flags fl{};
        fl.tol = sub->add_option("--tol", tol, "tolerance (PSD threshold, or optimality gap for solvers)");
        fl.radial = sub->add_option("--grid-radial", radial, "grid rings")->check(CLI::PositiveNumber);
        fl.angular = sub->add_option("--grid-angular", angular, "grid points per ring")->check(CLI::PositiveNumber);
        fl.radius = sub->add_option("--grid-radius", radius, "outer grid radius in (0, 1)");
        fl.degree = sub->add_option("--degree", degree, "basis degree")->check(CLI::NonNegativeNumber);
        fl.samples = sub->add_option("--samples", samples, "kernel-family samples")->check(CLI::PositiveNumber);
        fl.seed = sub->add_option("--seed", seed, "sampling seed");
        sub->add_option("--output", settings.output, "certificate format")->check(CLI::IsMember({"json", "text"}));
        if (name == "verify") sub->add_option("--solution", settings.solution_path, "solve certificate (JSON)");
        subs.emplace_back(sub, fl);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kSuccess : kInputError;
    }

    for (const auto& [sub, fl] : subs) {
        if (!sub->parsed()) continue;
        if (fl.tol->count()) settings.tol = tol;
        if (fl.radial->count()) settings.grid_radial = radial;
        if (fl.angular->count()) settings.grid_angular = angular;
        if (fl.radius->count()) settings.grid_radius = radius;
        if (fl.degree->count()) settings.degree = degree;
        if (fl.samples->count()) settings.samples = samples;
        if (fl.seed->count()) settings.seed = seed;
        return run_command(sub->get_name(), path, settings, out, err);
    }
    return kInputError;
}

}  // namespace hardy::cli
