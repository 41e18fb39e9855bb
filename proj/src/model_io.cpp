#include "netsde/model_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace netsde {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

const json& require(const json& node, const char* key, const std::string& path) {
    if (!node.is_object() || !node.contains(key))
        fail(path, std::string("missing key '") + key + "'");
    return node.at(key);
}

double number(const json& node, const std::string& path) {
    if (!node.is_number())
        fail(path, "expected a number");
    return node.get<double>();
}

int integer(const json& node, const std::string& path) {
    if (!node.is_number_integer())
        fail(path, "expected an integer");
    return node.get<int>();
}

std::vector<double> number_list(const json& node, const std::string& path) {
    if (!node.is_array())
        fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i)
        out.push_back(number(node[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::string kind_of(const json& node, const std::string& path) {
    const json& k = require(node, "kind", path);
    if (!k.is_string())
        fail(path + ".kind", "expected a string");
    return k.get<std::string>();
}

CoefficientProfile parse_profile(const json& node, const std::string& path) {
    if (node.is_number())
        return CoefficientProfile::constant(node.get<double>());
    const std::string kind = kind_of(node, path);
    if (kind == "constant")
        return CoefficientProfile::constant(number(require(node, "value", path), path + ".value"));
    if (kind == "poly")
        return CoefficientProfile::polynomial(
            number_list(require(node, "coeffs", path), path + ".coeffs"));
    if (kind == "samples") {
        auto values = number_list(require(node, "values", path), path + ".values");
        if (values.size() < 2)
            fail(path + ".values", "sampled profile needs at least two values");
        return CoefficientProfile::samples(std::move(values));
    }
    fail(path + ".kind", "unknown profile kind '" + kind + "' (constant|poly|samples)");
}

json profile_json(const CoefficientProfile& p) {
    switch (p.kind()) {
    case CoefficientProfile::Kind::Constant:
        return json{{"kind", "constant"}, {"value", p.payload()[0]}};
    case CoefficientProfile::Kind::Polynomial:
        return json{{"kind", "poly"}, {"coeffs", p.payload()}};
    case CoefficientProfile::Kind::Samples:
        return json{{"kind", "samples"}, {"values", p.payload()}};
    }
    return json{};
}

TimeModulation parse_modulation(const json& node, const std::string& path) {
    TimeModulation mod;
    if (!node.contains("modulation"))
        return mod;
    const json& m = node.at("modulation");
    mod.amplitude = number(require(m, "amplitude", path + ".modulation"),
                           path + ".modulation.amplitude");
    mod.omega = number(require(m, "omega", path + ".modulation"), path + ".modulation.omega");
    if (!(std::abs(mod.amplitude) < 1.0))
        fail(path + ".modulation.amplitude", "magnitude must be below 1");
    return mod;
}

ReactionSpec parse_reaction(const json& node, const std::string& path) {
    const std::string kind = kind_of(node, path);
    const TimeModulation mod = parse_modulation(node, path);
    if (kind == "zero")
        return ReactionSpec::zero();
    if (kind == "fhn")
        return ReactionSpec::fitzhugh_nagumo(number(require(node, "a", path), path + ".a"), mod);
    if (kind == "polynomial") {
        const int k = integer(require(node, "k", path), path + ".k");
        CoefficientProfile leading =
            parse_profile(require(node, "leading", path), path + ".leading");
        const json& lower_node = require(node, "lower", path);
        if (!lower_node.is_array())
            fail(path + ".lower", "expected an array of profiles");
        if (static_cast<int>(lower_node.size()) != 2 * k + 1)
            fail(path + ".lower", "need exactly 2k+1 = " + std::to_string(2 * k + 1) +
                                      " profiles");
        std::vector<CoefficientProfile> lower;
        for (std::size_t l = 0; l < lower_node.size(); ++l)
            lower.push_back(
                parse_profile(lower_node[l], path + ".lower[" + std::to_string(l) + "]"));
        return ReactionSpec::polynomial(k, std::move(leading), std::move(lower), mod);
    }
    fail(path + ".kind", "unknown reaction kind '" + kind + "' (zero|fhn|polynomial)");
}

json reaction_json(const ReactionSpec& r) {
    json node;
    switch (r.kind) {
    case ReactionSpec::Kind::Zero:
        node = json{{"kind", "zero"}};
        break;
    case ReactionSpec::Kind::FitzHughNagumo:
        node = json{{"kind", "fhn"}, {"a", r.fhn_a}};
        break;
    case ReactionSpec::Kind::Polynomial: {
        json lower = json::array();
        for (const auto& p : r.lower)
            lower.push_back(profile_json(p));
        node = json{{"kind", "polynomial"},
                    {"k", r.degree_k},
                    {"leading", profile_json(r.leading)},
                    {"lower", lower}};
        break;
    }
    }
    if (!r.modulation.trivial())
        node["modulation"] =
            json{{"amplitude", r.modulation.amplitude}, {"omega", r.modulation.omega}};
    return node;
}

DiffusionSpec1D parse_noise(const json& node, const std::string& path) {
    const std::string kind = kind_of(node, path);
    if (kind == "additive")
        return DiffusionSpec1D::additive(
            number(require(node, "sigma", path), path + ".sigma"));
    if (kind == "bounded_mult")
        return DiffusionSpec1D::bounded_multiplicative(
            number(require(node, "sigma", path), path + ".sigma"),
            number(require(node, "saturation", path), path + ".saturation"));
    if (kind == "poly_capped")
        return DiffusionSpec1D::polynomial_capped(
            number_list(require(node, "coeffs", path), path + ".coeffs"),
            number(require(node, "cap", path), path + ".cap"));
    fail(path + ".kind",
         "unknown noise kind '" + kind + "' (additive|bounded_mult|poly_capped)");
}

json noise_json(const DiffusionSpec1D& g) {
    switch (g.kind) {
    case DiffusionSpec1D::Kind::Additive:
        return json{{"kind", "additive"}, {"sigma", g.sigma}};
    case DiffusionSpec1D::Kind::BoundedMultiplicative:
        return json{{"kind", "bounded_mult"}, {"sigma", g.sigma}, {"saturation", g.saturation}};
    case DiffusionSpec1D::Kind::PolynomialCapped:
        return json{{"kind", "poly_capped"}, {"coeffs", g.coeffs}, {"cap", g.cap}};
    }
    return json{};
}

Scheme parse_scheme(const std::string& name, const std::string& path) {
    if (name == "linear-implicit")
        return Scheme::LinearImplicit;
    if (name == "exponential")
        return Scheme::Exponential;
    if (name == "tamed-explicit")
        return Scheme::TamedExplicit;
    fail(path, "unknown scheme '" + name + "' (linear-implicit|exponential|tamed-explicit)");
}

const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::LinearImplicit: return "linear-implicit";
    case Scheme::Exponential: return "exponential";
    case Scheme::TamedExplicit: return "tamed-explicit";
    }
    return "linear-implicit";
}

std::string violation_path(const Violation& v) {
    if (v.rule.rfind("edge-noise", 0) == 0)
        return "edges[" + std::to_string(v.i + 1) + "].edge_noise";
    if (v.rule.rfind("vertex-noise", 0) == 0)
        return "vertex_noise[" + std::to_string(v.i + 1) + "]";
    if (v.rule.rfind("edge", 0) == 0 || v.rule == "self-loop" || v.rule == "mu-positive" ||
        v.rule == "c-positive" || v.rule == "p-nonnegative" ||
        v.rule.rfind("reaction", 0) == 0)
        return v.j >= 0 ? "edges[" + std::to_string(v.j + 1) + "]" : "edges";
    if (v.rule == "symmetry" || v.rule == "offdiagonal-sign" || v.rule == "row-sum" ||
        v.rule == "square" || v.rule == "finite" || v.rule == "vertex-matrix-shape")
        return "M";
    return "model";
}

} // namespace

ParsedModel parse_model(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what());
    }

    ParsedModel out;
    NetworkModel& model = out.model;
    model.n_vertices = integer(require(doc, "vertices", "model"), "vertices");
    if (model.n_vertices < 1)
        fail("vertices", "need at least one vertex");

    const json& edges = require(doc, "edges", "model");
    if (!edges.is_array() || edges.empty())
        fail("edges", "expected a nonempty array");
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const std::string path = "edges[" + std::to_string(j + 1) + "]";
        const json& e = edges[j];
        EdgeSpec spec;
        const int tail = integer(require(e, "tail", path), path + ".tail");
        const int head = integer(require(e, "head", path), path + ".head");
        if (tail < 1 || tail > model.n_vertices)
            fail(path + ".tail", "vertex index out of range 1.." +
                                     std::to_string(model.n_vertices));
        if (head < 1 || head > model.n_vertices)
            fail(path + ".head", "vertex index out of range 1.." +
                                     std::to_string(model.n_vertices));
        spec.tail = tail - 1;
        spec.head = head - 1;
        spec.mu = number(require(e, "mu", path), path + ".mu");
        spec.c = parse_profile(require(e, "c", path), path + ".c");
        spec.d = e.contains("d") ? parse_profile(e.at("d"), path + ".d")
                                 : CoefficientProfile::constant(0.0);
        spec.p = e.contains("p") ? parse_profile(e.at("p"), path + ".p")
                                 : CoefficientProfile::constant(0.0);
        spec.reaction = e.contains("reaction")
                            ? parse_reaction(e.at("reaction"), path + ".reaction")
                            : ReactionSpec::zero();
        spec.edge_noise = e.contains("edge_noise")
                              ? parse_noise(e.at("edge_noise"), path + ".edge_noise")
                              : DiffusionSpec1D::additive(0.0);
        model.edges.push_back(std::move(spec));
    }

    const json& m_rows = require(doc, "M", "model");
    if (!m_rows.is_array() || static_cast<int>(m_rows.size()) != model.n_vertices)
        fail("M", "expected " + std::to_string(model.n_vertices) + " rows");
    model.M.resize(model.n_vertices, model.n_vertices);
    for (int i = 0; i < model.n_vertices; ++i) {
        const auto row = number_list(m_rows[i], "M[" + std::to_string(i + 1) + "]");
        if (static_cast<int>(row.size()) != model.n_vertices)
            fail("M[" + std::to_string(i + 1) + "]",
                 "expected " + std::to_string(model.n_vertices) + " entries");
        for (int k = 0; k < model.n_vertices; ++k)
            model.M(i, k) = row[static_cast<std::size_t>(k)];
    }

    if (doc.contains("vertex_noise")) {
        const json& vn = doc.at("vertex_noise");
        if (!vn.is_array() || static_cast<int>(vn.size()) != model.n_vertices)
            fail("vertex_noise", "expected one spec per vertex");
        for (std::size_t i = 0; i < vn.size(); ++i)
            model.vertex_noise.push_back(
                parse_noise(vn[i], "vertex_noise[" + std::to_string(i + 1) + "]"));
    } else {
        model.vertex_noise.assign(static_cast<std::size_t>(model.n_vertices),
                                  DiffusionSpec1D::additive(0.0));
    }

    SolverConfig& config = out.config;
    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        config.T = number(require(s, "T", "solver"), "solver.T");
        config.dt = number(require(s, "dt", "solver"), "solver.dt");
        const json& n_node = require(s, "N", "solver");
        if (n_node.is_array()) {
            config.cells.clear();
            for (std::size_t j = 0; j < n_node.size(); ++j)
                config.cells.push_back(
                    integer(n_node[j], "solver.N[" + std::to_string(j + 1) + "]"));
        } else {
            config.cells = {integer(n_node, "solver.N")};
        }
        if (s.contains("scheme")) {
            const json& sch = s.at("scheme");
            if (!sch.is_string())
                fail("solver.scheme", "expected a string");
            config.scheme = parse_scheme(sch.get<std::string>(), "solver.scheme");
        }
        if (s.contains("paths"))
            config.paths = integer(s.at("paths"), "solver.paths");
        if (s.contains("q"))
            config.q = number(s.at("q"), "solver.q");
        if (s.contains("seed"))
            config.seed = static_cast<std::uint64_t>(s.at("seed").get<std::int64_t>());
        if (s.contains("save_every"))
            config.save_every = integer(s.at("save_every"), "solver.save_every");
        if (s.contains("taming")) {
            if (!s.at("taming").is_boolean())
                fail("solver.taming", "expected a boolean");
            config.taming = s.at("taming").get<bool>();
        }
    }

    if (doc.contains("initial")) {
        const json& init = doc.at("initial");
        if (init.is_number()) {
            out.initial.kind = InitialSpec::Kind::Constant;
            out.initial.value = init.get<double>();
        } else {
            const std::string kind = kind_of(init, "initial");
            if (kind == "constant") {
                out.initial.kind = InitialSpec::Kind::Constant;
                out.initial.value = number(require(init, "value", "initial"), "initial.value");
            } else if (kind == "polys") {
                out.initial.kind = InitialSpec::Kind::Profiles;
                const json& coeffs = require(init, "coeffs", "initial");
                if (!coeffs.is_array() || coeffs.size() != model.edges.size())
                    fail("initial.coeffs", "need one coefficient list per edge");
                for (std::size_t j = 0; j < coeffs.size(); ++j)
                    out.initial.edge_polys.push_back(EdgePolynomial{number_list(
                        coeffs[j], "initial.coeffs[" + std::to_string(j + 1) + "]")});
            } else {
                fail("initial.kind", "unknown kind '" + kind + "' (constant|polys)");
            }
        }
    }

    const ValidationReport report = validate_model(model);
    if (!report.ok()) {
        std::ostringstream os;
        os << "semantic error";
        for (const auto& v : report.violations)
            os << "\n  " << violation_path(v) << ": " << v.detail << " [" << v.rule << "]";
        throw ParseError(os.str());
    }
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("solver: ") + e.what());
    }
    if (static_cast<int>(config.cells.size()) != 1 &&
        config.cells.size() != model.edges.size())
        fail("solver.N", "need a scalar or one entry per edge");
    for (int n : config.cells)
        if (n < 2)
            fail("solver.N", "cell counts must be at least 2");
    return out;
}

std::string serialize_model(const ParsedModel& parsed) {
    const NetworkModel& model = parsed.model;
    json doc;
    doc["vertices"] = model.n_vertices;
    json edges = json::array();
    for (const EdgeSpec& e : model.edges) {
        json node;
        node["tail"] = e.tail + 1;
        node["head"] = e.head + 1;
        node["mu"] = e.mu;
        node["c"] = profile_json(e.c);
        node["d"] = profile_json(e.d);
        node["p"] = profile_json(e.p);
        node["reaction"] = reaction_json(e.reaction);
        node["edge_noise"] = noise_json(e.edge_noise);
        edges.push_back(node);
    }
    doc["edges"] = edges;
    json m_rows = json::array();
    for (int i = 0; i < model.n_vertices; ++i) {
        json row = json::array();
        for (int k = 0; k < model.n_vertices; ++k)
            row.push_back(model.M(i, k));
        m_rows.push_back(row);
    }
    doc["M"] = m_rows;
    json vn = json::array();
    for (const auto& g : model.vertex_noise)
        vn.push_back(noise_json(g));
    doc["vertex_noise"] = vn;

    const SolverConfig& c = parsed.config;
    json solver;
    solver["T"] = c.T;
    solver["dt"] = c.dt;
    if (c.cells.size() == 1)
        solver["N"] = c.cells[0];
    else
        solver["N"] = c.cells;
    solver["scheme"] = scheme_name(c.scheme);
    solver["paths"] = c.paths;
    solver["q"] = c.q;
    solver["seed"] = static_cast<std::int64_t>(c.seed);
    solver["save_every"] = c.save_every;
    if (c.taming.has_value())
        solver["taming"] = *c.taming;
    doc["solver"] = solver;

    if (parsed.initial.kind == InitialSpec::Kind::Constant) {
        doc["initial"] = json{{"kind", "constant"}, {"value", parsed.initial.value}};
    } else {
        json coeffs = json::array();
        for (const auto& poly : parsed.initial.edge_polys)
            coeffs.push_back(poly.coeffs);
        doc["initial"] = json{{"kind", "polys"}, {"coeffs", coeffs}};
    }
    return doc.dump(2) + "\n";
}

namespace {

void append_number(std::string& line, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    line.append(buf, res.ptr);
}

} // namespace

void write_trajectory(std::ostream& out, const GridLayout& grid, const Trajectory& traj) {
    std::string header = "t";
    for (int j = 0; j < grid.n_edges(); ++j)
        for (int k = 1; k < grid.cells[j]; ++k)
            header += ",e" + std::to_string(j + 1) + "_x" + std::to_string(k);
    for (int i = 0; i < grid.n_vertices; ++i)
        header += ",v" + std::to_string(i + 1);
    out << header << "\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        std::string line;
        append_number(line, traj.times[s]);
        const State& u = traj.states[s];
        for (int i = 0; i < u.size(); ++i) {
            line += ',';
            append_number(line, u[i]);
        }
        out << line << "\n";
    }
}

TrajectoryTable read_trajectory(std::istream& in) {
    TrajectoryTable table;
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("trajectory: empty input");
    {
        std::stringstream ss(line);
        std::string col;
        bool first = true;
        while (std::getline(ss, col, ',')) {
            if (first) {
                if (col != "t")
                    throw ParseError("trajectory: first column must be t");
                first = false;
            } else {
                table.columns.push_back(col);
            }
        }
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        const char* ptr = line.data();
        const char* end = line.data() + line.size();
        while (ptr < end) {
            double v = 0.0;
            const auto res = std::from_chars(ptr, end, v);
            if (res.ec != std::errc{})
                throw ParseError("trajectory: malformed number in row " +
                                 std::to_string(rows.size() + 1));
            row.push_back(v);
            ptr = res.ptr;
            if (ptr < end && *ptr == ',')
                ++ptr;
        }
        if (row.size() != table.columns.size() + 1)
            throw ParseError("trajectory: row " + std::to_string(rows.size() + 1) +
                             " has wrong column count");
        rows.push_back(std::move(row));
    }
    table.times.resize(rows.size());
    table.values.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(table.columns.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        table.times[r] = rows[r][0];
        for (std::size_t c = 0; c + 1 < rows[r].size(); ++c)
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c + 1];
    }
    return table;
}

std::string summary_json(const MomentStats& stats, const SolverConfig& config) {
    json doc;
    doc["moment_estimate"] = stats.estimate;
    doc["std_error"] = stats.std_error;
    doc["q"] = stats.q;
    doc["paths_completed"] = stats.paths;
    doc["blowups"] = stats.blowups;
    doc["T"] = config.T;
    doc["dt"] = config.dt;
    doc["scheme"] = scheme_name(config.scheme);
    doc["seed"] = static_cast<std::int64_t>(config.seed);
    return doc.dump(2) + "\n";
}

} // namespace netsde
