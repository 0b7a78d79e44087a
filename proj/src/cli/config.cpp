#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "monotone_mas/errors.hpp"
#include "monotone_mas/rng.hpp"

namespace mas::cli {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& what)
    : Error(field.empty() ? what : fmt::format("{}: {}", field, what)), field_(std::move(field)) {}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Sis: return "sis";
        case ModelKind::Arctan: return "arctan";
        case ModelKind::Linear: return "linear";
        case ModelKind::Counterexample: return "counterexample";
    }
    return "?";
}

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index_path(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

void require_object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown key");
    }
}

const json* find(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const std::string& path, const std::string& key) {
    const json* v = find(j, key);
    if (!v) throw ConfigError(join(path, key), "missing required key");
    return *v;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
    return v;
}

double non_negative(const json& j, const std::string& path) {
    const double v = number(j, path);
    if (v < 0.0) throw ConfigError(path, fmt::format("must be >= 0 (got {})", v));
    return v;
}

double positive(const json& j, const std::string& path) {
    const double v = number(j, path);
    if (!(v > 0.0)) throw ConfigError(path, fmt::format("must be > 0 (got {})", v));
    return v;
}

std::uint64_t count(const json& j, const std::string& path, std::uint64_t min_value) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0)) {
        throw ConfigError(path, "expected a non-negative integer");
    }
    const std::uint64_t v = j.get<std::uint64_t>();
    if (v < min_value) throw ConfigError(path, fmt::format("must be >= {}", min_value));
    return v;
}

bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array");
    return j;
}

// Scalar broadcast to n entries, or an explicit list of n numbers.
std::vector<double> per_node(const json& j, const std::string& path, std::size_t n, bool strictly_positive) {
    auto read = [&](const json& v, const std::string& p) {
        return strictly_positive ? positive(v, p) : non_negative(v, p);
    };
    if (j.is_number()) return std::vector<double>(n, read(j, path));
    const json& a = array(j, path);
    if (a.size() != n) throw ConfigError(path, fmt::format("expected {} entries, got {}", n, a.size()));
    std::vector<double> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(read(a[i], index_path(path, i)));
    return out;
}

std::vector<double> state(const json& j, const std::string& path) {
    const json& a = array(j, path);
    if (a.empty()) throw ConfigError(path, "state must have at least one entry");
    std::vector<double> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(non_negative(a[i], index_path(path, i)));
    return out;
}

Digraph parse_graph(const json& j, const std::string& path, const std::filesystem::path& base_dir) {
    require_object(j, path, {"n", "edges", "file"});
    EdgeList list;
    if (const json* file = find(j, "file")) {
        if (find(j, "n") || find(j, "edges")) throw ConfigError(path, "give either 'file' or 'n'/'edges', not both");
        std::filesystem::path p = string(*file, join(path, "file"));
        if (p.is_relative()) p = base_dir / p;
        std::ifstream in(p);
        if (!in) throw ConfigError(join(path, "file"), fmt::format("cannot open '{}'", p.string()));
        try {
            list = read_edge_list(in);
        } catch (const Error& e) {
            throw ConfigError(join(path, "file"), e.what());
        }
    } else {
        list.n = count(require(j, path, "n"), join(path, "n"), 1);
        const std::string ep = join(path, "edges");
        const json& edges = array(require(j, path, "edges"), ep);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const std::string p = index_path(ep, k);
            const json& e = array(edges[k], p);
            if (e.size() != 2) throw ConfigError(p, "edge must be [i, j]");
            const auto i = count(e[0], p, 1), jj = count(e[1], p, 1);
            if (i > list.n || jj > list.n) throw ConfigError(p, fmt::format("node index out of range 1..{}", list.n));
            list.edges.emplace_back(i - 1, jj - 1);
        }
    }
    try {
        return Digraph(list.n, list.edges);
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

ModelConfig parse_model(const json& j, const std::string& path, const std::optional<Digraph>& g) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const std::string type = string(require(j, path, "type"), join(path, "type"));
    ModelConfig m;
    auto need_graph = [&] {
        if (!g) throw ConfigError("graph", fmt::format("model '{}' needs a graph", type));
        return *g;
    };
    auto bound = [&] {
        if (const json* b = find(j, "domain_bound")) m.domain_bound = positive(*b, join(path, "domain_bound"));
    };

    if (type == "sis") {
        require_object(j, path, {"type", "h", "delta", "beta", "beta_self", "domain_bound"});
        const Digraph graph = need_graph();
        const std::size_t n = graph.size();
        m.kind = ModelKind::Sis;
        m.h = non_negative(require(j, path, "h"), join(path, "h"));
        m.delta = per_node(require(j, path, "delta"), join(path, "delta"), n, false);
        m.beta_self = find(j, "beta_self") ? per_node(j["beta_self"], join(path, "beta_self"), n, false)
                                           : std::vector<double>(n, 0.0);
        const std::string bp = join(path, "beta");
        const json& beta = require(j, path, "beta");
        m.beta.resize(n);
        if (beta.is_number()) {
            const double b = non_negative(beta, bp);
            for (std::size_t i = 0; i < n; ++i) m.beta[i].assign(graph.neighbors(i).size(), b);
        } else {
            std::vector<std::vector<std::optional<double>>> rates(n);
            for (std::size_t i = 0; i < n; ++i) rates[i].resize(graph.neighbors(i).size());
            const json& list = array(beta, bp);
            for (std::size_t k = 0; k < list.size(); ++k) {
                const std::string p = index_path(bp, k);
                const json& e = array(list[k], p);
                if (e.size() != 3) throw ConfigError(p, "expected [i, j, rate]");
                const auto i = count(e[0], p, 1) - 1, jj = count(e[1], p, 1) - 1;
                const double rate = non_negative(e[2], p);
                if (i >= n || jj >= n || !graph.has_edge(i, jj)) {
                    throw ConfigError(p, fmt::format("({}, {}) is not an edge of the graph", i + 1, jj + 1));
                }
                const auto& nb = graph.neighbors(i);
                const auto pos = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), jj) - nb.begin());
                if (rates[i][pos]) throw ConfigError(p, "duplicate rate");
                rates[i][pos] = rate;
            }
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < rates[i].size(); ++k) {
                    if (!rates[i][k]) {
                        throw ConfigError(bp, fmt::format("missing rate for edge ({}, {})", i + 1,
                                                          graph.neighbors(i)[k] + 1));
                    }
                    m.beta[i].push_back(*rates[i][k]);
                }
            }
        }
    } else if (type == "arctan") {
        require_object(j, path, {"type", "eps", "domain_bound"});
        const Digraph graph = need_graph();
        m.kind = ModelKind::Arctan;
        m.eps = per_node(require(j, path, "eps"), join(path, "eps"), graph.size(), true);
    } else if (type == "linear") {
        require_object(j, path, {"type", "matrix", "domain_bound"});
        if (g) throw ConfigError("graph", "linear models take their topology from the matrix");
        m.kind = ModelKind::Linear;
        const std::string mp = join(path, "matrix");
        const json& rows = array(require(j, path, "matrix"), mp);
        const std::size_t n = rows.size();
        if (n == 0) throw ConfigError(mp, "matrix must be non-empty");
        m.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t r = 0; r < n; ++r) {
            const std::string rp = index_path(mp, r);
            const json& row = array(rows[r], rp);
            if (row.size() != n) throw ConfigError(rp, fmt::format("expected {} entries", n));
            for (std::size_t c = 0; c < n; ++c) {
                m.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    non_negative(row[c], index_path(rp, c));
            }
        }
    } else if (type == "counterexample") {
        require_object(j, path, {"type", "id", "domain_bound"});
        if (g) throw ConfigError("graph", "counterexample maps are fixed two-dimensional maps");
        m.kind = ModelKind::Counterexample;
        m.counterexample = string(require(j, path, "id"), join(path, "id"));
        if (m.counterexample != "constant" && m.counterexample != "swap" && m.counterexample != "sqrt_shift") {
            throw ConfigError(join(path, "id"), "expected 'constant', 'swap' or 'sqrt_shift'");
        }
    } else {
        throw ConfigError(join(path, "type"), fmt::format("unknown model type '{}'", type));
    }
    bound();
    return m;
}

std::vector<double> parse_range(const json& j, const std::string& path) {
    const json& a = array(j, path);
    if (a.size() != 3) throw ConfigError(path, "expected [lo, hi, step]");
    const double lo = non_negative(a[0], index_path(path, 0));
    const double hi = non_negative(a[1], index_path(path, 1));
    const double step = positive(a[2], index_path(path, 2));
    if (hi < lo) throw ConfigError(path, "hi must be >= lo");
    return expand_range(lo, hi, step);
}

}  // namespace

std::vector<double> expand_range(double lo, double hi, double step) {
    std::vector<double> out;
    const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    require_object(doc, "", {"model", "graph", "initial_states", "run", "sampling", "check", "inference", "sweep",
                             "seed", "output_dir", "outputs"});
    ExperimentConfig cfg;

    if (const json* s = find(doc, "seed")) cfg.seed = count(*s, "seed", 0);
    if (const json* g = find(doc, "graph")) cfg.graph = parse_graph(*g, "graph", base_dir);
    if (const json* m = find(doc, "model")) cfg.model = parse_model(*m, "model", cfg.graph);

    if (const json* r = find(doc, "run")) {
        require_object(*r, "run", {"max_iters", "fixed_tol", "consensus_tol", "period_window", "stride"});
        if (const json* v = find(*r, "max_iters")) cfg.run.max_iters = count(*v, "run.max_iters", 1);
        if (const json* v = find(*r, "fixed_tol")) cfg.run.fixed_tol = positive(*v, "run.fixed_tol");
        if (const json* v = find(*r, "consensus_tol")) cfg.run.consensus_tol = positive(*v, "run.consensus_tol");
        if (const json* v = find(*r, "period_window")) cfg.run.period_window = count(*v, "run.period_window", 2);
        if (const json* v = find(*r, "stride")) cfg.run.stride = count(*v, "run.stride", 1);
    }
    if (const json* s = find(doc, "sampling")) {
        require_object(*s, "sampling", {"count", "boundary_fraction", "bound"});
        if (const json* v = find(*s, "count")) cfg.sampling.count = count(*v, "sampling.count", 1);
        if (const json* v = find(*s, "boundary_fraction")) {
            cfg.sampling.boundary_fraction = non_negative(*v, "sampling.boundary_fraction");
            if (cfg.sampling.boundary_fraction > 1.0) throw ConfigError("sampling.boundary_fraction", "must be <= 1");
        }
        if (const json* v = find(*s, "bound")) {
            cfg.sampling.bound = positive(*v, "sampling.bound");
            cfg.sampling_bound_set = true;
        }
    }
    if (const json* c = find(doc, "check")) {
        require_object(*c, "check", {"theorem", "fixed_point"});
        if (const json* v = find(*c, "theorem")) {
            const auto t = count(*v, "check.theorem", 0);
            if (t != 8 && t != 9) throw ConfigError("check.theorem", "expected 8 or 9");
            cfg.theorem = static_cast<int>(t);
        }
        if (const json* v = find(*c, "fixed_point")) cfg.fixed_point = state(*v, "check.fixed_point");
    }
    if (const json* c = find(doc, "inference")) {
        require_object(*c, "inference", {"edge_tol"});
        if (const json* v = find(*c, "edge_tol")) cfg.edge_tol = positive(*v, "inference.edge_tol");
    }
    if (const json* i = find(doc, "initial_states")) {
        require_object(*i, "initial_states", {"explicit", "random"});
        if (const json* e = find(*i, "explicit")) {
            const json& list = array(*e, "initial_states.explicit");
            for (std::size_t k = 0; k < list.size(); ++k) {
                cfg.initial.explicit_states.push_back(state(list[k], index_path("initial_states.explicit", k)));
            }
        }
        if (const json* r = find(*i, "random")) {
            require_object(*r, "initial_states.random", {"count", "boundary", "bound"});
            cfg.initial.random_count =
                count(require(*r, "initial_states.random", "count"), "initial_states.random.count", 1);
            if (const json* v = find(*r, "boundary")) cfg.initial.random_boundary = boolean(*v, "initial_states.random.boundary");
            if (const json* v = find(*r, "bound")) cfg.initial.random_bound = positive(*v, "initial_states.random.bound");
        }
    }
    if (const json* s = find(doc, "sweep")) {
        require_object(*s, "sweep", {"h", "delta", "beta", "beta_self"});
        SweepConfig sw;
        sw.h = parse_range(require(*s, "sweep", "h"), "sweep.h");
        sw.delta = parse_range(require(*s, "sweep", "delta"), "sweep.delta");
        sw.beta = parse_range(require(*s, "sweep", "beta"), "sweep.beta");
        if (const json* v = find(*s, "beta_self")) {
            sw.beta_self.clear();
            const json& list = array(*v, "sweep.beta_self");
            if (list.empty()) throw ConfigError("sweep.beta_self", "must not be empty");
            for (std::size_t k = 0; k < list.size(); ++k) {
                sw.beta_self.push_back(non_negative(list[k], index_path("sweep.beta_self", k)));
            }
        }
        cfg.sweep = std::move(sw);
    }
    if (const json* o = find(doc, "output_dir")) cfg.output_dir = string(*o, "output_dir");
    if (const json* o = find(doc, "outputs")) {
        require_object(*o, "outputs", {"trajectories", "reports", "plot"});
        if (const json* v = find(*o, "trajectories")) cfg.outputs.trajectories = boolean(*v, "outputs.trajectories");
        if (const json* v = find(*o, "reports")) cfg.outputs.reports = boolean(*v, "outputs.reports");
        if (const json* v = find(*o, "plot")) cfg.outputs.plot = boolean(*v, "outputs.plot");
    }

    if (cfg.graph && !cfg.model) throw ConfigError("graph", "graph given without a model");
    // Dimension checks for states against the model.
    if (cfg.model) {
        const SystemMap f = build_model(cfg);
        for (std::size_t k = 0; k < cfg.initial.explicit_states.size(); ++k) {
            if (cfg.initial.explicit_states[k].size() != f.dimension()) {
                throw ConfigError(index_path("initial_states.explicit", k),
                                  fmt::format("expected {} entries", f.dimension()));
            }
        }
        if (cfg.fixed_point && cfg.fixed_point->size() != f.dimension()) {
            throw ConfigError("check.fixed_point", fmt::format("expected {} entries", f.dimension()));
        }
    }
    try {
        cfg.run.validate();
    } catch (const Error& e) {
        throw ConfigError("run", e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", fmt::format("cannot open config '{}'", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
    }
    return parse_config(doc, path.parent_path());
}

SystemMap build_model(const ExperimentConfig& cfg) {
    if (!cfg.model) throw ConfigError("model", "missing required key");
    const ModelConfig& m = *cfg.model;
    auto with_bound = [&](SystemMap f) { return m.domain_bound ? f.with_domain_bound(*m.domain_bound) : f; };
    try {
        switch (m.kind) {
            case ModelKind::Sis: {
                SisParams p;
                p.h = m.h;
                p.delta = m.delta;
                p.beta = m.beta;
                p.beta_self = m.beta_self;
                return with_bound(make_sis(*cfg.graph, p));
            }
            case ModelKind::Arctan: return with_bound(make_arctan(*cfg.graph, m.eps));
            case ModelKind::Linear: return with_bound(make_linear(m.matrix));
            case ModelKind::Counterexample: {
                Counterexamples c = make_counterexamples();
                if (m.counterexample == "constant") return with_bound(c.constant);
                if (m.counterexample == "swap") return with_bound(c.swap);
                return with_bound(c.sqrt_shift);
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("model", e.what());
    }
    throw ConfigError("model.type", "unsupported");
}

SampleSpec sample_spec(const ExperimentConfig& cfg, const SystemMap& f) {
    SampleSpec s = cfg.sampling;
    if (!cfg.sampling_bound_set) s.bound = f.domain_bound();
    s.seed = CounterRng(cfg.seed).split("sampling").key();
    return s;
}

std::vector<StateVector> initial_states(const ExperimentConfig& cfg, const SystemMap& f) {
    std::vector<StateVector> out;
    for (const auto& s : cfg.initial.explicit_states) out.emplace_back(s);
    const double bound = cfg.initial.random_bound.value_or(f.domain_bound());
    const CounterRng base = CounterRng(cfg.seed).split("initial_states");
    for (std::size_t k = 0; k < cfg.initial.random_count; ++k) {
        CounterRng rng = base.split(static_cast<std::uint64_t>(k));
        out.push_back(cfg.initial.random_boundary ? draw_boundary(rng, f.dimension(), bound)
                                                  : draw_box(rng, f.dimension(), 0.0, bound));
    }
    return out;
}

}  // namespace mas::cli
