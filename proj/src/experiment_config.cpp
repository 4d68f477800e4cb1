#include "collarspec/experiment_config.hpp"

#include "collarspec/csv.hpp"
#include "collarspec/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace collarspec {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw validation_error("bad numeric value for " + key + ": '" + v + "'");
    return x;
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, key));
    }
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + csv::format_double(v[i]);
    return out;
}

struct Field {
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

const std::map<std::string, Field>& field_table() {
    static const std::map<std::string, Field> table = [] {
        std::map<std::string, Field> t;
        auto str = [&](const std::string& key, std::string ExperimentConfig::*mem) {
            t[key] = {[mem](ExperimentConfig& c, const std::string& v) { c.*mem = v; },
                      [mem](const ExperimentConfig& c) { return c.*mem; }};
        };
        auto num = [&](const std::string& key, double ExperimentConfig::*mem) {
            t[key] = {[mem, key](ExperimentConfig& c, const std::string& v) {
                          c.*mem = parse_double(v, key);
                      },
                      [mem](const ExperimentConfig& c) {
                          return csv::format_double(c.*mem);
                      }};
        };
        auto integer = [&](const std::string& key, int ExperimentConfig::*mem) {
            t[key] = {[mem, key](ExperimentConfig& c, const std::string& v) {
                          c.*mem = static_cast<int>(parse_double(v, key));
                      },
                      [mem](const ExperimentConfig& c) {
                          return std::to_string(c.*mem);
                      }};
        };
        auto list = [&](const std::string& key,
                        std::vector<double> ExperimentConfig::*mem) {
            t[key] = {[mem, key](ExperimentConfig& c, const std::string& v) {
                          c.*mem = parse_list(v, key);
                      },
                      [mem](const ExperimentConfig& c) { return join(c.*mem); }};
        };

        str("profile.kind", &ExperimentConfig::profile_kind);
        list("profile.params", &ExperimentConfig::profile_params);

        num("collar.a", &ExperimentConfig::a);
        num("collar.b", &ExperimentConfig::b);
        integer("collar.d", &ExperimentConfig::d);
        num("collar.t_min", &ExperimentConfig::t_min);
        num("collar.t_max", &ExperimentConfig::t_max);

        str("fiber.source", &ExperimentConfig::fiber_source);
        num("fiber.circumference", &ExperimentConfig::circumference);
        list("fiber.lengths", &ExperimentConfig::torus_lengths);
        str("fiber.entries", &ExperimentConfig::fiber_entries);

        list("run.epsilons", &ExperimentConfig::epsilons);
        num("run.lambda_max", &ExperimentConfig::lambda_max);
        str("run.bc", &ExperimentConfig::bc);
        t["run.seed"] = {[](ExperimentConfig& c, const std::string& v) {
                             c.seed = std::strtoull(v.c_str(), nullptr, 10);
                         },
                         [](const ExperimentConfig& c) {
                             return std::to_string(c.seed);
                         }};
        integer("run.threads", &ExperimentConfig::threads);

        num("solver.prufer_rtol", &ExperimentConfig::prufer_rtol);
        num("solver.prufer_atol", &ExperimentConfig::prufer_atol);
        num("solver.bisect_tol", &ExperimentConfig::bisect_tol);
        integer("solver.oracle_n", &ExperimentConfig::oracle_n);

        num("spectrum.eps", &ExperimentConfig::spectrum_eps);

        list("branch.indices", &ExperimentConfig::branch_indices);
        list("branch.t_cuts", &ExperimentConfig::branch_t_cuts);

        str("cusp.side", &ExperimentConfig::cusp_side);
        integer("cusp.mode_index", &ExperimentConfig::cusp_mode_index);
        list("cusp.t_cuts", &ExperimentConfig::cusp_t_cuts);
        str("cusp.outer_bc", &ExperimentConfig::cusp_outer_bc);
        str("cusp.cut_bc", &ExperimentConfig::cusp_cut_bc);
        list("cusp.decay_orders", &ExperimentConfig::decay_orders);

        num("converge.window_lo", &ExperimentConfig::window_lo);
        num("converge.window_hi", &ExperimentConfig::window_hi);
        integer("converge.branch", &ExperimentConfig::converge_branch);
        integer("converge.fd_points", &ExperimentConfig::fd_points);
        num("converge.limit_t_cut", &ExperimentConfig::limit_t_cut);

        num("transform.eps", &ExperimentConfig::transform_eps);
        integer("transform.samples", &ExperimentConfig::transform_samples);

        str("oscillation.kind", &ExperimentConfig::oscillation_kind);
        num("oscillation.amplitude", &ExperimentConfig::oscillation_amplitude);
        num("oscillation.m", &ExperimentConfig::oscillation_m);
        list("oscillation.a_grid", &ExperimentConfig::oscillation_a_grid);
        return t;
    }();
    return table;
}

} // namespace

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file,
                                        const std::vector<std::string>& overrides) {
    std::ifstream in(file);
    if (!in) throw validation_error("missing config file: " + file.string());
    ExperimentConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw validation_error(file.string() + ":" +
                                       std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error(file.string() + ":" + std::to_string(lineno) +
                                   ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw validation_error(file.string() + ":" + std::to_string(lineno) +
                                   ": key outside a [section]");
        cfg.set(section + "." + key, value);
    }
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw validation_error("override must be key=value: '" + ov + "'");
        cfg.set(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const auto& table = field_table();
    const auto it = table.find(key);
    if (it == table.end())
        throw validation_error("unknown configuration key '" + key + "'");
    it->second.set(*this, value);
}

std::string ExperimentConfig::canonical() const {
    std::string out;
    for (const auto& [key, field] : field_table())
        out += key + " = " + field.get(*this) + "\n";
    return out;
}

std::uint64_t ExperimentConfig::hash() const {
    // FNV-1a over the canonical serialization
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

CollarConfig ExperimentConfig::collar() const {
    CollarConfig cc;
    cc.a = a;
    cc.b = b;
    cc.d = d;
    cc.t_min = t_min;
    cc.t_max = t_max;
    cc.profile = make_profile(profile_kind_from_string(profile_kind),
                              profile_params);
    if (fiber_source == "circle") {
        cc.fiber = FiberSpectrum::circle(circumference);
    } else if (fiber_source == "flat-torus") {
        cc.fiber = FiberSpectrum::flat_torus(torus_lengths);
    } else if (fiber_source == "explicit-list") {
        std::vector<FiberMode> entries;
        std::stringstream ss(fiber_entries);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw validation_error("fiber entry must be mu:mult, got '" +
                                       item + "'");
            entries.push_back(
                {parse_double(trim(item.substr(0, colon)), "fiber.entries"),
                 static_cast<int>(parse_double(trim(item.substr(colon + 1)),
                                               "fiber.entries"))});
        }
        cc.fiber = FiberSpectrum::explicit_list(std::move(entries));
    } else {
        throw validation_error("unknown fiber source '" + fiber_source + "'");
    }
    cc.validate();
    return cc;
}

SolveOptions ExperimentConfig::solve_options() const {
    SolveOptions opt;
    opt.bisect_tol = bisect_tol;
    opt.prufer.rel_tol = prufer_rtol;
    opt.prufer.abs_tol = prufer_atol;
    return opt;
}

BoundaryCondition ExperimentConfig::boundary() const {
    return bc_from_string(bc);
}

} // namespace collarspec
