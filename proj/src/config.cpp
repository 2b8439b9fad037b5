#include "npz/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <vector>

namespace npz {

namespace {

std::string line_prefix(int line) {
    return line > 0 ? "line " + std::to_string(line) + ": " : "";
}

double to_double(const std::string& v, const std::string& key, int line) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError(line_prefix(line) + key + ": invalid number '" + v + "'");
    return x;
}

long long to_int(const std::string& v, const std::string& key, int line) {
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError(line_prefix(line) + key + ": invalid integer '" + v + "'");
    return x;
}

bool to_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(line_prefix(line) + key + ": expected true or false, got '" + v + "'");
}

template <typename E>
struct EnumName {
    const char* name;
    E value;
};

constexpr EnumName<LightModel> kLightNames[] = {
    {"exponential", LightModel::ExponentialDecay},
    {"self_shading", LightModel::SelfShading},
};

constexpr EnumName<FunctionalResponse> kResponseNames[] = {
    {"holling1", FunctionalResponse::HollingI},
    {"holling2", FunctionalResponse::HollingII},
    {"holling3", FunctionalResponse::HollingIII},
    {"ivlev", FunctionalResponse::Ivlev},
    {"ratio_quad", FunctionalResponse::RatioQuad},
};

constexpr EnumName<Scheme> kSchemeNames[] = {
    {"imex", Scheme::ImexEuler},
    {"rk4", Scheme::ExplicitRk4},
};

constexpr EnumName<IcProfile> kProfileNames[] = {
    {"constant", IcProfile::Constant},
    {"gaussian_bump", IcProfile::GaussianBump},
    {"cosine_mode", IcProfile::CosineMode},
    {"from_file", IcProfile::FromFile},
    {"random", IcProfile::Random},
};

template <typename E, std::size_t N>
E parse_enum(const EnumName<E> (&table)[N], const std::string& v, const std::string& key,
             int line) {
    for (const auto& e : table)
        if (v == e.name) return e.value;
    std::string allowed;
    for (const auto& e : table) {
        if (!allowed.empty()) allowed += ", ";
        allowed += e.name;
    }
    throw ConfigError(line_prefix(line) + key + ": unknown value '" + v + "' (allowed: " +
                      allowed + ")");
}

template <typename E, std::size_t N>
const char* enum_name(const EnumName<E> (&table)[N], E value) {
    for (const auto& e : table)
        if (e.value == value) return e.name;
    return "?";
}

struct KeyDef {
    std::string name;
    bool numeric;  // sweepable
    std::function<void(RunConfig&, const std::string&, int)> set;
    std::function<std::string(const RunConfig&)> get;
};

std::string fmt_int(long long v) { return std::to_string(v); }

void add_double(std::vector<KeyDef>& keys, const char* name,
                std::function<double&(RunConfig&)> ref) {
    keys.push_back(
        {name, true,
         [ref, name](RunConfig& c, const std::string& v, int line) { ref(c) = to_double(v, name, line); },
         [ref](const RunConfig& c) { return csv_double(ref(const_cast<RunConfig&>(c))); }});
}

void add_int(std::vector<KeyDef>& keys, const char* name,
             std::function<long long(const RunConfig&)> get,
             std::function<void(RunConfig&, long long)> set) {
    keys.push_back(
        {name, true,
         [set, name](RunConfig& c, const std::string& v, int line) { set(c, to_int(v, name, line)); },
         [get](const RunConfig& c) { return fmt_int(get(c)); }});
}

void add_bool(std::vector<KeyDef>& keys, const char* name,
              std::function<bool&(RunConfig&)> ref) {
    keys.push_back(
        {name, false,
         [ref, name](RunConfig& c, const std::string& v, int line) { ref(c) = to_bool(v, name, line); },
         [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)) ? "true" : "false"; }});
}

void add_string(std::vector<KeyDef>& keys, const char* name,
                std::function<std::string&(RunConfig&)> ref) {
    keys.push_back({name, false,
                    [ref](RunConfig& c, const std::string& v, int) { ref(c) = v; },
                    [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); }});
}

template <typename E, std::size_t N>
void add_enum(std::vector<KeyDef>& keys, const char* name, const EnumName<E> (&table)[N],
              std::function<E&(RunConfig&)> ref) {
    keys.push_back({name, false,
                    [&table, ref, name](RunConfig& c, const std::string& v, int line) {
                        ref(c) = parse_enum(table, v, name, line);
                    },
                    [&table, ref](const RunConfig& c) {
                        return std::string(enum_name(table, ref(const_cast<RunConfig&>(c))));
                    }});
}

void add_ic_keys(std::vector<KeyDef>& keys, const std::string& prefix,
                 std::function<IcSpec&(RunConfig&)> ic) {
    const auto key = [&prefix](const char* suffix) { return prefix + suffix; };
    keys.push_back({key("profile"), false,
                    [ic, prefix](RunConfig& c, const std::string& v, int line) {
                        ic(c).profile = parse_enum(kProfileNames, v, prefix + "profile", line);
                    },
                    [ic](const RunConfig& c) {
                        return std::string(
                            enum_name(kProfileNames, ic(const_cast<RunConfig&>(c)).profile));
                    }});
    auto field = [&keys, &key, ic](const char* suffix, double IcSpec::*member) {
        const std::string full = key(suffix);
        keys.push_back({full, true,
                        [ic, member, full](RunConfig& c, const std::string& v, int line) {
                            ic(c).*member = to_double(v, full, line);
                        },
                        [ic, member](const RunConfig& c) {
                            return csv_double(ic(const_cast<RunConfig&>(c)).*member);
                        }});
    };
    field("value", &IcSpec::value);
    field("center", &IcSpec::center);
    field("width", &IcSpec::width);
    field("amplitude", &IcSpec::amplitude);
    field("offset", &IcSpec::offset);
    const std::string kkey = key("k");
    keys.push_back({kkey, true,
                    [ic, kkey](RunConfig& c, const std::string& v, int line) {
                        ic(c).mode_k = static_cast<int>(to_int(v, kkey, line));
                    },
                    [ic](const RunConfig& c) {
                        return fmt_int(ic(const_cast<RunConfig&>(c)).mode_k);
                    }});
    keys.push_back({key("file"), false,
                    [ic](RunConfig& c, const std::string& v, int) { ic(c).file = v; },
                    [ic](const RunConfig& c) { return ic(const_cast<RunConfig&>(c)).file; }});
    field("lo", &IcSpec::lo);
    field("hi", &IcSpec::hi);
}

const std::vector<KeyDef>& registry() {
    static const std::vector<KeyDef> keys = [] {
        std::vector<KeyDef> k;
        add_double(k, "params.D", [](RunConfig& c) -> double& { return c.params.D; });
        add_double(k, "params.H", [](RunConfig& c) -> double& { return c.params.H; });
        add_double(k, "params.chi", [](RunConfig& c) -> double& { return c.params.chi; });
        add_double(k, "params.m", [](RunConfig& c) -> double& { return c.params.m; });
        add_double(k, "params.m_p", [](RunConfig& c) -> double& { return c.params.m_p; });
        add_double(k, "params.k", [](RunConfig& c) -> double& { return c.params.k; });
        add_double(k, "params.r", [](RunConfig& c) -> double& { return c.params.r; });
        add_double(k, "params.gamma", [](RunConfig& c) -> double& { return c.params.gamma; });
        add_double(k, "params.nu", [](RunConfig& c) -> double& { return c.params.nu; });
        add_double(k, "params.n_H", [](RunConfig& c) -> double& { return c.params.n_H; });
        add_int(k, "grid.M", [](const RunConfig& c) { return static_cast<long long>(c.grid_m); },
                [](RunConfig& c, long long v) { c.grid_m = static_cast<int>(v); });
        add_enum(k, "light.model", kLightNames,
                 std::function<LightModel&(RunConfig&)>([](RunConfig& c) -> LightModel& { return c.light; }));
        add_enum(k, "response.kind", kResponseNames,
                 std::function<FunctionalResponse&(RunConfig&)>(
                     [](RunConfig& c) -> FunctionalResponse& { return c.response; }));
        add_enum(k, "solver.scheme", kSchemeNames,
                 std::function<Scheme&(RunConfig&)>([](RunConfig& c) -> Scheme& { return c.solver.scheme; }));
        add_double(k, "solver.dt", [](RunConfig& c) -> double& { return c.solver.dt; });
        add_double(k, "solver.t_end", [](RunConfig& c) -> double& { return c.solver.t_end; });
        add_int(k, "solver.snapshot_every",
                [](const RunConfig& c) { return static_cast<long long>(c.solver.snapshot_every); },
                [](RunConfig& c, long long v) { c.solver.snapshot_every = static_cast<int>(v); });
        add_double(k, "solver.positivity_tol",
                   [](RunConfig& c) -> double& { return c.solver.positivity_tol; });
        add_bool(k, "solver.clamp", [](RunConfig& c) -> bool& { return c.solver.clamp_mode; });
        add_ic_keys(k, "ic.n.", [](RunConfig& c) -> IcSpec& { return c.ic_n; });
        add_ic_keys(k, "ic.p.", [](RunConfig& c) -> IcSpec& { return c.ic_p; });
        add_double(k, "ic.z", [](RunConfig& c) -> double& { return c.ic_z; });
        k.push_back({"seed", true,
                     [](RunConfig& c, const std::string& v, int line) {
                         errno = 0;
                         char* end = nullptr;
                         const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
                         if (end == v.c_str() || *end != '\0' || errno == ERANGE)
                             throw ConfigError(line_prefix(line) + "seed: invalid integer '" + v + "'");
                         c.seed = x;
                     },
                     [](const RunConfig& c) { return std::to_string(c.seed); }});
        add_string(k, "output.dir", [](RunConfig& c) -> std::string& { return c.output_dir; });
        add_double(k, "fit.window_lo", [](RunConfig& c) -> double& { return c.fit_window_lo; });
        add_double(k, "fit.window_hi", [](RunConfig& c) -> double& { return c.fit_window_hi; });
        return k;
    }();
    return keys;
}

const KeyDef* find_key(const std::string& name) {
    for (const KeyDef& k : registry())
        if (k.name == name) return &k;
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void validate_ic(const IcSpec& ic, const std::string& prefix) {
    auto fail = [&](const char* suffix, const char* what) {
        throw ConfigError(prefix + suffix + " " + what);
    };
    switch (ic.profile) {
        case IcProfile::Constant:
            if (!std::isfinite(ic.value) || ic.value < 0.0) fail("value", "must be >= 0");
            break;
        case IcProfile::GaussianBump:
            if (!(ic.width > 0.0)) fail("width", "must be > 0");
            if (!std::isfinite(ic.center)) fail("center", "must be finite");
            if (!std::isfinite(ic.amplitude)) fail("amplitude", "must be finite");
            if (!std::isfinite(ic.offset) || ic.offset < 0.0) fail("offset", "must be >= 0");
            break;
        case IcProfile::CosineMode:
            if (ic.mode_k < 0) fail("k", "must be >= 0");
            if (!std::isfinite(ic.amplitude)) fail("amplitude", "must be finite");
            if (!std::isfinite(ic.offset) || ic.offset < 0.0) fail("offset", "must be >= 0");
            break;
        case IcProfile::FromFile:
            if (ic.file.empty()) fail("file", "must be set");
            if (!std::filesystem::exists(ic.file))
                throw ConfigError(prefix + "file: '" + ic.file + "' does not exist");
            break;
        case IcProfile::Random:
            if (!std::isfinite(ic.lo) || ic.lo < 0.0) fail("lo", "must be >= 0");
            if (!(ic.hi >= ic.lo)) fail("hi", "must be >= lo");
            break;
    }
}

void validate(const RunConfig& c) {
    c.params.validate();
    if (c.grid_m < 3) throw ConfigError("grid.M must be >= 3");
    if (!std::isfinite(c.solver.dt) || !(c.solver.dt > 0.0))
        throw ConfigError("solver.dt must be > 0");
    if (!std::isfinite(c.solver.t_end) || c.solver.t_end < 0.0)
        throw ConfigError("solver.t_end must be >= 0");
    if (c.solver.snapshot_every < 1) throw ConfigError("solver.snapshot_every must be >= 1");
    if (!std::isfinite(c.solver.positivity_tol) || c.solver.positivity_tol < 0.0)
        throw ConfigError("solver.positivity_tol must be >= 0");
    validate_ic(c.ic_n, "ic.n.");
    validate_ic(c.ic_p, "ic.p.");
    if (!std::isfinite(c.ic_z) || c.ic_z < 0.0) throw ConfigError("ic.z must be >= 0");
    if (c.output_dir.empty()) throw ConfigError("output.dir must not be empty");
    if (c.fit_window_lo >= 0.0 && c.fit_window_hi >= 0.0 &&
        !(c.fit_window_lo < c.fit_window_hi))
        throw ConfigError("fit.window_lo must be < fit.window_hi");
}

Field read_field_file(const std::string& path, int m) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open initial-condition file '" + path + "'");
    Field values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        values.push_back(to_double(t, path, lineno));
    }
    if (static_cast<int>(values.size()) != m)
        throw ConfigError("initial-condition file '" + path + "' has " +
                          std::to_string(values.size()) + " values, grid needs " +
                          std::to_string(m));
    return values;
}

// Deterministic uniform double in [lo, hi); independent of library
// distribution internals so reruns are bit-identical.
double uniform_from(std::mt19937_64& gen, double lo, double hi) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

enum class FieldRole { Nutrient, Phytoplankton };

Field build_field(const IcSpec& ic, FieldRole role, const Grid& grid, std::uint64_t seed) {
    const double pi = std::numbers::pi;
    Field f(grid.M, 0.0);
    switch (ic.profile) {
        case IcProfile::Constant:
            f.assign(grid.M, ic.value);
            break;
        case IcProfile::GaussianBump:
            for (int j = 0; j < grid.M; ++j) {
                const double d = (grid.node(j) - ic.center) / ic.width;
                f[j] = ic.offset + ic.amplitude * std::exp(-0.5 * d * d);
            }
            break;
        case IcProfile::CosineMode:
            for (int j = 0; j < grid.M; ++j) {
                const double omega = role == FieldRole::Nutrient
                                         ? (ic.mode_k + 0.5) * pi / grid.H
                                         : ic.mode_k * pi / grid.H;
                f[j] = ic.offset + ic.amplitude * std::cos(omega * grid.node(j));
            }
            break;
        case IcProfile::FromFile:
            f = read_field_file(ic.file, grid.M);
            break;
        case IcProfile::Random: {
            std::mt19937_64 gen(seed);
            for (int j = 0; j < grid.M; ++j) f[j] = uniform_from(gen, ic.lo, ic.hi);
            break;
        }
    }
    return f;
}

void require_admissible(const Field& f, const char* name) {
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (!std::isfinite(f[j]))
            throw ConfigError(std::string(name) + ": nonfinite value at node " + std::to_string(j));
        if (f[j] < 0.0)
            throw ConfigError(std::string(name) + ": initial condition must be nonnegative (node " +
                              std::to_string(j) + ", value " + csv_double(f[j]) + ")");
    }
}

}  // namespace

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* to_string(LightModel light) { return enum_name(kLightNames, light); }
const char* to_string(FunctionalResponse kind) { return enum_name(kResponseNames, kind); }
const char* to_string(Scheme scheme) { return enum_name(kSchemeNames, scheme); }
const char* to_string(IcProfile profile) { return enum_name(kProfileNames, profile); }

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_prefix(lineno) + "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(line_prefix(lineno) + "missing key before '='");
        const KeyDef* def = find_key(key);
        if (def == nullptr)
            throw ConfigError(line_prefix(lineno) + "unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw ConfigError(line_prefix(lineno) + "duplicate key '" + key + "'");
        def->set(cfg, value, lineno);
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& config) {
    std::string out;
    for (const KeyDef& k : registry()) {
        out += k.name;
        out += " = ";
        out += k.get(config);
        out += '\n';
    }
    return out;
}

void apply_override(RunConfig& config, const std::string& key, double value) {
    const KeyDef* def = find_key(key);
    if (def == nullptr) throw ConfigError("unknown key '" + key + "'");
    if (!def->numeric) throw ConfigError("key '" + key + "' is not numeric");
    def->set(config, csv_double(value), 0);
    validate(config);
}

State build_initial_state(const RunConfig& config, const Grid& grid) {
    State s;
    s.t = 0.0;
    s.n = build_field(config.ic_n, FieldRole::Nutrient, grid, config.seed);
    s.p = build_field(config.ic_p, FieldRole::Phytoplankton, grid, config.seed + 1);
    s.z = config.ic_z;
    require_admissible(s.n, "ic.n");
    require_admissible(s.p, "ic.p");
    if (!std::isfinite(s.z) || s.z < 0.0) throw ConfigError("ic.z must be >= 0");
    return s;
}

}  // namespace npz
