#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lns1d/cli.hpp"
#include "lns1d/errors.hpp"

namespace lns1d {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end || v.empty()) {
        throw ValidationError("config: '" + key + "' expects a number, got '" + v + "'");
    }
    return x;
}

long long parse_integer(const std::string& key, const std::string& v) {
    long long x = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end || v.empty()) {
        throw ValidationError("config: '" + key + "' expects an integer, got '" + v + "'");
    }
    return x;
}

int parse_int(const std::string& key, const std::string& v) {
    const long long x = parse_integer(key, v);
    if (x < -2147483647LL || x > 2147483647LL) {
        throw ValidationError("config: '" + key + "' is out of range");
    }
    return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValidationError("config: '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& s : split_list(v)) {
        out.push_back(parse_double(key, s));
    }
    return out;
}

std::vector<int> parse_ints(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& s : split_list(v)) {
        out.push_back(parse_int(key, s));
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

// Ordered so that config_keys() doubles as documentation order.
const std::vector<std::pair<std::string, Setter>>& schema() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"scenario.kind", [](RunConfig& c, const auto&, const auto& v) {
             c.scenario.kind = scenario_kind_from_string(v);
         }},
        {"scenario.name", [](RunConfig& c, const auto&, const auto& v) { c.scenario.name = v; }},
        {"scenario.c", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.c = parse_double(k, v); }},
        {"scenario.amp", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.amp = parse_double(k, v); }},
        {"scenario.modes", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.modes = parse_ints(k, v); }},
        {"scenario.seed", [](RunConfig& c, const auto& k, const auto& v) {
             const long long s = parse_integer(k, v);
             if (s < 0) throw ValidationError("config: 'scenario.seed' must be >= 0");
             c.scenario.seed = static_cast<std::uint64_t>(s);
         }},
        {"scenario.u_min", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.u_range.first = parse_double(k, v); }},
        {"scenario.u_max", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.u_range.second = parse_double(k, v); }},
        {"scenario.theta_min", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.theta_range.first = parse_double(k, v); }},
        {"scenario.theta_max", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.theta_range.second = parse_double(k, v); }},
        {"scenario.v_amp", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.v_amp = parse_double(k, v); }},
        {"scenario.n", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.n = parse_int(k, v); }},
        {"scenario.t_hat_end", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.t_hat_end = parse_double(k, v); }},
        {"scenario.sample_every", [](RunConfig& c, const auto& k, const auto& v) { c.scenario.sample_every = parse_double(k, v); }},

        {"params.beta", [](RunConfig& c, const auto& k, const auto& v) { c.params.beta = parse_double(k, v); }},
        {"params.alpha", [](RunConfig& c, const auto& k, const auto& v) { c.params.alpha = parse_double(k, v); }},
        {"params.conduction", [](RunConfig& c, const auto& k, const auto& v) { c.params.conduction = parse_bool(k, v); }},

        {"scheme.dt_init", [](RunConfig& c, const auto& k, const auto& v) { c.scheme.dt_init = parse_double(k, v); }},
        {"scheme.dt_max", [](RunConfig& c, const auto& k, const auto& v) { c.scheme.dt_max = parse_double(k, v); }},
        {"scheme.dt_min", [](RunConfig& c, const auto& k, const auto& v) { c.scheme.dt_min = parse_double(k, v); }},
        {"scheme.safety", [](RunConfig& c, const auto& k, const auto& v) { c.scheme.safety = parse_double(k, v); }},
        {"scheme.picard_max", [](RunConfig& c, const auto& k, const auto& v) { c.scheme.picard_max = parse_int(k, v); }},
        {"scheme.picard_tol", [](RunConfig& c, const auto& k, const auto& v) { c.scheme.picard_tol = parse_double(k, v); }},
        {"scheme.positivity_floor", [](RunConfig& c, const auto& k, const auto& v) { c.scheme.positivity_floor = parse_double(k, v); }},

        {"output.dir", [](RunConfig& c, const auto& k, const auto& v) {
             if (v.empty()) throw ValidationError("config: '" + k + "' must not be empty");
             c.out_dir = v;
         }},
        {"output.snapshot_times", [](RunConfig& c, const auto& k, const auto& v) { c.snapshot_times = parse_doubles(k, v); }},
        {"output.original_time", [](RunConfig& c, const auto& k, const auto& v) { c.original_time = parse_bool(k, v); }},

        {"verify.betas", [](RunConfig& c, const auto& k, const auto& v) { c.verify_betas = parse_doubles(k, v); }},
        {"verify.ladder", [](RunConfig& c, const auto& k, const auto& v) { c.verify_ladder = parse_ints(k, v); }},
        {"verify.ladder_t_hat", [](RunConfig& c, const auto& k, const auto& v) { c.verify_ladder_t_hat = parse_double(k, v); }},
        {"verify.cross_t", [](RunConfig& c, const auto& k, const auto& v) { c.verify_cross_t = parse_double(k, v); }},

        {"convergence.levels", [](RunConfig& c, const auto& k, const auto& v) {
             // n:dt pairs, e.g. "32:1e-3, 64:5e-4"
             c.convergence_levels.clear();
             for (const auto& item : split_list(v)) {
                 const auto colon = item.find(':');
                 if (colon == std::string::npos) {
                     throw ValidationError("config: '" + k + "' expects n:dt pairs, got '" + item + "'");
                 }
                 c.convergence_levels.push_back({parse_int(k, trim(item.substr(0, colon))),
                                                 parse_double(k, trim(item.substr(colon + 1)))});
             }
         }},
        {"convergence.t_hat", [](RunConfig& c, const auto& k, const auto& v) { c.convergence_t_hat = parse_double(k, v); }},
    };
    return table;
}

} // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, setter] : schema()) {
            k.push_back(name);
        }
        return k;
    }();
    return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& [name, setter] : schema()) {
        if (name == key) {
            setter(cfg, key, value);
            return;
        }
    }
    throw ValidationError("config: unknown key '" + key + "'");
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        try {
            apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

RunConfig load_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides) {
    RunConfig cfg;
    if (path) {
        std::ifstream in(*path);
        if (!in) {
            throw ValidationError("cannot read config file '" + path->string() + "'");
        }
        std::stringstream buf;
        buf << in.rdbuf();
        apply_config_text(cfg, buf.str());
    }
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("--set expects key=value, got '" + o + "'");
        }
        apply_setting(cfg, trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
    }
    if (const char* env = std::getenv("LNS1D_OUT_DIR"); env != nullptr && *env != '\0') {
        cfg.out_dir = env;
    }
    cfg.scenario.beta = cfg.params.beta;
    cfg.scenario.alpha = cfg.params.alpha;
    return cfg;
}

} // namespace lns1d
