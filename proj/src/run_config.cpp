#include "sqg/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sqg {

namespace {

struct Value {
    enum class Kind { number, text, list } kind = Kind::number;
    double num = 0.0;
    std::string text;
    std::vector<Value> items;
};

struct Parser {
    std::string key_path(const std::string& section, const std::string& key) const {
        return section + "." + key;
    }

    // Parses one value from s starting at pos (after '=').
    Value parse_value(const std::string& s, std::size_t& pos, const std::string& where) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size()) throw ConfigError(where, "missing value");
        if (s[pos] == '[') {
            ++pos;
            Value v;
            v.kind = Value::Kind::list;
            for (;;) {
                while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ','))
                    ++pos;
                if (pos >= s.size()) throw ConfigError(where, "unterminated list");
                if (s[pos] == ']') {
                    ++pos;
                    return v;
                }
                v.items.push_back(parse_value(s, pos, where));
            }
        }
        if (s[pos] == '"') {
            const std::size_t end = s.find('"', pos + 1);
            if (end == std::string::npos) throw ConfigError(where, "unterminated string");
            Value v;
            v.kind = Value::Kind::text;
            v.text = s.substr(pos + 1, end - pos - 1);
            pos = end + 1;
            return v;
        }
        std::size_t end = pos;
        while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end])) && s[end] != ',' &&
               s[end] != ']')
            ++end;
        const std::string tok = s.substr(pos, end - pos);
        pos = end;
        Value v;
        try {
            std::size_t used = 0;
            v.num = std::stod(tok, &used);
            if (used == tok.size()) {
                v.kind = Value::Kind::number;
                return v;
            }
        } catch (...) {
        }
        v.kind = Value::Kind::text;
        v.text = tok;
        return v;
    }
};

using Section = std::map<std::string, Value>;

std::map<std::string, Section> tokenize(const std::string& text) {
    std::map<std::string, Section> sections;
    std::istringstream is(text);
    std::string line, section;
    Parser p;
    std::string pending_key, pending_value;
    int bracket_depth = 0;

    auto strip_comment = [](std::string s) {
        bool in_str = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') in_str = !in_str;
            if (s[i] == '#' && !in_str) return s.substr(0, i);
        }
        return s;
    };
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    auto commit = [&](const std::string& key, const std::string& raw) {
        if (section.empty()) throw ConfigError(key, "key appears before any [section]");
        if (sections[section].count(key))
            throw ConfigError(p.key_path(section, key), "duplicate key");
        std::size_t pos = 0;
        Value v = p.parse_value(raw, pos, p.key_path(section, key));
        while (pos < raw.size() && std::isspace(static_cast<unsigned char>(raw[pos]))) ++pos;
        if (pos != raw.size()) throw ConfigError(p.key_path(section, key), "trailing characters after value");
        sections[section][key] = std::move(v);
    };

    while (std::getline(is, line)) {
        line = trim(strip_comment(line));
        if (bracket_depth > 0) {
            pending_value += " " + line;
            for (char c : line) {
                if (c == '[') ++bracket_depth;
                if (c == ']') --bracket_depth;
            }
            if (bracket_depth == 0) commit(pending_key, pending_value);
            continue;
        }
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError("", "empty section name");
            sections.try_emplace(section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(section, "expected key = value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        int depth = 0;
        for (char c : raw) {
            if (c == '[') ++depth;
            if (c == ']') --depth;
        }
        if (depth > 0) {
            pending_key = key;
            pending_value = raw;
            bracket_depth = depth;
            continue;
        }
        commit(key, raw);
    }
    if (bracket_depth > 0) throw ConfigError(pending_key, "unterminated list at end of file");
    return sections;
}

double as_number(const Value& v, const std::string& where) {
    if (v.kind == Value::Kind::text && (v.text == "inf" || v.text == "infinity"))
        return INFINITY;
    if (v.kind != Value::Kind::number) throw ConfigError(where, "expected a number");
    return v.num;
}

long as_integer(const Value& v, const std::string& where) {
    const double x = as_number(v, where);
    if (std::floor(x) != x) throw ConfigError(where, "expected an integer");
    return static_cast<long>(x);
}

std::string as_text(const Value& v, const std::string& where) {
    if (v.kind != Value::Kind::text) throw ConfigError(where, "expected a name or string");
    return v.text;
}

std::vector<Mode> as_modes(const Value& v, const std::string& where) {
    if (v.kind != Value::Kind::list) throw ConfigError(where, "expected a list of [k1,k2,re,im]");
    std::vector<Mode> modes;
    for (const auto& item : v.items) {
        if (item.kind != Value::Kind::list || item.items.size() != 4)
            throw ConfigError(where, "each mode must be [k1, k2, re, im]");
        Mode m;
        m.k1 = static_cast<int>(as_integer(item.items[0], where));
        m.k2 = static_cast<int>(as_integer(item.items[1], where));
        m.amplitude = {as_number(item.items[2], where), as_number(item.items[3], where)};
        modes.push_back(m);
    }
    return modes;
}

class SectionReader {
  public:
    SectionReader(const std::map<std::string, Section>& all, const std::string& name)
        : name_(name) {
        auto it = all.find(name);
        if (it != all.end()) section_ = &it->second;
    }
    bool present() const { return section_ != nullptr; }

    const Value* get(const std::string& key) {
        seen_.insert(key);
        if (!section_) return nullptr;
        auto it = section_->find(key);
        return it == section_->end() ? nullptr : &it->second;
    }

    void finish() const {
        if (!section_) return;
        for (const auto& [key, value] : *section_)
            if (!seen_.count(key))
                throw ConfigError(name_ + "." + key, "unknown key (strict parsing rejects typos)");
    }

    std::string path(const std::string& key) const { return name_ + "." + key; }

  private:
    const Section* section_ = nullptr;
    std::string name_;
    std::set<std::string> seen_;
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    const auto sections = tokenize(text);
    static const std::set<std::string> known_sections = {"domain", "params",     "forcing",
                                                         "initial", "experiment", "constants",
                                                         "output"};
    for (const auto& [name, body] : sections)
        if (!known_sections.count(name))
            throw ConfigError(name, "unknown section (strict parsing rejects typos)");

    RunConfig cfg;
    cfg.echo = text;

    {
        SectionReader s(sections, "domain");
        double L = 1.0;
        long N = 0;
        if (const Value* v = s.get("L")) L = as_number(*v, s.path("L"));
        if (const Value* v = s.get("N")) N = as_integer(*v, s.path("N"));
        s.finish();
        if (N == 0) throw ConfigError("domain.N", "grid size is required");
        if (!(L > 0.0)) throw ConfigError("domain.L", "side length must be positive");
        if (N < 8 || N % 2 != 0)
            throw ConfigError("domain.N", "grid size must be an even integer >= 8");
        cfg.domain = make_domain(L, static_cast<int>(N));
    }
    {
        SectionReader s(sections, "params");
        if (const Value* v = s.get("nu")) cfg.params.nu = as_number(*v, s.path("nu"));
        if (const Value* v = s.get("alpha")) cfg.params.alpha = as_number(*v, s.path("alpha"));
        if (const Value* v = s.get("p")) cfg.params.p = as_number(*v, s.path("p"));
        if (const Value* v = s.get("l")) cfg.params.l = as_number(*v, s.path("l"));
        s.finish();
        if (!(cfg.params.nu > 0.0)) throw ConfigError("params.nu", "viscosity must be positive");
        if (!(cfg.params.alpha > 1.0 && cfg.params.alpha < 2.0))
            throw ConfigError("params.alpha", "dissipation order must lie in the open interval (1,2)");
        if (!(cfg.params.p > 2.0 / cfg.params.alpha))
            throw ConfigError("params.p", "force integrability exponent must exceed 2/alpha");
        if (!admissible_l(cfg.params.alpha, cfg.params.l))
            throw ConfigError("params.l", "Besov exponent must exceed alpha/(alpha-1) (strictly)");
    }
    {
        SectionReader s(sections, "forcing");
        if (const Value* v = s.get("modes"))
            cfg.params.forcing.modes = as_modes(*v, s.path("modes"));
        if (const Value* v = s.get("modulation")) {
            const std::string m = as_text(*v, s.path("modulation"));
            if (m == "constant") cfg.params.forcing.modulation = ModulationKind::constant;
            else if (m == "exp_decay") cfg.params.forcing.modulation = ModulationKind::exp_decay;
            else if (m == "sinusoid") cfg.params.forcing.modulation = ModulationKind::sinusoid;
            else throw ConfigError(s.path("modulation"), "must be constant, exp_decay or sinusoid");
        }
        if (const Value* v = s.get("param"))
            cfg.params.forcing.param = as_number(*v, s.path("param"));
        s.finish();
        for (const auto& m : cfg.params.forcing.modes) {
            if (m.k1 == 0 && m.k2 == 0)
                throw ConfigError("forcing.modes", "the mean mode (0,0) is not allowed");
            if (!cfg.domain.inside_dealias(m.k1, m.k2))
                throw ConfigError("forcing.modes", "mode (" + std::to_string(m.k1) + "," +
                                                       std::to_string(m.k2) +
                                                       ") lies outside the dealias ball");
        }
    }
    {
        SectionReader s(sections, "initial");
        if (const Value* v = s.get("band")) {
            if (v->kind != Value::Kind::list || v->items.size() != 2)
                throw ConfigError(s.path("band"), "expected [lo, hi]");
            cfg.init.shape.band_lo = as_number(v->items[0], s.path("band"));
            cfg.init.shape.band_hi = as_number(v->items[1], s.path("band"));
        }
        if (const Value* v = s.get("decay")) cfg.init.shape.decay = as_number(*v, s.path("decay"));
        if (const Value* v = s.get("amplitude"))
            cfg.init.amplitude = as_number(*v, s.path("amplitude"));
        s.finish();
        if (cfg.init.shape.band_lo > cfg.init.shape.band_hi)
            throw ConfigError("initial.band", "band is empty");
        if (cfg.init.shape.band_hi > cfg.domain.dealias_radius)
            throw ConfigError("initial.band", "band exceeds the dealias radius");
        if (!(cfg.init.amplitude > 0.0))
            throw ConfigError("initial.amplitude", "amplitude must be positive");
    }
    {
        SectionReader s(sections, "experiment");
        ExperimentConfig& e = cfg.experiment;
        if (const Value* v = s.get("seed_theta1"))
            e.seed_theta1 = static_cast<std::uint64_t>(as_integer(*v, s.path("seed_theta1")));
        if (const Value* v = s.get("seed_theta2"))
            e.seed_theta2 = static_cast<std::uint64_t>(as_integer(*v, s.path("seed_theta2")));
        if (const Value* v = s.get("spinup")) e.spinup = as_number(*v, s.path("spinup"));
        if (const Value* v = s.get("horizon")) e.horizon = as_number(*v, s.path("horizon"));
        if (const Value* v = s.get("cadence"))
            e.cadence = static_cast<int>(as_integer(*v, s.path("cadence")));
        if (const Value* v = s.get("dt_max")) e.dt_max = as_number(*v, s.path("dt_max"));
        if (const Value* v = s.get("Q")) {
            if (v->kind == Value::Kind::text && v->text == "auto")
                e.Q.reset();
            else
                e.Q = static_cast<int>(as_integer(*v, s.path("Q")));
        }
        if (const Value* v = s.get("projection")) {
            const std::string m = as_text(*v, s.path("projection"));
            if (m == "smooth_lp") e.projection = ProjectionKind::smooth_lp;
            else if (m == "sharp_truncation") e.projection = ProjectionKind::sharp_truncation;
            else throw ConfigError(s.path("projection"), "must be smooth_lp or sharp_truncation");
        }
        if (const Value* v = s.get("epsilon")) e.epsilon = as_number(*v, s.path("epsilon"));
        if (const Value* v = s.get("gamma")) e.gamma = as_number(*v, s.path("gamma"));
        if (const Value* v = s.get("pert_modes")) e.pert_modes = as_modes(*v, s.path("pert_modes"));
        if (const Value* v = s.get("Q_list")) {
            if (v->kind != Value::Kind::list) throw ConfigError(s.path("Q_list"), "expected a list");
            for (const auto& item : v->items)
                e.Q_list.push_back(static_cast<int>(as_integer(item, s.path("Q_list"))));
        }
        if (const Value* v = s.get("seeds")) {
            if (v->kind != Value::Kind::list) throw ConfigError(s.path("seeds"), "expected a list");
            for (const auto& item : v->items)
                e.seeds.push_back(static_cast<std::uint64_t>(as_integer(item, s.path("seeds"))));
        }
        if (const Value* v = s.get("sync_tol")) e.sync_tol = as_number(*v, s.path("sync_tol"));
        if (const Value* v = s.get("desync_tol")) e.desync_tol = as_number(*v, s.path("desync_tol"));
        if (const Value* v = s.get("fit_settle")) e.fit_settle = as_number(*v, s.path("fit_settle"));
        s.finish();
        if (!(e.horizon > 0.0)) throw ConfigError("experiment.horizon", "horizon must be positive");
        if (e.spinup < 0.0 || e.spinup >= e.horizon)
            throw ConfigError("experiment.spinup", "need 0 <= spinup < horizon");
        if (e.cadence < 1) throw ConfigError("experiment.cadence", "cadence must be >= 1");
        if (!(e.dt_max > 0.0)) throw ConfigError("experiment.dt_max", "dt_max must be positive");
        if (e.Q && *e.Q < -1) throw ConfigError("experiment.Q", "Q must be >= -1 (or auto)");
        if (!std::is_sorted(e.Q_list.begin(), e.Q_list.end()))
            throw ConfigError("experiment.Q_list", "list must be ascending");
        if (e.epsilon < 0.0) throw ConfigError("experiment.epsilon", "epsilon must be >= 0");
        for (const auto& m : e.pert_modes)
            if ((m.k1 == 0 && m.k2 == 0) || !cfg.domain.inside_dealias(m.k1, m.k2))
                throw ConfigError("experiment.pert_modes", "perturbation modes must be nonzero and dealiased");
    }
    {
        SectionReader s(sections, "constants");
        if (const Value* v = s.get("c_infty")) cfg.constants.c_infty = as_number(*v, s.path("c_infty"));
        if (const Value* v = s.get("c_thm")) cfg.constants.c_thm = as_number(*v, s.path("c_thm"));
        if (const Value* v = s.get("c_linfty"))
            cfg.constants.c_linfty = as_number(*v, s.path("c_linfty"));
        s.finish();
        try {
            cfg.constants.validate();
        } catch (const std::exception& e) {
            throw ConfigError("constants", e.what());
        }
    }
    {
        SectionReader s(sections, "output");
        if (const Value* v = s.get("directory")) cfg.output_dir = as_text(*v, s.path("directory"));
        s.finish();
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("", "cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

int RunConfig::resolved_Q() const {
    if (experiment.Q) return *experiment.Q;
    const AbsorbingRadii radii =
        compute_Rinfty(domain, params.forcing, params.nu, params.alpha, params.p, constants);
    return compute_determining_Q(radii.Rinfty_sharp, params.nu, params.alpha, params.l, constants,
                                 domain.lambda0)
        .Q;
}

TwinConfig RunConfig::twin_config() const {
    TwinConfig t;
    t.domain = domain;
    t.params = params;
    t.constants = constants;
    t.Q = resolved_Q();
    t.projection = experiment.projection;
    t.seed1 = experiment.seed_theta1;
    t.seed2 = experiment.seed_theta2;
    t.init = init;
    t.spinup = experiment.spinup;
    t.horizon = experiment.horizon;
    t.cadence = experiment.cadence;
    t.dt_max = experiment.dt_max;
    t.sync_tol = experiment.sync_tol;
    t.desync_tol = experiment.desync_tol;
    t.fit_settle = experiment.fit_settle;
    return t;
}

}  // namespace sqg
