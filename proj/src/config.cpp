#include "flexwing/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace flexwing {

ConfigError::ConfigError(int line_, std::string key_, const std::string& message)
    : std::runtime_error([&] {
          std::string s = "config";
          if (line_ > 0) s += ":" + std::to_string(line_);
          if (!key_.empty()) s += ": key '" + key_ + "'";
          return s + ": " + message;
      }()),
      line(line_),
      key(std::move(key_)) {}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

// section -> key -> entry
using Table = std::map<std::string, std::map<std::string, Entry>>;

const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> s = {
        {"scenario", {"name"}},
        {"model",
         {"span_m", "rho_kg_per_m", "Iw_kg_m", "EI_N_m2", "GJ_N_m2_per_rad", "eta_w_s", "eta_phi_s",
          "alpha_w_N_per_m2", "beta_w_N_s_per_m2", "gamma_w_N_per_rad_m", "alpha_phi_N_per_rad",
          "beta_phi_N_s_per_rad", "gamma_phi_N_per_m", "store_mass_kg", "store_inertia_kg_m2"}},
        {"control", {"mode", "k1", "k2", "eps1", "eps2"}},
        {"disturbance", {"kind", "a1", "a2", "decay_per_s", "u1_N", "u2_N_m"}},
        {"initial", {"kind", "w0_m", "wt0_m_per_s", "phi0_rad", "phit0_rad_per_s"}},
        {"mesh", {"elements"}},
        {"time",
         {"t_end_s", "dt_s", "integrator", "newmark_beta", "newmark_gamma", "output_stride", "snapshot_positions_m",
          "mild_solution"}},
        {"verify",
         {"quadrature_panels", "quadrature_points", "lift_samples", "inverse_targets", "random_states",
          "spectrum_elements", "norm_elements"}},
        {"search", {"starts", "iterations", "refine_iterations", "seed"}},
        {"run", {"seed"}},
    };
    return s;
}

Table read_table(std::istream& is) {
    Table t;
    const auto& sch = schema();
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "", "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (!sch.count(section)) throw ConfigError(line, "", "unknown section [" + section + "]");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value', got '" + s + "'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (section.empty()) throw ConfigError(line, key, "key outside of any section");
        const auto& keys = sch.at(section);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(line, key, "unknown key in [" + section + "]");
        if (value.empty()) throw ConfigError(line, key, "empty value");
        auto& sec = t[section];
        if (sec.count(key)) throw ConfigError(line, key, "duplicate key (first at line " + std::to_string(sec[key].line) + ")");
        sec[key] = Entry{value, line, false};
    }
    return t;
}

class Reader {
public:
    explicit Reader(Table& t) : t_(t) {}

    const Entry* find(const std::string& sec, const std::string& key) {
        auto s = t_.find(sec);
        if (s == t_.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    double number(const std::string& sec, const std::string& key, double fallback) {
        const Entry* e = find(sec, key);
        if (!e) return fallback;
        double v = 0;
        if (!parse_double(e->value, v)) throw ConfigError(e->line, key, "expected a number, got '" + e->value + "'");
        return v;
    }

    long integer(const std::string& sec, const std::string& key, long fallback) {
        const Entry* e = find(sec, key);
        if (!e) return fallback;
        long v = 0;
        auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
        if (ec != std::errc() || p != e->value.data() + e->value.size())
            throw ConfigError(e->line, key, "expected an integer, got '" + e->value + "'");
        return v;
    }

    std::string word(const std::string& sec, const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& allowed) {
        const Entry* e = find(sec, key);
        if (!e) return fallback;
        if (std::find(allowed.begin(), allowed.end(), e->value) == allowed.end()) {
            std::string msg = "expected one of";
            for (const auto& a : allowed) msg += " '" + a + "'";
            throw ConfigError(e->line, key, msg + ", got '" + e->value + "'");
        }
        return e->value;
    }

    bool boolean(const std::string& sec, const std::string& key, bool fallback) {
        auto w = word(sec, key, fallback ? "true" : "false", {"true", "false"});
        return w == "true";
    }

    template <class F>
    auto wrap(const Entry* e, const std::string& key, F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ConfigError(e ? e->line : 0, key, ex.what());
        }
    }

private:
    Table& t_;
};

Polynomial parse_poly(const std::string& text) {
    auto toks = split_ws(text);
    if (toks.empty()) throw std::invalid_argument("empty polynomial");
    std::size_t start = toks[0] == "poly" ? 1 : 0;
    std::vector<double> c;
    for (std::size_t i = start; i < toks.size(); ++i) {
        double v = 0;
        if (!parse_double(toks[i], v)) throw std::invalid_argument("bad coefficient '" + toks[i] + "'");
        c.push_back(v);
    }
    if (c.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
    return Polynomial(c);
}

}  // namespace

SpatialProfile parse_profile(const std::string& text, double span) {
    auto toks = split_ws(text);
    if (toks.empty()) throw std::invalid_argument("empty profile");
    double v = 0;
    if (toks.size() == 1 && parse_double(toks[0], v)) return SpatialProfile::constant(v, span);
    if (toks[0] == "poly") return SpatialProfile::polynomial(parse_poly(text), span);
    if (toks[0] == "taper") {
        double v0 = 0, f = 0;
        if (toks.size() != 3 || !parse_double(toks[1], v0) || !parse_double(toks[2], f))
            throw std::invalid_argument("taper expects two numbers: v0 fraction");
        return SpatialProfile::polynomial(Polynomial{v0, -v0 * f / span}, span);
    }
    if (toks[0] == "samples") {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 1; i < toks.size(); ++i) {
            auto c = toks[i].find(':');
            double y = 0, val = 0;
            if (c == std::string::npos || !parse_double(toks[i].substr(0, c), y) ||
                !parse_double(toks[i].substr(c + 1), val))
                throw std::invalid_argument("bad sample '" + toks[i] + "' (expected y:value)");
            pts.emplace_back(y, val);
        }
        return SpatialProfile::piecewise_linear(std::move(pts), span);
    }
    throw std::invalid_argument("unrecognized profile '" + text + "' (number, taper, poly or samples)");
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(std::istream& is) {
    std::stringstream buffer;
    buffer << is.rdbuf();
    RunConfig c;
    c.text = buffer.str();
    std::istringstream in(c.text);
    Table table = read_table(in);
    Reader r(table);

    if (auto e = r.find("scenario", "name")) c.scenario = e->value;

    // model
    WingModel def = default_wing_model();
    const double l = r.number("model", "span_m", def.span);
    if (!(l > 0)) throw ConfigError(r.find("model", "span_m")->line, "span_m", "span must be positive");
    auto profile = [&](const std::string& key, const SpatialProfile& fallback, const char* fallback_text) {
        const Entry* e = r.find("model", key);
        if (!e) {
            if (l == def.span) return fallback;
            return r.wrap(e, key, [&] { return parse_profile(fallback_text, l); });
        }
        return r.wrap(e, key, [&] { return parse_profile(e->value, l); });
    };
    WingModel& m = c.model;
    m.span = l;
    m.rho = profile("rho_kg_per_m", def.rho, "taper 10 0.3");
    m.Iw = profile("Iw_kg_m", def.Iw, "taper 0.5 0.3");
    m.EI = profile("EI_N_m2", def.EI, "taper 150 0.5");
    m.GJ = profile("GJ_N_m2_per_rad", def.GJ, "taper 100 0.5");
    m.eta_w = profile("eta_w_s", def.eta_w, "0.02");
    m.eta_phi = profile("eta_phi_s", def.eta_phi, "0.02");
    m.alpha_w = profile("alpha_w_N_per_m2", def.alpha_w, "0.1");
    m.beta_w = profile("beta_w_N_s_per_m2", def.beta_w, "0.01");
    m.gamma_w = profile("gamma_w_N_per_rad_m", def.gamma_w, "0.01");
    m.alpha_phi = profile("alpha_phi_N_per_rad", def.alpha_phi, "0.1");
    m.beta_phi = profile("beta_phi_N_s_per_rad", def.beta_phi, "0.01");
    m.gamma_phi = profile("gamma_phi_N_per_m", def.gamma_phi, "0.01");
    m.store_mass = r.number("model", "store_mass_kg", def.store_mass);
    m.store_inertia = r.number("model", "store_inertia_kg_m2", def.store_inertia);
    r.wrap(nullptr, "", [&] { validate(m); });

    // control
    c.mode = r.word("control", "mode", "closed-loop", {"closed-loop", "open-loop"}) == "open-loop" ? LoopMode::OpenLoop
                                                                                                  : LoopMode::ClosedLoop;
    c.law.k1 = r.number("control", "k1", c.law.k1);
    c.law.k2 = r.number("control", "k2", c.law.k2);
    {
        const Entry* e1 = r.find("control", "eps1");
        const Entry* e2 = r.find("control", "eps2");
        bool a1 = e1 && e1->value == "auto";
        bool a2 = e2 && e2->value == "auto";
        if (a1 != a2) throw ConfigError((e1 ? e1 : e2)->line, a1 ? "eps2" : "eps1", "eps1 and eps2 must both be 'auto' or both numeric");
        c.eps_auto = a1;
        if (!c.eps_auto) {
            c.law.eps1 = r.number("control", "eps1", c.law.eps1);
            c.law.eps2 = r.number("control", "eps2", c.law.eps2);
        }
    }
    if (c.law.k1 < 0 || c.law.k2 < 0) throw ConfigError(r.find("control", c.law.k1 < 0 ? "k1" : "k2")->line, c.law.k1 < 0 ? "k1" : "k2", "gain must be >= 0");
    if (!c.eps_auto) r.wrap(r.find("control", "eps1"), "eps1", [&] { validate(c.law); });

    // disturbance
    {
        auto kind = r.word("disturbance", "kind", "zero",
                           {"zero", "persistent", "exponentially-vanishing", "constant"});
        const double a1 = r.number("disturbance", "a1", 3.0);
        const double a2 = r.number("disturbance", "a2", 1.0);
        const double decay = r.number("disturbance", "decay_per_s", 1.0);
        const double u1 = r.number("disturbance", "u1_N", 0.0);
        const double u2 = r.number("disturbance", "u2_N_m", 0.0);
        if (kind == "persistent") c.disturbance = Disturbance::modulated(a1, a2);
        else if (kind == "exponentially-vanishing") {
            if (!(decay > 0)) throw ConfigError(r.find("disturbance", "decay_per_s")->line, "decay_per_s", "decay must be positive");
            c.disturbance = Disturbance::exponentially_vanishing(a1, a2, decay);
        } else if (kind == "constant") c.disturbance = Disturbance::constant(u1, u2);
        else c.disturbance = Disturbance::zero();
    }

    // initial data
    c.initial_kind = r.word("initial", "kind", "zero", {"zero", "reference", "poly"});
    if (c.initial_kind == "reference") c.initial = reference_initial_condition(l);
    else if (c.initial_kind == "poly") {
        auto poly = [&](const std::string& key) {
            const Entry* e = r.find("initial", key);
            if (!e) return Polynomial{0.0};
            return r.wrap(e, key, [&] { return parse_poly(e->value); });
        };
        c.initial = {poly("w0_m"), poly("wt0_m_per_s"), poly("phi0_rad"), poly("phit0_rad_per_s")};
        r.wrap(r.find("initial", "w0_m"), "w0_m", [&] { check_root_constraints(c.initial); });
    } else c.initial = zero_initial_condition();

    // mesh, time
    c.elements = static_cast<int>(r.integer("mesh", "elements", c.elements));
    if (c.elements < 1) throw ConfigError(r.find("mesh", "elements")->line, "elements", "need at least one element");
    SimulationConfig& s = c.sim;
    s.t_end = r.number("time", "t_end_s", s.t_end);
    s.dt = r.number("time", "dt_s", s.dt);
    s.integrator = r.word("time", "integrator", "newmark", {"newmark", "expm"}) == "expm" ? Integrator::MatrixExponential
                                                                                         : Integrator::Newmark;
    s.beta = r.number("time", "newmark_beta", s.beta);
    s.gamma = r.number("time", "newmark_gamma", s.gamma);
    s.output_stride = static_cast<int>(r.integer("time", "output_stride", s.output_stride));
    s.mild_solution = r.boolean("time", "mild_solution", false);
    if (const Entry* e = r.find("time", "snapshot_positions_m")) {
        for (const auto& tok : split_ws(e->value)) {
            double y = 0;
            if (!parse_double(tok, y) || y < 0 || y > l)
                throw ConfigError(e->line, "snapshot_positions_m", "position '" + tok + "' is not in [0, span]");
            s.snapshot_positions.push_back(y);
        }
    } else {
        s.snapshot_positions = {0.25 * l, 0.5 * l, 0.75 * l, l};
    }
    r.wrap(r.find("time", "dt_s"), "dt_s", [&] { s.validate(); });

    // verify
    VerifyOptions& v = c.verify;
    v.quadrature.panels = static_cast<int>(r.integer("verify", "quadrature_panels", v.quadrature.panels));
    v.quadrature.points = static_cast<int>(r.integer("verify", "quadrature_points", v.quadrature.points));
    if (v.quadrature.panels < 1 || v.quadrature.points < 1)
        throw ConfigError(r.find("verify", "quadrature_points") ? r.find("verify", "quadrature_points")->line : 0,
                          "quadrature_points", "quadrature needs >= 1 panel and point");
    v.lift_samples = static_cast<int>(r.integer("verify", "lift_samples", v.lift_samples));
    v.inverse_targets = static_cast<int>(r.integer("verify", "inverse_targets", v.inverse_targets));
    v.random_states = static_cast<int>(r.integer("verify", "random_states", v.random_states));
    v.spectrum_elements = static_cast<int>(r.integer("verify", "spectrum_elements", v.spectrum_elements));
    v.norm_elements = static_cast<int>(r.integer("verify", "norm_elements", v.norm_elements));

    // search
    SearchOptions& so = c.search;
    so.starts = static_cast<int>(r.integer("search", "starts", so.starts));
    so.iterations = static_cast<int>(r.integer("search", "iterations", so.iterations));
    so.refine_iterations = static_cast<int>(r.integer("search", "refine_iterations", so.refine_iterations));
    so.seed = static_cast<std::uint64_t>(r.integer("search", "seed", static_cast<long>(so.seed)));
    if (so.starts < 1) throw ConfigError(r.find("search", "starts")->line, "starts", "need at least one start");

    c.seed = static_cast<std::uint64_t>(r.integer("run", "seed", 1));
    v.seed = c.seed;
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "", "cannot open '" + path.string() + "'");
    return parse_config(in);
}

}  // namespace flexwing
