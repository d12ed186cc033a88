#include "flexwing/certificates.hpp"

#include <cmath>
#include <future>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

namespace flexwing {

namespace {

using std::numbers::pi;

double sq(double x) { return x * x; }

}  // namespace

bool ModelBounds::exact() const {
    return rho.exact && Iw.exact && EI.exact && GJ.exact && eta_w.exact && eta_phi.exact && eta_EI.exact &&
           eta_GJ.exact;
}

ModelBounds model_bounds(const WingModel& m) {
    validate(m);
    ModelBounds b;
    b.span = m.span;
    b.rho = m.rho.bounds();
    b.Iw = m.Iw.bounds();
    b.EI = m.EI.bounds();
    b.GJ = m.GJ.bounds();
    b.eta_w = m.eta_w.bounds();
    b.eta_phi = m.eta_phi.bounds();
    b.eta_EI = product_bounds(m.eta_w, m.EI);
    b.eta_GJ = product_bounds(m.eta_phi, m.GJ);
    b.alpha_w = m.alpha_w.bounds().abs_sup();
    b.beta_w = m.beta_w.bounds().abs_sup();
    b.gamma_w = m.gamma_w.bounds().abs_sup();
    b.alpha_phi = m.alpha_phi.bounds().abs_sup();
    b.beta_phi = m.beta_phi.bounds().abs_sup();
    b.gamma_phi = m.gamma_phi.bounds().abs_sup();
    return b;
}

double compute_Km(const ModelBounds& b) {
    if (!(b.EI.inf > 0.0) || !(b.GJ.inf > 0.0) || !(b.rho.inf > 0.0) || !(b.Iw.inf > 0.0))
        throw PreconditionError("K_m needs positive essential infima of rho, Iw, EI, GJ");
    const double l = b.span;
    const double t1 = std::sqrt(b.rho.sup);
    const double t2 = 16.0 * std::pow(l, 4) * std::sqrt(b.rho.sup) / (std::pow(pi, 4) * b.EI.inf);
    const double t3 = std::sqrt(b.Iw.sup);
    const double t4 = 4.0 * l * l * std::sqrt(b.Iw.sup) / (pi * pi * b.GJ.inf);
    return std::max({t1, t2, t3, t4});
}

double compute_Km(const WingModel& model) { return compute_Km(model_bounds(model)); }

EpsStars compute_eps_stars(const ModelBounds& b) {
    const double l = b.span;
    const double p4 = std::pow(pi, 4);
    EpsStars e;
    e.eps1 = 4.0 * p4 * b.eta_EI.inf / (64.0 * std::pow(l, 4) * b.rho.sup + p4 * b.eta_w.sup * b.eta_EI.inf);
    e.eps2 = 4.0 * pi * pi * b.eta_GJ.inf / (16.0 * l * l * b.Iw.sup + pi * pi * b.eta_phi.sup * b.eta_GJ.inf);
    return e;
}

EpsStars compute_eps_stars(const WingModel& model) { return compute_eps_stars(model_bounds(model)); }

Lambdas compute_lambdas(const ModelBounds& b, const CertificateParameters& p) {
    const double l = b.span;
    const double l2 = l * l, l4 = l2 * l2;
    const double p2 = pi * pi, p4 = p2 * p2;
    const double rs = b.rho.sup, ri = b.rho.inf;
    const double Is = b.Iw.sup, Ii = b.Iw.inf;
    const double EIi = b.EI.inf, GJi = b.GJ.inf;
    const double ew = b.eta_w.sup, ep = b.eta_phi.sup;
    const double eEI = b.eta_EI.inf, eGJ = b.eta_GJ.inf;
    const double aw = b.alpha_w, bw = b.beta_w, gw = b.gamma_w;
    const double ap = b.alpha_phi, bp = b.beta_phi, gp = b.gamma_phi;
    const auto& r = p.r;
    const double e1 = p.eps1, e2 = p.eps2;

    // shared groupings
    const double g6 = std::sqrt(rs * ri) * aw + e2 * Is * gp;
    const double g7 = std::sqrt(rs) * bw / std::sqrt(Ii) + std::sqrt(Is) * gp / std::sqrt(ri);
    const double g8 = std::sqrt(Is) * (ap + e2 * bp);

    Lambdas out;
    auto& L = out.lambda;
    L[0] = e1 * (1.0 - std::sqrt(ew) / (2.0 * r[0]) -
                 (8.0 * l4 * rs / (p4 * EIi)) * (aw / r[3] + bw / r[4] + gw / (std::sqrt(rs) * r[2])));
    L[1] = gw + g6 / (2.0 * std::sqrt(ri) * r[5]) + e1 * std::sqrt(rs) * gw * r[2] / 2.0 + g7 / (2.0 * r[6]);
    L[2] = 1.0 - e1 * (16.0 * l4 * rs / (p4 * eEI) + std::sqrt(ew) * r[0] / 2.0);
    L[3] = e2 * (1.0 - std::sqrt(ep) / (2.0 * r[1])) -
           (4.0 * l2 / (p2 * GJi)) *
               (g6 * r[5] / (2.0 * std::sqrt(ri)) + g8 / (2.0 * r[7]) + e1 * rs * aw * r[3] / 2.0 + e2 * Is * ap);
    L[4] = bp + g7 * r[6] / 2.0 + g8 * r[7] / 2.0 + e1 * rs * bw * r[4] / (2.0 * Ii);
    L[5] = 1.0 - e2 * (4.0 * l2 * Is / (p2 * eGJ) + std::sqrt(ep) * r[1] / 2.0);
    out.c2 = p4 * eEI * L[2] / (16.0 * l4 * rs) - L[1];
    out.c5 = p2 * eGJ * L[5] / (4.0 * l2 * Is) - L[4];
    return out;
}

double compute_mu(const Lambdas& l) { return 2.0 * std::min({l.lambda[0], l.c2, l.lambda[3], l.c5}); }

double compute_decay_rate(double mu, double eps_m, double Km) { return mu / (1.0 + eps_m * Km); }

double compute_KE(double eps_m, double Km) {
    const double x = Km * eps_m;
    if (!(x < 1.0)) throw PreconditionError("K_E requires K_m eps_m < 1");
    return std::sqrt((1.0 + x) / (1.0 - x));
}

void check_certificate_preconditions(const ModelBounds& b, const CertificateParameters& p) {
    for (int i = 0; i < 8; ++i)
        if (!(p.r[i] > 0.0)) throw PreconditionError("slack parameter r" + std::to_string(i + 1) + " must be positive");
    const double Km = compute_Km(b);
    const EpsStars s = compute_eps_stars(b);
    const auto check = [&](double eps, double star, const char* name) {
        const double cap = std::min(star, 1.0 / Km);
        if (!(eps > 0.0) || !(eps < cap)) {
            std::ostringstream os;
            os.precision(10);
            os << name << " = " << eps << " outside (0, min(" << name << "*, 1/K_m)) = (0, " << cap << "); " << name
               << "* = " << star << ", 1/K_m = " << 1.0 / Km;
            throw PreconditionError(os.str());
        }
    };
    check(p.eps1, s.eps1, "eps1");
    check(p.eps2, s.eps2, "eps2");
}

bool check_assumption2(const ModelBounds& b, const CertificateParameters& p) {
    check_certificate_preconditions(b, p);
    const Lambdas l = compute_lambdas(b, p);
    const auto& L = l.lambda;
    return L[0] > kStrictMargin && L[1] >= 0.0 && L[2] > kStrictMargin && L[3] > kStrictMargin && L[4] >= 0.0 &&
           L[5] > kStrictMargin && l.c2 > kStrictMargin && l.c5 > kStrictMargin;
}

bool check_assumption2(const WingModel& model, const CertificateParameters& p) {
    return check_assumption2(model_bounds(model), p);
}

SupNormFactors sup_norm_factors(const ModelBounds& b) {
    const double l = b.span;
    return {4.0 * std::pow(l, 1.5) / (std::pow(pi, 1.5) * std::sqrt(b.EI.inf)),
            2.0 * std::sqrt(l) / (std::sqrt(pi) * std::sqrt(b.EI.inf)),
            2.0 * std::sqrt(l) / (std::sqrt(pi) * std::sqrt(b.GJ.inf))};
}

LiftDenominators lift_denominators(const WingModel& m, const ControlLaw& law, QuadratureSpec q) {
    const double l = m.span;
    const double iEI = quadrature([&](double y) { return sq(l - y) / m.EI(y); }, 0.0, l, q);
    const double iGJ = quadrature([&](double y) { return 1.0 / m.GJ(y); }, 0.0, l, q);
    return {1.0 + law.k1 * law.eps1 * iEI, 1.0 + law.k2 * law.eps2 * iGJ};
}

double compute_norm_B(const WingModel& m, const ControlLaw& law, QuadratureSpec q) {
    const double l = m.span;
    const auto d = lift_denominators(m, law, q);
    const double iEI = quadrature([&](double y) { return sq(l - y) / m.EI(y); }, 0.0, l, q);
    const double iGJ = quadrature([&](double y) { return 1.0 / m.GJ(y); }, 0.0, l, q);
    return std::max(std::sqrt(iEI) / d.b1, std::sqrt(iGJ) / d.b2);
}

double compute_norm_AdB(const WingModel& m, const ControlLaw& law, QuadratureSpec q) {
    const double l = m.span;
    const auto d = lift_denominators(m, law, q);
    const CumulativeIntegral inv_gj([&](double y) { return 1.0 / m.GJ(y); }, l, q);
    const double v = quadrature(
        [&](double y) {
            const double w = m.rho(y) * sq(m.alpha_w(y)) + m.Iw(y) * sq(m.alpha_phi(y));
            return w * sq(inv_gj(y));
        },
        0.0, l, q);
    return std::sqrt(v) / d.b2;
}

namespace {

struct SearchSpace {
    std::vector<double> lo, hi;  // log bounds
    bool search_eps = true;
    double eps1 = 0.0, eps2 = 0.0;

    CertificateParameters decode(const std::vector<double>& x) const {
        CertificateParameters p;
        for (int i = 0; i < 8; ++i) p.r[i] = std::exp(x[i]);
        p.eps1 = search_eps ? std::exp(x[8]) : eps1;
        p.eps2 = search_eps ? std::exp(x[9]) : eps2;
        return p;
    }
};

double objective(const ModelBounds& b, double Km, const CertificateParameters& p) {
    const double mu = compute_mu(compute_lambdas(b, p));
    return compute_decay_rate(mu, std::max(p.eps1, p.eps2), Km);
}

struct SearchResult {
    std::vector<double> x;
    double value = -std::numeric_limits<double>::infinity();
};

SearchResult coordinate_search(const ModelBounds& b, double Km, const SearchSpace& space, std::vector<double> x,
                               double step0, int iterations, double shrink, double min_step) {
    const std::size_t n = x.size();
    auto eval = [&](const std::vector<double>& v) { return objective(b, Km, space.decode(v)); };
    double fx = eval(x);
    std::vector<double> step(n, step0);
    for (int it = 0; it < iterations; ++it) {
        bool improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (double sign : {1.0, -1.0}) {
                std::vector<double> y = x;
                y[i] = std::clamp(y[i] + sign * step[i], space.lo[i], space.hi[i]);
                if (y[i] == x[i]) continue;
                const double fy = eval(y);
                if (fy > fx) {
                    x = std::move(y);
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            double largest = 0.0;
            for (auto& s : step) {
                s *= shrink;
                largest = std::max(largest, s);
            }
            if (largest < min_step) break;
        }
    }
    return {std::move(x), fx};
}

void fill_derived(CertificateReport& rep, const WingModel& model) {
    const auto& b = rep.bounds;
    rep.lambdas = compute_lambdas(b, rep.params);
    rep.mu_m = compute_mu(rep.lambdas);
    rep.Lambda = compute_decay_rate(rep.mu_m, rep.eps_m(), rep.Km);
    rep.K_E = rep.eps_m() * rep.Km < 1.0 ? compute_KE(rep.eps_m(), rep.Km) : std::numeric_limits<double>::infinity();
    rep.feasible = check_assumption2(b, rep.params) && rep.Lambda > kStrictMargin;
    const ControlLaw law = rep.control_law();
    rep.norm_B = compute_norm_B(model, law);
    rep.norm_AdB = compute_norm_AdB(model, law);
}

}  // namespace

CertificateReport evaluate_certificate(const WingModel& model, double k1, double k2, const CertificateParameters& p) {
    CertificateReport rep;
    rep.bounds = model_bounds(model);
    rep.k1 = k1;
    rep.k2 = k2;
    rep.Km = compute_Km(rep.bounds);
    rep.eps_star = compute_eps_stars(rep.bounds);
    rep.params = p;
    fill_derived(rep, model);
    return rep;
}

CertificateReport feasibility_search(const WingModel& model, double k1, double k2, const SearchOptions& opts) {
    if (opts.starts < 1 || opts.iterations < 0 || !(opts.shrink > 0.0 && opts.shrink < 1.0))
        throw std::invalid_argument("invalid search options");
    CertificateReport rep;
    rep.bounds = model_bounds(model);
    rep.k1 = k1;
    rep.k2 = k2;
    rep.Km = compute_Km(rep.bounds);
    rep.eps_star = compute_eps_stars(rep.bounds);
    rep.search = opts;

    const double cap1 = std::min(rep.eps_star.eps1, 1.0 / rep.Km) * (1.0 - opts.eps_margin);
    const double cap2 = std::min(rep.eps_star.eps2, 1.0 / rep.Km) * (1.0 - opts.eps_margin);

    SearchSpace space;
    space.search_eps = !(opts.fixed_eps1 && opts.fixed_eps2);
    if (opts.fixed_eps1.has_value() != opts.fixed_eps2.has_value())
        throw std::invalid_argument("fix both eps1 and eps2 or neither");
    for (int i = 0; i < 8; ++i) {
        space.lo.push_back(std::log(opts.r_lo));
        space.hi.push_back(std::log(opts.r_hi));
    }
    if (space.search_eps) {
        if (!(opts.eps_lo < std::min(cap1, cap2))) throw PreconditionError("empty eps search box");
        space.lo.push_back(std::log(opts.eps_lo));
        space.hi.push_back(std::log(cap1));
        space.lo.push_back(std::log(opts.eps_lo));
        space.hi.push_back(std::log(cap2));
    } else {
        space.eps1 = *opts.fixed_eps1;
        space.eps2 = *opts.fixed_eps2;
        CertificateParameters probe;
        probe.eps1 = space.eps1;
        probe.eps2 = space.eps2;
        check_certificate_preconditions(rep.bounds, probe);
    }

    const std::size_t n = space.lo.size();
    std::vector<std::future<SearchResult>> jobs;
    for (int s = 0; s < opts.starts; ++s) {
        std::vector<double> x0(n);
        if (s == 0) {
            for (std::size_t i = 0; i < n; ++i) x0[i] = 0.5 * (space.lo[i] + space.hi[i]);
        } else {
            std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(s));
            for (std::size_t i = 0; i < n; ++i) {
                const double u = std::generate_canonical<double, 53>(rng);
                x0[i] = space.lo[i] + u * (space.hi[i] - space.lo[i]);
            }
        }
        jobs.push_back(std::async(std::launch::async, [&, x0] {
            return coordinate_search(rep.bounds, rep.Km, space, x0, opts.initial_step, opts.iterations, opts.shrink,
                                     opts.min_step);
        }));
    }
    SearchResult best;
    for (auto& j : jobs) {
        SearchResult r = j.get();
        if (r.value > best.value) best = std::move(r);
    }
    best = coordinate_search(rep.bounds, rep.Km, space, best.x, 0.1 * opts.initial_step, opts.refine_iterations,
                             opts.shrink, opts.min_step);

    rep.params = space.decode(best.x);
    fill_derived(rep, model);
    return rep;
}

UltimateBounds ultimate_bounds(const CertificateReport& r, double sup_U, double sup_Udot) {
    if (!r.feasible || !(r.Lambda > 0.0)) throw PreconditionError("ultimate bounds need a feasible certificate");
    if (!(sup_U >= 0.0) || !(sup_Udot >= 0.0)) throw PreconditionError("disturbance sup bounds must be nonnegative");
    const double g = 2.0 * r.K_E / r.Lambda;
    UltimateBounds u;
    u.state = (r.norm_B + g * r.norm_AdB) * sup_U + g * r.norm_B * sup_Udot;
    const auto f = sup_norm_factors(r.bounds);
    u.f_inf = f.f * u.state;
    u.fprime_inf = f.fprime * u.state;
    u.h_inf = f.h * u.state;
    return u;
}

double state_bound_at(const CertificateReport& r, double initial_offset_norm, double t, double sup_U,
                      double sup_Udot) {
    const UltimateBounds u = ultimate_bounds(r, sup_U, sup_Udot);
    return r.K_E * initial_offset_norm * std::exp(-r.Lambda * t / 2.0) + u.state;
}

// ---- serialization ----

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void put_bounds(std::ostream& os, const std::string& key, const EssentialBounds& b) {
    os << "bounds." << key << ".inf = " << num(b.inf) << '\n';
    os << "bounds." << key << ".sup = " << num(b.sup) << '\n';
}

}  // namespace

void write_report(std::ostream& os, const CertificateReport& r) {
    const auto& b = r.bounds;
    os << "format = flexwing-certificate-1\n";
    os << "bounds.span_m = " << num(b.span) << '\n';
    put_bounds(os, "rho", b.rho);
    put_bounds(os, "Iw", b.Iw);
    put_bounds(os, "EI", b.EI);
    put_bounds(os, "GJ", b.GJ);
    put_bounds(os, "eta_w", b.eta_w);
    put_bounds(os, "eta_phi", b.eta_phi);
    put_bounds(os, "eta_w_EI", b.eta_EI);
    put_bounds(os, "eta_phi_GJ", b.eta_GJ);
    os << "bounds.abs_alpha_w.sup = " << num(b.alpha_w) << '\n';
    os << "bounds.abs_beta_w.sup = " << num(b.beta_w) << '\n';
    os << "bounds.abs_gamma_w.sup = " << num(b.gamma_w) << '\n';
    os << "bounds.abs_alpha_phi.sup = " << num(b.alpha_phi) << '\n';
    os << "bounds.abs_beta_phi.sup = " << num(b.beta_phi) << '\n';
    os << "bounds.abs_gamma_phi.sup = " << num(b.gamma_phi) << '\n';
    os << "bounds.method = " << (b.exact() ? "exact-piecewise-polynomial" : "dense-sampling-10000") << '\n';
    os << "transcription.lambda2 = eps1 * sqrt(sup rho) * sup|gamma_w| * r3 / 2\n";
    os << "search.starts = " << r.search.starts << '\n';
    os << "search.iterations = " << r.search.iterations << '\n';
    os << "search.shrink = " << num(r.search.shrink) << '\n';
    os << "search.seed = " << r.search.seed << '\n';
    os << "search.r_box = " << num(r.search.r_lo) << ' ' << num(r.search.r_hi) << '\n';
    os << "search.eps_lo = " << num(r.search.eps_lo) << '\n';
    os << "search.strict_margin = " << num(kStrictMargin) << '\n';
    os << "k1 = " << num(r.k1) << '\n';
    os << "k2 = " << num(r.k2) << '\n';
    os << "Km = " << num(r.Km) << '\n';
    os << "eps1_star = " << num(r.eps_star.eps1) << '\n';
    os << "eps2_star = " << num(r.eps_star.eps2) << '\n';
    os << "feasible = " << (r.feasible ? "true" : "false") << '\n';
    os << "eps1 = " << num(r.params.eps1) << '\n';
    os << "eps2 = " << num(r.params.eps2) << '\n';
    for (int i = 0; i < 8; ++i) os << 'r' << i + 1 << " = " << num(r.params.r[i]) << '\n';
    for (int i = 0; i < 6; ++i) os << "lambda" << i + 1 << " = " << num(r.lambdas.lambda[i]) << '\n';
    os << "c2 = " << num(r.lambdas.c2) << '\n';
    os << "c5 = " << num(r.lambdas.c5) << '\n';
    os << "mu_m = " << num(r.mu_m) << '\n';
    os << "Lambda = " << num(r.Lambda) << '\n';
    os << "K_E = " << num(r.K_E) << '\n';
    os << "norm_B = " << num(r.norm_B) << '\n';
    os << "norm_AdB = " << num(r.norm_AdB) << '\n';
    if (r.ultimate) {
        os << "sup_U = " << num(r.sup_U) << '\n';
        os << "sup_Udot = " << num(r.sup_Udot) << '\n';
        os << "ultimate.state = " << num(r.ultimate->state) << '\n';
        os << "ultimate.f_inf = " << num(r.ultimate->f_inf) << '\n';
        os << "ultimate.fprime_inf = " << num(r.ultimate->fprime_inf) << '\n';
        os << "ultimate.h_inf = " << num(r.ultimate->h_inf) << '\n';
    }
    if (!r.note.empty()) os << "note = " << r.note << '\n';
}

std::map<std::string, std::string> parse_key_values(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw std::runtime_error("line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, trim(t.substr(eq + 1))).second)
            throw std::runtime_error("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return kv;
}

CertificateReport read_report(std::istream& is) {
    const auto kv = parse_key_values(is);
    const auto get = [&](const std::string& k) -> const std::string& {
        auto it = kv.find(k);
        if (it == kv.end()) throw std::runtime_error("certificate report: missing key '" + k + "'");
        return it->second;
    };
    const auto d = [&](const std::string& k) { return std::stod(get(k)); };
    const auto eb = [&](const std::string& k) {
        return EssentialBounds{d("bounds." + k + ".inf"), d("bounds." + k + ".sup"),
                               get("bounds.method") == "exact-piecewise-polynomial"};
    };
    if (get("format") != "flexwing-certificate-1") throw std::runtime_error("certificate report: unknown format");
    CertificateReport r;
    auto& b = r.bounds;
    b.span = d("bounds.span_m");
    b.rho = eb("rho");
    b.Iw = eb("Iw");
    b.EI = eb("EI");
    b.GJ = eb("GJ");
    b.eta_w = eb("eta_w");
    b.eta_phi = eb("eta_phi");
    b.eta_EI = eb("eta_w_EI");
    b.eta_GJ = eb("eta_phi_GJ");
    b.alpha_w = d("bounds.abs_alpha_w.sup");
    b.beta_w = d("bounds.abs_beta_w.sup");
    b.gamma_w = d("bounds.abs_gamma_w.sup");
    b.alpha_phi = d("bounds.abs_alpha_phi.sup");
    b.beta_phi = d("bounds.abs_beta_phi.sup");
    b.gamma_phi = d("bounds.abs_gamma_phi.sup");
    r.k1 = d("k1");
    r.k2 = d("k2");
    r.Km = d("Km");
    r.eps_star = {d("eps1_star"), d("eps2_star")};
    r.feasible = get("feasible") == "true";
    r.params.eps1 = d("eps1");
    r.params.eps2 = d("eps2");
    for (int i = 0; i < 8; ++i) r.params.r[i] = d("r" + std::to_string(i + 1));
    for (int i = 0; i < 6; ++i) r.lambdas.lambda[i] = d("lambda" + std::to_string(i + 1));
    r.lambdas.c2 = d("c2");
    r.lambdas.c5 = d("c5");
    r.mu_m = d("mu_m");
    r.Lambda = d("Lambda");
    r.K_E = d("K_E");
    r.norm_B = d("norm_B");
    r.norm_AdB = d("norm_AdB");
    if (kv.count("ultimate.state")) {
        r.sup_U = d("sup_U");
        r.sup_Udot = d("sup_Udot");
        r.ultimate = UltimateBounds{d("ultimate.state"), d("ultimate.f_inf"), d("ultimate.fprime_inf"),
                                    d("ultimate.h_inf")};
    }
    r.search.starts = std::stoi(get("search.starts"));
    r.search.iterations = std::stoi(get("search.iterations"));
    r.search.shrink = d("search.shrink");
    r.search.seed = std::stoull(get("search.seed"));
    if (kv.count("note")) r.note = kv.at("note");
    return r;
}

}  // namespace flexwing
