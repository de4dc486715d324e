#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aperiodic/acceptance.hpp"
#include "aperiodic/aperiodic.hpp"
#include "aperiodic/io.hpp"

namespace {

using namespace aperiodic;
using nlohmann::json;
using ExactSet = TypedPointSet<QuadraticInt>;
using InexactSet = TypedPointSet<double>;
using AnySet = std::variant<ExactSet, InexactSet>;

const std::vector<std::string> kConfigKeys{
    "system", "R",     "radii",  "averaging", "r_max", "variant", "k",     "windows", "alphas", "weights",
    "seed",   "stream", "out",   "format",    "p",     "eta",     "riesz", "suite",   "types",  "part"};

struct RunConfig {
    std::string command;
    json system = "fibonacci";
    double R = 1e3;
    std::vector<double> radii;
    std::optional<AveragingShape> averaging;
    double r_max = 20.0;
    Variant variant = Variant::BothRestricted;
    json k = {{"k_max", 2.0}, {"kstar_max", 2.0}};
    json windows;
    std::vector<double> alphas;
    std::vector<std::complex<double>> weights;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::string out;
    std::string format = "csv";
    double p = 0.5;
    std::optional<std::int64_t> eta;
    std::optional<int> riesz;
    std::string suite = "all";
    std::vector<std::string> types;
    std::string part = "nu";
    json canonical;
};

std::string system_name(const RunConfig& c) {
    return c.system.is_string() ? c.system.get<std::string>() : c.system.value("name", std::string("custom"));
}

bool is_stochastic(const RunConfig& c) {
    const auto s = system_name(c);
    return c.system.is_string() && (s == "bernoulli" || s == "random_fibonacci");
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

RunConfig validate(const std::string& command, const json& j) {
    require(j.is_object(), "config: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        require(std::find(kConfigKeys.begin(), kConfigKeys.end(), it.key()) != kConfigKeys.end(),
                "config: unknown key '" + it.key() + "'");
    RunConfig c;
    c.command = command;
    c.canonical = j;
    c.canonical.erase("out");
    c.canonical["command"] = command;
    auto num = [&](const char* key, double& dst) {
        if (!j.contains(key)) return;
        require(j.at(key).is_number(), std::string("config: '") + key + "' must be a number");
        dst = j.at(key).get<double>();
    };
    auto uint = [&](const char* key, std::uint64_t& dst) {
        if (!j.contains(key)) return;
        require(j.at(key).is_number_unsigned() || (j.at(key).is_number_integer() && j.at(key).get<std::int64_t>() >= 0),
                std::string("config: '") + key + "' must be a non-negative integer");
        dst = j.at(key).get<std::uint64_t>();
    };
    auto str = [&](const char* key, std::string& dst) {
        if (!j.contains(key)) return;
        require(j.at(key).is_string(), std::string("config: '") + key + "' must be a string");
        dst = j.at(key).get<std::string>();
    };
    if (j.contains("system")) {
        require(j.at("system").is_string() || j.at("system").is_object(), "config: 'system' must be a name or a rule");
        c.system = j.at("system");
    }
    num("R", c.R);
    require(c.R >= 0.0 && std::isfinite(c.R), "config: 'R' must be finite and >= 0");
    if (j.contains("radii")) {
        require(j.at("radii").is_array(), "config: 'radii' must be a list");
        for (const auto& r : j.at("radii")) {
            require(r.is_number(), "config: radii must be numbers");
            c.radii.push_back(r.get<double>());
        }
    }
    if (j.contains("averaging")) {
        std::string a;
        str("averaging", a);
        require(a == "one_sided" || a == "symmetric", "config: 'averaging' must be one_sided or symmetric");
        c.averaging = a == "one_sided" ? AveragingShape::OneSided : AveragingShape::Symmetric;
    }
    num("r_max", c.r_max);
    require(c.r_max >= 0.0, "config: 'r_max' must be >= 0");
    if (j.contains("variant")) {
        std::string v;
        str("variant", v);
        require(v == "both" || v == "one", "config: 'variant' must be both or one");
        c.variant = v == "both" ? Variant::BothRestricted : Variant::OneRestricted;
    }
    if (j.contains("k")) {
        const auto& k = j.at("k");
        require(k.is_object() || k.is_array(), "config: 'k' must be {k_max, kstar_max} or a list");
        if (k.is_object()) io::reject_unknown_keys(k, {"k_max", "kstar_max"}, "config.k");
        c.k = k;
    }
    if (j.contains("windows")) c.windows = j.at("windows");
    if (j.contains("alphas")) {
        require(j.at("alphas").is_array(), "config: 'alphas' must be a list");
        for (const auto& a : j.at("alphas")) {
            require(a.is_number(), "config: alphas must be numbers");
            c.alphas.push_back(a.get<double>());
        }
    }
    if (j.contains("weights")) {
        require(j.at("weights").is_array(), "config: 'weights' must be a list");
        for (const auto& w : j.at("weights")) {
            if (w.is_number()) c.weights.emplace_back(w.get<double>(), 0.0);
            else {
                require(w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number(),
                        "config: weights must be reals or [re, im] pairs");
                c.weights.emplace_back(w[0].get<double>(), w[1].get<double>());
            }
        }
    }
    uint("seed", c.seed);
    uint("stream", c.stream);
    str("out", c.out);
    str("format", c.format);
    require(c.format == "csv" || c.format == "json", "config: 'format' must be csv or json");
    num("p", c.p);
    if (j.contains("eta")) {
        require(j.at("eta").is_number_integer() && j.at("eta").get<std::int64_t>() >= 0, "config: 'eta' must be an integer >= 0");
        c.eta = j.at("eta").get<std::int64_t>();
    }
    if (j.contains("riesz")) {
        require(j.at("riesz").is_number_integer(), "config: 'riesz' must be an integer");
        c.riesz = j.at("riesz").get<int>();
    }
    str("suite", c.suite);
    if (j.contains("types")) {
        require(j.at("types").is_array(), "config: 'types' must be a list of type names");
        for (const auto& t : j.at("types")) {
            require(t.is_string(), "config: type names must be strings");
            c.types.push_back(t.get<std::string>());
        }
    }
    str("part", c.part);
    require(c.part == "nu" || c.part == "omega" || c.part == "delta", "config: 'part' must be nu, omega or delta");
    if (c.system.is_string() && !is_stochastic(c)) {
        const auto names = builtin_rule_names();
        require(std::find(names.begin(), names.end(), c.system.get<std::string>()) != names.end(),
                "config: unknown system '" + c.system.get<std::string>() + "'");
    }
    return c;
}

std::size_t thread_count() {
    const char* env = std::getenv("APERIODIC_THREADS");
    if (!env) return 1;
    const long n = std::strtol(env, nullptr, 10);
    return n > 0 ? static_cast<std::size_t>(n) : 1;
}

AveragingShape shape_of(const RunConfig& c) {
    if (c.averaging) return *c.averaging;
    return system_name(c) == "bernoulli" ? AveragingShape::Symmetric : AveragingShape::OneSided;
}

AveragingSpec averaging_spec(const RunConfig& c) {
    if (!c.radii.empty()) return AveragingSpec(shape_of(c), c.radii);
    std::vector<double> r;
    for (const double x : {c.R / 100.0, c.R / 10.0, c.R})
        if (x >= 1.0) r.push_back(x);
    if (r.empty()) throw DomainError("R too small for an averaging sequence");
    return AveragingSpec(shape_of(c), r);
}

double max_radius(const RunConfig& c) { return c.radii.empty() ? c.R : std::max(c.R, c.radii.back()); }

SubstitutionRule rule_of(const RunConfig& c) {
    if (c.system.is_object()) return io::rule_from_json(c.system);
    return builtin_rule(c.system.get<std::string>(), c.p);
}

/// Sample covering [0, R] (inflations) or [-R, R] (Bernoulli), widened by r_max
/// for the one-restricted variant where the sampler can extend.
AnySet make_set(const RunConfig& c, double extra = 0.0) {
    const double R = max_radius(c) + extra;
    const RngSpec rng{c.seed, c.stream};
    if (system_name(c) == "bernoulli" && c.system.is_string()) {
        return bernoulli_gas(c.p, static_cast<std::int64_t>(std::ceil(R)), rng);
    }
    const auto rule = rule_of(c);
    const std::string seed = rule.alphabet().front();
    std::optional<RngSpec> r;
    if (rule.is_random()) r = rng;
    if (rule.exact_lengths()) return realize_geometric(rule, seed, R, r);
    return realize_geometric_inexact(rule, seed, R, r);
}

ExactSet make_exact_set(const RunConfig& c, double extra = 0.0) {
    auto s = make_set(c, extra);
    if (auto* e = std::get_if<ExactSet>(&s)) return std::move(*e);
    throw DomainError("this command needs exact Z[tau] tile lengths");
}

ModelSetSpec windows_of(const RunConfig& c) {
    if (!c.windows.is_null()) return io::windows_from_json(c.windows);
    const auto s = system_name(c);
    if (s == "fibonacci" || s == "random_fibonacci") return fibonacci_windows();
    if (s == "twisted_fibonacci") return twisted_fibonacci_windows();
    throw ConfigError("no preset windows for system '" + s + "'; supply 'windows'");
}

std::vector<Wavevector> wavevectors(const RunConfig& c) {
    std::vector<Wavevector> ks;
    if (c.k.is_object()) {
        for (const auto& k : fourier_module(c.k.value("k_max", 2.0), c.k.value("kstar_max", 2.0))) ks.emplace_back(k);
        return ks;
    }
    for (const auto& k : c.k) {
        if (k.is_number()) ks.emplace_back(k.get<double>());
        else {
            require(k.is_object(), "config.k: entries must be reals or {a, b}");
            io::reject_unknown_keys(k, {"a", "b"}, "config.k");
            ks.emplace_back(FourierModulePoint{io::get_int(k, "a", "config.k"), io::get_int(k, "b", "config.k")});
        }
    }
    return ks;
}

std::vector<FourierModulePoint> module_points(const RunConfig& c) {
    std::vector<FourierModulePoint> out;
    for (const auto& k : wavevectors(c)) {
        const auto* m = std::get_if<FourierModulePoint>(&k);
        require(m != nullptr, "this command needs module points (a, b) as wavevectors");
        out.push_back(*m);
    }
    return out;
}

Splitting<QuadraticInt> split_of(const RunConfig& c, const ExactSet& set) {
    const auto s = system_name(c);
    if (c.system.is_string() && (s == "thue_morse" || s == "bernoulli")) {
        std::vector<double> alphas = c.alphas;
        if (alphas.empty()) alphas.assign(set.type_count(), s == "bernoulli" ? c.p : 0.5);
        return split_lattice(set, alphas);
    }
    const auto cal = calibrate_windows(set, windows_of(c));
    if (!cal.ok) {
        std::string msg = "window calibration failed for";
        for (const auto& t : cal.types)
            if (!t.ok) msg += " " + t.type;
        throw ContainmentError(msg);
    }
    auto split = split_model_sets(set, cal.spec());
    if (!c.alphas.empty()) {
        require(c.alphas.size() == set.type_count(), "config: one alpha per type required");
        const auto spec = cal.spec();
        for (std::size_t t = 0; t < set.type_count(); ++t)
            split.parts[t] = split_pp(set.points(t), spec.window(set.types()[t]), c.alphas[t], set.range());
    }
    return split;
}

std::string type_arg(const RunConfig& c, std::size_t i, const std::vector<std::string>& all) {
    if (c.types.size() > i) return c.types[i];
    if (!c.types.empty()) return c.types.front();
    return all.front();
}

// ---- output ----------------------------------------------------------------

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

json envelope(const RunConfig& c) {
    return {{"tool", "aperiodic"}, {"version", io::kToolVersion}, {"config_hash", io::config_hash(c.canonical)},
            {"config", c.canonical}};
}

void emit_json(const RunConfig& c, json body) {
    json doc = envelope(c);
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    Output out(c.out);
    out.stream() << doc.dump(2) << '\n';
}

json point_json(const QuadraticInt& x) { return {{"m", x.m}, {"n", x.n}, {"value", qi_embed(x)}}; }
json point_json(double x) { return {{"value", x}}; }

template <PointType P>
json comb_json(const WeightedComb<P>& comb) {
    json atoms = json::array();
    for (const auto& a : comb.atoms()) {
        auto j = point_json(a.point);
        j["re_weight"] = a.weight.real();
        j["im_weight"] = a.weight.imag();
        atoms.push_back(j);
    }
    return atoms;
}

template <PointType P>
json correlation_json(const CorrelationComb<P>& g) {
    json atoms = json::array();
    for (const auto& a : g.atoms) {
        auto j = point_json(a.point);
        j["re_weight"] = a.weight.real();
        j["im_weight"] = a.weight.imag();
        atoms.push_back(j);
    }
    return {{"R", g.averaging.R}, {"averaging", to_string(g.averaging.shape)}, {"variant", to_string(g.variant)},
            {"r_max", g.r_max}, {"atoms", atoms}};
}

json fb_json(const std::vector<FbRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        json j{{"k", to_string(r.k)}, {"k_value", wavevector_value(r.k)}, {"R", r.R}, {"re", r.c.real()},
               {"im", r.c.imag()}, {"abs", std::abs(r.c)}};
        if (const auto* m = std::get_if<FourierModulePoint>(&r.k)) {
            j["k_a"] = m->a;
            j["k_b"] = m->b;
        }
        j["cauchy_diff"] = std::isnan(r.cauchy_diff) ? json(nullptr) : json(r.cauchy_diff);
        out.push_back(j);
    }
    return out;
}

// ---- commands --------------------------------------------------------------

int cmd_generate(const RunConfig& c) {
    const auto set = make_set(c);
    std::visit(
        [&](const auto& s) {
            if (c.format == "json") {
                json types = json::object();
                for (std::size_t t = 0; t < s.type_count(); ++t) {
                    json pts = json::array();
                    for (const auto& x : s.points(t)) pts.push_back(point_json(x));
                    types[s.types()[t]] = pts;
                }
                emit_json(c, {{"exact", s.exact()}, {"range", {s.range().lo, s.range().hi}}, {"densities", densities(s)},
                              {"points", types}});
            } else {
                Output out(c.out);
                io::write_points_csv(out.stream(), io::config_hash(c.canonical), s);
            }
        },
        set);
    return 0;
}

int cmd_project(const RunConfig& c) {
    const auto spec = windows_of(c);
    const Interval range{0.0, c.R};
    std::vector<std::vector<QuadraticInt>> pts;
    for (const auto& w : spec.windows) pts.push_back(cut_and_project(w, range));
    // Windows of different types may overlap; each type is emitted on its own.
    if (c.format == "json") {
        json types = json::object();
        for (std::size_t t = 0; t < spec.types.size(); ++t) {
            json list = json::array();
            for (const auto& x : pts[t]) list.push_back(point_json(x));
            types[spec.types[t]] = {{"density", model_set_density(spec.windows[t])}, {"points", list}};
        }
        emit_json(c, {{"range", {range.lo, range.hi}}, {"windows", io::windows_to_json(spec)}, {"model_sets", types}});
        return 0;
    }
    Output out(c.out);
    io::CsvWriter w(out.stream(), io::config_hash(c.canonical), {"type", "m", "n", "value"});
    for (std::size_t t = 0; t < spec.types.size(); ++t)
        for (const auto& x : pts[t]) w.row({spec.types[t], io::fmt(x.m), io::fmt(x.n), io::fmt(qi_embed(x))});
    return 0;
}

int cmd_split(const RunConfig& c) {
    const auto set = make_exact_set(c);
    const auto split = split_of(c, set);
    if (c.format == "json") {
        json parts = json::object();
        for (std::size_t t = 0; t < split.types.size(); ++t)
            parts[split.types[t]] = {{"alpha", split.parts[t].alpha}, {"omega", comb_json(split.parts[t].omega)},
                                     {"nu", comb_json(split.parts[t].nu)}};
        emit_json(c, {{"range", {set.range().lo, set.range().hi}}, {"splitting", parts}});
        return 0;
    }
    const auto type = type_arg(c, 0, set.types());
    const auto& part = split.part(type);
    const auto& comb = c.part == "omega" ? part.omega
                       : c.part == "nu"  ? part.nu
                                         : WeightedComb<QuadraticInt>::from_points(set.points(type), set.range());
    Output out(c.out);
    io::write_comb_csv(out.stream(), io::config_hash(c.canonical), comb,
                       {"type " + type, "part " + c.part, "alpha " + io::fmt(part.alpha)});
    return 0;
}

int cmd_correlate(const RunConfig& c) {
    const auto spec = averaging_spec(c);
    const double extra = c.variant == Variant::OneRestricted ? c.r_max : 0.0;
    const auto set = make_set(c, extra);
    std::visit(
        [&](const auto& s) {
            using P = std::decay_t<decltype(s.points(0).front())>;
            const auto ti = type_arg(c, 0, s.types());
            const auto tj = type_arg(c, 1, s.types());
            const auto di = WeightedComb<P>::from_points(s.points(ti), s.range());
            const auto dj = WeightedComb<P>::from_points(s.points(tj), s.range());
            std::vector<CorrelationComb<P>> gs;
            for (std::size_t r = 0; r < spec.size(); ++r)
                gs.push_back(pair_correlation(di, dj, spec.at(r), c.r_max, c.variant));
            if (c.format == "json") {
                json list = json::array();
                for (const auto& g : gs) list.push_back(correlation_json(g));
                emit_json(c, {{"pair", {ti, tj}}, {"correlations", list}});
            } else {
                Output out(c.out);
                io::write_correlation_csv(out.stream(), io::config_hash(c.canonical), gs,
                                          {"pair " + ti + " " + tj, std::string("averaging ") + to_string(spec.shape)});
            }
        },
        set);
    return 0;
}

int cmd_fb(const RunConfig& c) {
    const auto spec = averaging_spec(c);
    const auto ks = wavevectors(c);
    std::vector<FbRow> rows;
    std::string label;
    if (c.part == "delta") {
        const auto set = make_set(c);
        std::visit(
            [&](const auto& s) {
                using P = std::decay_t<decltype(s.points(0).front())>;
                const auto t = type_arg(c, 0, s.types());
                label = "delta " + t;
                rows = fb_scan(WeightedComb<P>::from_points(s.points(t), s.range()), ks, spec, thread_count());
            },
            set);
    } else {
        const auto set = make_exact_set(c);
        const auto split = split_of(c, set);
        const auto t = type_arg(c, 0, set.types());
        label = c.part + " " + t;
        const auto& p = split.part(t);
        rows = fb_scan(c.part == "omega" ? p.omega : p.nu, ks, spec, thread_count());
    }
    if (c.format == "json") {
        emit_json(c, {{"measure", label}, {"rows", fb_json(rows)}});
    } else {
        Output out(c.out);
        io::write_fb_csv(out.stream(), io::config_hash(c.canonical), rows, {"measure " + label});
    }
    return 0;
}

int cmd_diffract(const RunConfig& c) {
    const auto hash = io::config_hash(c.canonical);
    if (c.eta) {
        const auto eta = tm_eta(*c.eta);
        if (c.format == "json") {
            json rows = json::array();
            for (std::size_t m = 0; m < eta.size(); ++m)
                rows.push_back({{"m", m}, {"eta_numerator", eta[m].numerator()}, {"eta_denominator", eta[m].denominator()},
                                {"eta_float", to_double(eta[m])}});
            emit_json(c, {{"eta", rows}});
        } else {
            Output out(c.out);
            io::write_eta_csv(out.stream(), hash, eta);
        }
        return 0;
    }
    if (c.riesz) {
        const auto rc = riesz_coefficients(*c.riesz);
        const std::int64_t m_max = std::min<std::int64_t>(64, (std::int64_t{1} << *c.riesz) - 1);
        if (c.format == "json") {
            json rows = json::array();
            for (std::int64_t m = 0; m <= m_max; ++m)
                rows.push_back({{"m", m}, {"c_m_numerator", rc.numerator(m)}, {"c_m_denominator", rc.denominator()},
                                {"c_m_float", rc.c_float(m)}});
            emit_json(c, {{"L", rc.L}, {"riesz", rows}});
        } else {
            Output out(c.out);
            io::write_riesz_csv(out.stream(), hash, rc, m_max);
        }
        return 0;
    }
    const auto spec = windows_of(c);
    std::vector<double> alphas = c.alphas;
    if (alphas.empty()) alphas.assign(spec.windows.size(), system_name(c) == "twisted_fibonacci" ? 0.5 : 1.0);
    std::vector<std::complex<double>> weights = c.weights;
    if (weights.empty()) weights.assign(spec.windows.size(), {1.0, 0.0});
    const auto ks = module_points(c);
    const auto rows = pp_intensity(spec, alphas, weights, ks);
    std::vector<std::complex<double>> total;
    std::vector<double> intensity;
    for (const auto& r : rows) {
        std::complex<double> s{};
        for (std::size_t i = 0; i < r.amplitudes.size(); ++i) s += weights[i] * r.amplitudes[i];
        total.push_back(s);
        intensity.push_back(r.intensity);
    }
    if (c.format == "json") {
        json list = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            json amps = json::object();
            for (std::size_t t = 0; t < spec.types.size(); ++t)
                amps[spec.types[t]] = {rows[i].amplitudes[t].real(), rows[i].amplitudes[t].imag()};
            list.push_back({{"k_a", ks[i].a}, {"k_b", ks[i].b}, {"k_value", ks[i].value()},
                            {"re_amplitude", total[i].real()}, {"im_amplitude", total[i].imag()},
                            {"intensity", intensity[i]}, {"type_amplitudes", amps}});
        }
        emit_json(c, {{"alphas", alphas}, {"spectrum", list}});
    } else {
        Output out(c.out);
        io::write_spectra_csv(out.stream(), hash, ks, total, intensity);
    }
    return 0;
}

int cmd_sample(const RunConfig& c) {
    require(is_stochastic(c), "sample: system must be bernoulli or random_fibonacci");
    const RngSpec rng{c.seed, c.stream};
    const bool bern = system_name(c) == "bernoulli";
    if (c.format == "csv") {
        Output out(c.out);
        const auto set = bern ? bernoulli_gas(c.p, static_cast<std::int64_t>(std::ceil(c.R)), rng)
                              : random_fibonacci(c.p, c.R, rng);
        io::write_points_csv(out.stream(), io::config_hash(c.canonical), set);
        return 0;
    }
    json params{{"system", system_name(c)}, {"p", c.p}, {"R", c.R}, {"r_max", c.r_max}};
    json seed{{"seed", c.seed}, {"stream", c.stream}};
    json atoms = json::array(), predictions = json::array(), residuals = json::object(), checks = json::array();
    if (bern) {
        const auto N = static_cast<std::int64_t>(std::ceil(c.R));
        const auto rep = bernoulli_verify(c.p, N, rng, c.r_max);
        for (const auto& a : rep.gamma.atoms) {
            atoms.push_back({{"m", a.point.m}, {"gamma", a.weight.real()}, {"zero_part", rep.zero_part.at(a.point).real()}});
            const bool zero = a.point == QuadraticInt{};
            predictions.push_back({{"m", a.point.m}, {"gamma", zero ? c.p : c.p * c.p}, {"zero_part", zero ? c.p * (1 - c.p) : 0.0}});
        }
        residuals = {{"gamma0", rep.gamma0_error}, {"gamma_off", rep.gamma_off_error}, {"zero0", rep.zero0_error},
                     {"zero_off", rep.zero_off_max}, {"cross_sup", rep.cross_sup}};
        params["density"] = rep.density;
    } else {
        const auto set = random_fibonacci(c.p, c.R, rng);
        const auto spec = averaging_spec(c);
        std::vector<std::complex<double>> w = c.weights;
        if (w.empty()) w.assign(set.type_count(), {1.0, 0.0});
        std::vector<FourierModulePoint> ks;
        if (c.k.is_object() && c.canonical.contains("k")) ks = module_points(c);
        else ks = acceptance::random_fibonacci_kset();
        const auto es = empirical_pp_split(set, ks, spec, w, c.r_max);
        for (const auto& r : es.amplitudes) {
            json amps = json::object();
            for (std::size_t t = 0; t < set.type_count(); ++t) {
                amps[set.types()[t]] = {{"re", r.amplitudes[t].real()}, {"im", r.amplitudes[t].imag()},
                                        {"cauchy_diff", std::isnan(r.cauchy_diff[t]) ? json(nullptr) : json(r.cauchy_diff[t])}};
            }
            atoms.push_back({{"k_a", r.k.a}, {"k_b", r.k.b}, {"k_value", r.k.value()}, {"R", r.R}, {"amplitudes", amps},
                             {"intensity", r.intensity}});
        }
        json rows = json::array();
        for (const auto& r : es.residuals)
            rows.push_back({{"k_a", r.k.a}, {"k_b", r.k.b}, {"fejer_mean", r.fejer_mean}, {"intensity", r.intensity},
                            {"residual", r.residual}});
        residuals = {{"pp_intensity_sum", es.pp_intensity_sum}, {"per_k", rows}};
        params["density"] = total_density(set);
        predictions.push_back({{"density", kTau / kSqrt5}});
    }
    emit_json(c, {{"params", params}, {"seed", seed}, {"atoms", atoms}, {"predictions", predictions},
                  {"residuals", residuals}, {"checks", checks}});
    return 0;
}

int cmd_verify(const RunConfig& c) {
    acceptance::SuiteOptions opt;
    if (c.canonical.contains("seed")) opt.bernoulli_seed = opt.random_fibonacci_seed = c.seed;
    const auto results = acceptance::run_suite(c.suite, opt);
    json list = json::array();
    bool all = true;
    for (const auto& r : results) {
        list.push_back(acceptance::to_json(r));
        all = all && r.pass();
    }
    emit_json(c, {{"suite", c.suite}, {"criteria", list}, {"pass", all}});
    return all ? 0 : 1;
}

void emit_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aperiodic point sets: generation, splitting, correlations and verification", "aperiodic"};
    app.set_version_flag("--version", std::string(io::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string system;
    double R = 0.0, r_max = 0.0, p = 0.0;
    std::string variant, out, format, suite;
    std::uint64_t seed = 0;
    std::int64_t eta = 0;
    int riesz = 0;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"generate", "inflation point sets"},      {"project", "cut-and-project model sets"},
        {"split", "omega/nu splitting"},          {"correlate", "pair correlations per R"},
        {"fb", "Fourier-Bohr scans"},             {"diffract", "pure-point intensities, Riesz coefficients, eta"},
        {"sample", "stochastic samplers"},        {"verify", "acceptance suites"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--system", system, "system name");
        sub->add_option("--R", R, "sample radius");
        sub->add_option("--r-max", r_max, "correlation cutoff");
        sub->add_option("--variant", variant, "both | one")->check(CLI::IsMember({"both", "one"}));
        sub->add_option("--seed", seed, "rng seed");
        sub->add_option("--out", out, "output file (default stdout)");
        sub->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--p", p, "branch / occupation probability");
        if (name == "diffract") {
            sub->add_option("--eta", eta, "eta table up to m");
            sub->add_option("--riesz", riesz, "Riesz product depth L");
        }
        if (name == "verify") sub->add_option("--suite", suite, "suite name")->check(CLI::IsMember(acceptance::suite_names()));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("usage", e.what());
        return 2;
    }

    try {
        auto* sub = app.get_subcommands().front();
        json cfg = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot read config '" + config_path + "'");
            try {
                cfg = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ConfigError(std::string("config parse error: ") + e.what());
            }
        }
        auto set = [&](const char* flag, const char* key, const json& v) {
            if (sub->count(flag) > 0) cfg[key] = v;
        };
        set("--system", "system", system);
        set("--R", "R", R);
        set("--r-max", "r_max", r_max);
        set("--variant", "variant", variant);
        set("--seed", "seed", seed);
        set("--out", "out", out);
        set("--format", "format", format);
        set("--p", "p", p);
        if (sub->get_name() == "diffract") {
            set("--eta", "eta", eta);
            set("--riesz", "riesz", riesz);
        }
        if (sub->get_name() == "verify") set("--suite", "suite", suite);
        const RunConfig c = validate(sub->get_name(), cfg);
        const auto& name = sub->get_name();
        if (name == "generate") return cmd_generate(c);
        if (name == "project") return cmd_project(c);
        if (name == "split") return cmd_split(c);
        if (name == "correlate") return cmd_correlate(c);
        if (name == "fb") return cmd_fb(c);
        if (name == "diffract") return cmd_diffract(c);
        if (name == "sample") return cmd_sample(c);
        return cmd_verify(c);
    } catch (const Error& e) {
        emit_error(e.kind(), e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 3;
    }
}
