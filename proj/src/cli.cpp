#include "advkit/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "advkit/conversions.hpp"
#include "advkit/interval.hpp"
#include "advkit/measures.hpp"

namespace advkit {

std::string to_string(CorpusSpec::Kind kind) {
    switch (kind) {
        case CorpusSpec::Kind::Total: return "total";
        case CorpusSpec::Kind::Partial: return "partial";
        case CorpusSpec::Kind::Relation: return "relation";
    }
    return "total";
}

CorpusSpec::Kind parse_corpus_kind(const std::string& text) {
    if (text == "total") return CorpusSpec::Kind::Total;
    if (text == "partial") return CorpusSpec::Kind::Partial;
    if (text == "relation") return CorpusSpec::Kind::Relation;
    throw InputError("corpus kind must be total, partial or relation, got '" + text + "'");
}

std::uint64_t exhaustive_count(CorpusSpec::Kind kind, int n) {
    if (n < 1 || n > kMaxMeasureArity) throw InputError("corpus arity must be between 1 and 5");
    const std::uint64_t base = kind == CorpusSpec::Kind::Total ? 2 : kind == CorpusSpec::Kind::Partial ? 3 : 7;
    constexpr std::uint64_t kSaturate = std::uint64_t{1} << 62;
    std::uint64_t count = 1;
    for (int i = 0; i < (1 << n); ++i) {
        count *= base;
        if (count > kSaturate) return kSaturate;
    }
    return kind == CorpusSpec::Kind::Partial ? count - 1 : count;
}

namespace {

const std::vector<std::string>& relation_alphabet() {
    static const std::vector<std::string> a{"a", "b", "c"};
    return a;
}

// digits[x] in 0..base-1: the truth-table value (2 = undefined) or mask - 1.
Instance make_instance(CorpusSpec::Kind kind, int n, const std::vector<int>& digits) {
    Instance inst{0, kind, std::nullopt, Relation(n, {"0", "1"}, std::vector<std::uint32_t>(digits.size(), 3U)), ""};
    if (kind == CorpusSpec::Kind::Relation) {
        std::vector<std::uint32_t> valid;
        for (int d : digits) valid.push_back(static_cast<std::uint32_t>(d + 1));
        inst.relation = Relation(n, relation_alphabet(), std::move(valid));
        inst.table = format_relation(inst.relation);
        return inst;
    }
    std::vector<Value> t;
    for (int d : digits) t.push_back(d == 2 ? Value::Undefined : static_cast<Value>(d));
    inst.fn = PartialFn(n, std::move(t));
    inst.relation = to_relation(*inst.fn);
    inst.table = format_partial_fn(*inst.fn);
    return inst;
}

bool is_constant(const Instance& inst) {
    std::uint32_t common = ~0U;
    for (Input x = 0; x < inst.relation.size(); ++x) common &= inst.relation.valid(x);
    return common != 0;
}

}  // namespace

std::vector<Instance> enumerate_corpus(const CorpusSpec& spec) {
    const int n = spec.n;
    const std::uint64_t total = exhaustive_count(spec.kind, n);
    const std::size_t size = std::size_t{1} << n;
    const int base = spec.kind == CorpusSpec::Kind::Total ? 2 : spec.kind == CorpusSpec::Kind::Partial ? 3 : 7;
    std::vector<Instance> out;
    auto push = [&](const std::vector<int>& digits) {
        Instance inst = make_instance(spec.kind, n, digits);
        if (spec.skip_constants && is_constant(inst)) return;
        inst.index = out.size();
        out.push_back(std::move(inst));
    };
    if (spec.sample) {
        std::mt19937_64 rng(spec.seed);
        std::uniform_int_distribution<int> pick(0, base - 1);
        std::vector<int> digits(size);
        for (std::size_t k = 0; k < *spec.sample; ++k) {
            bool any = false;
            while (!any) {
                for (int& d : digits) d = pick(rng);
                any = spec.kind != CorpusSpec::Kind::Partial ||
                      std::any_of(digits.begin(), digits.end(), [](int d) { return d != 2; });
            }
            push(digits);
        }
        return out;
    }
    if (total > kMaxExhaustive)
        throw ResourceError("exhaustive " + to_string(spec.kind) + " corpus at n = " + std::to_string(n) + " has " +
                            std::to_string(total) + " instances (cap 10^6); request a sample instead");
    std::vector<int> digits(size, 0);
    while (true) {
        const bool empty = spec.kind == CorpusSpec::Kind::Partial &&
                           std::all_of(digits.begin(), digits.end(), [](int d) { return d == 2; });
        if (!empty) push(digits);
        std::size_t i = 0;
        while (i < size && ++digits[i] == base) digits[i++] = 0;
        if (i == size) break;
    }
    return out;
}

bool InstanceReport::pass() const {
    return error.empty() && std::all_of(checks.begin(), checks.end(), [](const RelationCheck& c) { return c.pass; });
}

const Rational* InstanceReport::measure(const std::string& name) const {
    for (const auto& [k, v] : measures)
        if (k == name) return &v;
    return nullptr;
}

std::size_t VerificationReport::failures() const {
    std::size_t f = 0;
    for (const auto& i : instances)
        for (const auto& c : i.checks) f += c.pass ? 0 : 1;
    return f;
}

std::size_t VerificationReport::errors() const {
    return static_cast<std::size_t>(
        std::count_if(instances.begin(), instances.end(), [](const InstanceReport& i) { return !i.error.empty(); }));
}

namespace {

using Measures = std::vector<std::pair<std::string, Rational>>;

const Rational& get(const Measures& m, const std::string& name) {
    for (const auto& [k, v] : m)
        if (k == name) return v;
    throw InternalError("measure " + name + " missing");
}

void le(InstanceReport& rep, const std::string& name, const Rational& lhs, const Rational& rhs, const Rational& tol) {
    const Rational slack = rhs + tol - lhs;
    rep.checks.push_back({name, slack >= 0, to_double(slack), to_exact_string(tol)});
}

std::string labels_string(const Completion& c) {
    std::string s;
    for (int v : c.total.labels()) s += static_cast<char>('0' + v);
    return s;
}

}  // namespace

InstanceReport verify_instance(const Instance& inst, const VerifyOptions& options) {
    InstanceReport rep;
    rep.index = inst.index;
    rep.kind = to_string(inst.kind);
    rep.n = inst.relation.arity();
    rep.table = inst.table;
    const Tolerances& tol = options.tolerances;
    try {
        Measures m;
        CadvResult ca;
        AdvResult ad;
        if (inst.fn) {
            const PartialFn& f = *inst.fn;
            auto cb = cbs(f);
            auto cf = cfbs(f);
            ca = cadv(f);
            ad = adv(f);
            AdvResult a1 = adv1(f);
            m = {{"bs", Rational(bs(f))},
                 {"fbs", fbs(f)},
                 {"cbs", Rational(cb.value)},
                 {"cfbs", cf.value},
                 {"cadv", ca.value},
                 {"adv_lower", ad.value.lower},
                 {"adv_upper", ad.value.upper},
                 {"adv1_lower", a1.value.lower},
                 {"adv1_upper", a1.value.upper},
                 {"adeg", Rational(approx_deg(f, Rational(1, 3)).degree)}};
            rep.witnesses["cfbs_completion"] = labels_string(cf.completion);
        } else {
            const Relation& r = inst.relation;
            auto cb = cbs(r);
            auto cf = cfbs(r);
            ca = cadv(r);
            ad = adv(r);
            AdvResult a1 = adv1(r);
            m = {{"cbs", Rational(cb.value)},
                 {"cfbs", cf.value},
                 {"cadv", ca.value},
                 {"adv_lower", ad.value.lower},
                 {"adv_upper", ad.value.upper},
                 {"adv1_lower", a1.value.lower},
                 {"adv1_upper", a1.value.upper}};
            rep.witnesses["cfbs_completion"] = labels_string(cf.completion);
        }
        rep.witnesses["cadv_scheme"] = to_json(ca.scheme);
        if (options.tamper) options.tamper(m);
        rep.measures = m;

        const Rational& cadv_v = get(m, "cadv");
        const Rational& cfbs_v = get(m, "cfbs");
        const Rational& upper = get(m, "adv_upper");
        if (inst.fn) {
            const PartialFn& f = *inst.fn;
            le(rep, "bs<=fbs", get(m, "bs"), get(m, "fbs"), tol.lp);
            le(rep, "fbs<=cfbs", get(m, "fbs"), cfbs_v, tol.lp);
            le(rep, "bs<=cbs", get(m, "bs"), get(m, "cbs"), tol.lp);
            le(rep, "cbs<=cfbs", get(m, "cbs"), cfbs_v, tol.lp);
            if (inst.kind == CorpusSpec::Kind::Total) {
                const Rational d = get(m, "cbs") - get(m, "bs");
                rep.checks.push_back({"cbs=bs", d == 0, -std::abs(to_double(d)), "0"});
            }
            le(rep, "cadv<=cfbs", cadv_v, cfbs_v, tol.lp);
            le(rep, "cfbs<=2cadv", cfbs_v, 2 * cadv_v, tol.lp);
            le(rep, "adv_lower<=cadv", get(m, "adv_lower"), cadv_v, tol.adv);
            le(rep, "cadv<=2adv_upper^2", cadv_v, 2 * upper * upper, tol.adv);
            le(rep, "adv1_upper<=adv_upper", get(m, "adv1_upper"), upper, tol.adv);

            const Rational& deg = get(m, "adeg");
            const Interval rhs = Interval::from_rational(cadv_v / 3).sqrt() / Interval::pi() - Interval(1);
            rep.checks.push_back({"adeg>=sqrt(cadv/3)/pi-1", rhs.certainly_le(Interval::from_rational(deg)),
                                  to_double(deg) - rhs.mid(), "0"});

            try {
                CfbsWitness w = cadv_to_cfbs_witness(f, ca.scheme);
                bool wok = w.completion.completes(f);
                for (const CoverScheme& c : w.covers) wok = wok && c.covers(sensitive_blocks(w.completion.total, c.x));
                const Rational wslack = 2 * cadv_v - w.value;
                rep.checks.push_back({"cadv->cfbs witness", wok && wslack >= 0, to_double(wslack), "0"});
            } catch (const InputError&) {
                rep.checks.push_back({"cadv->cfbs witness", false, -1, "0"});
            }

            const Rational A = ad.scheme.objective();
            WeightScheme sc = adv_to_cadv_scheme(f, ad.scheme, A);
            const Rational sslack = 2 * A * A - sc.objective();
            rep.checks.push_back({"adv->cadv scheme", check_feasible(f, sc).ok && sslack >= 0, to_double(sslack), "0"});
        } else {
            le(rep, "cbs<=cfbs", get(m, "cbs"), cfbs_v, tol.lp);
            le(rep, "adv_lower<=cadv", get(m, "adv_lower"), cadv_v, tol.adv);
            le(rep, "cadv<=2adv_upper^2", cadv_v, 2 * upper * upper, tol.adv);
            le(rep, "adv1_upper<=adv_upper", get(m, "adv1_upper"), upper, tol.adv);
        }
    } catch (const std::exception& e) {
        rep.error = e.what();
    }
    return rep;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& work) {
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

VerificationReport verify_relations(const CorpusSpec& spec, const std::vector<Instance>& corpus,
                                    const VerifyOptions& options) {
    VerificationReport rep;
    rep.corpus = spec;
    rep.tolerances = options.tolerances;
    rep.config_hash = config_hash(spec, options.tolerances);
    rep.instances.resize(corpus.size());
    parallel_for(corpus.size(), options.jobs, [&](std::size_t i) { rep.instances[i] = verify_instance(corpus[i], options); });
    return rep;
}

int exit_code(const VerificationReport& rep) {
    if (rep.failures() > 0) return 1;
    if (rep.errors() > 0) return 2;
    return 0;
}

ReportFormat parse_report_format(const std::string& text) {
    if (text == "json") return ReportFormat::Json;
    if (text == "csv") return ReportFormat::Csv;
    if (text == "markdown" || text == "md") return ReportFormat::Markdown;
    throw InputError("format must be json, csv or markdown, got '" + text + "'");
}

nlohmann::json to_json(const VerificationReport& rep) {
    nlohmann::json insts = nlohmann::json::array();
    std::size_t checks = 0;
    for (const InstanceReport& i : rep.instances) {
        nlohmann::json ms = nlohmann::json::array();
        for (const auto& [name, v] : i.measures) ms.push_back({{"name", name}, {"exact", to_exact_string(v)}, {"decimal", to_double(v)}});
        nlohmann::json cs = nlohmann::json::array();
        for (const RelationCheck& c : i.checks) {
            nlohmann::json cj{{"name", c.name}, {"pass", c.pass}, {"slack", c.slack}, {"tolerance", c.tolerance}};
            if (!c.pass) cj["table"] = i.table;
            cs.push_back(std::move(cj));
        }
        checks += i.checks.size();
        nlohmann::json ij{{"index", i.index}, {"kind", i.kind}, {"n", i.n}, {"table", i.table},
                          {"measures", ms}, {"checks", cs}, {"witnesses", i.witnesses}};
        if (!i.error.empty()) ij["error"] = i.error;
        insts.push_back(std::move(ij));
    }
    nlohmann::json corpus{{"kind", to_string(rep.corpus.kind)},
                          {"n", rep.corpus.n},
                          {"seed", rep.corpus.seed},
                          {"skip_constants", rep.corpus.skip_constants},
                          {"sample", rep.corpus.sample ? nlohmann::json(*rep.corpus.sample) : nlohmann::json(nullptr)}};
    nlohmann::json j{{"toolkit_version", rep.version},
                     {"config_hash", rep.config_hash},
                     {"corpus", corpus},
                     {"tolerances", {{"lp", to_exact_string(rep.tolerances.lp)}, {"adv", to_exact_string(rep.tolerances.adv)}}},
                     {"summary",
                      {{"instances", rep.instances.size()},
                       {"checks", checks},
                       {"failures", rep.failures()},
                       {"errors", rep.errors()},
                       {"pass", rep.pass()}}},
                     {"instances", insts}};
    if (rep.seconds) j["timing_seconds"] = *rep.seconds;
    return j;
}

VerificationReport report_from_json(const nlohmann::json& j) {
    VerificationReport rep;
    try {
        rep.version = j.at("toolkit_version").get<std::string>();
        rep.config_hash = j.at("config_hash").get<std::string>();
        const auto& c = j.at("corpus");
        rep.corpus.kind = parse_corpus_kind(c.at("kind").get<std::string>());
        rep.corpus.n = c.at("n").get<int>();
        rep.corpus.seed = c.at("seed").get<std::uint64_t>();
        rep.corpus.skip_constants = c.at("skip_constants").get<bool>();
        if (!c.at("sample").is_null()) rep.corpus.sample = c.at("sample").get<std::size_t>();
        rep.tolerances.lp = parse_rational(j.at("tolerances").at("lp").get<std::string>());
        rep.tolerances.adv = parse_rational(j.at("tolerances").at("adv").get<std::string>());
        for (const auto& ij : j.at("instances")) {
            InstanceReport i;
            i.index = ij.at("index").get<std::size_t>();
            i.kind = ij.at("kind").get<std::string>();
            i.n = ij.at("n").get<int>();
            i.table = ij.at("table").get<std::string>();
            for (const auto& mj : ij.at("measures"))
                i.measures.emplace_back(mj.at("name").get<std::string>(), parse_rational(mj.at("exact").get<std::string>()));
            for (const auto& cj : ij.at("checks"))
                i.checks.push_back({cj.at("name").get<std::string>(), cj.at("pass").get<bool>(), cj.at("slack").get<double>(),
                                    cj.at("tolerance").get<std::string>()});
            i.witnesses = ij.at("witnesses");
            if (ij.contains("error")) i.error = ij.at("error").get<std::string>();
            rep.instances.push_back(std::move(i));
        }
        if (j.contains("timing_seconds")) rep.seconds = j.at("timing_seconds").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad report JSON: ") + e.what());
    }
    return rep;
}

namespace {

std::string decimal(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string render_report(const VerificationReport& rep, ReportFormat format) {
    if (format == ReportFormat::Json) return to_json(rep).dump(2) + "\n";
    std::vector<const InstanceReport*> sorted;
    for (const auto& i : rep.instances) sorted.push_back(&i);
    std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->index < b->index; });
    std::ostringstream os;
    if (format == ReportFormat::Csv) {
        os << "index,kind,n,measure,exact,decimal,table\n";
        for (const InstanceReport* i : sorted)
            for (const auto& [name, v] : i->measures)
                os << i->index << ',' << i->kind << ',' << i->n << ',' << name << ',' << to_exact_string(v) << ','
                   << decimal(to_double(v)) << ',' << csv_quote(i->table) << '\n';
        return os.str();
    }
    std::vector<std::string> cols;
    for (const InstanceReport* i : sorted)
        for (const auto& m : i->measures)
            if (std::find(cols.begin(), cols.end(), m.first) == cols.end()) cols.push_back(m.first);
    os << "# advkit verification report\n\n";
    os << "- corpus: " << to_string(rep.corpus.kind) << ", n = " << rep.corpus.n;
    if (rep.corpus.sample) os << ", sample " << *rep.corpus.sample << " (seed " << rep.corpus.seed << ")";
    os << "\n- instances: " << rep.instances.size() << ", failed checks: " << rep.failures()
       << ", errors: " << rep.errors() << "\n- config hash: " << rep.config_hash << "\n\n";
    os << "| index | table |";
    for (const auto& c : cols) os << ' ' << c << " |";
    os << " status |\n|---|---|";
    for (std::size_t k = 0; k < cols.size(); ++k) os << "---|";
    os << "---|\n";
    for (const InstanceReport* i : sorted) {
        os << "| " << i->index << " | `" << i->table << "` |";
        for (const auto& c : cols) {
            const Rational* v = i->measure(c);
            os << ' ' << (v ? to_exact_string(*v) : std::string("-")) << " |";
        }
        std::string status = "pass";
        if (!i->error.empty()) status = "error: " + i->error;
        for (const auto& ch : i->checks)
            if (!ch.pass) status = (status == "pass" ? "FAIL " : status + ", ") + ch.name;
        os << ' ' << status << " |\n";
    }
    return os.str();
}

std::string config_hash(const CorpusSpec& spec, const Tolerances& tol) {
    std::ostringstream os;
    os << "version=" << kToolkitVersion << ";kind=" << to_string(spec.kind) << ";n=" << spec.n
       << ";sample=" << (spec.sample ? std::to_string(*spec.sample) : "none") << ";seed=" << spec.seed
       << ";skip_constants=" << spec.skip_constants << ";tol_lp=" << to_exact_string(tol.lp)
       << ";tol_adv=" << to_exact_string(tol.adv);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : os.str()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text, const std::vector<std::string>& allowed) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw InputError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!out.emplace(key, value).second)
            throw InputError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return out;
}

namespace {

int parse_jobs(const std::string& text, const std::string& source) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || v < 1) throw InputError(source + ": jobs must be a positive integer, got '" + text + "'");
    return v;
}

}  // namespace

int resolve_jobs(std::optional<int> flag, const std::map<std::string, std::string>& config, const char* env) {
    if (flag) {
        if (*flag < 1) throw InputError("--jobs must be positive");
        return *flag;
    }
    if (auto it = config.find("jobs"); it != config.end()) return parse_jobs(it->second, "config");
    if (env && *env) return parse_jobs(env, "ADVKIT_JOBS");
    return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

std::vector<Relation> parse_function_lines(const std::string& text, std::vector<std::optional<PartialFn>>* fns) {
    std::vector<Relation> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (is_relation_line(line)) {
            out.push_back(parse_relation(line));
            if (fns) fns->push_back(std::nullopt);
        } else {
            PartialFn f = parse_partial_fn(line);
            out.push_back(to_relation(f));
            if (fns) fns->push_back(std::move(f));
        }
    }
    return out;
}

nlohmann::json measure_json(const std::optional<PartialFn>& fn, const Relation& r, const std::string& kind,
                            const Rational& eps) {
    static const std::vector<std::string> kinds{"bs", "fbs", "cbs", "cfbs", "cadv", "adv", "adv1", "deg", "adeg"};
    static const std::vector<std::string> fn_only{"bs", "fbs", "deg", "adeg"};
    if (kind != "all" && std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
        throw InputError("unknown measure '" + kind + "'");
    const bool is_fn_only = std::find(fn_only.begin(), fn_only.end(), kind) != fn_only.end();
    if (!fn && is_fn_only) throw InputError(kind + " is defined for partial functions only");

    auto exact = [](const Rational& v) { return nlohmann::json{{"exact", to_exact_string(v)}, {"decimal", to_double(v)}}; };
    auto certified = [&](const CertifiedValue& v) {
        return nlohmann::json{{"lower", exact(v.lower)}, {"upper", exact(v.upper)}};
    };
    auto one = [&](const std::string& k) {
        const auto start = std::chrono::steady_clock::now();
        nlohmann::json value, witness;
        if (k == "bs") {
            value = exact(bs(*fn));
        } else if (k == "fbs") {
            value = exact(fbs(*fn));
        } else if (k == "cbs") {
            auto c = fn ? cbs(*fn) : cbs(r);
            value = exact(c.value);
            witness = {{"completion", labels_string(c.completion)}};
        } else if (k == "cfbs") {
            auto c = fn ? cfbs(*fn) : cfbs(r);
            value = exact(c.value);
            witness = {{"completion", labels_string(c.completion)}};
        } else if (k == "cadv") {
            auto c = fn ? cadv(*fn) : cadv(r);
            value = exact(c.value);
            witness = to_json(c.scheme);
        } else if (k == "adv" || k == "adv1") {
            auto a = k == "adv" ? (fn ? adv(*fn) : adv(r)) : (fn ? adv1(*fn) : adv1(r));
            value = certified(a.value);
            witness = to_json(a.scheme);
        } else if (k == "deg") {
            value = exact(exact_deg(*fn).degree);
        } else {
            auto d = approx_deg(*fn, eps);
            value = exact(d.degree);
            witness = {{"eps", to_exact_string(eps)}};
        }
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        return nlohmann::json{{"measure", k}, {"value", value}, {"witness", witness}, {"timing_seconds", took.count()}};
    };
    nlohmann::json records = nlohmann::json::array();
    for (const std::string& k : kinds) {
        if (kind != "all" && kind != k) continue;
        if (!fn && std::find(fn_only.begin(), fn_only.end(), k) != fn_only.end()) continue;
        records.push_back(one(k));
    }
    return {{"table", fn ? format_partial_fn(*fn) : format_relation(r)}, {"records", records}};
}

namespace {

std::vector<int> bits_of(Input z, int n) {
    std::vector<int> b;
    for (int i = 0; i < n; ++i) b.push_back(static_cast<int>((z >> i) & 1U));
    return b;
}

std::string bits_string(const std::vector<int>& b) {
    std::string s;
    for (int v : b) s += static_cast<char>('0' + v);
    return s;
}

nlohmann::json interval_json(const Interval& v) {
    return {{"mid", v.mid()}, {"lo", v.lo().to_string(30)}, {"hi", v.hi().to_string(30)}};
}

}  // namespace

LiftReport lift_report(const Relation& f, const Gadget& g, const std::vector<NamedProtocol>& protocols,
                       const Rational& eps) {
    LiftReport out;
    out.pass = true;
    const int n = f.arity();
    nlohmann::json ps = nlohmann::json::array();
    double min_value = INFINITY;
    for (const NamedProtocol& np : protocols) {
        nlohmann::json pj{{"name", np.name}, {"cc", np.tree.depth()},
                          {"error", to_exact_string(protocol_error(np.tree, f, g))}};
        nlohmann::json schemes = nlohmann::json::array();
        for (Input z = 0; z < f.size(); ++z) {
            LiftScheme s = lift_weight_scheme(np.tree, f, g, bits_of(z, n));
            out.pass = out.pass && s.within_cc;
            schemes.push_back(to_json(s));
        }
        pj["schemes"] = schemes;
        nlohmann::json pairs = nlohmann::json::array();
        for (Input z = 0; z < f.size(); ++z)
            for (Input w = z + 1; w < f.size(); ++w) {
                if (!f.disjoint(z, w)) continue;
                const auto zb = bits_of(z, n), wb = bits_of(w, n);
                PairBound pb = min_pair_bound(np.tree, f, g, zb, wb);
                Distinguisher d = build_distinguisher(np.tree, f, g, zb, pb.hybrid, eps);
                int which = 1;
                if (!d.case_one && pb.hybrid != wb) {
                    d = build_distinguisher(np.tree, f, g, wb, pb.hybrid, eps);
                    which = 2;
                }
                const bool ok = pb.value.certainly_positive() && d.case_one && d.error() <= eps;
                out.pass = out.pass && ok;
                min_value = std::min(min_value, pb.value.lo().to_double());
                nlohmann::json dj{{"case", d.case_one ? which : 0}};
                if (d.case_one)
                    dj.update({{"k", d.k}, {"threshold", d.threshold}, {"error", to_exact_string(d.error())},
                               {"error_decimal", to_double(d.error())}});
                pairs.push_back({{"z", bits_string(zb)},
                                 {"w", bits_string(wb)},
                                 {"value", interval_json(pb.value)},
                                 {"b1", pb.b1},
                                 {"b2", pb.b2},
                                 {"hybrid", bits_string(pb.hybrid)},
                                 {"distinguisher", dj},
                                 {"pass", ok}});
            }
        pj["pairs"] = pairs;
        ps.push_back(std::move(pj));
    }
    out.json = {{"function", format_relation(f)}, {"gadget", to_json(g)}, {"eps", to_exact_string(eps)},
                {"protocols", ps}, {"pass", out.pass}};
    if (std::isfinite(min_value)) out.json["min_pair_value"] = min_value;
    return out;
}

LiftReport schedule_report(int n, const Rational& delta, int cap) {
    LiftReport out;
    std::vector<std::pair<std::string, std::vector<int>>> zs;
    zs.push_back({"zeros", std::vector<int>(static_cast<std::size_t>(n), 0)});
    std::vector<int> first(static_cast<std::size_t>(n), 0);
    first[0] = 1;
    zs.push_back({"first-one", first});
    zs.push_back({"ones", std::vector<int>(static_cast<std::size_t>(n), 1)});
    const Rational c0 = 1 / (1 - 2 * delta);
    const double lg = std::max(1.0, std::log2(static_cast<double>(n)));
    nlohmann::json runs = nlohmann::json::array();
    out.pass = true;
    for (const auto& [name, z] : zs) {
        ScheduleStats s = noisy_or_schedule(n, z, delta, cap);
        const double c1 = cap / (to_double(s.detect) * lg);
        const bool ok = s.zero_invocations <= c0 * n && s.detect >= Rational(1, 2) && s.c1 <= c1;
        out.pass = out.pass && ok;
        nlohmann::json j = to_json(s);
        j["z"] = name;
        j["c0_bound"] = to_exact_string(c0);
        j["c1_bound"] = c1;
        j["pass"] = ok;
        runs.push_back(std::move(j));
    }
    out.json = {{"n", n}, {"delta", to_exact_string(delta)}, {"cap", cap}, {"runs", runs}, {"pass", out.pass}};
    return out;
}

}  // namespace advkit
