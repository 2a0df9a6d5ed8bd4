#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "advkit/cli.hpp"
#include "advkit/gadgets.hpp"

using namespace advkit;

namespace {

const std::vector<std::string> kConfigKeys{"fn", "kind", "eps", "n", "seed", "jobs", "out", "format", "sample",
                                           "timing", "in", "protocol", "gadget", "skip_constants"};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

nlohmann::json read_json(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InputError("cannot write " + out);
    f << text;
}

long parse_long(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size()) throw InputError(key + " must be an integer, got '" + text + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text.empty() || text == "0" || text == "false" || text == "no") return false;
    throw InputError(key + " must be true or false, got '" + text + "'");
}

// Flag values by config key; a flag given on the command line wins over the config file.
struct Settings {
    std::map<std::string, std::string> values;
    CLI::App* sub = nullptr;

    void bind(CLI::App* app, const std::string& key, const std::string& help) {
        app->add_option("--" + key, values[key], help);
    }
    void bind_flag(CLI::App* app, const std::string& key, const std::string& help) {
        app->add_flag_function(
            "--" + key, [this, key](std::int64_t) { values[key] = "true"; }, help);
    }
    bool given(const std::string& key) const {
        auto it = values.find(key);
        return it != values.end() && !it->second.empty();
    }
    const std::string& get(const std::string& key) const { return values.at(key); }
    std::string get_or(const std::string& key, const std::string& fallback) const {
        return given(key) ? get(key) : fallback;
    }
    void merge(const std::map<std::string, std::string>& config) {
        for (const auto& [k, v] : config) {
            if (!sub->get_option_no_throw("--" + k)) continue;
            if (sub->get_option("--" + k)->count() == 0) values[k] = v;
        }
    }
};

int run_measure(const Settings& s) {
    if (!s.given("fn")) throw InputError("measure needs --fn FILE");
    std::vector<std::optional<PartialFn>> fns;
    const auto relations = parse_function_lines(read_file(s.get("fn")), &fns);
    const std::string kind = s.get_or("kind", "all");
    const Rational eps = parse_rational(s.get_or("eps", "1/3"));
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < relations.size(); ++i) out.push_back(measure_json(fns[i], relations[i], kind, eps));
    emit(out.dump(2) + "\n", s.get_or("out", ""));
    return 0;
}

int run_gadget(const Settings& s) {
    Gadget g;
    nlohmann::json extra = nlohmann::json::object();
    if (s.given("fn")) {
        g = gadget_from_json(read_json(s.get("fn")));
    } else if (s.given("n")) {
        GadgetFamilyMember m = parity_family(static_cast<int>(parse_long("n", s.get("n"))));
        g = m.gadget;
        extra = {{"family", "parity"}, {"n", m.n}, {"ip_rows", m.ip_rows}, {"ip_cols", m.ip_cols}};
    } else {
        g = ver();
    }
    const Versatility v = check_versatility(g);
    nlohmann::json out{{"gadget", to_json(g)}, {"versatility", to_json(v)}, {"versatile", v.versatile()}};
    if (!extra.empty()) out["family"] = extra;
    emit(out.dump(2) + "\n", s.get_or("out", ""));
    return v.versatile() ? 0 : 1;
}

int run_lift(const Settings& s) {
    LiftReport rep;
    if (s.get_or("kind", "lift") == "schedule") {
        if (!s.given("n")) throw InputError("lift --kind schedule needs --n N");
        const int n = static_cast<int>(parse_long("n", s.get("n")));
        rep = schedule_report(n, parse_rational(s.get_or("eps", "1/4")), default_schedule_cap(n));
    } else {
        if (s.get_or("kind", "lift") != "lift") throw InputError("lift --kind must be lift or schedule");
        if (!s.given("fn")) throw InputError("lift needs --fn FILE");
        const auto relations = parse_function_lines(read_file(s.get("fn")), nullptr);
        if (relations.size() != 1) throw InputError("lift expects exactly one function in " + s.get("fn"));
        const Gadget g = s.given("gadget") ? gadget_from_json(read_json(s.get("gadget"))) : ver();
        std::vector<NamedProtocol> protocols;
        if (s.given("protocol"))
            protocols.push_back({s.get("protocol"), protocol_from_json(read_json(s.get("protocol")))});
        else
            protocols = standard_protocols(relations[0], g);
        rep = lift_report(relations[0], g, protocols, parse_rational(s.get_or("eps", "1/3")));
    }
    emit(rep.json.dump(2) + "\n", s.get_or("out", ""));
    return rep.pass ? 0 : 1;
}

int run_verify(const Settings& s) {
    CorpusSpec spec;
    spec.kind = parse_corpus_kind(s.get_or("kind", "total"));
    spec.n = static_cast<int>(parse_long("n", s.get_or("n", "2")));
    spec.seed = static_cast<std::uint64_t>(parse_long("seed", s.get_or("seed", "0")));
    if (s.given("sample")) {
        const long k = parse_long("sample", s.get("sample"));
        if (k < 0) throw InputError("sample must be nonnegative");
        spec.sample = static_cast<std::size_t>(k);
    }
    spec.skip_constants = parse_bool("skip_constants", s.get_or("skip_constants", ""));
    const ReportFormat format = parse_report_format(s.get_or("format", "json"));
    std::optional<int> jobs_flag;
    if (s.given("jobs")) jobs_flag = static_cast<int>(parse_long("jobs", s.get("jobs")));
    VerifyOptions options;
    options.jobs = resolve_jobs(jobs_flag, {}, std::getenv("ADVKIT_JOBS"));

    const auto start = std::chrono::steady_clock::now();
    const auto corpus = enumerate_corpus(spec);
    VerificationReport rep = verify_relations(spec, corpus, options);
    if (parse_bool("timing", s.get_or("timing", "")))
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(render_report(rep, format), s.get_or("out", ""));
    std::cerr << "verified " << rep.instances.size() << " instances: " << rep.failures() << " failed checks, "
              << rep.errors() << " errors\n";
    return exit_code(rep);
}

int run_report(const Settings& s) {
    if (!s.given("in")) throw InputError("report needs --in FILE");
    const VerificationReport rep = report_from_json(read_json(s.get("in")));
    emit(render_report(rep, parse_report_format(s.get_or("format", "markdown"))), s.get_or("out", ""));
    return exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"advkit: query measures, gadgets and lifting checks for small Boolean functions"};
    app.set_version_flag("--version", std::string(kToolkitVersion));
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key = value file mirroring the flags");

    Settings settings;
    auto* measure = app.add_subcommand("measure", "compute measures for each function line in a file");
    settings.bind(measure, "fn", "function file, one function per line");
    settings.bind(measure, "kind", "all, bs, fbs, cbs, cfbs, cadv, adv, adv1, deg or adeg");
    settings.bind(measure, "eps", "error for adeg as p/q");
    settings.bind(measure, "out", "output path");
    settings.bind(measure, "format", "json");

    auto* gadget = app.add_subcommand("gadget", "check versatility of VER, Parity_n o VER or a gadget file");
    settings.bind(gadget, "fn", "gadget JSON file");
    settings.bind(gadget, "n", "use the Parity_n o VER family member");
    settings.bind(gadget, "out", "output path");

    auto* lift = app.add_subcommand("lift", "lifting checks for f o G, or the noisy OR scheduler");
    settings.bind(lift, "fn", "function file with one function");
    settings.bind(lift, "kind", "lift or schedule");
    settings.bind(lift, "eps", "protocol error bound (lift) or noise rate (schedule)");
    settings.bind(lift, "n", "scheduler arity");
    settings.bind(lift, "protocol", "protocol tree JSON file");
    settings.bind(lift, "gadget", "gadget JSON file (default VER)");
    settings.bind(lift, "out", "output path");

    auto* verify = app.add_subcommand("verify", "verify the relation suite over a corpus");
    settings.bind(verify, "kind", "total, partial or relation");
    settings.bind(verify, "n", "arity");
    settings.bind(verify, "sample", "sample this many instances");
    settings.bind(verify, "seed", "sampling seed");
    settings.bind(verify, "jobs", "worker threads");
    settings.bind(verify, "out", "output path");
    settings.bind(verify, "format", "json, csv or markdown");
    settings.bind_flag(verify, "timing", "include wall time in the report");
    settings.bind_flag(verify, "skip_constants", "drop constant instances");

    auto* report = app.add_subcommand("report", "re-render a JSON verification report");
    settings.bind(report, "in", "JSON report");
    settings.bind(report, "format", "json, csv or markdown");
    settings.bind(report, "out", "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        settings.sub = app.get_subcommands().front();
        if (!config_path.empty()) settings.merge(parse_config(read_file(config_path), kConfigKeys));
        if (settings.sub == measure) return run_measure(settings);
        if (settings.sub == gadget) return run_gadget(settings);
        if (settings.sub == lift) return run_lift(settings);
        if (settings.sub == verify) return run_verify(settings);
        return run_report(settings);
    } catch (const std::exception& e) {
        std::cerr << "advkit: " << e.what() << "\n";
        return 2;
    }
}
