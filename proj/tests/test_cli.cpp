#include "doctest.h"

#include <atomic>
#include <set>

#include "advkit/cli.hpp"

using namespace advkit;

namespace {

CorpusSpec spec_of(CorpusSpec::Kind kind, int n) {
    CorpusSpec s;
    s.kind = kind;
    s.n = n;
    return s;
}

std::set<std::string> tables(const std::vector<Instance>& corpus) {
    std::set<std::string> out;
    for (const auto& i : corpus) out.insert(i.table);
    return out;
}

}  // namespace

TEST_CASE("exhaustive corpora have the expected sizes and distinct members") {
    auto total = enumerate_corpus(spec_of(CorpusSpec::Kind::Total, 2));
    CHECK(total.size() == 16);
    CHECK(tables(total).size() == 16);
    auto partial = enumerate_corpus(spec_of(CorpusSpec::Kind::Partial, 2));
    CHECK(partial.size() == 80);
    CHECK(tables(partial).size() == 80);
    for (const auto& i : partial) {
        REQUIRE(i.fn);
        CHECK(!i.fn->domain().empty());
        CHECK(parse_partial_fn(i.table) == *i.fn);
    }
    auto rel = enumerate_corpus(spec_of(CorpusSpec::Kind::Relation, 1));
    CHECK(rel.size() == 49);
    CHECK(tables(rel).size() == 49);
    for (const auto& i : rel) {
        CHECK(!i.fn);
        CHECK(i.relation.alphabet_size() == kRelationAlphabet);
        CHECK(parse_relation(i.table) == i.relation);
    }
    for (std::size_t k = 0; k < total.size(); ++k) CHECK(total[k].index == k);
    CHECK(exhaustive_count(CorpusSpec::Kind::Total, 4) == 65536);
}

TEST_CASE("constants can be skipped") {
    auto s = spec_of(CorpusSpec::Kind::Total, 2);
    s.skip_constants = true;
    CHECK(enumerate_corpus(s).size() == 14);
    s.kind = CorpusSpec::Kind::Partial;
    // 80 tables minus those whose defined values all agree: 2 * (2^4 - 1).
    CHECK(enumerate_corpus(s).size() == 80 - 30);
}

TEST_CASE("sampling is deterministic in the seed") {
    auto s = spec_of(CorpusSpec::Kind::Partial, 5);
    s.sample = 1000;
    s.seed = 7;
    auto a = enumerate_corpus(s), b = enumerate_corpus(s);
    REQUIRE(a.size() == 1000);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].table == b[k].table);
    s.seed = 8;
    auto c = enumerate_corpus(s);
    CHECK(a[0].table != c[0].table);
}

TEST_CASE("over-cap exhaustive requests are resource errors") {
    CHECK_THROWS_AS(enumerate_corpus(spec_of(CorpusSpec::Kind::Total, 5)), ResourceError);
    CHECK_THROWS_AS(enumerate_corpus(spec_of(CorpusSpec::Kind::Partial, 4)), ResourceError);
    CHECK_THROWS_AS(enumerate_corpus(spec_of(CorpusSpec::Kind::Total, 6)), InputError);
    CHECK_THROWS_AS(parse_corpus_kind("boolean"), InputError);
}

TEST_CASE("empty corpus gives a passing empty report") {
    auto s = spec_of(CorpusSpec::Kind::Total, 3);
    s.sample = 0;
    auto rep = verify_relations(s, enumerate_corpus(s), {});
    CHECK(rep.instances.empty());
    CHECK(rep.pass());
    CHECK(exit_code(rep) == 0);
    CHECK(to_json(rep)["summary"]["pass"] == true);
}

TEST_CASE("total n = 2 and partial n = 2 suites pass") {
    for (auto kind : {CorpusSpec::Kind::Total, CorpusSpec::Kind::Partial}) {
        auto s = spec_of(kind, 2);
        auto rep = verify_relations(s, enumerate_corpus(s), {});
        CHECK(rep.failures() == 0);
        CHECK(rep.errors() == 0);
        for (const auto& i : rep.instances) {
            CHECK(i.checks.size() == (kind == CorpusSpec::Kind::Total ? 13 : 12));
            CHECK(i.witnesses.contains("cadv_scheme"));
        }
    }
    auto s = spec_of(CorpusSpec::Kind::Relation, 1);
    auto rep = verify_relations(s, enumerate_corpus(s), {});
    CHECK(rep.pass());
}

TEST_CASE("a corrupted measure is reported with its table") {
    auto s = spec_of(CorpusSpec::Kind::Total, 2);
    auto corpus = enumerate_corpus(s);
    VerifyOptions opt;
    opt.tamper = [](std::vector<std::pair<std::string, Rational>>& m) {
        for (auto& [k, v] : m)
            if (k == "cfbs") v += 5;
    };
    auto rep = verify_relations(s, corpus, opt);
    CHECK(rep.failures() > 0);
    CHECK(exit_code(rep) == 1);
    const auto j = to_json(rep);
    bool found = false;
    for (const auto& inst : j["instances"])
        for (const auto& c : inst["checks"])
            if (c["name"] == "cfbs<=2cadv" && c["pass"] == false) {
                found = true;
                CHECK(c["table"] == inst["table"]);
                CHECK(c["slack"].get<double>() < 0);
            }
    CHECK(found);
}

TEST_CASE("report formats") {
    auto s = spec_of(CorpusSpec::Kind::Partial, 2);
    auto rep = verify_relations(s, enumerate_corpus(s), {});
    const auto j = to_json(rep);
    CHECK(to_json(report_from_json(j)) == j);
    CHECK(to_json(report_from_json(nlohmann::json::parse(j.dump()))).dump() == j.dump());
    CHECK_FALSE(j.contains("timing_seconds"));

    std::size_t measures = 0;
    for (const auto& i : rep.instances) measures += i.measures.size();
    const std::string csv = render_report(rep, ReportFormat::Csv);
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == measures + 1);
    CHECK(measures == rep.instances.size() * 10);

    std::reverse(rep.instances.begin(), rep.instances.end());
    const std::string md = render_report(rep, ReportFormat::Markdown);
    std::size_t last = 0;
    for (std::size_t k = 0; k < rep.instances.size(); ++k) {
        const auto pos = md.find("| " + std::to_string(k) + " | `");
        REQUIRE(pos != std::string::npos);
        CHECK(pos > last);
        last = pos;
    }
    CHECK_THROWS_AS(parse_report_format("xml"), InputError);
    CHECK_THROWS_AS(report_from_json(nlohmann::json::object()), InputError);
}

TEST_CASE("reports are byte-reproducible across job counts") {
    auto s = spec_of(CorpusSpec::Kind::Total, 2);
    auto corpus = enumerate_corpus(s);
    VerifyOptions one, four;
    four.jobs = 4;
    const auto a = render_report(verify_relations(s, corpus, one), ReportFormat::Json);
    const auto b = render_report(verify_relations(s, corpus, four), ReportFormat::Json);
    CHECK(a == b);
    auto t = s;
    t.seed = 1;
    CHECK(config_hash(s, {}) == config_hash(s, {}));
    CHECK(config_hash(s, {}) != config_hash(t, {}));
    Tolerances loose;
    loose.adv = Rational(1, 100);
    CHECK(config_hash(s, {}) != config_hash(s, loose));
}

TEST_CASE("parallel_for visits every index once") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                        if (i == 7) throw InputError("boom");
                    }),
                    InputError);
}

TEST_CASE("config parsing and job resolution") {
    const std::vector<std::string> keys{"jobs", "n", "kind"};
    auto c = parse_config("# comment\n n = 3 \nkind=total # trailing\n\njobs=2\n", keys);
    CHECK(c.at("n") == "3");
    CHECK(c.at("kind") == "total");
    CHECK_THROWS_AS(parse_config("color=blue\n", keys), InputError);
    CHECK_THROWS_AS(parse_config("n\n", keys), InputError);
    CHECK_THROWS_AS(parse_config("n=1\nn=2\n", keys), InputError);

    CHECK(resolve_jobs(5, c, "7") == 5);
    CHECK(resolve_jobs(std::nullopt, c, "7") == 2);
    CHECK(resolve_jobs(std::nullopt, {}, "7") == 7);
    CHECK(resolve_jobs(std::nullopt, {}, nullptr) >= 1);
    CHECK_THROWS_AS(resolve_jobs(std::nullopt, {}, "many"), InputError);
    CHECK_THROWS_AS(resolve_jobs(0, {}, nullptr), InputError);
}

TEST_CASE("function files and measure records") {
    std::vector<std::optional<PartialFn>> fns;
    auto rs = parse_function_lines("# and\nn=2;table=0,0,0,1\n\nn=1;sigma=a,b;valid={a},{a,b}\n", &fns);
    REQUIRE(rs.size() == 2);
    CHECK(fns[0]);
    CHECK(!fns[1]);
    auto j = measure_json(fns[0], rs[0], "all", Rational(1, 3));
    std::map<std::string, std::string> got;
    for (const auto& r : j["records"]) {
        CHECK(r.contains("timing_seconds"));
        if (r["value"].contains("exact")) got[r["measure"]] = r["value"]["exact"];
    }
    CHECK(got.at("bs") == "2");
    CHECK(got.at("cadv") == "2");
    CHECK(got.at("deg") == "2");
    CHECK(got.at("adeg") == "1");
    auto rj = measure_json(fns[1], rs[1], "all", Rational(1, 3));
    CHECK(rj["records"].size() == 5);
    CHECK_THROWS_AS(measure_json(fns[1], rs[1], "bs", Rational(1, 3)), InputError);
    CHECK_THROWS_AS(measure_json(fns[0], rs[0], "nope", Rational(1, 3)), InputError);
}

TEST_CASE("lift and schedule reports") {
    const Relation xor2 = to_relation(parse_partial_fn("n=2;table=0,1,1,0"));
    const Gadget g = ver();
    auto rep = lift_report(xor2, g, standard_protocols(xor2, g), Rational(1, 3));
    CHECK(rep.pass);
    CHECK(rep.json["min_pair_value"].get<double>() > 0);

    const Relation id = to_relation(parse_partial_fn("n=1;table=0,1"));
    std::vector<NamedProtocol> bad{{"constant", constant_protocol(4, 4, 0)}};
    CHECK_FALSE(lift_report(id, g, bad, Rational(1, 3)).pass);

    auto sched = schedule_report(4, Rational(1, 4), default_schedule_cap(4));
    CHECK(sched.pass);
    CHECK(sched.json["runs"].size() == 3);
}
