#pragma once

// Corpus enumeration, relation verification over a corpus, and report output
// for the advkit command-line tool.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "advkit/boolfn.hpp"
#include "advkit/liftsim.hpp"
#include "json.hpp"

namespace advkit {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr std::uint64_t kMaxExhaustive = 1000000;
/// Relation corpora use the alphabet {a, b, c}; every input gets a nonempty subset.
inline constexpr std::size_t kRelationAlphabet = 3;

struct CorpusSpec {
    enum class Kind { Total, Partial, Relation };
    Kind kind = Kind::Total;
    int n = 2;
    std::optional<std::size_t> sample;  // draw this many instances instead of enumerating
    std::uint64_t seed = 0;
    bool skip_constants = false;        // drop instances whose defined values all agree
};

std::string to_string(CorpusSpec::Kind kind);
CorpusSpec::Kind parse_corpus_kind(const std::string& text);

struct Instance {
    std::size_t index = 0;
    CorpusSpec::Kind kind = CorpusSpec::Kind::Total;
    std::optional<PartialFn> fn;  // absent for relation corpora
    Relation relation;
    std::string table;            // one-line text form
};

/// Number of instances an exhaustive enumeration would produce (saturating).
std::uint64_t exhaustive_count(CorpusSpec::Kind kind, int n);

/// Exhaustive in code order when no sample is requested; otherwise a seeded
/// mt19937_64 stream. Throws ResourceError for exhaustive requests above 10^6.
std::vector<Instance> enumerate_corpus(const CorpusSpec& spec);

struct Tolerances {
    Rational lp = 0;                  // comparisons between LP values
    Rational adv = Rational(1, 1000); // comparisons involving the Adv sandwich
};

struct RelationCheck {
    std::string name;
    bool pass = false;
    double slack = 0;         // rhs + tolerance - lhs
    std::string tolerance;
};

struct InstanceReport {
    std::size_t index = 0;
    std::string kind;
    int n = 0;
    std::string table;
    std::vector<std::pair<std::string, Rational>> measures;
    std::vector<RelationCheck> checks;
    nlohmann::json witnesses = nlohmann::json::object();
    std::string error;

    bool pass() const;
    const Rational* measure(const std::string& name) const;
};

struct VerifyOptions {
    Tolerances tolerances;
    int jobs = 1;
    /// Test hook run on the computed measures before the relations are evaluated.
    std::function<void(std::vector<std::pair<std::string, Rational>>&)> tamper;
};

struct VerificationReport {
    CorpusSpec corpus;
    Tolerances tolerances;
    std::string version = kToolkitVersion;
    std::string config_hash;
    std::vector<InstanceReport> instances;
    std::optional<double> seconds;  // only when timing was requested

    std::size_t failures() const;
    std::size_t errors() const;
    bool pass() const { return failures() == 0 && errors() == 0; }
};

InstanceReport verify_instance(const Instance& inst, const VerifyOptions& options);
VerificationReport verify_relations(const CorpusSpec& spec, const std::vector<Instance>& corpus,
                                    const VerifyOptions& options);

/// Runs work(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& work);

/// 0 all pass, 1 a relation failed, 2 an instance hit a resource or input error.
int exit_code(const VerificationReport& rep);

enum class ReportFormat { Json, Csv, Markdown };
ReportFormat parse_report_format(const std::string& text);

nlohmann::json to_json(const VerificationReport& rep);
VerificationReport report_from_json(const nlohmann::json& j);
std::string render_report(const VerificationReport& rep, ReportFormat format);

/// FNV-1a over the settings that determine report content.
std::string config_hash(const CorpusSpec& spec, const Tolerances& tol);

/// key = value lines; '#' starts a comment. Throws InputError on malformed lines
/// or keys outside `allowed`.
std::map<std::string, std::string> parse_config(const std::string& text, const std::vector<std::string>& allowed);

/// Flag, then config value, then ADVKIT_JOBS, then the hardware thread count.
int resolve_jobs(std::optional<int> flag, const std::map<std::string, std::string>& config, const char* env);

/// One object per nonempty line, '#' lines skipped.
std::vector<Relation> parse_function_lines(const std::string& text, std::vector<std::optional<PartialFn>>* fns);

/// Values of a single measure or of all of them ("all") as JSON.
nlohmann::json measure_json(const std::optional<PartialFn>& fn, const Relation& r, const std::string& kind,
                            const Rational& eps);

struct LiftReport {
    nlohmann::json json;
    bool pass = false;
};

/// Lifting checks for f o G over the given protocols: q' against CC at every z,
/// the pair bound at every disjoint pair and the boosted distinguisher's error.
LiftReport lift_report(const Relation& f, const Gadget& g, const std::vector<NamedProtocol>& protocols,
                       const Rational& eps);

/// Scheduler statistics for z = 0^n, z = 10^(n-1) and z = 1^n.
LiftReport schedule_report(int n, const Rational& delta, int cap);

}  // namespace advkit
