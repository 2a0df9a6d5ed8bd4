#pragma once

// Exact simulation of public-coin two-party protocols on f o G, the joint
// distribution of inputs, dependency-breaking variables and transcripts under
// the lifted hard distributions, and the information quantities derived from it.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "advkit/gadgets.hpp"
#include "advkit/interval.hpp"
#include "json.hpp"

namespace advkit {

enum class Speaker { Alice, Bob };

/// Internal nodes send msg[own input][r]; leaves output output[bob input][r].
struct ProtocolNode {
    bool leaf = false;
    Speaker speaker = Speaker::Alice;
    std::vector<std::vector<int>> msg;
    std::array<int, 2> child{-1, -1};
    std::vector<std::vector<int>> output;
};

struct ProtocolTree {
    std::size_t alice_inputs = 0;
    std::size_t bob_inputs = 0;
    std::vector<Rational> randomness;  // probability of each public random string
    std::vector<ProtocolNode> nodes;   // root is node 0

    /// Throws InputError on a malformed tree.
    void validate() const;
    /// Length of the longest root-to-leaf path.
    int depth() const;
};

inline constexpr int kMaxProtocolDepth = 8;
inline constexpr std::size_t kMaxRandomness = 256;
inline constexpr std::size_t kMaxJointEntries = std::size_t{1} << 26;

struct Run {
    std::vector<int> transcript;
    int leaf = 0;
    int output = 0;
};

Run run_protocol(const ProtocolTree& p, std::size_t x, std::size_t y, std::size_t r);

/// Message bit from (speaker, own input, random string, transcript so far).
using MessageFn = std::function<int(Speaker, std::size_t, std::size_t, const std::vector<int>&)>;
/// Output symbol from (Bob's input, random string, full transcript).
using OutputFn = std::function<int(std::size_t, std::size_t, const std::vector<int>&)>;

/// Complete binary tree whose level t is spoken by rounds[t].
ProtocolTree build_protocol(std::size_t alice_inputs, std::size_t bob_inputs, std::vector<Rational> randomness,
                            const std::vector<Speaker>& rounds, const MessageFn& message, const OutputFn& output);

ProtocolTree constant_protocol(std::size_t alice_inputs, std::size_t bob_inputs, int output);

struct NamedProtocol {
    std::string name;
    ProtocolTree tree;
};

/// Zero-error protocols for f o G: Alice reveals her input; the same padded by
/// an idle round; Alice reveals it under a public one-time pad; Bob reveals his
/// input and Alice answers; copy by copy, Bob sends y_i and Alice replies G(x_i, y_i).
/// Bob outputs the least valid label.
std::vector<NamedProtocol> standard_protocols(const Relation& f, const Gadget& g);

/// Worst case over (x, y) with a constrained inner string of Pr_r[output not in f(G(x,y))].
Rational protocol_error(const ProtocolTree& p, const Relation& f, const Gadget& g);

struct JointDistribution {
    std::vector<std::string> names;
    std::vector<std::pair<std::vector<int>, Rational>> entries;

    int index(const std::string& name) const;
    std::vector<int> indices(const std::vector<std::string>& names) const;
    std::map<std::vector<int>, Rational> marginal(const std::vector<int>& vars) const;
    Rational total() const;
};

/// Variables X1..Xn, Y1..Yn, D1..Dn, U1..Un, R, T (leaf reached). Inputs are
/// drawn from mu_z, the product of uniform distributions on G^-1(z_i); D is
/// uniform, U_i = X_i if D_i = 0 else Y_i, R follows the protocol. The input and
/// D marginals are re-checked after construction.
JointDistribution transcript_joint(const ProtocolTree& p, const Gadget& g, const std::vector<int>& z);

Interval entropy(const JointDistribution& j, const std::vector<int>& vars);

/// H(AC) + H(BC) - H(ABC) - H(C) in bits; exactly [0,0] when A and B are
/// conditionally independent given C.
Interval cond_mutual_info(const JointDistribution& j, const std::vector<int>& a, const std::vector<int>& b,
                          const std::vector<int>& c);
Interval cond_mutual_info_by_name(const JointDistribution& j, const std::vector<std::string>& a,
                                  const std::vector<std::string>& b, const std::vector<std::string>& c);

struct LiftScheme {
    std::vector<int> z;
    /// I(X_i:T | X_<i Y D U R) + I(Y_i:T | Y_<i X D U R)
    std::vector<Interval> q;
    /// I(X_i:T | X_<i Y D U R) + I(X_i:T | Y_<i X D U R); the second term conditions on X_i.
    std::vector<Interval> literal;
    Interval sum;
    int cc = 0;
    bool within_cc = false;  // sum <= CC + 1e-20, certified
};

LiftScheme lift_weight_scheme(const ProtocolTree& p, const Relation& f, const Gadget& g, const std::vector<int>& z);

struct PairBound {
    Interval value;         // sum over i with z_i != w_i of min(q'(z,i), q'(w,i))
    std::vector<int> b1;    // positions where q'(z,i) attains the minimum
    std::vector<int> b2;
    std::vector<int> hybrid;  // w on b1, z elsewhere
    LiftScheme qz;
    LiftScheme qw;
    Rational protocol_error;
};

PairBound min_pair_bound(const ProtocolTree& p, const Relation& f, const Gadget& g, const std::vector<int>& z,
                         const std::vector<int>& w);

/// Pr over mu_v and R that the output lies in the label set `labels` (a mask).
Rational output_probability(const ProtocolTree& p, const Gadget& g, const std::vector<int>& v, std::uint32_t labels);

struct Distinguisher {
    bool case_one = false;  // Pr_{mu_v}[T in f(z)] <= 1/2 held
    Rational hypothesis;    // that probability
    std::vector<int> block; // positions where z and v differ
    int k = 0;
    int threshold = 0;      // declare G(a,b) = 0 iff at least this many runs land in f(z)
    /// One run on gadget inputs (a, b): embeds (a, b) into the block by s-sampling;
    /// the other positions take a uniform preimage pair carried by the random
    /// string, of which Alice reads only x and Bob only y. Outputs 1 iff the
    /// inner output lies in f(z).
    ProtocolTree single_run;
    std::vector<Rational> hit;       // per (a,b), row-major: Pr[a run outputs 1]
    std::vector<int> gadget_value;   // G(a,b), same order
    Rational eps;
    Rational error_zero;         // worst over G(a,b) = 0
    Rational error_one;          // worst over G(a,b) = 1
    Rational error() const { return error_zero > error_one ? error_zero : error_one; }
    /// Worst-case error with `runs` repetitions and threshold ceil((1-eps) runs).
    Rational error_with(int runs) const;
};

int boosting_runs(const Rational& eps);

/// Returns with case_one = false and nothing built when the hypothesis fails;
/// the caller then retries with w in place of z.
Distinguisher build_distinguisher(const ProtocolTree& p, const Relation& f, const Gadget& g, const std::vector<int>& z,
                                   const std::vector<int>& v, const Rational& eps);

/// P[Binomial(k, p) >= t] exactly.
Rational binomial_upper_tail(int k, const Rational& p, int t);

struct ScheduleStats {
    int n = 0;
    int cap = 0;
    Rational delta;
    Rational zero_invocations;  // expected runs on gadgets with value 0
    Rational one_invocations;   // expected runs on gadgets with value 1
    Rational detect;            // Pr[a 1-gadget is labelled 1]
    Rational false_alarm;       // Pr[a 0-gadget is labelled 1]
    Rational output_one;        // Pr[the scan reports 1]
    double c0 = 0;              // zero_invocations / n
    double c1 = 0;              // one_invocations / log2 n
};

/// Scans gadgets in order, rerunning each until its 0 outputs outnumber its 1
/// outputs; after cap runs without that the gadget is believed to be 1 and the
/// scan stops. Each run errs independently with probability delta.
ScheduleStats noisy_or_schedule(int n, const std::vector<int>& z, const Rational& delta, int cap);
int default_schedule_cap(int n);

nlohmann::json to_json(const ProtocolTree& p);
ProtocolTree protocol_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LiftScheme& s);
nlohmann::json to_json(const ScheduleStats& s);

}  // namespace advkit
