#include "advkit/boolfn.hpp"

#include <algorithm>
#include <sstream>

namespace advkit {

std::vector<int> Block::coordinates() const {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (contains(i)) out.push_back(i + 1);
    return out;
}

Block make_block(std::initializer_list<int> coordinates) {
    Block b;
    for (int c : coordinates) {
        if (c < 1 || c > kMaxArity) throw InputError("block coordinate out of range: " + std::to_string(c));
        b.bits |= 1U << (c - 1);
    }
    return b;
}

Input flip_block(Input x, Block block, int n) {
    if (n < 1 || n > kMaxArity) throw InputError("arity out of range");
    if ((block.bits >> n) != 0) throw InputError("block reaches past coordinate " + std::to_string(n));
    if ((x >> n) != 0) throw InputError("input has bits past coordinate " + std::to_string(n));
    return x ^ block.bits;
}

std::string bit_string(Input x, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if ((x >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

Input parse_bit_string(std::string_view bits) {
    if (bits.empty() || bits.size() > kMaxArity) throw InputError("bit string length out of range");
    Input x = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            x |= 1U << i;
        else if (bits[i] != '0')
            throw InputError("bit string may only contain 0 and 1");
    }
    return x;
}

TruthTable::TruthTable(int n, std::vector<int> labels) : n_(n), labels_(std::move(labels)) {
    if (n < 1 || n > kMaxArity) throw InputError("arity must be in [1,16], got " + std::to_string(n));
    if (labels_.size() != (std::size_t{1} << n)) throw InputError("truth table must have 2^n entries");
    for (int v : labels_)
        if (v < kUndefined) throw InputError("invalid label in truth table");
}

namespace {

std::vector<int> to_labels(const std::vector<Value>& table) {
    std::vector<int> labels(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        switch (table[i]) {
            case Value::Zero: labels[i] = 0; break;
            case Value::One: labels[i] = 1; break;
            case Value::Undefined: labels[i] = TruthTable::kUndefined; break;
            default: throw InputError("partial function values must be 0, 1 or undefined");
        }
    }
    return labels;
}

}  // namespace

PartialFn::PartialFn(int n, std::vector<Value> table) : table_(n, to_labels(table)) {
    if (domain().empty()) throw InputError("partial function must have a nonempty domain");
}

bool PartialFn::is_total() const {
    return std::none_of(table_.labels().begin(), table_.labels().end(),
                        [](int v) { return v == TruthTable::kUndefined; });
}

bool PartialFn::is_constant() const {
    bool seen[2] = {false, false};
    for (int v : table_.labels())
        if (v >= 0) seen[v] = true;
    return !(seen[0] && seen[1]);
}

std::vector<Input> PartialFn::domain() const {
    std::vector<Input> dom;
    for (Input x = 0; x < size(); ++x)
        if (in_domain(x)) dom.push_back(x);
    return dom;
}

Relation::Relation(int n, std::vector<std::string> alphabet, std::vector<std::uint32_t> valid)
    : n_(n), alphabet_(std::move(alphabet)), valid_(std::move(valid)) {
    if (n < 1 || n > kMaxArity) throw InputError("arity must be in [1,16]");
    if (alphabet_.empty() || alphabet_.size() > 32) throw InputError("alphabet size must be in [1,32]");
    if (valid_.size() != (std::size_t{1} << n)) throw InputError("relation must list 2^n valid sets");
    const std::uint32_t universe =
        alphabet_.size() == 32 ? ~0U : ((1U << alphabet_.size()) - 1U);
    for (std::size_t x = 0; x < valid_.size(); ++x) {
        if (valid_[x] == 0) throw InputError("relation has an input with no valid output: " + bit_string(static_cast<Input>(x), n));
        if ((valid_[x] & ~universe) != 0) throw InputError("valid set uses a symbol outside the alphabet");
    }
}

bool Completion::completes(const PartialFn& f) const {
    if (total.arity() != f.arity()) return false;
    for (Input x = 0; x < total.size(); ++x) {
        if (total(x) != 0 && total(x) != 1) return false;
        if (f.in_domain(x) && total(x) != f.bit(x)) return false;
    }
    return true;
}

bool Completion::completes(const Relation& r) const {
    if (total.arity() != r.arity()) return false;
    for (Input x = 0; x < total.size(); ++x) {
        int s = total(x);
        if (s < 0 || s >= static_cast<int>(r.alphabet_size())) return false;
        if (((r.valid(x) >> s) & 1U) == 0) return false;
    }
    return true;
}

std::vector<Block> sensitive_blocks(const TruthTable& table, Input x) {
    if (x >= table.size()) throw InputError("input out of range");
    if (!table.defined(x)) throw DomainError("input " + bit_string(x, table.arity()) + " is outside the domain");
    std::vector<Block> out;
    const std::uint32_t full = static_cast<std::uint32_t>(table.size());
    for (std::uint32_t b = 1; b < full; ++b) {
        Input y = x ^ b;
        if (table.defined(y) && table(y) != table(x)) out.push_back(Block{b});
    }
    return out;
}

std::vector<Block> sensitive_blocks(const PartialFn& f, Input x) { return sensitive_blocks(f.table(), x); }

std::vector<Block> minimal_sensitive_blocks(const TruthTable& table, Input x) {
    std::vector<Block> all = sensitive_blocks(table, x);
    std::vector<Block> by_size = all;
    std::stable_sort(by_size.begin(), by_size.end(), [](Block a, Block b) { return a.size() < b.size(); });
    std::vector<Block> minimal;
    for (Block b : by_size) {
        bool has_sub = std::any_of(minimal.begin(), minimal.end(), [&](Block a) { return a.subset_of(b); });
        if (!has_sub) minimal.push_back(b);
    }
    std::sort(minimal.begin(), minimal.end());
    return minimal;
}

std::vector<Block> minimal_sensitive_blocks(const PartialFn& f, Input x) {
    return minimal_sensitive_blocks(f.table(), x);
}

std::vector<Input> critical_inputs(const Relation& r) {
    std::vector<Input> out;
    for (Input x = 0; x < r.size(); ++x)
        if (r.critical(x)) out.push_back(x);
    return out;
}

Relation to_relation(const PartialFn& f) {
    std::vector<std::uint32_t> valid(f.size());
    for (Input x = 0; x < f.size(); ++x) valid[x] = f.in_domain(x) ? (1U << f.bit(x)) : 3U;
    return Relation(f.arity(), {"0", "1"}, std::move(valid));
}

std::uint64_t count_completions(const Relation& r) {
    std::uint64_t count = 1;
    constexpr std::uint64_t kSaturate = std::uint64_t{1} << 62;
    for (Input x = 0; x < r.size(); ++x) {
        count *= static_cast<std::uint64_t>(popcount(r.valid(x)));
        if (count > kSaturate) return kSaturate;
    }
    return count;
}

CompletionEnumerator::CompletionEnumerator(const Relation& r, std::uint64_t cap) { init(r, cap); }

CompletionEnumerator::CompletionEnumerator(const PartialFn& f, std::uint64_t cap) { init(to_relation(f), cap); }

void CompletionEnumerator::init(const Relation& r, std::uint64_t cap) {
    count_ = count_completions(r);
    if (count_ > cap)
        throw ResourceError("relation has " + std::to_string(count_) + " completions, cap is " + std::to_string(cap));
    std::vector<int> labels(r.size(), TruthTable::kUndefined);
    for (Input x = 0; x < r.size(); ++x) {
        std::vector<int> opts;
        for (int s = 0; s < static_cast<int>(r.alphabet_size()); ++s)
            if ((r.valid(x) >> s) & 1U) opts.push_back(s);
        if (opts.size() == 1) {
            labels[x] = opts[0];
        } else {
            free_.push_back(x);
            choices_.push_back(std::move(opts));
        }
    }
    fixed_ = TruthTable(r.arity(), std::move(labels));
    cursor_.assign(free_.size(), 0);
}

std::optional<Completion> CompletionEnumerator::next() {
    if (done_) return std::nullopt;
    std::vector<int> labels = fixed_.labels();
    for (std::size_t j = 0; j < free_.size(); ++j) labels[free_[j]] = choices_[j][cursor_[j]];
    Completion c{TruthTable(fixed_.arity(), std::move(labels))};
    std::size_t j = 0;
    for (; j < free_.size(); ++j) {
        if (++cursor_[j] < choices_[j].size()) break;
        cursor_[j] = 0;
    }
    if (j == free_.size()) done_ = true;
    return c;
}

namespace {

PartialFn from_predicate(int n, auto&& value_of) {
    std::vector<Value> table(std::size_t{1} << n);
    for (Input x = 0; x < table.size(); ++x) table[x] = value_of(x);
    return PartialFn(n, std::move(table));
}

Value bit_value(bool b) { return b ? Value::One : Value::Zero; }

}  // namespace

PartialFn or_fn(int n) {
    return from_predicate(n, [](Input x) { return bit_value(x != 0); });
}

PartialFn and_fn(int n) {
    return from_predicate(n, [n](Input x) { return bit_value(popcount(x) == n); });
}

PartialFn parity_fn(int n) {
    return from_predicate(n, [](Input x) { return bit_value(popcount(x) % 2 == 1); });
}

PartialFn majority_fn(int n) {
    return from_predicate(n, [n](Input x) { return bit_value(2 * popcount(x) > n); });
}

PartialFn identity_fn() { return PartialFn(1, {Value::Zero, Value::One}); }

PartialFn promise_or_fn(int k) {
    return from_predicate(k, [](Input x) {
        int w = popcount(x);
        return w == 0 ? Value::Zero : (w == 1 ? Value::One : Value::Undefined);
    });
}

PartialFn threshold_fn(int n, int t) {
    return from_predicate(n, [t](Input x) { return bit_value(popcount(x) >= t); });
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct Fields {
    std::vector<std::pair<std::string, std::string>> items;

    const std::string& get(const std::string& key) const {
        for (const auto& [k, v] : items)
            if (k == key) return v;
        throw InputError("missing field '" + key + "'");
    }
};

Fields split_fields(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    Fields fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t end = line.find(';', pos);
        if (end == std::string_view::npos) end = line.size();
        std::string_view item = line.substr(pos, end - pos);
        auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) throw InputError("malformed field: '" + std::string(item) + "'");
        fields.items.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
        pos = end + 1;
    }
    return fields;
}

int parse_arity(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("arity must be a positive integer, got '" + s + "'");
    int n = std::stoi(s);
    if (n < 1 || n > kMaxArity) throw InputError("arity must be in [1,16]");
    return n;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t end = s.find(',', pos);
        out.push_back(s.substr(pos, end == std::string::npos ? std::string::npos : end - pos));
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return out;
}

}  // namespace

std::string format_partial_fn(const PartialFn& f) {
    std::ostringstream os;
    os << "n=" << f.arity() << ";table=";
    for (Input x = 0; x < f.size(); ++x) {
        if (x) os << ',';
        int v = f.bit(x);
        os << (v < 0 ? '*' : static_cast<char>('0' + v));
    }
    return os.str();
}

std::string format_relation(const Relation& r) {
    std::ostringstream os;
    os << "n=" << r.arity() << ";sigma=";
    for (std::size_t s = 0; s < r.alphabet_size(); ++s) os << (s ? "," : "") << r.alphabet()[s];
    os << ";valid=";
    for (Input x = 0; x < r.size(); ++x) {
        if (x) os << ',';
        os << '{';
        bool first = true;
        for (std::size_t s = 0; s < r.alphabet_size(); ++s)
            if ((r.valid(x) >> s) & 1U) {
                os << (first ? "" : ",") << r.alphabet()[s];
                first = false;
            }
        os << '}';
    }
    return os.str();
}

bool is_relation_line(std::string_view line) { return line.find("sigma=") != std::string_view::npos; }

PartialFn parse_partial_fn(std::string_view line) {
    Fields fields = split_fields(line);
    if (fields.items.size() != 2 || fields.items[0].first != "n" || fields.items[1].first != "table")
        throw InputError("function line must be exactly 'n=<k>;table=<entries>'");
    int n = parse_arity(fields.get("n"));
    std::vector<std::string> entries = split_commas(fields.get("table"));
    if (entries.size() != (std::size_t{1} << n))
        throw InputError("table has " + std::to_string(entries.size()) + " entries, expected " +
                         std::to_string(std::size_t{1} << n));
    std::vector<Value> table;
    table.reserve(entries.size());
    for (const std::string& e : entries) {
        if (e == "0") table.push_back(Value::Zero);
        else if (e == "1") table.push_back(Value::One);
        else if (e == "*") table.push_back(Value::Undefined);
        else throw InputError("table entry must be 0, 1 or *, got '" + e + "'");
    }
    return PartialFn(n, std::move(table));
}

Relation parse_relation(std::string_view line) {
    Fields fields = split_fields(line);
    if (fields.items.size() != 3 || fields.items[0].first != "n" || fields.items[1].first != "sigma" ||
        fields.items[2].first != "valid")
        throw InputError("relation line must be exactly 'n=<k>;sigma=<symbols>;valid=<sets>'");
    int n = parse_arity(fields.get("n"));
    std::vector<std::string> alphabet = split_commas(fields.get("sigma"));
    for (const std::string& s : alphabet) {
        if (s.empty() || s.find_first_of("{}, \t") != std::string::npos)
            throw InputError("invalid alphabet symbol '" + s + "'");
        if (std::count(alphabet.begin(), alphabet.end(), s) != 1) throw InputError("duplicate symbol '" + s + "'");
    }
    if (alphabet.size() > 32) throw InputError("alphabet too large");
    const std::string& sets = fields.get("valid");
    std::vector<std::uint32_t> valid;
    std::size_t pos = 0;
    while (pos < sets.size()) {
        if (sets[pos] != '{') throw InputError("expected '{' in valid sets at offset " + std::to_string(pos));
        std::size_t close = sets.find('}', pos);
        if (close == std::string::npos) throw InputError("unterminated set literal");
        std::string body = sets.substr(pos + 1, close - pos - 1);
        std::uint32_t mask = 0;
        if (!body.empty()) {
            for (const std::string& sym : split_commas(body)) {
                auto it = std::find(alphabet.begin(), alphabet.end(), sym);
                if (it == alphabet.end()) throw InputError("unknown symbol '" + sym + "' in valid set");
                mask |= 1U << (it - alphabet.begin());
            }
        }
        valid.push_back(mask);
        pos = close + 1;
        if (pos < sets.size()) {
            if (sets[pos] != ',') throw InputError("expected ',' between set literals");
            ++pos;
            if (pos == sets.size()) throw InputError("trailing ',' in valid sets");
        }
    }
    if (valid.size() != (std::size_t{1} << n))
        throw InputError("relation lists " + std::to_string(valid.size()) + " sets, expected " +
                         std::to_string(std::size_t{1} << n));
    return Relation(n, std::move(alphabet), std::move(valid));
}

}  // namespace advkit
