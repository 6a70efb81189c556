#include "lowk/potential_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lowk/errors.hpp"

namespace lowk {

namespace {

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
    int key_col = 0;
    int value_col = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<Entry> tokenize(std::string_view text) {
    std::vector<Entry> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        std::size_t a = 0;
        while (a < line.size() && is_space(line[a])) ++a;
        if (a == line.size()) {
            if (end == text.size()) break;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, static_cast<int>(a) + 1, "expected 'key = value'");
        std::size_t kb = eq;
        while (kb > a && is_space(line[kb - 1])) --kb;
        if (kb == a) throw ParseError(line_no, static_cast<int>(a) + 1, "missing key");
        std::size_t vb = eq + 1;
        while (vb < line.size() && is_space(line[vb])) ++vb;
        std::size_t ve = line.size();
        while (ve > vb && is_space(line[ve - 1])) --ve;
        if (vb == ve) throw ParseError(line_no, static_cast<int>(eq) + 2, "missing value");
        out.push_back({std::string(line.substr(a, kb - a)), std::string(line.substr(vb, ve - vb)), line_no,
                       static_cast<int>(a) + 1, static_cast<int>(vb) + 1});
        if (end == text.size()) break;
    }
    return out;
}

// Whitespace-separated numbers of one value; columns reported per token.
std::vector<double> numbers(const Entry& e, std::size_t expected) {
    std::vector<double> out;
    std::size_t i = 0;
    const std::string& s = e.value;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        if (i == s.size()) break;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        double x = 0.0;
        const auto res = std::from_chars(s.data() + i, s.data() + j, x);
        const int col = e.value_col + static_cast<int>(i);
        if (res.ec != std::errc() || res.ptr != s.data() + j)
            throw ParseError(e.line, col, "invalid number '" + s.substr(i, j - i) + "' for key '" + e.key + "'");
        if (!std::isfinite(x)) throw ParseError(e.line, col, "non-finite number for key '" + e.key + "'");
        out.push_back(x);
        i = j;
    }
    if (out.size() != expected)
        throw ParseError(e.line, e.value_col,
                         "key '" + e.key + "' expects " + std::to_string(expected) + " number(s)");
    return out;
}

class Fields {
public:
    Fields(std::vector<Entry> entries, std::string prefix, int last_line)
        : last_line_(last_line), prefix_(std::move(prefix)) {
        for (auto& e : entries) {
            if (e.key == prefix_ + "shell" || e.key == prefix_ + "point") {
                repeated_[e.key].push_back(e);
                continue;
            }
            if (!single_.emplace(e.key, e).second)
                throw ParseError(e.line, e.key_col, "duplicate key '" + e.key + "'");
        }
    }

    const Entry* find(const std::string& k) {
        used_.insert(prefix_ + k);
        auto it = single_.find(prefix_ + k);
        return it == single_.end() ? nullptr : &it->second;
    }

    double number(const std::string& k) {
        const Entry* e = find(k);
        if (!e) throw ParseError(last_line_ + 1, 1, "missing key '" + prefix_ + k + "'");
        return numbers(*e, 1)[0];
    }

    double number_or(const std::string& k, double def) {
        const Entry* e = find(k);
        return e ? numbers(*e, 1)[0] : def;
    }

    const std::vector<Entry>& repeated(const std::string& k) {
        used_.insert(prefix_ + k);
        static const std::vector<Entry> none;
        auto it = repeated_.find(prefix_ + k);
        return it == repeated_.end() ? none : it->second;
    }

    // Every key under this prefix must have been consumed.
    void check_unused(const std::string& nested_prefix = "") const {
        for (const auto& [k, e] : single_) {
            if (!nested_prefix.empty() && k.rfind(nested_prefix, 0) == 0) continue;
            if (!used_.count(k)) throw ParseError(e.line, e.key_col, "unexpected key '" + k + "'");
        }
        for (const auto& [k, v] : repeated_)
            if (!used_.count(k)) throw ParseError(v.front().line, v.front().key_col, "unexpected key '" + k + "'");
    }

    int last_line_;

private:
    std::string prefix_;
    std::map<std::string, Entry> single_;
    std::map<std::string, std::vector<Entry>> repeated_;
    std::set<std::string> used_;
};

InnerShape parse_inner_like(Fields& f, const std::string& kind, const Entry* kind_entry);

Shape parse_shape(Fields& f, const Entry& kind_entry, std::vector<Entry>& all) {
    const std::string& kind = kind_entry.value;
    if (kind == "power_tail") {
        PowerTail p;
        p.exponent = f.number("exponent");
        p.onset = f.number("onset");
        p.strength = f.number_or("tail_strength", 1.0);
        std::vector<Entry> inner_entries;
        for (const auto& e : all)
            if (e.key.rfind("inner.", 0) == 0) inner_entries.push_back(e);
        Fields inner(inner_entries, "inner.", f.last_line_);
        const Entry* ik = inner.find("kind");
        p.inner = ik ? parse_inner_like(inner, ik->value, ik) : InnerShape{Zero{}};
        inner.check_unused();
        return p;
    }
    if (kind == "log_corrected_tail") {
        LogCorrectedTail l;
        l.onset = f.number("onset");
        l.log_power = f.number("log_power");
        l.strength = f.number_or("strength", 1.0);
        return l;
    }
    if (kind == "oscillating_gap") {
        OscillatingGap o;
        o.strength = f.number_or("strength", 1.0);
        o.power = f.number_or("power", 12.0);
        return o;
    }
    InnerShape in = parse_inner_like(f, kind, &kind_entry);
    return std::visit([](auto&& x) -> Shape { return x; }, std::move(in));
}

InnerShape parse_inner_like(Fields& f, const std::string& kind, const Entry* kind_entry) {
    if (kind == "zero") return Zero{};
    if (kind == "exponential") {
        Exponential e;
        e.strength = f.number_or("strength", 1.0);
        e.rate = f.number("rate");
        return e;
    }
    if (kind == "disc") {
        Disc d;
        d.strength = f.number_or("strength", 1.0);
        d.radius = f.number("radius");
        return d;
    }
    if (kind == "delta_shells") {
        DeltaShells s;
        for (const auto& e : f.repeated("shell")) {
            const auto v = numbers(e, 2);
            s.shells.push_back({v[0], v[1]});
        }
        return s;
    }
    if (kind == "tabulated") {
        std::vector<double> r, v;
        for (const auto& e : f.repeated("point")) {
            const auto x = numbers(e, 2);
            r.push_back(x[0]);
            v.push_back(x[1]);
        }
        try {
            return Tabulated(std::move(r), std::move(v));
        } catch (const PreconditionError& err) {
            throw ParseError(kind_entry->line, kind_entry->value_col, err.what());
        }
    }
    throw ParseError(kind_entry->line, kind_entry->value_col, "unknown kind '" + kind + "'");
}

std::string num(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_inner(std::ostringstream& os, const InnerShape& s, const std::string& p) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Zero>) {
                os << p << "kind = zero\n";
            } else if constexpr (std::is_same_v<T, Exponential>) {
                os << p << "kind = exponential\n" << p << "strength = " << num(x.strength) << "\n"
                   << p << "rate = " << num(x.rate) << "\n";
            } else if constexpr (std::is_same_v<T, Disc>) {
                os << p << "kind = disc\n" << p << "strength = " << num(x.strength) << "\n"
                   << p << "radius = " << num(x.radius) << "\n";
            } else if constexpr (std::is_same_v<T, DeltaShells>) {
                os << p << "kind = delta_shells\n";
                for (const auto& sh : x.shells) os << p << "shell = " << num(sh.strength) << " " << num(sh.radius) << "\n";
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                os << p << "kind = tabulated\n";
                for (std::size_t i = 0; i < x.r().size(); ++i)
                    os << p << "point = " << num(x.r()[i]) << " " << num(x.v()[i]) << "\n";
            }
        },
        s);
}

}  // namespace

Potential parse_potential(std::string_view text) {
    std::vector<Entry> entries = tokenize(text);
    int last_line = 0;
    for (const auto& e : entries) last_line = std::max(last_line, e.line);
    std::vector<Entry> top;
    for (const auto& e : entries)
        if (e.key.rfind("inner.", 0) != 0) top.push_back(e);
    Fields f(top, "", last_line);
    const Entry* kind = f.find("kind");
    if (!kind) throw ParseError(last_line + 1, 1, "missing key 'kind'");
    const double g = f.number_or("coupling", 1.0);
    Shape shape = parse_shape(f, *kind, entries);
    f.check_unused();
    if (kind->value != "power_tail")
        for (const auto& e : entries)
            if (e.key.rfind("inner.", 0) == 0) throw ParseError(e.line, e.key_col, "unexpected key '" + e.key + "'");
    try {
        return Potential(std::move(shape), g);
    } catch (const PreconditionError& err) {
        throw ParseError(kind->line, kind->value_col, err.what());
    }
}

Potential read_potential_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open potential file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_potential(ss.str());
}

std::string write_potential(const Potential& v) {
    std::ostringstream os;
    os << "# lowk potential\n";
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PowerTail>) {
                os << "kind = power_tail\n"
                   << "coupling = " << num(v.coupling()) << "\n"
                   << "exponent = " << num(x.exponent) << "\n"
                   << "onset = " << num(x.onset) << "\n"
                   << "tail_strength = " << num(x.strength) << "\n";
                write_inner(os, x.inner, "inner.");
            } else if constexpr (std::is_same_v<T, LogCorrectedTail>) {
                os << "kind = log_corrected_tail\n"
                   << "coupling = " << num(v.coupling()) << "\n"
                   << "strength = " << num(x.strength) << "\n"
                   << "onset = " << num(x.onset) << "\n"
                   << "log_power = " << num(x.log_power) << "\n";
            } else if constexpr (std::is_same_v<T, OscillatingGap>) {
                os << "kind = oscillating_gap\n"
                   << "coupling = " << num(v.coupling()) << "\n"
                   << "strength = " << num(x.strength) << "\n"
                   << "power = " << num(x.power) << "\n";
            } else {
                std::ostringstream body;
                write_inner(body, InnerShape{x}, "");
                const std::string b = body.str();
                const auto nl = b.find('\n');
                os << b.substr(0, nl + 1) << "coupling = " << num(v.coupling()) << "\n" << b.substr(nl + 1);
            }
        },
        v.shape());
    return os.str();
}

}  // namespace lowk
