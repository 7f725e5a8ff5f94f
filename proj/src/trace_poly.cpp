#include "sbtrace/trace_poly.hpp"
#include <functional>

#include <cctype>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sbtrace {

void Monomial::bump_v(int k, int delta) {
    if (k == 0 || delta == 0) return;
    auto it = std::find_if(v_exps.begin(), v_exps.end(),
                           [k](const auto& p) { return p.first == k; });
    if (it == v_exps.end()) {
        if (delta < 0) throw DomainError("Monomial: negative v exponent");
        auto pos = std::find_if(v_exps.begin(), v_exps.end(),
                                [k](const auto& p) { return v_key_less(k, p.first); });
        v_exps.insert(pos, {k, delta});
        return;
    }
    it->second += delta;
    if (it->second < 0) throw DomainError("Monomial: negative v exponent");
    if (it->second == 0) v_exps.erase(it);
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r = *this;
    r.u_exp += o.u_exp;
    for (const auto& [k, e] : o.v_exps) r.bump_v(k, e);
    return r;
}

bool Monomial::operator<(const Monomial& o) const {
    const int da = trace_degree(), db = o.trace_degree();
    if (da != db) return da < db;
    const int ua = std::abs(u_exp), ub = std::abs(o.u_exp);
    if (ua != ub) return ua > ub;  // higher |u| power first within a degree
    if (u_exp != o.u_exp) return u_exp > o.u_exp;
    const size_t n = std::min(v_exps.size(), o.v_exps.size());
    for (size_t i = 0; i < n; ++i) {
        if (v_exps[i].first != o.v_exps[i].first)
            return v_key_less(v_exps[i].first, o.v_exps[i].first);
        if (v_exps[i].second != o.v_exps[i].second) return v_exps[i].second > o.v_exps[i].second;
    }
    return v_exps.size() < o.v_exps.size();
}

TracePolynomial to_complex(const TracePolynomialQ& p) {
    TracePolynomial r;
    for (const auto& [m, c] : p.terms()) r.add_term(m, to_cplx(c));
    return r;
}

double coeff_distance(const TracePolynomial& a, const TracePolynomial& b) {
    double d = 0;
    const TracePolynomial diff = a - b;
    for (const auto& [m, c] : diff.terms()) d = std::max(d, std::abs(c));
    return d;
}

namespace {

// v-monomials of degree exactly d. Keys are visited in the canonical order
// 1, -1, 2, -2, ...; key_index 2r maps to +(r+1), 2r+1 to -(r+1). Each
// monomial is reached exactly once (one exponent decision per key).
void enumerate_v_monomials(int d, int key_index, const Monomial& cur, std::vector<Monomial>& out) {
    if (d == 0) {
        out.push_back(cur);
        return;
    }
    const int absk = key_index / 2 + 1;
    if (absk > d) return;  // remaining keys are all too heavy
    enumerate_v_monomials(d, key_index + 1, cur, out);
    const int k = (key_index % 2 == 0) ? absk : -absk;
    Monomial next = cur;
    for (int e = 1; absk * e <= d; ++e) {
        next.bump_v(k, 1);
        enumerate_v_monomials(d - absk * e, key_index + 1, next, out);
    }
}

}  // namespace

std::vector<Monomial> basis_monomials(int m, int cap) {
    if (m < 0) throw ParameterError("basis_monomials: negative degree");
    if (m > cap) {
        std::ostringstream os;
        os << "basis_monomials: degree " << m << " exceeds cap " << cap;
        throw SizeError(os.str());
    }
    std::vector<Monomial> out;
    for (int d = 0; d <= m; ++d) {
        for (int ua = d; ua >= 0; --ua) {
            for (int su = 0; su < (ua == 0 ? 1 : 2); ++su) {
                const int a = su == 0 ? ua : -ua;
                std::vector<Monomial> vs;
                enumerate_v_monomials(d - ua, 0, Monomial{}, vs);
                std::sort(vs.begin(), vs.end());
                for (auto& vm : vs) {
                    vm.u_exp = a;
                    out.push_back(vm);
                }
            }
        }
    }
    return out;
}

Eigen::MatrixXcd eval_trace_poly(const TracePolynomial& P, const Eigen::MatrixXcd& A,
                                 const GroupSpec& spec) {
    const int d = spec.matrix_dim();
    if (A.rows() != d || A.cols() != d) throw ShapeError("eval_trace_poly: matrix dimension mismatch");

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    if (!lu.isInvertible()) throw SingularMatrixError("eval_trace_poly: singular matrix");
    const Eigen::MatrixXcd Ainv = lu.inverse();

    // powers cache: pw[k] = A^k for the exponents we touch
    std::map<int, Eigen::MatrixXcd> pw;
    pw[0] = Eigen::MatrixXcd::Identity(d, d);
    std::function<const Eigen::MatrixXcd&(int)> power = [&](int k) -> const Eigen::MatrixXcd& {
        auto it = pw.find(k);
        if (it != pw.end()) return it->second;
        const Eigen::MatrixXcd& base = k > 0 ? A : Ainv;
        Eigen::MatrixXcd acc = power(k > 0 ? k - 1 : k + 1) * base;
        return pw.emplace(k, std::move(acc)).first->second;
    };

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& [m, c] : P.terms()) {
        cplx scalar = c;
        for (const auto& [k, e] : m.v_exps) {
            const cplx vk = spec.normalized_trace(power(k));
            for (int i = 0; i < e; ++i) scalar *= vk;
        }
        out += scalar * power(m.u_exp);
    }
    return out;
}

cplx eval_scalar(const TracePolynomial& P, cplx u_val, const std::map<int, cplx>& v_vals) {
    cplx out = 0.0;
    for (const auto& [m, c] : P.terms()) {
        cplx t = c;
        t *= std::pow(u_val, m.u_exp);
        for (const auto& [k, e] : m.v_exps) {
            auto it = v_vals.find(k);
            if (it == v_vals.end()) {
                std::ostringstream os;
                os << "eval_scalar: missing value for v_" << k;
                throw DomainError(os.str());
            }
            t *= std::pow(it->second, e);
        }
        out += t;
    }
    return out;
}

cplx eval_at_ones(const TracePolynomial& P, cplx u_val) {
    cplx out = 0.0;
    for (const auto& [m, c] : P.terms()) {
        out += c * std::pow(u_val, m.u_exp);
    }
    return out;
}

// --- serialization ---

std::string to_json(const TracePolynomial& P) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& [m, c] : P.terms()) {
        nlohmann::ordered_json t;
        t["u"] = m.u_exp;
        nlohmann::ordered_json v = nlohmann::ordered_json::object();
        for (const auto& [k, e] : m.v_exps) v[std::to_string(k)] = e;
        t["v"] = v;
        t["re"] = c.real();
        t["im"] = c.imag();
        terms.push_back(t);
    }
    nlohmann::ordered_json root;
    root["terms"] = terms;
    return root.dump();
}

TracePolynomial poly_from_json(const std::string& json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("poly_from_json: ") + e.what());
    }
    if (!root.contains("terms") || !root["terms"].is_array())
        throw ParseError("poly_from_json: missing \"terms\" array");
    TracePolynomial P;
    for (const auto& t : root["terms"]) {
        Monomial m;
        m.u_exp = t.value("u", 0);
        if (t.contains("v")) {
            for (const auto& [key, val] : t["v"].items()) {
                int k = 0;
                try {
                    k = std::stoi(key);
                } catch (...) {
                    throw ParseError("poly_from_json: bad v key '" + key + "'");
                }
                if (k == 0) throw ParseError("poly_from_json: v key 0 is not allowed");
                const int e = val.get<int>();
                if (e <= 0) throw ParseError("poly_from_json: v exponents must be positive");
                m.bump_v(k, e);
            }
        }
        P.add_term(m, cplx(t.value("re", 0.0), t.value("im", 0.0)));
    }
    return P;
}

namespace {

struct Lexer {
    const std::string& s;
    size_t i = 0;

    explicit Lexer(const std::string& str) : s(str) { skip(); }
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() const { return i >= s.size(); }
    char peek() const { return i < s.size() ? s[i] : '\0'; }
    char get() { return s[i++]; }

    long read_int() {
        skip();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++i;
        } else if (peek() == '+') {
            ++i;
        }
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("parse_poly: expected integer at position " + std::to_string(i));
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) v = v * 10 + (get() - '0');
        return neg ? -v : v;
    }

    double read_number() {
        skip();
        size_t start = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.' ||
                                s[i] == 'e' || s[i] == 'E' ||
                                ((s[i] == '+' || s[i] == '-') && i > start &&
                                 (s[i - 1] == 'e' || s[i - 1] == 'E'))))
            ++i;
        if (i == start) throw ParseError("parse_poly: expected number at position " + std::to_string(start));
        return std::stod(s.substr(start, i - start));
    }
};

// factor := number ['i'] | 'i' | u ['^' int] | v<int> ['^' int] | '(' a+bi ')'
// term := factor ('*' factor)*, sums of terms with +/-.
TracePolynomial parse_factor(Lexer& lx) {
    lx.skip();
    const char c = lx.peek();
    if (c == 'u') {
        lx.get();
        int e = 1;
        lx.skip();
        if (lx.peek() == '^') {
            lx.get();
            e = static_cast<int>(lx.read_int());
        }
        return TracePolynomial::u(e);
    }
    if (c == 'v') {
        lx.get();
        const int k = static_cast<int>(lx.read_int());
        if (k == 0) throw ParseError("parse_poly: v0 is not a variable");
        int e = 1;
        lx.skip();
        if (lx.peek() == '^') {
            lx.get();
            e = static_cast<int>(lx.read_int());
            if (e <= 0) throw ParseError("parse_poly: v exponent must be positive");
        }
        Monomial m;
        m.bump_v(k, e);
        return TracePolynomial::monomial(m);
    }
    if (c == 'i') {
        lx.get();
        return TracePolynomial(cplx(0.0, 1.0));
    }
    if (c == '(') {
        lx.get();
        const double re = lx.read_number();
        lx.skip();
        double im = 0.0;
        if (lx.peek() == '+' || lx.peek() == '-') {
            const bool neg = lx.get() == '-';
            im = lx.read_number();
            if (neg) im = -im;
            lx.skip();
            if (lx.peek() != 'i') throw ParseError("parse_poly: expected 'i' in complex literal");
            lx.get();
        }
        lx.skip();
        if (lx.peek() != ')') throw ParseError("parse_poly: expected ')'");
        lx.get();
        return TracePolynomial(cplx(re, im));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const double x = lx.read_number();
        lx.skip();
        if (lx.peek() == 'i') {
            lx.get();
            return TracePolynomial(cplx(0.0, x));
        }
        return TracePolynomial(cplx(x, 0.0));
    }
    throw ParseError(std::string("parse_poly: unexpected character '") + c + "'");
}

}  // namespace

TracePolynomial parse_poly(const std::string& expr) {
    Lexer lx(expr);
    TracePolynomial sum;
    bool first = true;
    while (true) {
        lx.skip();
        if (lx.done()) {
            if (first) throw ParseError("parse_poly: empty expression");
            break;
        }
        double sign = 1.0;
        if (lx.peek() == '+' || lx.peek() == '-') {
            if (lx.get() == '-') sign = -1.0;
        } else if (!first) {
            throw ParseError("parse_poly: expected '+' or '-' between terms");
        }
        TracePolynomial term = parse_factor(lx);
        lx.skip();
        while (lx.peek() == '*') {
            lx.get();
            term *= parse_factor(lx);
            lx.skip();
        }
        sum += cplx(sign, 0.0) * term;
        first = false;
    }
    return sum;
}

TracePolynomial parse_poly_or_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return poly_from_json(text);
        break;
    }
    return parse_poly(text);
}

std::string to_string(const TracePolynomial& P) {
    if (P.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : P.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        if (m.u_exp != 0) os << "*u^" << m.u_exp;
        for (const auto& [k, e] : m.v_exps) {
            os << "*v" << k;
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

std::string to_string(Family f) {
    switch (f) {
        case Family::SO: return "so";
        case Family::SU: return "su";
        case Family::U: return "u";
        case Family::Sp: return "sp";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    if (s == "so" || s == "SO") return Family::SO;
    if (s == "su" || s == "SU") return Family::SU;
    if (s == "u" || s == "U") return Family::U;
    if (s == "sp" || s == "Sp" || s == "SP") return Family::Sp;
    throw ParameterError("unknown group family '" + s + "'");
}

Eigen::MatrixXcd symplectic_form(int N) {
    Eigen::MatrixXcd Om = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        Om(2 * i, 2 * i + 1) = 1.0;
        Om(2 * i + 1, 2 * i) = -1.0;
    }
    return Om;
}

}  // namespace sbtrace
