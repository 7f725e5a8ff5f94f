#include "sbtrace/word_calculus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <shared_mutex>

#include "sbtrace/expm.hpp"

namespace sbtrace {

Word Word::eps(int j, int k) {
    Word w;
    w.ls.reserve(std::abs(j) + std::abs(k));
    for (int i = 0; i < std::abs(j); ++i) w.ls.push_back(j > 0 ? Letter::P1 : Letter::M1);
    for (int i = 0; i < std::abs(k); ++i) w.ls.push_back(k > 0 ? Letter::PS : Letter::MS);
    return w;
}

Word Word::transposed() const {
    Word w;
    w.ls.reserve(ls.size());
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
        switch (*it) {
            case Letter::P1: w.ls.push_back(Letter::M1); break;
            case Letter::M1: w.ls.push_back(Letter::P1); break;
            case Letter::PS: w.ls.push_back(Letter::MS); break;
            case Letter::MS: w.ls.push_back(Letter::PS); break;
        }
    }
    return w;
}

Word Word::concat(const Word& o) const {
    Word w = *this;
    w.ls.insert(w.ls.end(), o.ls.begin(), o.ls.end());
    return w;
}

Word Word::rotated(int gap) const {
    const int L = static_cast<int>(ls.size());
    if (L == 0) return *this;
    gap = ((gap % L) + L) % L;
    Word w;
    w.ls.reserve(L);
    w.ls.insert(w.ls.end(), ls.begin() + gap, ls.end());
    w.ls.insert(w.ls.end(), ls.begin(), ls.begin() + gap);
    return w;
}

int WordMonomial::degree() const {
    int d = 0;
    for (const auto& [w, e] : factors) d += static_cast<int>(w.size()) * e;
    return d;
}

void WordMonomial::bump(const Word& w, int delta) {
    if (w.empty() || delta == 0) return;
    auto it = std::find_if(factors.begin(), factors.end(),
                           [&](const auto& p) { return p.first == w; });
    if (it == factors.end()) {
        if (delta < 0) throw DomainError("WordMonomial: negative exponent");
        auto pos = std::find_if(factors.begin(), factors.end(),
                                [&](const auto& p) { return w < p.first; });
        factors.insert(pos, {w, delta});
        return;
    }
    it->second += delta;
    if (it->second < 0) throw DomainError("WordMonomial: negative exponent");
    if (it->second == 0) factors.erase(it);
}

WordMonomial WordMonomial::operator*(const WordMonomial& o) const {
    WordMonomial r = *this;
    for (const auto& [w, e] : o.factors) r.bump(w, e);
    return r;
}

int WordPolynomial::degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

WordPolynomial iota(const TracePolynomial& Q) {
    if (!Q.is_v_only()) throw DomainError("iota: argument must be u-free");
    WordPolynomial out;
    for (const auto& [m, c] : Q.terms()) {
        WordMonomial wm;
        for (const auto& [k, e] : m.v_exps) wm.bump(Word::eps(k, 0), e);
        out.add_term(wm, c);
    }
    return out;
}

WordPolynomial iota_star(const TracePolynomial& Q) {
    if (!Q.is_v_only()) throw DomainError("iota_star: argument must be u-free");
    WordPolynomial out;
    for (const auto& [m, c] : Q.terms()) {
        WordMonomial wm;
        for (const auto& [k, e] : m.v_exps) wm.bump(Word::eps(0, k), e);
        out.add_term(wm, std::conj(c));
    }
    return out;
}

WordPolynomial bform(const TracePolynomial& P, const TracePolynomial& Q) {
    WordPolynomial out;
    for (const auto& [ma, ca] : P.terms()) {
        for (const auto& [mb, cb] : Q.terms()) {
            WordMonomial wm;
            wm.bump(Word::eps(ma.u_exp, mb.u_exp), 1);
            for (const auto& [k, e] : ma.v_exps) wm.bump(Word::eps(k, 0), e);
            for (const auto& [k, e] : mb.v_exps) wm.bump(Word::eps(0, k), e);
            out.add_term(wm, ca * std::conj(cb));
        }
    }
    return out;
}

cplx eval_word(const Word& w, const Eigen::MatrixXcd& A, const GroupSpec& spec) {
    const int d = spec.matrix_dim();
    if (A.rows() != d || A.cols() != d) throw ShapeError("eval_word: matrix dimension mismatch");
    if (spec.family != Family::SO && spec.family != Family::Sp)
        throw DomainError("eval_word: word functional calculus is defined for SO and Sp");
    if (w.empty()) return 1.0;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    if (!lu.isInvertible()) throw SingularMatrixError("eval_word: singular matrix");
    const Eigen::MatrixXcd Ainv = lu.inverse();
    const Eigen::MatrixXcd Astar = A.adjoint();
    const Eigen::MatrixXcd Amstar = Ainv.adjoint();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(d, d);
    for (Letter l : w.ls) {
        switch (l) {
            case Letter::P1: acc *= A; break;
            case Letter::M1: acc *= Ainv; break;
            case Letter::PS: acc *= Astar; break;
            case Letter::MS: acc *= Amstar; break;
        }
    }
    return spec.normalized_trace(acc);
}

cplx eval_word_poly(const WordPolynomial& P, const Eigen::MatrixXcd& A, const GroupSpec& spec) {
    cplx out = 0.0;
    for (const auto& [m, c] : P.terms()) {
        cplx t = c;
        for (const auto& [w, e] : m.factors) {
            const cplx val = eval_word(w, A, spec);
            for (int i = 0; i < e; ++i) t *= val;
        }
        out += t;
    }
    return out;
}

namespace {

void all_words_of_length(int len, std::vector<Word>& out) {
    Word cur;
    cur.ls.assign(len, Letter::P1);
    std::vector<int> idx(len, 0);
    while (true) {
        for (int i = 0; i < len; ++i) cur.ls[i] = static_cast<Letter>(idx[i]);
        out.push_back(cur);
        int p = len - 1;
        while (p >= 0 && idx[p] == 3) idx[p--] = 0;
        if (p < 0) break;
        ++idx[p];
    }
}

void enumerate_word_monomials(const std::vector<Word>& vars, size_t start, int budget,
                              WordMonomial cur, std::vector<WordMonomial>& out) {
    out.push_back(cur);
    for (size_t i = start; i < vars.size(); ++i) {
        const int w = static_cast<int>(vars[i].size());
        if (w > budget) break;  // vars sorted by length
        WordMonomial next = cur;
        next.bump(vars[i], 1);
        enumerate_word_monomials(vars, i, budget - w, next, out);
    }
}

}  // namespace

std::vector<WordMonomial> word_basis(int m, int cap) {
    if (m < 0) throw ParameterError("word_basis: negative degree");
    if (m > cap) throw SizeError("word_basis: degree exceeds cap");
    std::vector<Word> vars;
    for (int len = 1; len <= m; ++len) all_words_of_length(len, vars);
    std::vector<WordMonomial> out;
    enumerate_word_monomials(vars, 0, m, WordMonomial{}, out);
    std::sort(out.begin(), out.end(), [](const WordMonomial& a, const WordMonomial& b) {
        const int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a < b;
    });
    return out;
}

std::array<WordPolynomial, 3> apply_generator_symbolic(Family family, double s, cplx tau,
                                                       const WordMonomial& W) {
    if (family != Family::SO && family != Family::Sp)
        throw DomainError("apply_generator_symbolic: family must be SO or Sp");
    const double t = tau.real(), theta = tau.imag();
    const cplx I(0.0, 1.0);

    // magic-formula constants, split by 1/N order
    const double diag_c1 = family == Family::SO ? 1.0 : -0.5;   // sum X^2 = (-1 + diag_c1/N) Id
    const double twist_c1 = family == Family::SO ? 1.0 : -0.5;  // coefficient of twisted word in XMX
    const double cross_c2 = family == Family::SO ? 1.0 : 0.25;  // prefactor of the magic-4 pair

    std::vector<Word> inst;
    for (const auto& [w, e] : W.factors)
        for (int i = 0; i < e; ++i) inst.push_back(w);

    std::array<WordPolynomial, 3> G;

    struct FlowPair {
        bool x1, x2;  // X or Y insertion for the first/second derivative slot
        cplx weight;
    };
    const FlowPair flows[3] = {{true, true, cplx(s - t / 2.0, 0.0)},
                               {false, false, cplx(t / 2.0, 0.0)},
                               {true, false, cplx(-theta, 0.0)}};

    auto slot_factor = [&](bool is_x, Letter l) -> cplx {
        switch (l) {
            case Letter::P1: return is_x ? cplx(1) : I;
            case Letter::M1: return is_x ? cplx(-1) : -I;
            case Letter::PS: return is_x ? cplx(-1) : I;
            case Letter::MS: return is_x ? cplx(1) : -I;
        }
        return 0.0;
    };
    // position of the inserted factor: after the letter for +1/-*, before for -1/+*
    auto gap_of = [](const Word& w, int slot) -> int {
        const int L = static_cast<int>(w.size());
        const Letter l = w.ls[slot];
        if (l == Letter::P1 || l == Letter::MS) return (slot + 1) % L;
        return slot;
    };

    for (const FlowPair& fl : flows) {
        if (fl.weight == 0.0) continue;
        for (size_t i1 = 0; i1 < inst.size(); ++i1) {
            const Word& wa = inst[i1];
            for (int j1 = 0; j1 < static_cast<int>(wa.size()); ++j1) {
                const cplx f1 = slot_factor(fl.x1, wa.ls[j1]);
                for (size_t i2 = 0; i2 < inst.size(); ++i2) {
                    const Word& wb = inst[i2];
                    for (int j2 = 0; j2 < static_cast<int>(wb.size()); ++j2) {
                        const cplx f2 = slot_factor(fl.x2, wb.ls[j2]);
                        const cplx c = 0.5 * fl.weight * f1 * f2;
                        if (i1 == i2 && j1 == j2) {
                            // second derivative of one slot: X^2 sits adjacent,
                            // sum X^2 = (-1 + diag_c1/N) Id
                            G[0].add_term(W, -c);
                            G[1].add_term(W, c * diag_c1);
                        } else if (i1 == i2) {
                            // two insertions in one trace: sum_X tr(X w1 X w2)
                            const int p = std::min(gap_of(wa, j1), gap_of(wb, j2));
                            const int q = std::max(gap_of(wa, j1), gap_of(wb, j2));
                            Word w1;
                            w1.ls.assign(wa.ls.begin() + p, wa.ls.begin() + q);
                            Word w2 = wa.rotated(q);
                            w2.ls.resize(wa.size() - w1.size());
                            WordMonomial rest = W;
                            rest.bump(wa, -1);
                            WordMonomial twisted = rest;
                            twisted.bump(w1.transposed().concat(w2), 1);
                            G[1].add_term(twisted, c * twist_c1);
                            WordMonomial split = rest;
                            split.bump(w1, 1);
                            split.bump(w2, 1);
                            G[0].add_term(split, -c);
                        } else {
                            // insertions in two different traces:
                            // sum_X tr(X w) tr(X w') via the trace-pair identity
                            const Word w = wa.rotated(gap_of(wa, j1));
                            const Word wp = wb.rotated(gap_of(wb, j2));
                            WordMonomial rest = W;
                            rest.bump(wa, -1);
                            rest.bump(wb, -1);
                            WordMonomial first = rest;
                            first.bump(w.transposed().concat(wp), 1);
                            G[2].add_term(first, c * cross_c2);
                            WordMonomial second = rest;
                            second.bump(w.concat(wp), 1);
                            G[2].add_term(second, -c * cross_c2);
                        }
                    }
                }
            }
        }
    }
    return G;
}

Eigen::SparseMatrix<cplx> GeneratorDecomposition::at(int N) const {
    const double n = N;
    Eigen::SparseMatrix<cplx> M = G0;
    M += (1.0 / n) * G1;
    M += (1.0 / (n * n)) * G2;
    return M;
}

namespace {

struct GenKey {
    Family family;
    double s;
    double tre, tim;
    int m;
    auto operator<=>(const GenKey&) const = default;
};

std::map<GenKey, std::unique_ptr<GeneratorDecomposition>> g_gen_cache;
std::shared_mutex g_gen_mutex;

}  // namespace

const GeneratorDecomposition& build_generator(Family family, double s, cplx tau, int m, int cap,
                                              const ProgressFn& progress) {
    if (family != Family::SO && family != Family::Sp)
        throw DomainError("build_generator: family must be SO or Sp");
    if (m > cap) throw SizeError("build_generator: degree exceeds cap");
    const GenKey key{family, s, tau.real(), tau.imag(), m};
    {
        std::shared_lock lock(g_gen_mutex);
        auto it = g_gen_cache.find(key);
        if (it != g_gen_cache.end()) return *it->second;
    }
    auto gd = std::make_unique<GeneratorDecomposition>();
    gd->family = family;
    gd->s = s;
    gd->tau = tau;
    gd->degree = m;
    gd->basis = word_basis(m, cap);
    const int dim = static_cast<int>(gd->basis.size());
    for (int i = 0; i < dim; ++i) gd->index[gd->basis[i]] = i;

    std::array<std::vector<Eigen::Triplet<cplx>>, 3> trip;
    for (int j = 0; j < dim; ++j) {
        const auto img = apply_generator_symbolic(family, s, tau, gd->basis[j]);
        for (int o = 0; o < 3; ++o) {
            for (const auto& [mono, c] : img[o].terms()) {
                auto it = gd->index.find(mono);
                if (it == gd->index.end())
                    throw DomainError("build_generator: image leaves the graded subspace");
                trip[o].emplace_back(it->second, j, c);
            }
        }
        if (progress && !progress(j + 1, dim))
            throw DomainError("build_generator: cancelled");
    }
    gd->G0.resize(dim, dim);
    gd->G1.resize(dim, dim);
    gd->G2.resize(dim, dim);
    gd->G0.setFromTriplets(trip[0].begin(), trip[0].end());
    gd->G1.setFromTriplets(trip[1].begin(), trip[1].end());
    gd->G2.setFromTriplets(trip[2].begin(), trip[2].end());

    std::unique_lock lock(g_gen_mutex);
    auto [it, inserted] = g_gen_cache.emplace(key, std::move(gd));
    return *it->second;
}

namespace {

constexpr uint32_t kGenMagic = 0x53425747;  // "SBWG"
constexpr uint32_t kGenVersion = 1;

void write_sparse(std::ofstream& os, const Eigen::SparseMatrix<cplx>& M) {
    const int64_t nnz = M.nonZeros();
    os.write(reinterpret_cast<const char*>(&nnz), sizeof nnz);
    for (int k = 0; k < M.outerSize(); ++k)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(M, k); it; ++it) {
            const int32_t r = static_cast<int32_t>(it.row()), c = static_cast<int32_t>(it.col());
            const double re = it.value().real(), im = it.value().imag();
            os.write(reinterpret_cast<const char*>(&r), sizeof r);
            os.write(reinterpret_cast<const char*>(&c), sizeof c);
            os.write(reinterpret_cast<const char*>(&re), sizeof re);
            os.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
}

Eigen::SparseMatrix<cplx> read_sparse(std::ifstream& is, int dim) {
    int64_t nnz = 0;
    is.read(reinterpret_cast<char*>(&nnz), sizeof nnz);
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(nnz);
    for (int64_t i = 0; i < nnz; ++i) {
        int32_t r, c;
        double re, im;
        is.read(reinterpret_cast<char*>(&r), sizeof r);
        is.read(reinterpret_cast<char*>(&c), sizeof c);
        is.read(reinterpret_cast<char*>(&re), sizeof re);
        is.read(reinterpret_cast<char*>(&im), sizeof im);
        trip.emplace_back(r, c, cplx(re, im));
    }
    Eigen::SparseMatrix<cplx> M(dim, dim);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

}  // namespace

void save_generator(const std::string& path, const GeneratorDecomposition& gd) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ParameterError("save_generator: cannot open " + path);
    const uint32_t magic = kGenMagic, version = kGenVersion;
    const uint8_t fam = static_cast<uint8_t>(gd.family);
    const double tre = gd.tau.real(), tim = gd.tau.imag();
    const int32_t deg = gd.degree;
    os.write(reinterpret_cast<const char*>(&magic), sizeof magic);
    os.write(reinterpret_cast<const char*>(&version), sizeof version);
    os.write(reinterpret_cast<const char*>(&fam), sizeof fam);
    os.write(reinterpret_cast<const char*>(&gd.s), sizeof gd.s);
    os.write(reinterpret_cast<const char*>(&tre), sizeof tre);
    os.write(reinterpret_cast<const char*>(&tim), sizeof tim);
    os.write(reinterpret_cast<const char*>(&deg), sizeof deg);
    write_sparse(os, gd.G0);
    write_sparse(os, gd.G1);
    write_sparse(os, gd.G2);
}

GeneratorDecomposition load_generator(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParameterError("load_generator: cannot open " + path);
    uint32_t magic = 0, version = 0;
    uint8_t fam = 0;
    double s = 0, tre = 0, tim = 0;
    int32_t deg = 0;
    is.read(reinterpret_cast<char*>(&magic), sizeof magic);
    is.read(reinterpret_cast<char*>(&version), sizeof version);
    if (magic != kGenMagic || version != kGenVersion)
        throw ParseError("load_generator: bad magic or version");
    is.read(reinterpret_cast<char*>(&fam), sizeof fam);
    is.read(reinterpret_cast<char*>(&s), sizeof s);
    is.read(reinterpret_cast<char*>(&tre), sizeof tre);
    is.read(reinterpret_cast<char*>(&tim), sizeof tim);
    is.read(reinterpret_cast<char*>(&deg), sizeof deg);
    GeneratorDecomposition gd;
    gd.family = static_cast<Family>(fam);
    gd.s = s;
    gd.tau = cplx(tre, tim);
    gd.degree = deg;
    gd.basis = word_basis(deg);
    const int dim = static_cast<int>(gd.basis.size());
    for (int i = 0; i < dim; ++i) gd.index[gd.basis[i]] = i;
    gd.G0 = read_sparse(is, dim);
    gd.G1 = read_sparse(is, dim);
    gd.G2 = read_sparse(is, dim);
    if (!is) throw ParseError("load_generator: truncated file");
    return gd;
}

cplx generator_semigroup_at_ones(const GroupSpec& spec, double s, cplx tau,
                                 const WordPolynomial& P, int cap) {
    if (P.is_zero()) return 0.0;
    const int m = P.degree();
    const GeneratorDecomposition& gd = build_generator(spec.family, s, tau, m, cap);
    Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(static_cast<int>(gd.basis.size()));
    for (const auto& [mono, c] : P.terms()) vec(gd.index.at(mono)) = c;
    const Eigen::VectorXcd out = expm_multiply(gd.at(spec.N), vec);
    return out.sum();  // every word monomial evaluates to 1 at the identity
}

double l2_norm_sq(const GroupSpec& spec, const TransformParams& params, const TracePolynomial& P,
                  Measure measure, int cap) {
    if (spec.family != Family::SO && spec.family != Family::Sp)
        throw DomainError("l2_norm_sq: exact norms require the SO or Sp word machinery");
    if (2 * P.trace_degree() > cap) throw SizeError("l2_norm_sq: degree exceeds cap/2");
    if (P.is_zero()) return 0.0;
    const WordPolynomial B = bform(P, P);
    const cplx tau = measure == Measure::Mu ? params.tau : cplx(0.0, 0.0);
    const cplx val = generator_semigroup_at_ones(spec, params.s, tau, B, cap);
    return std::max(0.0, val.real());
}

cplx complexified_moment(const GroupSpec& spec, double s, cplx tau, int k, int cap) {
    return generator_semigroup_at_ones(spec, s, tau, iota(TracePolynomial::v(k)), cap);
}

}  // namespace sbtrace
