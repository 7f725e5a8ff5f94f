#include "sbtrace/heat_mc.hpp"

#include <cmath>
#include <atomic>
#include <mutex>
#include <random>
#include <thread>
#include <sstream>

#include "sbtrace/expm.hpp"
#include "sbtrace/free_transform.hpp"
#include "sbtrace/lie_groups.hpp"
#include "sbtrace/operator_engine.hpp"
#include "sbtrace/word_calculus.hpp"

namespace sbtrace {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent substream per sample, independent of any worker assignment.
Rng substream(uint64_t seed, long sample_index) {
    return Rng(splitmix64(seed ^ splitmix64(static_cast<uint64_t>(sample_index) + 0x51ULL)));
}

}  // namespace

Eigen::MatrixXcd sample_rho(const MCConfig& cfg, long sample_index) {
    Rng rng = substream(cfg.seed, sample_index);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto basis = lie_basis(cfg.spec);
    const int d = cfg.spec.matrix_dim();
    const double step_sd = std::sqrt(cfg.s / static_cast<double>(cfg.steps));
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd G(d, d);
    for (long step = 0; step < cfg.steps; ++step) {
        G.setZero();
        for (const auto& X : basis) G += gauss(rng) * X;
        A = A * expm(step_sd * G);
    }
    return A;
}

Eigen::MatrixXcd sample_mu(const MCConfig& cfg, long sample_index) {
    const double t = cfg.tau.real(), theta = cfg.tau.imag();
    const double m = static_cast<double>(cfg.steps);
    // per-step covariance of (alpha, beta)
    const double caa = (cfg.s - t / 2.0) / m;
    const double cab = -theta / (2.0 * m);
    const double cbb = t / (2.0 * m);
    if (!(caa > 0.0) || !(caa * cbb - cab * cab > 0.0))
        throw ParameterError("sample_mu: covariance not positive definite (tau outside D(s,s))");
    const double la = std::sqrt(caa);
    const double lb = cab / la;
    const double lc = std::sqrt(cbb - lb * lb);

    Rng rng = substream(cfg.seed, sample_index);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto basis = lie_basis(cfg.spec);
    const int d = cfg.spec.matrix_dim();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd G(d, d);
    for (long step = 0; step < cfg.steps; ++step) {
        G.setZero();
        for (const auto& X : basis) {
            const double z1 = gauss(rng), z2 = gauss(rng);
            const double alpha = la * z1;
            const double beta = lb * z1 + lc * z2;
            G += cplx(alpha, beta) * X;
        }
        A = A * expm(G);
    }
    return A;
}

namespace {

MomentEstimate run_estimate(const MCConfig& cfg, bool complexified,
                            const std::function<cplx(const Eigen::MatrixXcd&)>& f) {
    MomentEstimate est;
    est.samples = cfg.samples;
    std::vector<cplx> vals(cfg.samples);
    // Samples carry their own RNG substream, so they can be computed on any
    // number of workers; reducing in index order keeps results bit-identical.
    const long workers = std::min<long>(cfg.samples,
                                        std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    for (long w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (long i = next.fetch_add(1); i < cfg.samples; i = next.fetch_add(1)) {
                    const Eigen::MatrixXcd A =
                        complexified ? sample_mu(cfg, i) : sample_rho(cfg, i);
                    vals[i] = f(A);
                }
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(cfg.samples);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    cplx sum = 0.0;
    for (long i = 0; i < cfg.samples; ++i) sum += vals[i];
    est.mean = sum / static_cast<double>(cfg.samples);
    double sum_sq = 0.0;
    for (long i = 0; i < cfg.samples; ++i) sum_sq += std::norm(vals[i] - est.mean);
    const double var = cfg.samples > 1 ? sum_sq / static_cast<double>(cfg.samples - 1) : 0.0;
    est.std_error = std::sqrt(var / static_cast<double>(cfg.samples));
    return est;
}

}  // namespace

MomentEstimate estimate_moment(const MCConfig& cfg, int k, bool complexified) {
    MomentEstimate est = run_estimate(cfg, complexified, [&](const Eigen::MatrixXcd& A) {
        if (k == 0) return cplx(1.0, 0.0);
        Eigen::MatrixXcd p;
        if (k > 0) {
            p = A;
            for (int i = 1; i < k; ++i) p *= A;
        } else {
            const Eigen::MatrixXcd Ainv = A.partialPivLu().inverse();
            p = Ainv;
            for (int i = 1; i < -k; ++i) p *= Ainv;
        }
        return cfg.spec.normalized_trace(p);
    });
    if (!complexified) {
        const TracePolynomial heat =
            exp_apply(op_DN(cfg.spec.family, cfg.spec.N), 0.5 * cfg.s, TracePolynomial::v(k));
        est.exact_finite_N = eval_at_ones(heat);
        est.free_limit = nu(k, cfg.s);
    } else {
        if (cfg.spec.family == Family::SO || cfg.spec.family == Family::Sp)
            est.exact_finite_N = complexified_moment(cfg.spec, cfg.s, cfg.tau, k);
        est.free_limit = nu(k, cfg.s - cfg.tau);
    }
    return est;
}

MomentEstimate estimate_l2(const MCConfig& cfg, const TracePolynomial& P, bool complexified) {
    MomentEstimate est = run_estimate(cfg, complexified, [&](const Eigen::MatrixXcd& A) {
        const Eigen::MatrixXcd M = eval_trace_poly(P, A, cfg.spec);
        return cplx(cfg.spec.normalized_trace(M * M.adjoint()).real(), 0.0);
    });
    if (cfg.spec.family == Family::SO || cfg.spec.family == Family::Sp) {
        const TransformParams params(cfg.s, complexified ? cfg.tau : cplx(cfg.s, 0.0));
        est.exact_finite_N =
            l2_norm_sq(cfg.spec, params, P, complexified ? Measure::Mu : Measure::Rho);
    }
    return est;
}

std::string mc_csv_header() {
    return "family,N,s,tau_re,tau_im,k_or_poly_hash,mc_mean_re,mc_mean_im,se,exact_re,exact_im,"
           "limit_re,limit_im,samples,steps,seed";
}

std::string mc_csv_row(const MCConfig& cfg, const std::string& label, const MomentEstimate& est,
                       bool complexified) {
    std::ostringstream os;
    auto num = [&os](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf;
    };
    os << to_string(cfg.spec.family) << "," << cfg.spec.N << ",";
    num(cfg.s);
    os << ",";
    num(complexified ? cfg.tau.real() : 0.0);
    os << ",";
    num(complexified ? cfg.tau.imag() : 0.0);
    os << "," << label << ",";
    num(est.mean.real());
    os << ",";
    num(est.mean.imag());
    os << ",";
    num(est.std_error);
    os << ",";
    num(est.exact_finite_N ? est.exact_finite_N->real() : std::nan(""));
    os << ",";
    num(est.exact_finite_N ? est.exact_finite_N->imag() : std::nan(""));
    os << ",";
    num(est.free_limit ? est.free_limit->real() : std::nan(""));
    os << ",";
    num(est.free_limit ? est.free_limit->imag() : std::nan(""));
    os << "," << est.samples << "," << cfg.steps << "," << cfg.seed;
    return os.str();
}

uint64_t poly_hash(const TracePolynomial& P) {
    const std::string s = to_json(P);
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace sbtrace
