#pragma once

#include <string>

#include <Eigen/Dense>

#include "sbtrace/errors.hpp"
#include "sbtrace/scalar.hpp"

namespace sbtrace {

/// The four classical families. SO(N,R), SU(N) and U(N) act on C^N; the
/// compact symplectic group Sp(N) is realized inside M_{2N}(C).
enum class Family { SO, SU, U, Sp };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct GroupSpec {
    Family family;
    int N;

    GroupSpec(Family f, int n) : family(f), N(n) {
        if (n < 1) throw ParameterError("GroupSpec: N must be positive");
        if ((f == Family::SO || f == Family::SU) && n < 2)
            throw ParameterError("GroupSpec: N >= 2 required for SO/SU");
    }

    int matrix_dim() const { return family == Family::Sp ? 2 * N : N; }

    int algebra_dim() const {
        switch (family) {
            case Family::SO: return N * (N - 1) / 2;
            case Family::SU: return N * N - 1;
            case Family::U: return N * N;
            case Family::Sp: return N * (2 * N + 1);
        }
        return 0;
    }

    /// tr = Tr/N for SO, SU, U; the symplectic family uses Tr/(2N).
    cplx normalized_trace(const Eigen::MatrixXcd& A) const {
        return A.trace() / static_cast<double>(matrix_dim());
    }
};

/// Block-diagonal symplectic form diag(Omega0, ..., Omega0) of size 2N.
Eigen::MatrixXcd symplectic_form(int N);

}  // namespace sbtrace
