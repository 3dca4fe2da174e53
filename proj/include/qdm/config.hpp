// Copyright 2026 The qdm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDM_CONFIG_HPP
#define QDM_CONFIG_HPP

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace qdm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances shared by every module.
///
/// The defaults are tuned for dense double-precision work on d <= 64. Every
/// field can be overridden from a problem file `config` block or from the
/// command line (`--tol key=value`).
struct Tolerances {
    double hermiticity = 1e-10;    ///< |A - A^H| entrywise
    double orthonormality = 1e-10; ///< Gram matrix deviation from identity
    double reconstruction = 1e-10; ///< max-entry error of recomposed operators
    double eigenvalue = 1e-9;      ///< zero band for spectral comparisons
    double norm = 1e-12;           ///< unit-norm check on kets
    double indifference = 1e-9;    ///< operator norm below which p(A) counts as 0
    double certificate = 1e-7;     ///< re-verification slack of solver witnesses
    double optimality = 1e-7;      ///< absolute accuracy of optimal values
    double duality = 1e-5;         ///< agreement required between primal/dual routes
    double trace = 1e-9;           ///< trace-one check on densities
    double conditioning = 1e-8;    ///< events with probability below this are refused
    double margin = 1e-6;          ///< strict-cone margin epsilon
    double dependence = 1e-8;      ///< residual norm below which a ket is dependent
    int max_dim = 64;              ///< largest supported Hilbert space dimension

    /// Sets a field by its configuration key. Returns false for unknown keys.
    bool set(std::string_view key, double value) {
        if (double* field = lookup(key)) {
            *field = value;
            return true;
        }
        if (key == "max_dim") {
            max_dim = static_cast<int>(value);
            return true;
        }
        return false;
    }

    std::optional<double> get(std::string_view key) const {
        if (const double* field = const_cast<Tolerances*>(this)->lookup(key)) return *field;
        if (key == "max_dim") return static_cast<double>(max_dim);
        return std::nullopt;
    }

    static constexpr std::string_view keys[] = {
        "hermiticity", "orthonormality", "reconstruction", "eigenvalue", "norm",
        "indifference", "certificate", "optimality", "duality", "trace",
        "conditioning", "margin", "dependence", "max_dim"};

private:
    double* lookup(std::string_view key) {
        if (key == "hermiticity") return &hermiticity;
        if (key == "orthonormality") return &orthonormality;
        if (key == "reconstruction") return &reconstruction;
        if (key == "eigenvalue") return &eigenvalue;
        if (key == "norm") return &norm;
        if (key == "indifference") return &indifference;
        if (key == "certificate") return &certificate;
        if (key == "optimality") return &optimality;
        if (key == "duality") return &duality;
        if (key == "trace") return &trace;
        if (key == "conditioning") return &conditioning;
        if (key == "margin") return &margin;
        if (key == "dependence") return &dependence;
        return nullptr;
    }
};

enum class ErrorKind {
    NonHermitianInput,
    DimensionMismatch,
    DimensionTooLarge,
    InvalidKet,
    InvalidSubspace,
    NonOrthogonalFamily,
    UnsupportedKind,
    SolverStall,
    InconsistentAssessment,
    EmptyCredalSet,
    NotADensity,
    IncompleteBasis,
    ZeroProbabilityEvent,
    ReducedInconsistent,
    ParseError,
    ValidationError,
    InvalidArgument,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::InvalidKet: return "InvalidKet";
    case ErrorKind::InvalidSubspace: return "InvalidSubspace";
    case ErrorKind::NonOrthogonalFamily: return "NonOrthogonalFamily";
    case ErrorKind::UnsupportedKind: return "UnsupportedKind";
    case ErrorKind::SolverStall: return "SolverStall";
    case ErrorKind::InconsistentAssessment: return "InconsistentAssessment";
    case ErrorKind::EmptyCredalSet: return "EmptyCredalSet";
    case ErrorKind::NotADensity: return "NotADensity";
    case ErrorKind::IncompleteBasis: return "IncompleteBasis";
    case ErrorKind::ZeroProbabilityEvent: return "ZeroProbabilityEvent";
    case ErrorKind::ReducedInconsistent: return "ReducedInconsistent";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// The single exception type thrown by the library; `kind()` tells callers
/// which contract was broken.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Three-valued outcome used by every decision procedure.
enum class Verdict { Yes, No, Boundary };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Boundary: return "boundary";
    }
    return "?";
}

} // namespace qdm

#endif // QDM_CONFIG_HPP
