#pragma once

#include <stdexcept>
#include <string>

namespace qf {

// Base for every error thrown by this library. `code()` is a stable
// machine-readable tag; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Inputs that fail a validation contract (bad Cartan data, illegal
// parameters, ...). CLI maps these to exit code 2.
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

// A computation was declined because it exceeds a configured bound.
// CLI maps these to exit code 3 (undecided / not attempted).
class CapError : public Error {
public:
    using Error::Error;
};

#define QF_DEFINE_ERROR(NAME, BASE)                                     \
    class NAME : public BASE {                                          \
    public:                                                             \
        explicit NAME(const std::string& msg) : BASE(#NAME, msg) {}     \
    }

// scalar arithmetic
QF_DEFINE_ERROR(ContextMismatch, Error);
QF_DEFINE_ERROR(ZeroInput, Error);

// group layer
QF_DEFINE_ERROR(GroupMismatch, Error);

// Cartan matrices and root systems
QF_DEFINE_ERROR(NotGeneralizedCartan, AdmissibilityError);
QF_DEFINE_ERROR(NotFiniteType, AdmissibilityError);
QF_DEFINE_ERROR(NotStandardForm, AdmissibilityError);
QF_DEFINE_ERROR(OrderViolation, AdmissibilityError);
QF_DEFINE_ERROR(Inconsistent, AdmissibilityError);

// datum validation
QF_DEFINE_ERROR(CartanConditionFailed, AdmissibilityError);
QF_DEFINE_ERROR(UnitDiagonal, AdmissibilityError);
QF_DEFINE_ERROR(EvenOrder, AdmissibilityError);
QF_DEFINE_ERROR(G2OrderDivisibleBy3, AdmissibilityError);
QF_DEFINE_ERROR(IllegalLinking, AdmissibilityError);
QF_DEFINE_ERROR(IllegalMu, AdmissibilityError);
QF_DEFINE_ERROR(AdmissibilityFailure, AdmissibilityError);

// braided layer
QF_DEFINE_ERROR(AmbientMismatch, Error);
QF_DEFINE_ERROR(BraidingMismatch, AdmissibilityError);
QF_DEFINE_ERROR(NoDecomposition, Error);

// quotient engines
QF_DEFINE_ERROR(DegreeCapExceeded, CapError);
QF_DEFINE_ERROR(PBWFailure, Error);

// central-subalgebra layer
QF_DEFINE_ERROR(NotInK, Error);
QF_DEFINE_ERROR(ConsistencyFailure, Error);

// full algebra
QF_DEFINE_ERROR(CentralityFailure, Error);

// isomorphism search
QF_DEFINE_ERROR(ZeroConstant, Error);
QF_DEFINE_ERROR(RankMismatch, Error);
QF_DEFINE_ERROR(OrderHypothesisViolated, AdmissibilityError);

#undef QF_DEFINE_ERROR

} // namespace qf
