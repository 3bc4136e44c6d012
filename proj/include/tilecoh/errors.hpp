#pragma once

#include <stdexcept>
#include <string>

namespace tilecoh {

struct IllDefinedHom : std::runtime_error {
    explicit IllDefinedHom(const std::string& what) : std::runtime_error(what) {}
};

struct NotComposable : std::runtime_error {
    explicit NotComposable(const std::string& what) : std::runtime_error(what) {}
};

struct DegreeOutOfRange : std::runtime_error {
    explicit DegreeOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct NotInjectiveOnCochains : std::runtime_error {
    explicit NotInjectiveOnCochains(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidBoundary : std::runtime_error {
    explicit InvalidBoundary(const std::string& what) : std::runtime_error(what) {}
};

struct IncompatibleMap : std::runtime_error {
    explicit IncompatibleMap(const std::string& what) : std::runtime_error(what) {}
};

struct NotPrimitive : std::runtime_error {
    explicit NotPrimitive(const std::string& what) : std::runtime_error(what) {}
};

struct NotIntertwining : std::runtime_error {
    explicit NotIntertwining(const std::string& what) : std::runtime_error(what) {}
};

struct IntertwiningFailure : std::runtime_error {
    explicit IntertwiningFailure(const std::string& what) : std::runtime_error(what) {}
};

struct Unclassifiable : std::runtime_error {
    explicit Unclassifiable(const std::string& what) : std::runtime_error(what) {}
};

struct InadmissibleHom : std::runtime_error {
    explicit InadmissibleHom(const std::string& what) : std::runtime_error(what) {}
};

struct UnresolvedExtension : std::runtime_error {
    explicit UnresolvedExtension(const std::string& what) : std::runtime_error(what) {}
};

struct InconsistentState : std::runtime_error {
    explicit InconsistentState(const std::string& what) : std::runtime_error(what) {}
};

// Quotient cochain groups must be free to present an explicit quotient complex;
// the lattice-level cohomology path has no such restriction.
struct NotFreeQuotient : std::runtime_error {
    explicit NotFreeQuotient(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tilecoh
