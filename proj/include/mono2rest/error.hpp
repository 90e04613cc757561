// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mono2rest {

/// Broad error families. The CLI maps each family to its own exit code.
enum class ErrorFamily {
    usage = 2,
    input = 3,
    parse = 4,
    graph = 5,
    clustering = 6,
    embedding = 7,
    restify = 8,
    evaluation = 9,
};

class Error : public std::runtime_error {
public:
    Error(ErrorFamily family, const std::string& what)
        : std::runtime_error(what), family_(family) {}

    ErrorFamily family() const noexcept { return family_; }
    int exit_code() const noexcept { return static_cast<int>(family_); }

private:
    ErrorFamily family_;
};

#define MONO2REST_DEFINE_ERROR(Name, Family)                                   \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(ErrorFamily::Family, what) {} \
    }

MONO2REST_DEFINE_ERROR(UsageError, usage);
MONO2REST_DEFINE_ERROR(InputError, input);
MONO2REST_DEFINE_ERROR(ParseError, parse);
MONO2REST_DEFINE_ERROR(EmptyGraph, graph);
MONO2REST_DEFINE_ERROR(InfeasibleK, clustering);
MONO2REST_DEFINE_ERROR(UnknownMethod, embedding);
MONO2REST_DEFINE_ERROR(ZeroVector, embedding);
MONO2REST_DEFINE_ERROR(DimensionMismatch, embedding);
MONO2REST_DEFINE_ERROR(MissingSignature, embedding);
MONO2REST_DEFINE_ERROR(DuplicatePathVerb, restify);
MONO2REST_DEFINE_ERROR(EmptyCluster, evaluation);
MONO2REST_DEFINE_ERROR(ProviderMismatch, evaluation);

#undef MONO2REST_DEFINE_ERROR

} // namespace mono2rest
