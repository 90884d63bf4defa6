#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace canram
{
    // Raised when an argument violates a precondition of the mathematical object
    // (too few edges, position out of range, mismatched uniformities).
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    class UniformityMismatch : public DomainError
    {
    public:
        UniformityMismatch(unsigned pattern_k, unsigned host_k) :
            DomainError("uniformity mismatch: pattern is " + std::to_string(pattern_k) + "-uniform, host is " +
                std::to_string(host_k) + "-uniform")
        {
        }
    };

    // A configurable size cap was hit; `limit` is the cap and `required` the
    // size (or a lower bound on it) that would have been needed.
    class GuardExceeded : public std::runtime_error
    {
    public:
        GuardExceeded(const std::string & what, std::uint64_t limit, std::uint64_t required) :
            std::runtime_error(what + " (limit " + std::to_string(limit) + ", needed at least " +
                std::to_string(required) + ")"),
            limit(limit),
            required(required)
        {
        }

        std::uint64_t limit;
        std::uint64_t required;
    };

    class ParseError : public std::runtime_error
    {
    public:
        ParseError(const std::string & source, std::size_t line, const std::string & message) :
            std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
            line(line)
        {
        }

        std::size_t line;
    };

    // A colouring picked a colour that is not on the edge's list.
    class IncompatibleColouring : public DomainError
    {
    public:
        IncompatibleColouring(const std::string & edge, std::uint64_t colour) :
            DomainError("colour " + std::to_string(colour) + " on edge {" + edge + "} is not in its list"),
            edge(edge)
        {
        }

        std::string edge;
    };
}
