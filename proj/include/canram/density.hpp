#pragma once

#include <canram/kgraph.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace canram
{
    using Rational = boost::multiprecision::cpp_rational;

    auto to_string(const Rational & q) -> std::string;

    struct DensityResult
    {
        Rational value;
        // Vertex subset U attaining value = (e(H[U]) - 1) / (|U| - k).
        std::vector<Vertex> witness;
    };

    // Maximal k-density: the maximum of (e(F) - 1) / (v(F) - k) over
    // subgraphs F with more than k vertices, which is attained by an induced
    // subgraph. Ties go to the lexicographically smallest vertex subset.
    // Requires at least two edges and at most 24 vertices.
    auto max_k_density(const KGraph & pattern) -> DensityResult;

    struct ThresholdScale
    {
        Rational exponent; // -1 / m_k(H)
        double value;      // n^exponent
    };

    auto threshold_scale(const KGraph & pattern, double n) -> ThresholdScale;
    auto threshold_scale(const DensityResult & density, double n) -> ThresholdScale;
}
