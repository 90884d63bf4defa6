#include <canram/density.hpp>
#include <canram/errors.hpp>

#include <bit>
#include <cmath>

namespace canram
{
    namespace mp = boost::multiprecision;

    auto to_string(const Rational & q) -> std::string
    {
        if (mp::denominator(q) == 1)
            return mp::numerator(q).str();
        return mp::numerator(q).str() + "/" + mp::denominator(q).str();
    }

    namespace
    {
        constexpr unsigned max_density_vertices = 24;

        auto subset_vertices(std::uint32_t mask) -> std::vector<Vertex>
        {
            std::vector<Vertex> result;
            for (Vertex v = 0; mask; ++v, mask >>= 1)
                if (mask & 1)
                    result.push_back(v);
            return result;
        }
    }

    auto max_k_density(const KGraph & pattern) -> DensityResult
    {
        auto k = pattern.uniformity();
        auto v = pattern.vertex_count();
        if (pattern.edge_count() < 2)
            throw DomainError("maximal density needs at least two edges");
        if (v < k + 1)
            throw DomainError("maximal density needs more than " + std::to_string(k) + " vertices");
        if (v > max_density_vertices)
            throw DomainError("maximal density is limited to " + std::to_string(max_density_vertices) + " vertices");

        std::vector<std::uint32_t> edge_masks;
        for (auto & e : pattern.edges()) {
            std::uint32_t m = 0;
            for (auto u : e)
                m |= 1u << u;
            edge_masks.push_back(m);
        }

        // Best so far as an exact fraction num/den with den > 0.
        std::int64_t best_num = 0, best_den = 0;
        std::uint32_t best_mask = 0;
        std::vector<Vertex> best_vertices;

        std::uint32_t full = (v == 32) ? ~0u : ((1u << v) - 1);
        for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
            auto size = unsigned(std::popcount(mask));
            if (size <= k)
                continue;
            std::int64_t induced = 0;
            for (auto m : edge_masks)
                if ((m & mask) == m)
                    ++induced;
            std::int64_t num = induced - 1, den = std::int64_t(size) - k;

            if (best_den == 0 || num * best_den > best_num * den) {
                best_num = num, best_den = den, best_mask = mask;
                best_vertices.clear();
            }
            else if (num * best_den == best_num * den) {
                if (best_vertices.empty())
                    best_vertices = subset_vertices(best_mask);
                auto candidate = subset_vertices(mask);
                if (candidate < best_vertices) {
                    best_mask = mask;
                    best_vertices = std::move(candidate);
                }
            }
            if (mask == full)
                break;
        }

        return DensityResult{Rational{best_num, best_den}, subset_vertices(best_mask)};
    }

    auto threshold_scale(const DensityResult & density, double n) -> ThresholdScale
    {
        Rational exponent = -1 / density.value;
        return ThresholdScale{exponent, std::pow(n, exponent.convert_to<double>())};
    }

    auto threshold_scale(const KGraph & pattern, double n) -> ThresholdScale
    {
        return threshold_scale(max_k_density(pattern), n);
    }
}
