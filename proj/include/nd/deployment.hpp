#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nd {

// Circular region centered at the origin.
struct DiskRegion {
    double radius_m = 1.0;
};

// Node placements. Index 0 is the reference node, always at the origin; the
// remaining entries are the candidate neighbors.
struct Deployment {
    std::uint64_t seed = 0;
    double radius_m = 1.0;
    std::vector<std::array<double, 2>> positions;

    static constexpr int kReferenceIndex = 0;

    int neighbor_count() const { return static_cast<int>(positions.size()) - 1; }

    double distance_to_reference(int id) const;

    // Distances of nodes 1..K to the reference, in id order.
    std::vector<double> neighbor_distances() const;

    std::string to_json() const;
    static Deployment from_json(const std::string& text);
};

// n points i.i.d. uniform over the disk (inverse-CDF radius, uniform angle),
// with the reference node prepended at the center.
Deployment sample_uniform_disk(int n, DiskRegion region, std::uint64_t seed);

// Poisson node count with mean intensity * area(region).
std::uint64_t sample_poisson_count(double intensity, DiskRegion region, std::uint64_t seed);

// Distance law from a uniform point in the disk to the center: (x/R)^2 on [0,R].
double distance_cdf(double x, DiskRegion region);

}  // namespace nd
