#include "nd/deployment.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "nd/rng.hpp"

namespace nd {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::uint64_t kStreamPositions = 0x01;
constexpr std::uint64_t kStreamCount = 0x02;
}  // namespace

double Deployment::distance_to_reference(int id) const {
    const auto& p = positions.at(static_cast<std::size_t>(id));
    return std::hypot(p[0], p[1]);
}

std::vector<double> Deployment::neighbor_distances() const {
    std::vector<double> out;
    out.reserve(positions.size() - 1);
    for (std::size_t i = 1; i < positions.size(); ++i)
        out.push_back(std::hypot(positions[i][0], positions[i][1]));
    return out;
}

std::string Deployment::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["radius_m"] = radius_m;
    auto& pos = j["positions"] = nlohmann::json::array();
    for (const auto& p : positions) pos.push_back({p[0], p[1]});
    return j.dump(2);
}

Deployment Deployment::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Deployment d;
    d.seed = j.at("seed").get<std::uint64_t>();
    d.radius_m = j.at("radius_m").get<double>();
    for (const auto& p : j.at("positions"))
        d.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    if (d.positions.empty()) throw std::invalid_argument("deployment: missing reference node");
    return d;
}

Deployment sample_uniform_disk(int n, DiskRegion region, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sample_uniform_disk: n must be >= 0");
    if (!(region.radius_m > 0.0)) throw std::invalid_argument("disk radius must be positive");
    Deployment d;
    d.seed = seed;
    d.radius_m = region.radius_m;
    d.positions.reserve(static_cast<std::size_t>(n) + 1);
    d.positions.push_back({0.0, 0.0});
    Rng rng = Rng(seed).split(kStreamPositions);
    for (int i = 0; i < n; ++i) {
        const double r = region.radius_m * std::sqrt(rng.next_unit());
        const double theta = kTwoPi * rng.next_unit();
        d.positions.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return d;
}

std::uint64_t sample_poisson_count(double intensity, DiskRegion region, std::uint64_t seed) {
    if (intensity < 0.0) throw std::invalid_argument("sample_poisson_count: intensity < 0");
    const double mean = intensity * M_PI * region.radius_m * region.radius_m;
    Rng rng = Rng(seed).split(kStreamCount);
    return rng.next_poisson(mean);
}

double distance_cdf(double x, DiskRegion region) {
    if (x < 0.0) return 0.0;
    if (x > region.radius_m) return 1.0;
    const double t = x / region.radius_m;
    return t * t;
}

}  // namespace nd
