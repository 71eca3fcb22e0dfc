#include "regionflow/synth.hpp"

#include <cmath>
#include <map>
#include <random>

#include "regionflow/error.hpp"
#include "regionflow/rng.hpp"

namespace regionflow {

namespace {

std::string padded(char prefix, std::size_t value, std::size_t width) {
    std::string digits = std::to_string(value);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return prefix + digits;
}

std::size_t width_for(std::size_t count) {
    std::size_t w = 1;
    for (std::size_t v = count > 0 ? count - 1 : 0; v >= 10; v /= 10) ++w;
    return std::max<std::size_t>(w, 4);
}

}  // namespace

void PlantedSpec::validate() const {
    if (regions * zones_per_region < 2)
        throw InputError("invalid_spec", "need at least two zones in total");
    if (regions == 0 || zones_per_region == 0) throw InputError("invalid_spec", "regions and zones must be >= 1");
    if (!(mean_flow > 0.0) || !std::isfinite(mean_flow))
        throw InputError("invalid_spec", "mean flow must be positive");
    if (!(leakage >= 0.0 && leakage < 1.0)) throw InputError("invalid_spec", "leakage must lie in [0, 1)");
    if (hospitals_per_region < 1) throw InputError("invalid_spec", "need at least one hospital per region");
    if (hospitals_per_region > zones_per_region)
        throw InputError("invalid_spec", "more hospitals per region than zones per region");
}

PlantedData generate_planted(const PlantedSpec& spec) {
    spec.validate();
    const std::size_t R = spec.regions, Z = spec.zones_per_region, H = spec.hospitals_per_region;
    const std::size_t zone_width = width_for(R * Z), hospital_width = width_for(R * H);

    PlantedData data;
    std::vector<std::string> zone_ids(R * Z);
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t j = 0; j < Z; ++j) {
            const std::size_t z = r * Z + j;
            zone_ids[z] = padded('Z', z, zone_width);
            data.truth.emplace(zone_ids[z], static_cast<int>(r));

            const double x0 = double(j), y0 = double(r);
            Polygon square{{{x0, y0}, {x0 + 1, y0}, {x0 + 1, y0 + 1}, {x0, y0 + 1}, {x0, y0}}, {}};
            data.geometry.push_back({zone_ids[z], {square}});
            if (j > 0) data.adjacency.emplace_back(zone_ids[z - 1], zone_ids[z]);
            if (r > 0) data.adjacency.emplace_back(zone_ids[z - Z], zone_ids[z]);
        }
    }

    // Hospital h of region r sits in zone (r, floor(h * Z / H)).
    std::vector<std::string> hospital_ids(R * H);
    std::vector<std::string> hospital_zone(R * H);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t h = 0; h < H; ++h) {
            const std::size_t idx = r * H + h;
            hospital_ids[idx] = padded('H', idx, hospital_width);
            hospital_zone[idx] = zone_ids[r * Z + (h * Z) / H];
        }

    std::mt19937_64 gen(rng::mix(spec.seed));
    std::poisson_distribution<long long> admissions(spec.mean_flow);
    std::poisson_distribution<long long> population(spec.mean_flow * 50.0);

    std::vector<std::int64_t> hospital_total(R * H, 0);
    for (std::size_t z = 0; z < R * Z; ++z) {
        const std::size_t home = z / Z;
        const long long n = admissions(gen);
        std::map<std::size_t, std::int64_t> counts;
        for (long long a = 0; a < n; ++a) {
            std::size_t region = home;
            if (R > 1 && rng::uniform01(gen) < spec.leakage) {
                region = rng::uniform_index(gen, R - 1);
                if (region >= home) ++region;
            }
            const std::size_t h = region * H + rng::uniform_index(gen, H);
            ++counts[h];
        }
        for (const auto& [h, c] : counts) {
            data.flows.push_back({zone_ids[z], hospital_ids[h], c, ServiceClass::general});
            hospital_total[h] += c;
        }
        const Point centre{double(z % Z) + 0.5, double(home) + 0.5};
        data.attributes.emplace(zone_ids[z], ZoneAttribute{double(population(gen)), centre});
    }

    std::vector<Hospital> hospitals;
    for (std::size_t idx = 0; idx < R * H; ++idx)
        hospitals.push_back({hospital_ids[idx], hospital_zone[idx], true, hospital_total[idx]});
    data.roster = HospitalRoster(std::move(hospitals));
    return data;
}

}  // namespace regionflow
