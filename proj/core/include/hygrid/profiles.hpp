#ifndef HYGRID_PROFILES_HPP
#define HYGRID_PROFILES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace hygrid::profiles {

struct ProfileSet {
    std::vector<double> load_mw;     // system-level hourly demand
    std::vector<double> pv_avail_mw; // total available PV across all units
    uint32_t seed = 0;
    double penetration = 0;
    double load_energy_mwh = 0;

    int horizon() const { return static_cast<int>(load_mw.size()); }
};

/// Deterministic synthetic two-week profiles: double-peak weekday load
/// with quieter weekends, clear-sky solar bell with seeded day-to-day
/// cloud attenuation. Both series are rescaled so the load sums exactly
/// to load_energy_mwh and the PV to penetration * load_energy_mwh.
ProfileSet gen_profiles(uint32_t seed, double penetration, int horizon = 336,
                        double load_energy_mwh = 925.0);

/// CSV with header "hour,load_mw,pv_avail_mw".
void write_profiles_csv(const ProfileSet& p, const std::string& path);
ProfileSet read_profiles_csv(const std::string& path);

}  // namespace hygrid::profiles

#endif
