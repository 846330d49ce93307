#include "hygrid/profiles.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hygrid::profiles {

namespace {

// mt19937 output mapped to [0,1) with a fixed recipe, so the series is
// bit-identical on every platform
double unit(std::mt19937& rng) { return (rng() >> 8) * (1.0 / 16777216.0); }

void rescale(std::vector<double>& v, double target_sum) {
    double s = 0;
    for (double x : v) s += x;
    if (s <= 0) return;
    double k = target_sum / s;
    for (double& x : v) x *= k;
}

}  // namespace

ProfileSet gen_profiles(uint32_t seed, double penetration, int horizon,
                        double load_energy_mwh) {
    if (penetration <= 0) throw std::invalid_argument("gen_profiles: penetration <= 0");
    constexpr double pi = std::numbers::pi;
    std::mt19937 rng(seed);

    ProfileSet p;
    p.seed = seed;
    p.penetration = penetration;
    p.load_energy_mwh = load_energy_mwh;
    p.load_mw.resize(horizon);
    p.pv_avail_mw.resize(horizon);

    int days = (horizon + 23) / 24;
    std::vector<double> cloud(days), day_level(days);
    for (int d = 0; d < days; ++d) cloud[d] = 0.55 + 0.45 * unit(rng);
    for (int d = 0; d < days; ++d) day_level[d] = 0.95 + 0.10 * unit(rng);

    for (int h = 0; h < horizon; ++h) {
        int day = h / 24, hod = h % 24;
        bool weekend = (day % 7) >= 5;
        // base + morning peak near 08:00 + taller evening peak near 19:00
        double shape = 0.55;
        shape += 0.25 * std::exp(-0.5 * std::pow((hod - 8.0) / 2.5, 2));
        shape += 0.45 * std::exp(-0.5 * std::pow((hod - 19.0) / 3.0, 2));
        if (weekend) shape *= 0.88;
        p.load_mw[h] = shape * day_level[day];

        double bell = hod > 6 && hod < 18 ? std::sin(pi * (hod - 6.0) / 12.0) : 0.0;
        p.pv_avail_mw[h] = bell * bell * cloud[day];
    }
    rescale(p.load_mw, load_energy_mwh);
    rescale(p.pv_avail_mw, penetration * load_energy_mwh);
    return p;
}

void write_profiles_csv(const ProfileSet& p, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "# seed=" << p.seed << " penetration=" << p.penetration
      << " load_energy_mwh=" << p.load_energy_mwh << "\n";
    f << "hour,load_mw,pv_avail_mw\n";
    char buf[96];
    for (int h = 0; h < p.horizon(); ++h) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", h, p.load_mw[h],
                      p.pv_avail_mw[h]);
        f << buf;
    }
}

ProfileSet read_profiles_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    ProfileSet p;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#' || line.rfind("hour", 0) == 0) {
            if (line[0] == '#') {
                std::sscanf(line.c_str(), "# seed=%u penetration=%lf load_energy_mwh=%lf",
                            &p.seed, &p.penetration, &p.load_energy_mwh);
            }
            continue;
        }
        int h;
        double l, pv;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf", &h, &l, &pv) != 3)
            throw std::runtime_error("bad profile row: " + line);
        p.load_mw.push_back(l);
        p.pv_avail_mw.push_back(pv);
    }
    return p;
}

}  // namespace hygrid::profiles
