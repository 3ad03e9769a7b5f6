#include "simlink/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace simlink {

namespace {

int isqrt_exact(int n) {
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return r * r == n ? r : -1;
}

}  // namespace

int LinkScenario::grid_cols_tx() const { return isqrt_exact(atoms_tx); }
int LinkScenario::grid_cols_rx() const { return isqrt_exact(atoms_rx); }

LinkScenario default_scenario() { return LinkScenario{}; }

std::vector<Violation> validate(const LinkScenario& s) {
    std::vector<Violation> v;
    auto positive = [&](double x, const char* name) {
        if (!(x > 0.0)) v.push_back({name, std::string(name) + " must be positive"});
    };
    if (s.num_streams < 1) v.push_back({"num_streams", "S must be >= 1"});
    if (s.layers_tx < 1) v.push_back({"layers_tx", "L must be >= 1"});
    if (s.layers_rx < 1) v.push_back({"layers_rx", "K must be >= 1"});
    if (s.atoms_tx < s.num_streams) v.push_back({"atoms_tx", "M >= S violated"});
    if (s.atoms_rx < s.num_streams) v.push_back({"atoms_rx", "N >= S violated"});
    if (isqrt_exact(s.atoms_tx) < 0) v.push_back({"atoms_tx", "M must be a perfect square"});
    if (isqrt_exact(s.atoms_rx) < 0) v.push_back({"atoms_rx", "N must be a perfect square"});
    positive(s.freq, "freq");
    positive(s.wavelength, "wavelength");
    positive(s.bandwidth, "bandwidth");
    positive(s.noise_psd, "noise_psd");
    positive(s.tx_power, "tx_power");
    if (s.rician < 0.0) v.push_back({"rician", "kappa must be >= 0"});
    positive(s.pathloss_exponent, "pathloss_exponent");
    positive(s.ref_distance, "ref_distance");
    positive(s.link_distance, "link_distance");
    positive(s.thickness_tx, "thickness_tx");
    positive(s.thickness_rx, "thickness_rx");
    positive(s.atom_pitch_tx, "atom_pitch_tx");
    positive(s.atom_pitch_rx, "atom_pitch_rx");
    positive(s.atom_area_tx, "atom_area_tx");
    positive(s.atom_area_rx, "atom_area_rx");
    positive(s.wave_speed_tx, "wave_speed_tx");
    positive(s.wave_speed_rx, "wave_speed_rx");
    positive(s.packet_mean, "packet_mean");
    if (s.arrival_rate < 0.0) v.push_back({"arrival_rate", "delta_d must be >= 0"});
    if (s.wait_budget < 0.0) v.push_back({"wait_budget", "t_b must be >= 0"});
    if (s.delay_weight < 0.0) v.push_back({"delay_weight", "rho must be >= 0"});
    if (s.randomization_draws < 1)
        v.push_back({"randomization_draws", "randomization_draws must be >= 1"});
    if (s.los_mode != "ones" && s.los_mode != "steering")
        v.push_back({"los_mode", "los_mode must be 'ones' or 'steering'"});
    return v;
}

std::vector<Violation> validate_warnings(const LinkScenario& s) {
    std::vector<Violation> w;
    const double lam = kSpeedOfLight / s.freq;
    if (std::abs(s.wavelength - lam) > 1e-6 * lam)
        w.push_back({"wavelength",
                     "wavelength differs from c/f (" + std::to_string(lam) + " m)"});
    return w;
}

bool stable(const LinkScenario& s, double v_data) {
    return v_data * s.bandwidth > s.arrival_rate * s.packet_mean;
}

namespace {

using nlohmann::json;

json to_json(const LinkScenario& s) {
    json j;
    j["num_streams"] = s.num_streams;
    j["layers_tx"] = s.layers_tx;
    j["layers_rx"] = s.layers_rx;
    j["atoms_tx"] = s.atoms_tx;
    j["atoms_rx"] = s.atoms_rx;
    j["freq"] = s.freq;
    j["wavelength"] = s.wavelength;
    j["bandwidth"] = s.bandwidth;
    j["noise_psd"] = s.noise_psd;
    j["tx_power"] = s.tx_power;
    j["rician"] = s.rician;
    j["pathloss_exponent"] = s.pathloss_exponent;
    j["ref_distance"] = s.ref_distance;
    if (s.ref_pathloss_db)
        j["ref_pathloss_db"] = *s.ref_pathloss_db;
    else
        j["ref_pathloss_db"] = nullptr;
    j["link_distance"] = s.link_distance;
    j["thickness_tx"] = s.thickness_tx;
    j["thickness_rx"] = s.thickness_rx;
    j["atom_pitch_tx"] = s.atom_pitch_tx;
    j["atom_pitch_rx"] = s.atom_pitch_rx;
    j["atom_area_tx"] = s.atom_area_tx;
    j["atom_area_rx"] = s.atom_area_rx;
    j["wave_speed_tx"] = s.wave_speed_tx;
    j["wave_speed_rx"] = s.wave_speed_rx;
    j["packet_mean"] = s.packet_mean;
    j["arrival_rate"] = s.arrival_rate;
    j["wait_budget"] = s.wait_budget;
    j["delay_weight"] = s.delay_weight;
    j["rng_seed"] = s.rng_seed;
    j["d2_worst_path"] = s.d2_worst_path;
    j["los_mode"] = s.los_mode;
    j["randomization_draws"] = s.randomization_draws;
    return j;
}

LinkScenario scenario_from_json(const json& j) {
    LinkScenario s;
    s.num_streams = j.at("num_streams").get<int>();
    s.layers_tx = j.at("layers_tx").get<int>();
    s.layers_rx = j.at("layers_rx").get<int>();
    s.atoms_tx = j.at("atoms_tx").get<int>();
    s.atoms_rx = j.at("atoms_rx").get<int>();
    s.freq = j.at("freq").get<double>();
    s.wavelength = j.at("wavelength").get<double>();
    s.bandwidth = j.at("bandwidth").get<double>();
    s.noise_psd = j.at("noise_psd").get<double>();
    s.tx_power = j.at("tx_power").get<double>();
    s.rician = j.at("rician").get<double>();
    s.pathloss_exponent = j.at("pathloss_exponent").get<double>();
    s.ref_distance = j.at("ref_distance").get<double>();
    if (j.contains("ref_pathloss_db") && !j.at("ref_pathloss_db").is_null())
        s.ref_pathloss_db = j.at("ref_pathloss_db").get<double>();
    else
        s.ref_pathloss_db.reset();
    s.link_distance = j.at("link_distance").get<double>();
    s.thickness_tx = j.at("thickness_tx").get<double>();
    s.thickness_rx = j.at("thickness_rx").get<double>();
    s.atom_pitch_tx = j.at("atom_pitch_tx").get<double>();
    s.atom_pitch_rx = j.at("atom_pitch_rx").get<double>();
    s.atom_area_tx = j.at("atom_area_tx").get<double>();
    s.atom_area_rx = j.at("atom_area_rx").get<double>();
    s.wave_speed_tx = j.at("wave_speed_tx").get<double>();
    s.wave_speed_rx = j.at("wave_speed_rx").get<double>();
    s.packet_mean = j.at("packet_mean").get<double>();
    s.arrival_rate = j.at("arrival_rate").get<double>();
    s.wait_budget = j.at("wait_budget").get<double>();
    s.delay_weight = j.at("delay_weight").get<double>();
    s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    s.d2_worst_path = j.value("d2_worst_path", true);
    s.los_mode = j.value("los_mode", std::string("ones"));
    s.randomization_draws = j.value("randomization_draws", 200);
    return s;
}

}  // namespace

std::string to_config_text(const LinkScenario& s) { return to_json(s).dump(2) + "\n"; }

LinkScenario from_config_text(const std::string& text) {
    return scenario_from_json(json::parse(text));
}

LinkScenario load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_config_text(ss.str());
}

void save_config(const LinkScenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config: " + path);
    out << to_config_text(s);
}

void set_field(LinkScenario& s, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("expected field=value, got: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string val = assignment.substr(eq + 1);

    json j = to_json(s);
    if (!j.contains(key)) throw std::invalid_argument("unknown field: " + key);

    json& slot = j[key];
    try {
        if (slot.is_boolean()) {
            slot = (val == "true" || val == "1");
        } else if (slot.is_string()) {
            slot = val;
        } else if (slot.is_number_integer() || slot.is_number_unsigned()) {
            slot = json::parse(val);
        } else {  // double or null (ref_pathloss_db)
            if (val == "none" || val == "null")
                slot = nullptr;
            else
                slot = std::stod(val);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse value for " + key + ": " + val);
    }
    s = scenario_from_json(j);
}

std::uint64_t config_hash(const LinkScenario& s) {
    const std::string text = to_config_text(s);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace simlink
