#include "platoon_shield/scenario_config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "platoon_shield/errors.hpp"

namespace platoon_shield::io {

namespace {

struct Entry {
    std::string key;
    std::string value;
    int line;
};

struct RawConfig {
    std::string origin;
    std::map<std::string, std::vector<Entry>> sections;  // section name -> entries in order
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

RawConfig tokenize(std::string_view text, std::string_view origin) {
    RawConfig raw;
    raw.origin = origin;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string line(text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos));
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(raw.origin, line_no, "unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section.empty()) fail(raw.origin, line_no, "empty section name");
            raw.sections.try_emplace(section);
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(raw.origin, line_no, "expected `key = value`");
        if (section.empty()) fail(raw.origin, line_no, "key outside any section");
        Entry entry{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)),
                    line_no};
        if (entry.key.empty()) fail(raw.origin, line_no, "empty key");
        raw.sections[section].push_back(std::move(entry));
    }
    return raw;
}

double parse_double(const RawConfig& raw, const Entry& e) {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0')
        fail(raw.origin, e.line, "`" + e.key + "` expects a number, got `" + e.value + "`");
    return v;
}

long parse_long(const RawConfig& raw, const Entry& e) {
    char* end = nullptr;
    const long v = std::strtol(e.value.c_str(), &end, 10);
    if (end == e.value.c_str() || *end != '\0')
        fail(raw.origin, e.line, "`" + e.key + "` expects an integer, got `" + e.value + "`");
    return v;
}

std::uint64_t parse_u64(const RawConfig& raw, const Entry& e) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
    if (end == e.value.c_str() || *end != '\0')
        fail(raw.origin, e.line, "`" + e.key + "` expects a non-negative integer, got `" + e.value + "`");
    return v;
}

bool parse_bool(const RawConfig& raw, const Entry& e) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail(raw.origin, e.line, "`" + e.key + "` expects true/false");
}

std::vector<double> parse_double_list(const RawConfig& raw, const Entry& e) {
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string token;
    while (in >> token) {
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0')
            fail(raw.origin, e.line, "`" + e.key + "`: bad number `" + token + "`");
        out.push_back(v);
    }
    if (out.empty()) fail(raw.origin, e.line, "`" + e.key + "` expects at least one number");
    return out;
}

std::vector<int> parse_index_list(const RawConfig& raw, const Entry& e, std::string_view text) {
    std::vector<int> out;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        char* end = nullptr;
        const long v = std::strtol(token.c_str(), &end, 10);
        if (end == token.c_str() || *end != '\0' || v < 1)
            fail(raw.origin, e.line, "`" + e.key + "`: bad channel index `" + token + "`");
        out.push_back(static_cast<int>(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// A section interpreter that records which keys were consumed so unknown
// keys can be reported with their line.
class Section {
public:
    Section(const RawConfig& raw, const std::string& name) : raw_(raw), name_(name) {
        const auto it = raw.sections.find(name);
        if (it != raw.sections.end()) entries_ = &it->second;
    }

    bool present() const { return entries_ != nullptr; }

    const Entry* find(std::string_view key) {
        if (entries_ == nullptr) return nullptr;
        const Entry* found = nullptr;
        for (const Entry& e : *entries_) {
            if (e.key == key) {
                found = &e;  // last assignment wins
                consumed_.push_back(e.key);
            }
        }
        return found;
    }

    std::vector<const Entry*> find_all(std::string_view key) {
        std::vector<const Entry*> out;
        if (entries_ == nullptr) return out;
        for (const Entry& e : *entries_) {
            if (e.key == key) {
                out.push_back(&e);
                consumed_.push_back(e.key);
            }
        }
        return out;
    }

    void reject_unknown_keys() const {
        if (entries_ == nullptr) return;
        for (const Entry& e : *entries_) {
            if (std::find(consumed_.begin(), consumed_.end(), e.key) == consumed_.end()) {
                fail(raw_.origin, e.line, "unknown key `" + e.key + "` in section [" + name_ + "]");
            }
        }
    }

private:
    const RawConfig& raw_;
    std::string name_;
    const std::vector<Entry>* entries_ = nullptr;
    std::vector<std::string> consumed_;
};

v2v::NoiseKind parse_noise_kind(const RawConfig& raw, const Entry& e) {
    if (e.value == "uniform") return v2v::NoiseKind::Uniform;
    if (e.value == "truncated_gaussian") return v2v::NoiseKind::TruncatedGaussian;
    if (e.value == "zero") return v2v::NoiseKind::Zero;
    fail(raw.origin, e.line, "`noise` must be uniform, truncated_gaussian or zero");
}

v2v::AttackKind parse_attack_kind(const RawConfig& raw, const Entry& e) {
    if (e.value == "none") return v2v::AttackKind::None;
    if (e.value == "random_single_channel") return v2v::AttackKind::RandomSingleChannel;
    if (e.value == "fixed_set") return v2v::AttackKind::FixedSet;
    if (e.value == "round_robin") return v2v::AttackKind::RoundRobin;
    if (e.value == "ambiguity") return v2v::AttackKind::Ambiguity;
    if (e.value == "custom_schedule") return v2v::AttackKind::CustomSchedule;
    fail(raw.origin, e.line, "unknown attack kind `" + e.value + "`");
}

std::map<long, v2v::IndexSet> parse_schedule(const RawConfig& raw, const Entry& e) {
    // k:j|j|... entries separated by `;`, e.g. `0:1;5:2|3`
    std::map<long, v2v::IndexSet> out;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos) fail(raw.origin, e.line, "`schedule` entries look like `step:1|3`");
        char* end = nullptr;
        const std::string step_text = trim(item.substr(0, colon));
        const long step = std::strtol(step_text.c_str(), &end, 10);
        if (end == step_text.c_str() || *end != '\0' || step < 0)
            fail(raw.origin, e.line, "`schedule`: bad step `" + step_text + "`");
        std::string channels = trim(item.substr(colon + 1));
        std::replace(channels.begin(), channels.end(), '|', ' ');
        out[step] = parse_index_list(raw, e, channels);
    }
    return out;
}

sim::VehicleSetup parse_vehicle(const RawConfig& raw, Section& section, int index) {
    sim::VehicleSetup setup{};
    const Entry* h = section.find("h");
    const Entry* tau = section.find("tau");
    const Entry* kp = section.find("kp");
    const Entry* kd = section.find("kd");
    if (h == nullptr || tau == nullptr || kp == nullptr || kd == nullptr) {
        throw ConfigError(raw.origin + ": [vehicle." + std::to_string(index) +
                          "] requires h, tau, kp and kd");
    }
    setup.params.h = parse_double(raw, *h);
    setup.params.tau = parse_double(raw, *tau);
    setup.gains.kp = parse_double(raw, *kp);
    setup.gains.kd = parse_double(raw, *kd);
    if (const Entry* e = section.find("r")) setup.params.r = parse_double(raw, *e);
    if (const Entry* e = section.find("length")) setup.params.length = parse_double(raw, *e);
    if (const Entry* e = section.find("sensor_noise_d")) setup.sensor_noise_d = parse_double(raw, *e);
    if (const Entry* e = section.find("sensor_noise_v")) setup.sensor_noise_v = parse_double(raw, *e);
    section.reject_unknown_keys();
    return setup;
}

sim::LinkSetup parse_link(const RawConfig& raw, Section& section, int receiver) {
    sim::LinkSetup link{};
    const Entry* bounds = section.find("noise_bounds");
    if (bounds == nullptr) {
        throw ConfigError(raw.origin + ": [link." + std::to_string(receiver) + "] requires noise_bounds");
    }
    v2v::NoiseKind kind = v2v::NoiseKind::Uniform;
    if (const Entry* e = section.find("noise")) kind = parse_noise_kind(raw, *e);
    for (double b : parse_double_list(raw, *bounds)) {
        link.channels.push_back({b, kind});
    }

    link.policy.kind = v2v::AttackKind::None;
    if (const Entry* e = section.find("attack")) link.policy.kind = parse_attack_kind(raw, *e);
    if (const Entry* e = section.find("attack_channels")) {
        link.policy.fixed_channels = parse_index_list(raw, *e, e->value);
    }
    if (const Entry* e = section.find("schedule")) link.policy.schedule = parse_schedule(raw, *e);

    // Default attacker budget: what the configured kind actually needs.
    switch (link.policy.kind) {
        case v2v::AttackKind::None:
            link.policy.q = 0;
            break;
        case v2v::AttackKind::RandomSingleChannel:
            link.policy.q = 1;
            break;
        case v2v::AttackKind::FixedSet:
            link.policy.q = static_cast<int>(link.policy.fixed_channels.size());
            break;
        case v2v::AttackKind::CustomSchedule: {
            std::size_t worst = 0;
            for (const auto& [step, set] : link.policy.schedule) worst = std::max(worst, set.size());
            link.policy.q = static_cast<int>(worst);
            break;
        }
        default:
            link.policy.q = 1;
            break;
    }
    if (const Entry* e = section.find("attack_q")) link.policy.q = static_cast<int>(parse_long(raw, *e));
    if (const Entry* e = section.find("attack_mean")) link.policy.magnitude.mean = parse_double(raw, *e);
    if (const Entry* e = section.find("attack_std")) link.policy.magnitude.stddev = parse_double(raw, *e);
    section.reject_unknown_keys();
    return link;
}

}  // namespace

sim::ScenarioConfig parse_scenario_text(std::string_view text, std::string_view origin) {
    const RawConfig raw = tokenize(text, origin);
    sim::ScenarioConfig config;

    Section platoon(raw, "platoon");
    if (!platoon.present()) throw ConfigError(std::string(origin) + ": missing [platoon] section");
    const Entry* vehicles = platoon.find("vehicles");
    if (vehicles == nullptr) throw ConfigError(std::string(origin) + ": [platoon] requires `vehicles`");
    const long m = parse_long(raw, *vehicles);
    if (m < 1) fail(raw.origin, vehicles->line, "`vehicles` must be >= 1");
    if (const Entry* e = platoon.find("name")) config.name = e->value;
    if (const Entry* e = platoon.find("falsification")) config.falsification = parse_bool(raw, *e);
    platoon.reject_unknown_keys();

    Section simulation(raw, "sim");
    if (const Entry* e = simulation.find("ts")) config.ts = parse_double(raw, *e);
    if (const Entry* e = simulation.find("horizon")) config.horizon = parse_double(raw, *e);
    if (const Entry* e = simulation.find("seed")) config.master_seed = parse_u64(raw, *e);
    if (const Entry* e = simulation.find("initial_velocity")) config.initial_velocity = parse_double(raw, *e);
    simulation.reject_unknown_keys();

    Section profile(raw, "leader_profile");
    for (const Entry* e : profile.find_all("row")) {
        const std::vector<double> numbers = parse_double_list(raw, *e);
        if (numbers.size() != 3) fail(raw.origin, e->line, "`row` expects `t_start t_end value`");
        config.leader_profile.rows.push_back({numbers[0], numbers[1], numbers[2]});
    }
    profile.reject_unknown_keys();

    Section virt(raw, "vehicle.0");
    if (virt.present()) {
        model::VehicleParams params{};
        const Entry* h = virt.find("h");
        const Entry* tau = virt.find("tau");
        if (h == nullptr || tau == nullptr)
            throw ConfigError(raw.origin + ": [vehicle.0] requires h and tau");
        params.h = parse_double(raw, *h);
        params.tau = parse_double(raw, *tau);
        virt.reject_unknown_keys();
        config.virtual_leader = params;
    }

    for (long i = 1; i <= m; ++i) {
        Section section(raw, "vehicle." + std::to_string(i));
        if (!section.present()) {
            throw ConfigError(raw.origin + ": missing [vehicle." + std::to_string(i) + "] (vehicles = " +
                              std::to_string(m) + ")");
        }
        config.vehicles.push_back(parse_vehicle(raw, section, static_cast<int>(i)));
    }
    for (long i = 2; i <= m; ++i) {
        Section section(raw, "link." + std::to_string(i));
        if (!section.present()) {
            throw ConfigError(raw.origin + ": missing [link." + std::to_string(i) +
                              "] (every follower needs one)");
        }
        config.links.push_back(parse_link(raw, section, static_cast<int>(i)));
    }

    Section mon(raw, "monitor");
    if (const Entry* e = mon.find("reference_rule")) {
        if (e->value == "smallest") {
            config.reference_rule = monitor::ReferenceRule::SmallestIndex;
        } else if (e->value == "random") {
            config.reference_rule = monitor::ReferenceRule::SeededRandom;
        } else {
            fail(raw.origin, e->line, "`reference_rule` must be smallest or random");
        }
    }
    if (const Entry* e = mon.find("detection_window")) config.detection_window = parse_long(raw, *e);
    if (const Entry* e = mon.find("isolation_window")) config.isolation_window = parse_long(raw, *e);
    mon.reject_unknown_keys();

    for (const auto& [name, entries] : raw.sections) {
        static const std::vector<std::string> known{"platoon", "sim", "leader_profile", "monitor"};
        if (std::find(known.begin(), known.end(), name) != known.end()) continue;
        if (name.rfind("vehicle.", 0) == 0) {
            const std::string suffix = name.substr(8);
            char* end = nullptr;
            const long idx = std::strtol(suffix.c_str(), &end, 10);
            if (end != suffix.c_str() && *end == '\0' && idx >= 0 && idx <= m) continue;
        }
        if (name.rfind("link.", 0) == 0) {
            const std::string suffix = name.substr(5);
            char* end = nullptr;
            const long idx = std::strtol(suffix.c_str(), &end, 10);
            if (end != suffix.c_str() && *end == '\0' && idx >= 2 && idx <= m) continue;
        }
        const int line = entries.empty() ? 0 : entries.front().line;
        fail(raw.origin, line, "unknown section [" + name + "]");
    }

    config.validate();
    return config;
}

sim::ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario file `" + path + "`");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), path);
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_indices(const v2v::IndexSet& set, char sep = ' ') {
    std::string out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i > 0) out += sep;
        out += std::to_string(set[i]);
    }
    return out;
}

std::string_view attack_name(v2v::AttackKind kind) {
    switch (kind) {
        case v2v::AttackKind::None: return "none";
        case v2v::AttackKind::RandomSingleChannel: return "random_single_channel";
        case v2v::AttackKind::FixedSet: return "fixed_set";
        case v2v::AttackKind::RoundRobin: return "round_robin";
        case v2v::AttackKind::Ambiguity: return "ambiguity";
        case v2v::AttackKind::CustomSchedule: return "custom_schedule";
    }
    return "none";
}

std::string_view noise_name(v2v::NoiseKind kind) {
    switch (kind) {
        case v2v::NoiseKind::Uniform: return "uniform";
        case v2v::NoiseKind::TruncatedGaussian: return "truncated_gaussian";
        case v2v::NoiseKind::Zero: return "zero";
    }
    return "uniform";
}

}  // namespace

std::string serialize_scenario(const sim::ScenarioConfig& config) {
    std::ostringstream out;
    out << "[platoon]\n";
    out << "name = " << config.name << "\n";
    out << "vehicles = " << config.vehicles.size() << "\n";
    if (config.falsification) out << "falsification = true\n";

    out << "\n[sim]\n";
    out << "ts = " << num(config.ts) << "\n";
    out << "horizon = " << num(config.horizon) << "\n";
    out << "seed = " << config.master_seed << "\n";
    out << "initial_velocity = " << num(config.initial_velocity) << "\n";

    if (!config.leader_profile.rows.empty()) {
        out << "\n[leader_profile]\n";
        for (const sim::LeaderProfileRow& row : config.leader_profile.rows) {
            out << "row = " << num(row.t_start) << " " << num(row.t_end) << " " << num(row.value) << "\n";
        }
    }

    if (config.virtual_leader) {
        out << "\n[vehicle.0]\n";
        out << "h = " << num(config.virtual_leader->h) << "\n";
        out << "tau = " << num(config.virtual_leader->tau) << "\n";
    }

    for (std::size_t i = 0; i < config.vehicles.size(); ++i) {
        const sim::VehicleSetup& v = config.vehicles[i];
        out << "\n[vehicle." << i + 1 << "]\n";
        out << "h = " << num(v.params.h) << "\n";
        out << "tau = " << num(v.params.tau) << "\n";
        out << "kp = " << num(v.gains.kp) << "\n";
        out << "kd = " << num(v.gains.kd) << "\n";
        if (v.params.r != 0.0) out << "r = " << num(v.params.r) << "\n";
        if (v.params.length != 0.0) out << "length = " << num(v.params.length) << "\n";
        if (v.sensor_noise_d != 0.0) out << "sensor_noise_d = " << num(v.sensor_noise_d) << "\n";
        if (v.sensor_noise_v != 0.0) out << "sensor_noise_v = " << num(v.sensor_noise_v) << "\n";
    }

    for (std::size_t l = 0; l < config.links.size(); ++l) {
        const sim::LinkSetup& link = config.links[l];
        out << "\n[link." << l + 2 << "]\n";
        out << "noise_bounds =";
        for (const v2v::ChannelModel& ch : link.channels) out << " " << num(ch.noise_bound);
        out << "\n";
        if (!link.channels.empty()) out << "noise = " << noise_name(link.channels.front().kind) << "\n";
        out << "attack = " << attack_name(link.policy.kind) << "\n";
        out << "attack_q = " << link.policy.q << "\n";
        out << "attack_mean = " << num(link.policy.magnitude.mean) << "\n";
        out << "attack_std = " << num(link.policy.magnitude.stddev) << "\n";
        if (!link.policy.fixed_channels.empty()) {
            out << "attack_channels = " << join_indices(link.policy.fixed_channels) << "\n";
        }
        if (!link.policy.schedule.empty()) {
            out << "schedule = ";
            bool first = true;
            for (const auto& [step, set] : link.policy.schedule) {
                if (!first) out << ";";
                first = false;
                std::string channels = join_indices(set, '|');
                out << step << ":" << channels;
            }
            out << "\n";
        }
    }

    out << "\n[monitor]\n";
    out << "reference_rule = "
        << (config.reference_rule == monitor::ReferenceRule::SmallestIndex ? "smallest" : "random") << "\n";
    if (config.detection_window > 0) out << "detection_window = " << config.detection_window << "\n";
    if (config.isolation_window > 0) out << "isolation_window = " << config.isolation_window << "\n";
    return out.str();
}

}  // namespace platoon_shield::io
