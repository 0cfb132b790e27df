#include "mrdcf/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace mrdcf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw parse_error("not a number: '" + value + "'", line);
    }
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
    Scenario sc;
    enum class Section { top, phy, station };
    Section section = Section::top;
    bool seen_phy = false;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;

        if (text.front() == '[') {
            if (text.back() != ']') throw parse_error("unterminated section header", line);
            const std::string name = trim(text.substr(1, text.size() - 2));
            if (name == "phy") {
                if (seen_phy) throw parse_error("duplicate [phy] section", line);
                seen_phy = true;
                section = Section::phy;
            } else if (name == "station") {
                StationConfig st;
                st.id = static_cast<int>(sc.stations.size()) + 1;
                sc.stations.push_back(st);
                section = Section::station;
            } else {
                throw parse_error("unknown section [" + name + "]", line);
            }
            continue;
        }

        const auto eq = text.find('=');
        if (eq == std::string::npos) throw parse_error("expected key = value", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw parse_error("empty key", line);

        if (section == Section::top) {
            if (key == "label") {
                sc.label = value;
            } else {
                throw parse_error("key '" + key + "' outside any section", line);
            }
        } else if (section == Section::phy) {
            auto& phy = sc.phy;
            if (key == "sigma") phy.sigma = parse_number(value, line);
            else if (key == "sifs") phy.sifs = parse_number(value, line);
            else if (key == "difs") phy.difs = parse_number(value, line);
            else if (key == "phy_hdr") phy.phy_hdr = parse_number(value, line);
            else if (key == "mac_hdr") phy.mac_hdr_bytes = parse_number(value, line);
            else if (key == "ack_size") phy.ack_bytes = parse_number(value, line);
            else if (key == "ack_rate") phy.ack_rate_bps = parse_number(value, line);
            else if (key == "m") phy.max_backoff_stage = static_cast<int>(parse_number(value, line));
            else if (key == "queue_size") phy.queue_size = static_cast<int>(parse_number(value, line));
            else throw parse_error("unknown phy key '" + key + "'", line);
        } else {
            auto& st = sc.stations.back();
            if (key == "lambda_pps") st.lambda_pps = parse_number(value, line);
            else if (key == "bit_rate_bps") st.bit_rate_bps = parse_number(value, line);
            else if (key == "payload_bytes") st.payload_bytes = parse_number(value, line);
            else if (key == "w0") st.w0 = parse_number(value, line);
            else if (key == "pe") st.pe = parse_number(value, line);
            else throw parse_error("unknown station key '" + key + "'", line);
        }
    }
    validate_scenario(sc);
    return sc;
}

Scenario parse_scenario_string(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw scenario_error("cannot open scenario file: " + path);
    return parse_scenario(in);
}

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string format_scenario(const Scenario& sc) {
    std::ostringstream out;
    if (!sc.label.empty()) out << "label = " << sc.label << "\n";
    const auto& p = sc.phy;
    out << "[phy]\n"
        << "sigma = " << num(p.sigma) << "\n"
        << "sifs = " << num(p.sifs) << "\n"
        << "difs = " << num(p.difs) << "\n"
        << "phy_hdr = " << num(p.phy_hdr) << "\n"
        << "mac_hdr = " << num(p.mac_hdr_bytes) << "\n"
        << "ack_size = " << num(p.ack_bytes) << "\n"
        << "ack_rate = " << num(p.ack_rate_bps) << "\n"
        << "m = " << p.max_backoff_stage << "\n"
        << "queue_size = " << p.queue_size << "\n";
    for (const auto& st : sc.stations) {
        out << "[station]\n"
            << "lambda_pps = " << num(st.lambda_pps) << "\n"
            << "bit_rate_bps = " << num(st.bit_rate_bps) << "\n"
            << "payload_bytes = " << num(st.payload_bytes) << "\n"
            << "w0 = " << num(st.w0) << "\n"
            << "pe = " << num(st.pe) << "\n";
    }
    return out.str();
}

std::uint64_t scenario_hash(const Scenario& sc) {
    const std::string canon = format_scenario(sc);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

namespace {

Scenario three_station(double lambda_fast, double lambda_slow, const std::string& label) {
    Scenario sc;
    sc.label = label;
    for (int i = 0; i < 2; ++i) {
        StationConfig st;
        st.id = i + 1;
        st.lambda_pps = lambda_fast;
        st.bit_rate_bps = 11e6;
        sc.stations.push_back(st);
    }
    StationConfig slow;
    slow.id = 3;
    slow.lambda_pps = lambda_slow;
    slow.bit_rate_bps = 1e6;
    sc.stations.push_back(slow);
    return sc;
}

}  // namespace

Scenario builtin_scenario_a() {
    return three_station(500.0, 1000.0, "scenario A");
}

Scenario builtin_scenario_b() {
    return three_station(1000.0, 500.0, "scenario B (calibrated assumption)");
}

}  // namespace mrdcf
