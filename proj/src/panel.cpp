#include "gqito/panel.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace gqito {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

[[noreturn]] void bad_row(const std::string& path, std::size_t line_no, const std::string& what) {
    throw ConfigError(path + ": line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& s, const std::string& path, std::size_t line_no) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        bad_row(path, line_no, "expected a finite number, got \"" + s + "\"");
    }
    return v;
}

long parse_long(const std::string& s, const std::string& path, std::size_t line_no) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
        bad_row(path, line_no, "expected an integer, got \"" + s + "\"");
    }
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    return out;
}

}  // namespace

void TickPanel::validate() const {
    if (n_days < 1 || m < 1) throw DomainError("panel needs n_days >= 1 and m >= 1");
    const std::size_t want = static_cast<std::size_t>(n_days) * (m + 1);
    if (x.size() != want || y.size() != want) {
        throw DomainError("panel price arrays do not match n_days * (m + 1)");
    }
    if (has_truth) {
        if (spot_var_open.size() != static_cast<std::size_t>(n_days) ||
            z_true.size() != static_cast<std::size_t>(n_days)) {
            throw DomainError("panel truth arrays do not match n_days");
        }
        for (int j = 1; j <= kMaxHorizon; ++j) {
            if (true_iv[j - 1].size() != static_cast<std::size_t>(n_days) * j) {
                throw DomainError("panel true_iv arrays do not match n_days * j");
            }
        }
    }
}

void export_panel_csv(const TickPanel& panel, const std::string& path) {
    panel.validate();
    std::ofstream out = open_out(path);
    out << "day,tick_time,clean_logprice,obs_logprice\n";
    for (int i = 0; i < panel.n_days; ++i) {
        for (int k = 0; k <= panel.m; ++k) {
            const std::size_t idx = panel.tick_index(i, k);
            out << i << ',' << fmt_full(static_cast<double>(k) / panel.m) << ','
                << fmt_full(panel.x[idx]) << ',' << fmt_full(panel.y[idx]) << '\n';
        }
    }
    if (!out) throw DomainError("failed writing " + path);
}

void export_truth_csv(const TickPanel& panel, const std::string& path) {
    panel.validate();
    if (!panel.has_truth) throw DomainError("panel carries no simulation truth to export");
    std::ofstream out = open_out(path);
    out << "day,horizon,window,field,value\n";
    for (int i = 0; i < panel.n_days; ++i) {
        out << i << ",0,0,spot_var_open," << fmt_full(panel.spot_var_open[i]) << '\n';
        out << i << ",0,0,z_true," << fmt_full(panel.z_true[i]) << '\n';
        for (int j = 1; j <= kMaxHorizon; ++j) {
            for (int w = 0; w < j; ++w) {
                out << i << ',' << j << ',' << w << ",true_iv,"
                    << fmt_full(panel.true_iv[j - 1][static_cast<std::size_t>(i) * j + w]) << '\n';
            }
        }
    }
    if (!out) throw DomainError("failed writing " + path);
}

TickPanel ingest_ticks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tick file " + path);

    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
    const std::vector<std::string> header = split_csv(line);

    bool round_trip;
    if (header.size() == 4 && header[0] == "day" && header[1] == "tick_time" &&
        header[2] == "clean_logprice" && header[3] == "obs_logprice") {
        round_trip = true;
    } else if (header.size() == 3 && header[0] == "day" && header[1] == "time" &&
               header[2] == "price") {
        round_trip = false;
    } else {
        bad_row(path, 1,
                "unrecognized header; expected day,tick_time,clean_logprice,obs_logprice "
                "or day,time,price");
    }

    std::vector<std::vector<double>> day_x, day_y;
    long first_day = 0;
    double last_time = 0.0;
    bool any_noise = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv(line);
        if (f.size() != header.size()) {
            bad_row(path, line_no, "expected " + std::to_string(header.size()) +
                                       " columns, got " + std::to_string(f.size()));
        }
        const long day = parse_long(f[0], path, line_no);
        const double t = parse_double(f[1], path, line_no);
        double xv, yv;
        if (round_trip) {
            xv = parse_double(f[2], path, line_no);
            yv = parse_double(f[3], path, line_no);
        } else {
            const double price = parse_double(f[2], path, line_no);
            if (price <= 0.0) bad_row(path, line_no, "price must be positive");
            xv = std::log(price);
            yv = xv;
        }

        if (day_x.empty()) {
            if (day != 0 && day != 1) bad_row(path, line_no, "first day index must be 0 or 1");
            first_day = day;
            day_x.emplace_back();
            day_y.emplace_back();
            last_time = -std::numeric_limits<double>::infinity();
        } else {
            const long current = first_day + static_cast<long>(day_x.size()) - 1;
            if (day == current + 1) {
                day_x.emplace_back();
                day_y.emplace_back();
                last_time = -std::numeric_limits<double>::infinity();
            } else if (day != current) {
                bad_row(path, line_no, "day index " + std::to_string(day) +
                                           " breaks contiguous ordering after day " +
                                           std::to_string(current));
            }
        }
        if (t <= last_time) bad_row(path, line_no, "tick time not strictly increasing within day");
        last_time = t;
        day_x.back().push_back(xv);
        day_y.back().push_back(yv);
        if (xv != yv) any_noise = true;
    }
    if (day_x.empty()) throw ConfigError(path + ": no data rows");

    const std::size_t ticks = day_x[0].size();
    if (ticks < 2) throw ConfigError(path + ": day " + std::to_string(first_day) + " has fewer than 2 ticks");
    for (std::size_t d = 0; d < day_x.size(); ++d) {
        if (day_x[d].size() != ticks) {
            throw ConfigError(path + ": day " + std::to_string(first_day + static_cast<long>(d)) +
                              " has " + std::to_string(day_x[d].size()) + " ticks, expected " +
                              std::to_string(ticks));
        }
    }

    TickPanel panel;
    panel.n_days = static_cast<int>(day_x.size());
    panel.m = static_cast<int>(ticks - 1);
    panel.x.reserve(day_x.size() * ticks);
    panel.y.reserve(day_x.size() * ticks);
    for (std::size_t d = 0; d < day_x.size(); ++d) {
        panel.x.insert(panel.x.end(), day_x[d].begin(), day_x[d].end());
        panel.y.insert(panel.y.end(), day_y[d].begin(), day_y[d].end());
    }
    panel.has_noise = any_noise;
    panel.validate();
    return panel;
}

}  // namespace gqito
