#include "mobility/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace mobility {

namespace {

constexpr double kMetersPerDegree = 111320.0;

// days since 1970-01-01 for a civil date (Gregorian, proleptic)
int64_t days_from_civil(int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

bool parse_date_time(const std::string& date, const std::string& time, double& out) {
    int y, mo, d, h, mi, s;
    if (std::sscanf(date.c_str(), "%d-%d-%d", &y, &mo, &d) != 3) return false;
    if (std::sscanf(time.c_str(), "%d:%d:%d", &h, &mi, &s) != 3) return false;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
        s < 0 || s > 60)
        return false;
    out = static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 +
          mi * 60.0 + s;
    return true;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    return out;
}

void check_lat_lon(double lat, double lon, size_t line_no) {
    if (!(lat >= -90.0 && lat <= 90.0))
        throw data_error("latitude out of range at line " + std::to_string(line_no));
    if (!(lon >= -180.0 && lon <= 180.0))
        throw data_error("longitude out of range at line " + std::to_string(line_no));
}

} // namespace

std::vector<RawPoint> parse_plt(const std::string& content) {
    std::istringstream is(content);
    std::string line;
    std::vector<RawPoint> points;
    size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no <= 6) continue; // fixed-size PLT header
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() < 7)
            throw data_error("malformed PLT row at line " + std::to_string(line_no));
        double lat, lon, t;
        try {
            lat = std::stod(fields[0]);
            lon = std::stod(fields[1]);
        } catch (const std::exception&) {
            throw data_error("malformed PLT row at line " + std::to_string(line_no));
        }
        check_lat_lon(lat, lon, line_no);
        if (!parse_date_time(fields[5], fields[6], t))
            throw data_error("malformed PLT date/time at line " + std::to_string(line_no));
        points.push_back({lat, lon, t});
    }
    return points;
}

std::vector<CsvPoint> parse_csv_points(const std::string& content) {
    std::istringstream is(content);
    std::string line;
    std::vector<CsvPoint> points;
    size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line.rfind("user_id", 0) == 0) continue; // header
        auto fields = split(line, ',');
        if (fields.size() != 4)
            throw data_error("malformed CSV row at line " + std::to_string(line_no));
        double t, lat, lon;
        try {
            t = std::stod(fields[1]);
            lat = std::stod(fields[2]);
            lon = std::stod(fields[3]);
        } catch (const std::exception&) {
            throw data_error("malformed CSV row at line " + std::to_string(line_no));
        }
        check_lat_lon(lat, lon, line_no);
        points.push_back({fields[0], {lat, lon, t}});
    }
    return points;
}

SymbolSequence SymbolSequence::from_symbols(const std::vector<Symbol>& raw,
                                            std::vector<double> ts) {
    SymbolSequence seq;
    seq.symbols.reserve(raw.size());
    std::unordered_map<Symbol, Symbol> ids;
    for (Symbol s : raw) {
        auto [it, inserted] = ids.emplace(s, static_cast<Symbol>(ids.size()));
        seq.symbols.push_back(it->second);
    }
    seq.alphabet_size = static_cast<Symbol>(ids.size());
    seq.timestamps = std::move(ts);
    seq.validate();
    return seq;
}

void SymbolSequence::validate() const {
    for (Symbol s : symbols)
        if (s >= alphabet_size)
            throw data_error("symbol id " + std::to_string(s) +
                             " outside alphabet of size " + std::to_string(alphabet_size));
    if (!timestamps.empty()) {
        if (timestamps.size() != symbols.size())
            throw data_error("timestamps and symbols differ in length");
        for (size_t i = 1; i < timestamps.size(); ++i)
            if (timestamps[i] < timestamps[i - 1])
                throw data_error("timestamps not non-decreasing at index " +
                                 std::to_string(i));
    }
}

std::pair<int64_t, int64_t> cell_of(const RawPoint& point, const GridSpec& grid) {
    if (grid.cell_size_m <= 0.0) throw data_error("discretize: cell_size must be positive");
    if (std::abs(grid.ref_lat_deg) > 89.5)
        throw data_error("discretize: reference latitude too close to a pole");
    const double dlat = grid.cell_size_m / kMetersPerDegree;
    const double dlon =
        grid.cell_size_m / (kMetersPerDegree * std::cos(grid.ref_lat_deg * M_PI / 180.0));
    return {static_cast<int64_t>(std::floor(point.lat / dlat)),
            static_cast<int64_t>(std::floor(point.lon / dlon))};
}

SymbolSequence discretize(const std::vector<RawPoint>& points, const GridSpec& grid) {
    if (points.empty()) throw data_error("discretize: no points");
    std::vector<Symbol> raw;
    raw.reserve(points.size());
    std::map<std::pair<int64_t, int64_t>, Symbol> cells;
    std::vector<double> ts;
    ts.reserve(points.size());
    for (const auto& p : points) {
        auto [it, inserted] = cells.emplace(cell_of(p, grid), static_cast<Symbol>(cells.size()));
        raw.push_back(it->second);
        ts.push_back(p.t);
    }
    // cell ids were assigned in first-appearance order already
    SymbolSequence seq;
    seq.symbols = std::move(raw);
    seq.timestamps = std::move(ts);
    seq.alphabet_size = static_cast<Symbol>(cells.size());
    seq.validate();
    return seq;
}

std::vector<Visit> extract_visits(const SymbolSequence& seq, double min_dwell_s) {
    if (seq.symbols.empty()) return {};
    if (!seq.has_timestamps()) throw data_error("extract_visits: sequence has no timestamps");

    // merge runs of equal symbols
    std::vector<Visit> runs;
    for (size_t i = 0; i < seq.size(); ++i) {
        if (!runs.empty() && runs.back().symbol == seq.symbols[i])
            runs.back().depart = seq.timestamps[i];
        else
            runs.push_back({seq.symbols[i], seq.timestamps[i], seq.timestamps[i]});
    }
    // drop short visits, then merge adjacent equals again
    std::vector<Visit> out;
    for (const auto& v : runs) {
        if (v.dwell() < min_dwell_s) continue;
        if (!out.empty() && out.back().symbol == v.symbol)
            out.back().depart = v.depart;
        else
            out.push_back(v);
    }
    return out;
}

SymbolSequence undersample(const SymbolSequence& seq, size_t k) {
    if (k == 0) throw data_error("undersample: k must be >= 1");
    std::vector<Symbol> raw;
    std::vector<double> ts;
    for (size_t i = 0; i < seq.size(); i += k) {
        raw.push_back(seq.symbols[i]);
        if (seq.has_timestamps()) ts.push_back(seq.timestamps[i]);
    }
    return SymbolSequence::from_symbols(raw, std::move(ts));
}

std::vector<RawPoint> oversample(const std::vector<RawPoint>& points, size_t k) {
    if (k == 0) throw data_error("oversample: k must be >= 1");
    if (k == 1) return points;
    if (points.size() < 2) throw data_error("oversample: need at least 2 points for k > 1");
    std::vector<RawPoint> out;
    out.reserve((points.size() - 1) * k + 1);
    for (size_t i = 0; i + 1 < points.size(); ++i) {
        const auto& a = points[i];
        const auto& b = points[i + 1];
        out.push_back(a);
        for (size_t j = 1; j < k; ++j) {
            const double f = static_cast<double>(j) / static_cast<double>(k);
            out.push_back({a.lat + f * (b.lat - a.lat), a.lon + f * (b.lon - a.lon),
                           a.t + f * (b.t - a.t)});
        }
    }
    out.push_back(points.back());
    return out;
}

SymbolSequence visits_to_sequence(const std::vector<Visit>& visits) {
    std::vector<Symbol> raw;
    std::vector<double> ts;
    raw.reserve(visits.size());
    ts.reserve(visits.size());
    for (const auto& v : visits) {
        raw.push_back(v.symbol);
        ts.push_back(v.arrive);
    }
    return SymbolSequence::from_symbols(raw, std::move(ts));
}

double median_latitude(const std::vector<RawPoint>& points) {
    if (points.empty()) throw data_error("median_latitude: no points");
    std::vector<double> lats;
    lats.reserve(points.size());
    for (const auto& p : points) lats.push_back(p.lat);
    std::nth_element(lats.begin(), lats.begin() + lats.size() / 2, lats.end());
    return lats[lats.size() / 2];
}

} // namespace mobility
