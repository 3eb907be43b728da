#ifndef MOBILITY_TRAJECTORY_HPP
#define MOBILITY_TRAJECTORY_HPP

#include <string>
#include <vector>

#include "mobility/core.hpp"

namespace mobility {

// A raw GPS fix. Timestamps are seconds since the Unix epoch and must be
// non-decreasing within one trajectory.
struct RawPoint {
    double lat; // degrees, WGS84
    double lon; // degrees, WGS84
    double t;   // seconds
};

// Planar equirectangular grid anchored at ref_lat. One degree of latitude is
// treated as 111320 m; longitude degrees shrink with cos(ref_lat).
struct GridSpec {
    double cell_size_m = 250.0;
    double ref_lat_deg = 0.0;
};

// Parses a GeoLife .plt file: 6 header lines, then
// "lat,lon,0,altitude,day-number,date,time" rows. Timestamps are taken from
// the date+time fields as UTC.
std::vector<RawPoint> parse_plt(const std::string& content);

// Generic "user_id,timestamp,lat,lon" CSV, one user per call site.
struct CsvPoint {
    std::string user_id;
    RawPoint point;
};
std::vector<CsvPoint> parse_csv_points(const std::string& content);

// Integer grid cell of a point under the grid's meter-to-degree conversion.
std::pair<int64_t, int64_t> cell_of(const RawPoint& point, const GridSpec& grid);

// Maps each point to its grid cell and re-encodes cells densely (0..N-1 in
// order of first appearance). Timestamps are preserved.
SymbolSequence discretize(const std::vector<RawPoint>& points, const GridSpec& grid);

// Merges runs of equal symbols into visits, drops visits shorter than
// min_dwell seconds, then re-merges adjacent equal symbols. The result
// contains no self-transitions.
std::vector<Visit> extract_visits(const SymbolSequence& seq, double min_dwell_s);

// Keeps indices 0, k, 2k, ...; alphabet re-encoded densely.
SymbolSequence undersample(const SymbolSequence& seq, size_t k);

// Inserts k-1 linearly interpolated points between consecutive pairs.
// Output length = (len-1)*k + 1.
std::vector<RawPoint> oversample(const std::vector<RawPoint>& points, size_t k);

// Visit symbols as a dense sequence (timestamps = arrival times).
SymbolSequence visits_to_sequence(const std::vector<Visit>& visits);

double median_latitude(const std::vector<RawPoint>& points);

} // namespace mobility

#endif
