#include "workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "topology.hpp"

namespace fnccsim {

FlowSizeCdf FlowSizeCdf::from_points(std::vector<std::pair<std::int64_t, double>> points) {
    if (points.empty()) throw ConfigError("CDF needs at least one point");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].first < 1) throw ConfigError("CDF sizes must be >= 1 byte");
        if (i > 0 && points[i].first <= points[i - 1].first)
            throw ConfigError("CDF sizes must be strictly increasing");
        if (i > 0 && points[i].second < points[i - 1].second)
            throw ConfigError("CDF probabilities must be non-decreasing");
    }
    if (points.back().second != 1.0) throw ConfigError("CDF must end at probability 1.0");
    FlowSizeCdf cdf;
    cdf.points_ = std::move(points);
    return cdf;
}

FlowSizeCdf FlowSizeCdf::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open CDF file: " + path);
    std::vector<std::pair<std::int64_t, double>> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        std::int64_t size;
        double p;
        if (!(is >> size)) continue; // blank line
        if (!(is >> p)) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'size_bytes cumulative_probability'");
        }
        pts.emplace_back(size, p);
    }
    return from_points(std::move(pts));
}

std::int64_t FlowSizeCdf::sample_from_uniform(double u) const {
    if (u <= points_.front().second) return points_.front().first;
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (u <= points_[i].second) {
            double p0 = points_[i - 1].second, p1 = points_[i].second;
            double f = (p1 == p0) ? 1.0 : (u - p0) / (p1 - p0);
            double ls0 = std::log(static_cast<double>(points_[i - 1].first));
            double ls1 = std::log(static_cast<double>(points_[i].first));
            double s = std::exp(ls0 + f * (ls1 - ls0));
            std::int64_t v = static_cast<std::int64_t>(std::llround(s));
            return std::max<std::int64_t>(v, points_.front().first);
        }
    }
    return points_.back().first;
}

std::int64_t FlowSizeCdf::sample(RandomStream& rng) const {
    return sample_from_uniform(rng.uniform());
}

double FlowSizeCdf::mean() const {
    // Point mass p0 at s0, then log-linear segments: the conditional mean of
    // exp(lerp(ln a, ln b)) over a uniform fraction is the logarithmic mean.
    double m = points_.front().second * static_cast<double>(points_.front().first);
    for (std::size_t i = 1; i < points_.size(); ++i) {
        double dp = points_[i].second - points_[i - 1].second;
        if (dp <= 0) continue;
        double a = static_cast<double>(points_[i - 1].first);
        double b = static_cast<double>(points_[i].first);
        double seg_mean = (a == b) ? a : (b - a) / (std::log(b) - std::log(a));
        m += dp * seg_mean;
    }
    return m;
}

std::vector<FlowSpec> script_flows(std::vector<FlowSpec> entries) {
    std::set<std::tuple<std::string, std::string, std::uint16_t, std::uint16_t>> seen;
    for (const auto& e : entries) {
        if (e.size_bytes < 1) throw ConfigError("flow size must be >= 1 byte");
        if (e.src == e.dst) throw ConfigError("flow src and dst must differ");
        if (e.start < 0) throw ConfigError("flow start must be >= 0");
        if (e.src_port != 0 || e.dst_port != 0) {
            if (!seen.insert({e.src, e.dst, e.src_port, e.dst_port}).second)
                throw ConfigError("duplicate five-tuple in flow script");
        }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const FlowSpec& a, const FlowSpec& b) { return a.start < b.start; });
    return entries;
}

std::vector<FlowSpec> poisson_arrivals(const FlowSizeCdf& cdf, double load,
                                       const std::vector<std::string>& host_names,
                                       double link_rate_bps, SimTime duration,
                                       RandomStream& rng) {
    if (load <= 0 || load >= 1) throw ConfigError("load must be in (0, 1)");
    if (host_names.size() < 2) throw ConfigError("poisson workload needs >= 2 hosts");
    double lambda_per_ns = load * link_rate_bps / (8.0 * cdf.mean()) / 1e9;
    std::vector<FlowSpec> out;
    for (std::size_t h = 0; h < host_names.size(); ++h) {
        double t = 0;
        for (;;) {
            t += rng.exponential(lambda_per_ns);
            if (t >= static_cast<double>(duration)) break;
            FlowSpec fs;
            fs.src = host_names[h];
            std::size_t d = rng.uniform_int(host_names.size() - 1);
            if (d >= h) ++d; // uniform among the others
            fs.dst = host_names[d];
            fs.size_bytes = cdf.sample(rng);
            fs.start = static_cast<SimTime>(t);
            out.push_back(std::move(fs));
        }
    }
    return script_flows(std::move(out));
}

} // namespace fnccsim
