#include "shimr/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace shimr {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string normalize_key(std::string key) {
    for (char& c : key)
        if (c == '_') c = '-';
    return key;
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_int(const std::string& s, int& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : "nan";
}

std::string file_banner(const RunConfig& cfg) {
    std::ostringstream out;
    out << "# shimr v" << kVersion << " config=" << config_hash(cfg)
        << " seed=" << cfg.master_seed;
    return out.str();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());

    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << path.string() << ":" << line_no << ": expected key=value";
            throw std::runtime_error(msg.str());
        }
        entries.emplace_back(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return entries;
}

std::vector<std::string> apply_config_entry(RunConfig& cfg, const std::string& raw_key,
                                            const std::string& value) {
    const std::string key = normalize_key(raw_key);
    auto fail = [&](const std::string& why) {
        return std::vector<std::string>{"config key '" + key + "': " + why};
    };

    if (key == "scenario") {
        cfg.scenario = value;
        return {};
    }
    if (key == "influencer-opinions") {
        std::vector<double> opinions;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            double o = 0.0;
            if (!parse_double(trim(item), o)) return fail("bad number '" + item + "'");
            opinions.push_back(o);
        }
        cfg.influencer_opinions = std::move(opinions);
        return {};
    }
    if (key == "deviation-normalization") {
        if (value == "population")
            cfg.params.deviation_norm = DeviationNorm::Population;
        else if (value == "discussers")
            cfg.params.deviation_norm = DeviationNorm::Discussers;
        else
            return fail("expected 'population' or 'discussers'");
        return {};
    }
    if (key == "seed") {
        std::uint64_t seed = 0;
        if (!parse_u64(value, seed)) return fail("bad unsigned integer '" + value + "'");
        cfg.master_seed = seed;
        return {};
    }

    if (key == "agents" || key == "rounds" || key == "runs" || key == "rumor-rate") {
        int n = 0;
        if (!parse_int(value, n)) return fail("bad integer '" + value + "'");
        if (key == "agents") cfg.agents = n;
        else if (key == "rounds") cfg.rounds = n;
        else if (key == "runs") cfg.runs = n;
        else cfg.rumor_rate = n;
        return {};
    }

    double v = 0.0;
    if (key == "lambda" || key == "rho" || key == "eta" || key == "consensus-threshold" ||
        key == "gamma" || key == "beta-min" || key == "xi") {
        if (!parse_double(value, v)) return fail("bad number '" + value + "'");
        if (key == "lambda") cfg.params.lambda = v;
        else if (key == "rho") cfg.params.rho = v;
        else if (key == "eta") cfg.params.eta = v;
        else if (key == "consensus-threshold") cfg.params.consensus = v;
        else if (key == "gamma") cfg.params.gamma = v;
        else if (key == "beta-min") cfg.params.beta_min = v;
        else cfg.params.xi = v;
        return {};
    }
    return fail("unknown key");
}

std::string canonical_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "scenario=" << cfg.scenario << "\n";
    out << "influencer-opinions=" << join_doubles(cfg.influencer_opinions) << "\n";
    out << "agents=" << cfg.agents << "\n";
    out << "rounds=" << cfg.rounds << "\n";
    out << "runs=" << cfg.runs << "\n";
    out << "rumor-rate=" << cfg.rumor_rate << "\n";
    out << "seed=" << cfg.master_seed << "\n";
    out << "lambda=" << format_double(cfg.params.lambda) << "\n";
    out << "rho=" << format_double(cfg.params.rho) << "\n";
    out << "eta=" << format_double(cfg.params.eta) << "\n";
    out << "consensus-threshold=" << format_double(cfg.params.consensus) << "\n";
    out << "gamma=" << format_double(cfg.params.gamma) << "\n";
    out << "beta-min=" << format_double(cfg.params.beta_min) << "\n";
    out << "xi=" << format_double(cfg.params.xi) << "\n";
    out << "deviation-normalization="
        << (cfg.params.deviation_norm == DeviationNorm::Population ? "population"
                                                                   : "discussers")
        << "\n";
    return out.str();
}

std::string config_hash(const RunConfig& cfg) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : canonical_config(cfg)) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("rename failed: " + path.string() + ": " + ec.message());
}

void write_timeseries(const std::filesystem::path& path, const RunResult& run) {
    std::ostringstream out;
    out << file_banner(run.cfg) << " run=" << run.run_index << "\n";
    out << "round,mean_abs_opinion,susceptible,hesitant,infected,mitigated,removed,"
           "active_rumors,rumors_created,rumors_expired\n";
    const int first_normal = run.cfg.num_influencers();
    for (const RoundTrace& trace : run.trace) {
        long long totals[kNumCompartments] = {};
        for (const RumorCensus& census : trace.census)
            for (int c = 0; c < kNumCompartments; ++c) totals[c] += census.counts[c];
        out << trace.round << ',' << format_double(trace.mean_abs_opinion(first_normal));
        for (int c = 0; c < kNumCompartments; ++c) out << ',' << totals[c];
        out << ',' << trace.active_rumors_end << ',' << trace.rumors_created.size() << ','
            << trace.rumors_expired.size() << "\n";
    }
    atomic_write(path, out.str());
}

void write_final_opinions(const std::filesystem::path& path, const RunResult& run) {
    std::ostringstream out;
    out << file_banner(run.cfg) << " run=" << run.run_index << "\n";
    out << "agent,role,opinion\n";
    const int first_normal = run.cfg.num_influencers();
    for (std::size_t i = 0; i < run.final_opinions.size(); ++i) {
        out << i << ',' << (static_cast<int>(i) < first_normal ? "influencer" : "normal")
            << ',' << format_double(run.final_opinions[i]) << "\n";
    }
    atomic_write(path, out.str());
}

void write_final_weights(const std::filesystem::path& path, const RunResult& run) {
    std::ostringstream out;
    out << file_banner(run.cfg) << " run=" << run.run_index << "\n";
    out << "source,target,weight\n";
    const int n = run.final_weights.size();
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            if (m != k)
                out << m << ',' << k << ',' << format_double(run.final_weights(m, k)) << "\n";
    atomic_write(path, out.str());
}

void write_histogram_csv(const std::filesystem::path& path, const RunConfig& cfg,
                         const Histogram& hist) {
    std::ostringstream out;
    out << file_banner(cfg) << "\n";
    out << "bin_lo,bin_hi,count,density\n";
    const int bins = static_cast<int>(hist.counts.size());
    const double width = hist.bin_width();
    for (int b = 0; b < bins; ++b) {
        double lo = hist.lo + b * width;
        double hi = b + 1 == bins ? hist.hi : hist.lo + (b + 1) * width;
        out << format_double(lo) << ',' << format_double(hi) << ',' << hist.counts[b] << ','
            << format_double(hist.density[b]) << "\n";
    }
    atomic_write(path, out.str());
}

void write_summary_csv(const std::filesystem::path& path, const RunConfig& cfg,
                       const EnsembleSummary& summary) {
    int runs_with_r = 0;
    for (const auto& r : summary.run_r)
        if (r) ++runs_with_r;

    std::ostringstream out;
    out << file_banner(cfg) << "\n";
    out << "metric,value\n";
    out << "runs," << summary.runs << "\n";
    out << "pooled_pairs," << summary.pooled_pairs << "\n";
    out << "pooled_correlation," << format_optional(summary.pooled_r) << "\n";
    out << "per_run_correlation_mean," << format_optional(summary.run_r_mean) << "\n";
    out << "per_run_correlation_std," << format_optional(summary.run_r_std) << "\n";
    out << "runs_with_correlation," << runs_with_r << "\n";
    out << "opinion_mean," << format_double(summary.opinion_mean) << "\n";
    out << "opinion_variance," << format_double(summary.opinion_variance) << "\n";
    out << "opinion_skewness," << format_double(summary.opinion_skewness) << "\n";
    out << "mean_abs_opinion," << format_double(summary.mean_abs_opinion) << "\n";
    atomic_write(path, out.str());
}

void write_meta(const std::filesystem::path& path, const RunConfig& cfg,
                const std::string& command) {
    std::ostringstream out;
    out << "# shimr v" << kVersion << "\n";
    out << "# command: " << command << "\n";
    out << "# config: " << config_hash(cfg) << "\n";
    out << canonical_config(cfg);
    atomic_write(path, out.str());
}

void write_sweep_summary(const std::filesystem::path& path, const RunConfig& base,
                         const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << file_banner(base) << "\n";
    out << "parameter,value,pooled_correlation,per_run_correlation_mean,"
           "per_run_correlation_std\n";
    for (const SweepRow& row : rows) {
        out << row.parameter << ',' << row.value << ','
            << format_optional(row.summary.pooled_r) << ','
            << format_optional(row.summary.run_r_mean) << ','
            << format_optional(row.summary.run_r_std) << "\n";
    }
    atomic_write(path, out.str());
}

}  // namespace shimr
