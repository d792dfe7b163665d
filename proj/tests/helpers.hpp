#ifndef STREAMSAGE_TESTS_HELPERS_HPP
#define STREAMSAGE_TESTS_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "streamsage/predictor.hpp"
#include "streamsage/rng.hpp"
#include "streamsage/schema.hpp"
#include "streamsage/subset.hpp"
#include "streamsage/types.hpp"

namespace testutil {

// Unique scratch path; the process id keeps parallel ctest runs apart.
inline std::string temp_path(const std::string& name) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("streamsage_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return (dir / (std::to_string(counter++) + "_" + name)).string();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

inline double sample_std(const std::vector<double>& v) { return std::sqrt(sample_variance(v)); }

// Pearson chi-square statistic of observed counts against given cell
// probabilities.
inline double chi_square(const std::vector<std::uint64_t>& counts,
                         const std::vector<double>& probs) {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expect = probs[i] * static_cast<double>(n);
        const double d = static_cast<double>(counts[i]) - expect;
        stat += d * d / expect;
    }
    return stat;
}

// Two-sample Kolmogorov-Smirnov distance sup |F1 - F2|.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

// Predictor wrapping an arbitrary function; serves as an exact stand-in
// model for estimator tests.
class FnPredictor : public streamsage::Predictor {
public:
    explicit FnPredictor(std::function<streamsage::Prediction(const streamsage::Instance&)> fn)
        : fn_(std::move(fn)) {}
    streamsage::Prediction predict(const streamsage::Instance& x) const override {
        return fn_(x);
    }

private:
    std::function<streamsage::Prediction(const streamsage::Instance&)> fn_;
};

inline streamsage::StreamSchema numeric_schema(int d, streamsage::TargetKind tk,
                                               int num_classes = 2) {
    std::vector<streamsage::FeatureSpec> f;
    for (int i = 0; i < d; ++i)
        f.push_back({"f" + std::to_string(i), streamsage::FeatureKind::numeric, {}});
    streamsage::TargetSpec t{"y", tk, tk == streamsage::TargetKind::klass ? num_classes : 0};
    return streamsage::StreamSchema{std::move(f), t};
}

inline streamsage::Instance numeric_instance(const std::vector<double>& vals) {
    streamsage::Instance x;
    for (double v : vals) x.push_back(streamsage::FeatureValue::numeric(v));
    return x;
}

inline streamsage::FeatureSubset subset_of(int d, const std::vector<int>& members) {
    streamsage::FeatureSubset s(d);
    for (int i : members) s.add(i);
    return s;
}

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout and stderr interleaved
};

// Runs the installed CLI binary with the given arguments.
inline CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(STREAMSAGE_CLI_PATH) + " " + args + " 2>&1";
    CliResult res;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, n);
    const int status = ::pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace testutil

#endif
