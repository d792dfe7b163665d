#include "streamsage/streams.hpp"

#include <cmath>
#include <sstream>

#include "streamsage/error.hpp"

namespace streamsage {

// ----------------------------------------------------------------- agrawal

namespace {

std::vector<std::string> digit_alphabet(int lo, int hi) {
    std::vector<std::string> out;
    for (int v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
    return out;
}

bool in_range(double v, double lo, double hi) { return lo <= v && v <= hi; }

} // namespace

StreamSchema AgrawalStream::make_schema() {
    std::vector<FeatureSpec> f;
    f.push_back({"salary", FeatureKind::numeric, {}});
    f.push_back({"commission", FeatureKind::numeric, {}});
    f.push_back({"age", FeatureKind::numeric, {}});
    f.push_back({"elevel", FeatureKind::categorical, digit_alphabet(0, 4)});
    f.push_back({"car", FeatureKind::categorical, digit_alphabet(1, 20)});
    f.push_back({"zipcode", FeatureKind::categorical, digit_alphabet(0, 8)});
    f.push_back({"hvalue", FeatureKind::numeric, {}});
    f.push_back({"hyears", FeatureKind::numeric, {}});
    f.push_back({"loan", FeatureKind::numeric, {}});
    return StreamSchema{std::move(f), TargetSpec{"group", TargetKind::klass, 2}};
}

AgrawalStream::AgrawalStream(int concept_id, std::uint64_t seed)
    : concept_(concept_id), rng_(seed), schema_(make_schema()) {
    if (concept_id < 1 || concept_id > 6) throw ConfigError("agrawal concept must be in 1..6");
}

const StreamSchema& AgrawalStream::schema() const { return schema_; }

bool AgrawalStream::concept_label(int concept_id, const Instance& x) {
    const double salary = x[0].num();
    const double commission = x[1].num();
    const double age = x[2].num();
    const int elevel = static_cast<int>(x[3].cat());
    const double loan = x[8].num();

    const int bracket = age < 40.0 ? 0 : (age < 60.0 ? 1 : 2);
    switch (concept_id) {
        case 1: {
            switch (bracket) {
                case 0: return in_range(salary, 50000.0, 100000.0);
                case 1: return in_range(salary, 75000.0, 125000.0);
                default: return in_range(salary, 25000.0, 75000.0);
            }
        }
        case 2: {
            switch (bracket) {
                case 0: return elevel <= 1;
                case 1: return 1 <= elevel && elevel <= 3;
                default: return 2 <= elevel;
            }
        }
        case 3: {
            switch (bracket) {
                case 0:
                    return elevel <= 1 ? in_range(salary, 25000.0, 75000.0)
                                       : in_range(salary, 50000.0, 100000.0);
                case 1:
                    return (1 <= elevel && elevel <= 3) ? in_range(salary, 50000.0, 100000.0)
                                                        : in_range(salary, 75000.0, 125000.0);
                default:
                    return 2 <= elevel ? in_range(salary, 50000.0, 100000.0)
                                       : in_range(salary, 25000.0, 75000.0);
            }
        }
        case 4: {
            switch (bracket) {
                case 0:
                    return in_range(salary, 50000.0, 100000.0)
                               ? in_range(loan, 100000.0, 300000.0)
                               : in_range(loan, 200000.0, 400000.0);
                case 1:
                    return in_range(salary, 75000.0, 125000.0)
                               ? in_range(loan, 200000.0, 400000.0)
                               : in_range(loan, 300000.0, 500000.0);
                default:
                    return in_range(salary, 25000.0, 75000.0)
                               ? in_range(loan, 300000.0, 500000.0)
                               : in_range(loan, 100000.0, 300000.0);
            }
        }
        case 5: {
            const double total = salary + commission;
            switch (bracket) {
                case 0: return in_range(total, 50000.0, 100000.0);
                case 1: return in_range(total, 75000.0, 125000.0);
                default: return in_range(total, 25000.0, 75000.0);
            }
        }
        case 6: {
            const double disposable = 2.0 * (salary + commission) / 3.0 - loan / 5.0 - 20000.0;
            return disposable > 0.0;
        }
        default: throw ConfigError("agrawal concept must be in 1..6");
    }
}

std::optional<StreamRecord> AgrawalStream::next() {
    Instance x(9, FeatureValue::numeric(0.0));
    const double salary = rng_.uniform(20000.0, 150000.0);
    // One draw regardless of the branch keeps the per-sample draw count fixed.
    const double commission_draw = rng_.uniform(10000.0, 75000.0);
    const double commission = salary > 75000.0 ? 0.0 : commission_draw;
    const double age = rng_.uniform(20.0, 80.0);
    const auto elevel = static_cast<std::int32_t>(rng_.uniform_int(0, 4));
    const auto car = static_cast<std::int32_t>(rng_.uniform_int(0, 19));
    const auto zipcode = static_cast<std::int32_t>(rng_.uniform_int(0, 8));
    const double hvalue = (9.0 - zipcode) * 100000.0 * rng_.uniform(0.5, 1.5);
    const double hyears = static_cast<double>(rng_.uniform_int(1, 30));
    const double loan = rng_.uniform(0.0, 500000.0);

    x[0] = FeatureValue::numeric(salary);
    x[1] = FeatureValue::numeric(commission);
    x[2] = FeatureValue::numeric(age);
    x[3] = FeatureValue::categorical(elevel);
    x[4] = FeatureValue::categorical(car);
    x[5] = FeatureValue::categorical(zipcode);
    x[6] = FeatureValue::numeric(hvalue);
    x[7] = FeatureValue::numeric(hyears);
    x[8] = FeatureValue::numeric(loan);

    const int label = concept_label(concept_, x) ? 1 : 0;
    StreamRecord rec;
    rec.sample = {std::move(x), Target::klass(label)};
    rec.concept_id = concept_;
    return rec;
}

// ----------------------------------------------------------------- stagger

StreamSchema StaggerStream::make_schema() {
    std::vector<FeatureSpec> f;
    f.push_back({"shape", FeatureKind::categorical, {"circle", "square", "triangle"}});
    f.push_back({"size", FeatureKind::categorical, {"small", "medium", "large"}});
    f.push_back({"color", FeatureKind::categorical, {"red", "green", "blue"}});
    return StreamSchema{std::move(f), TargetSpec{"label", TargetKind::klass, 2}};
}

StaggerStream::StaggerStream(int concept_id, std::uint64_t seed)
    : concept_(concept_id), rng_(seed), schema_(make_schema()) {
    if (concept_id < 1 || concept_id > 3) throw ConfigError("stagger concept must be in 1..3");
}

const StreamSchema& StaggerStream::schema() const { return schema_; }

bool StaggerStream::concept_label(int concept_id, const Instance& x) {
    const auto shape = x[0].cat();  // 0 circle, 1 square, 2 triangle
    const auto size = x[1].cat();   // 0 small, 1 medium, 2 large
    const auto color = x[2].cat();  // 0 red, 1 green, 2 blue
    switch (concept_id) {
        case 1: return size == 0 && color == 0;
        case 2: return color == 1 || shape == 0;
        case 3: return size == 1 || size == 2;
        default: throw ConfigError("stagger concept must be in 1..3");
    }
}

std::optional<StreamRecord> StaggerStream::next() {
    Instance x;
    x.push_back(FeatureValue::categorical(static_cast<std::int32_t>(rng_.below(3))));
    x.push_back(FeatureValue::categorical(static_cast<std::int32_t>(rng_.below(3))));
    x.push_back(FeatureValue::categorical(static_cast<std::int32_t>(rng_.below(3))));
    const int label = concept_label(concept_, x) ? 1 : 0;
    StreamRecord rec;
    rec.sample = {std::move(x), Target::klass(label)};
    rec.concept_id = concept_;
    return rec;
}

// ------------------------------------------------------------------- drift

DriftComposer::DriftComposer(std::vector<std::unique_ptr<StreamSource>> subs, double p_switch,
                             std::uint64_t seed)
    : subs_(std::move(subs)), p_switch_(p_switch), rng_(seed) {
    if (subs_.empty()) throw ConfigError("drift composer needs at least one substream");
    for (const auto& s : subs_) {
        if (!s) throw ConfigError("drift composer received a null substream");
        if (!(s->schema() == subs_.front()->schema()))
            throw ConfigError("drift composer substreams must share one schema");
    }
    if (!(p_switch >= 0.0 && p_switch <= 1.0))
        throw ConfigError("switch probability must be in [0, 1]");
}

const StreamSchema& DriftComposer::schema() const { return subs_.front()->schema(); }

std::optional<StreamRecord> DriftComposer::next() {
    bool switched = false;
    if (subs_.size() > 1 && rng_.uniform01() < p_switch_) {
        // Uniform among the other substreams, so a switch always changes.
        auto pick = rng_.below(subs_.size() - 1);
        if (pick >= static_cast<std::uint64_t>(active_)) ++pick;
        active_ = static_cast<int>(pick);
        switched = true;
    }
    auto rec = subs_[static_cast<std::size_t>(active_)]->next();
    if (!rec) return std::nullopt;
    rec->switched = switched;
    return rec;
}

// ------------------------------------------------------------------- build

namespace {

std::vector<int> parse_concept_list(const std::string& v) {
    std::vector<int> out;
    const auto dash = v.find('-');
    try {
        if (dash != std::string::npos && v.find(';') == std::string::npos) {
            const int lo = std::stoi(v.substr(0, dash));
            const int hi = std::stoi(v.substr(dash + 1));
            for (int c = lo; c <= hi; ++c) out.push_back(c);
        } else {
            std::stringstream ss(v);
            std::string tok;
            while (std::getline(ss, tok, ';')) out.push_back(std::stoi(tok));
        }
    } catch (const std::exception&) {
        throw ConfigError("cannot parse concept list '" + v + "'");
    }
    if (out.empty()) throw ConfigError("empty concept list '" + v + "'");
    return out;
}

} // namespace

std::unique_ptr<StreamSource> stream_build(const StreamSpecText& spec,
                                           const std::optional<StreamSchema>& csv_schema,
                                           std::uint64_t seed) {
    const std::string& text = spec.text;
    if (text.empty()) throw ConfigError("empty stream spec");

    std::vector<std::string> parts;
    {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) parts.push_back(tok);
    }
    std::string head = parts[0];
    int concept_id = 1;
    const auto colon = head.find(':');
    if (colon != std::string::npos) {
        try {
            concept_id = std::stoi(head.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse concept in '" + head + "'");
        }
        head.resize(colon);
    }

    std::string base = "agrawal", path;
    std::vector<int> concepts;
    double p_switch = 0.0005;
    bool shuffle = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string::npos)
            throw ConfigError("stream option '" + parts[i] + "' is not key=value");
        const std::string key = parts[i].substr(0, eq);
        const std::string val = parts[i].substr(eq + 1);
        if (key == "base") base = val;
        else if (key == "concepts") concepts = parse_concept_list(val);
        else if (key == "p") {
            try {
                p_switch = std::stod(val);
            } catch (const std::exception&) {
                throw ConfigError("cannot parse switch probability '" + val + "'");
            }
        } else if (key == "path") path = val;
        else if (key == "shuffle") shuffle = (val == "1" || val == "true");
        else throw ConfigError("unknown stream option '" + key + "'");
    }

    if (head == "agrawal") return std::make_unique<AgrawalStream>(concept_id, seed);
    if (head == "stagger") return std::make_unique<StaggerStream>(concept_id, seed);
    if (head == "drift") {
        if (concepts.empty()) concepts = {1, 2, 3};
        RngHandle seeder(seed);
        std::vector<std::unique_ptr<StreamSource>> subs;
        for (int c : concepts) {
            if (base == "agrawal")
                subs.push_back(std::make_unique<AgrawalStream>(c, seeder.next_u64()));
            else if (base == "stagger")
                subs.push_back(std::make_unique<StaggerStream>(c, seeder.next_u64()));
            else
                throw ConfigError("unknown drift base '" + base + "'");
        }
        return std::make_unique<DriftComposer>(std::move(subs), p_switch, seeder.next_u64());
    }
    if (head == "csv") {
        if (path.empty()) throw ConfigError("csv stream needs path=...");
        if (!csv_schema) throw ConfigError("csv stream needs a schema");
        return std::make_unique<CsvStream>(path, *csv_schema, shuffle, seed);
    }
    throw ConfigError("unknown stream kind '" + head + "'");
}

} // namespace streamsage
