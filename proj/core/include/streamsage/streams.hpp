#ifndef STREAMSAGE_STREAMS_HPP
#define STREAMSAGE_STREAMS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "streamsage/rng.hpp"
#include "streamsage/schema.hpp"
#include "streamsage/types.hpp"

namespace streamsage {

// One emitted stream element with provenance.
struct StreamRecord {
    LabeledSample sample;
    int concept_id = 0;  // generating concept, 0 when not applicable
    bool switched = false; // true iff the concept changed on this step
};

// Sequential labeled-sample source; nullopt signals end of stream.
class StreamSource {
public:
    virtual ~StreamSource() = default;
    virtual const StreamSchema& schema() const = 0;
    virtual std::optional<StreamRecord> next() = 0;
};

// Nine-feature synthetic classification stream: salary, commission, age,
// education level, car, zipcode, house value, years owned, loan. Commission
// is zero whenever salary exceeds 75k, otherwise uniform: the two features
// are strongly dependent by construction. Six decision functions from the
// classic generator family are available as concepts 1..6; label 1 means
// the concept predicate holds.
class AgrawalStream : public StreamSource {
public:
    AgrawalStream(int concept_id, std::uint64_t seed);

    const StreamSchema& schema() const override;
    std::optional<StreamRecord> next() override;
    int concept_id() const { return concept_; }

    static StreamSchema make_schema();
    // Decision predicate for one concept; exposed for exact label checks.
    static bool concept_label(int concept_id, const Instance& x);

private:
    int concept_;
    RngHandle rng_;
    StreamSchema schema_;
};

// Three categorical features (shape, size, color), uniform draws, three
// classic boolean concepts: 1 = small and red, 2 = green or circle,
// 3 = medium or large.
class StaggerStream : public StreamSource {
public:
    StaggerStream(int concept_id, std::uint64_t seed);

    const StreamSchema& schema() const override;
    std::optional<StreamRecord> next() override;
    int concept_id() const { return concept_; }

    static StreamSchema make_schema();
    static bool concept_label(int concept_id, const Instance& x);

private:
    int concept_;
    RngHandle rng_;
    StreamSchema schema_;
};

// Sudden-drift composer: before each emission, with probability p_switch the
// active substream is resampled uniformly among the other substreams (so a
// switch always changes the concept); then the active substream emits.
class DriftComposer : public StreamSource {
public:
    DriftComposer(std::vector<std::unique_ptr<StreamSource>> subs, double p_switch,
                  std::uint64_t seed);

    const StreamSchema& schema() const override;
    std::optional<StreamRecord> next() override;
    int active() const { return active_; }

private:
    std::vector<std::unique_ptr<StreamSource>> subs_;
    double p_switch_;
    int active_ = 0;
    RngHandle rng_;
};

// Replays a CSV file against a schema: header row must name every feature in
// schema order followed by the target. Rows stream in file order, or in a
// seeded shuffle; the file is loaded eagerly and parse errors carry row and
// column diagnostics.
class CsvStream : public StreamSource {
public:
    CsvStream(const std::string& path, StreamSchema schema, bool shuffle, std::uint64_t seed);

    const StreamSchema& schema() const override;
    std::optional<StreamRecord> next() override;
    std::size_t size() const { return rows_.size(); }
    const std::vector<LabeledSample>& rows() const { return rows_; }

private:
    StreamSchema schema_;
    std::vector<LabeledSample> rows_;
    std::size_t pos_ = 0;
};

// Stream construction recipe, mirroring the CLI grammar
// "kind[:concept][,key=value...]"; kinds: agrawal, stagger, drift
// (key concepts=1-3 or concepts=1;2;5, p=…, base=agrawal|stagger), csv
// (key path=…, shuffle=0/1).
struct StreamSpecText {
    std::string text;
};
std::unique_ptr<StreamSource> stream_build(const StreamSpecText& spec,
                                           const std::optional<StreamSchema>& csv_schema,
                                           std::uint64_t seed);

} // namespace streamsage

#endif
