#pragma once

#include "sdbdc/geometry.hpp"

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <variant>
#include <vector>

namespace sdbdc {

using SiteId = std::int32_t;
using Seq = std::int64_t;

/// A selected local object plus the aggregates sent along with it.
/// `cov_rad` is the distance to the farthest object this representative newly
/// covered, `cov_cnt` the number of such objects.
struct RepresentativeRecord {
    Point point;
    double cov_rad = 0.0;
    std::int64_t cov_cnt = 0;
    SiteId site = 0;
    Seq seq = 0;
};

struct MaxCount {
    std::int64_t count;
};
struct MaxFraction {
    double fraction;
};
struct ErrorBound {
    double theta;
};

/// When to stop emitting representatives: after a fixed count, after a
/// fraction of the site's objects (rounded up), or once the best remaining
/// DynRepQ drops to theta or below.
class StopCriterion {
public:
    using Rule = std::variant<MaxCount, MaxFraction, ErrorBound>;

    static StopCriterion max_count(std::int64_t count);
    static StopCriterion max_fraction(double fraction);
    static StopCriterion error_bound(double theta = 0.0);

    const Rule& rule() const { return rule_; }
    /// Representative budget for a site of `n_objects` (n_objects for error bounds).
    std::int64_t size_limit(std::int64_t n_objects) const;
    /// Threshold for the error bound; negative (never triggers) for size bounds.
    double theta() const;

private:
    explicit StopCriterion(Rule rule) : rule_(rule) {}
    Rule rule_;
};

/// Object id -> seq of the first representative whose eps-range contained it.
using CoverageOwner = std::map<ObjectId, Seq>;

/// Sum of (eps - d(p, o)) over the closed eps-ball around `o`, which includes
/// `o` itself when it is indexed.
double stat_rep_q(const Point& o, double epsilon, const RangeIndex& index);

/// Mutable state of one site's greedy selection. Per-position vectors are
/// aligned with `data`.
struct SelectionState {
    SelectionState(Dataset data, double epsilon, SiteId site, IndexOptions options);

    Dataset data;
    RangeIndex index;
    double epsilon;
    SiteId site;

    std::vector<char> covered;
    std::vector<char> is_chosen;
    std::vector<RepresentativeRecord> chosen;
    std::vector<Seq> owner;  // -1 while uncovered
    /// Maintained DynRepQ of every candidate (meaningless for chosen objects).
    std::vector<double> scores;

    Index n_covered() const;
    CoverageOwner coverage_owner(Seq prefix = -1) const;
};

/// DynRepQ evaluated from scratch: the StatRepQ sum restricted to objects not
/// yet covered by a chosen representative.
double dyn_rep_q(const Point& o, double epsilon, const SelectionState& state);

struct CoverStats {
    double cov_rad = 0.0;
    std::int64_t cov_cnt = 0;
    std::vector<Index> newly_covered;  // positions, ascending
};

/// Aggregates for `rep` against the current coverage, without applying them.
CoverStats covering_stats(const Point& rep, const SelectionState& state);

/// Greedy best-first selection for one site. Each call to next() computes one
/// more representative; the caller may stop at any time.
class RepresentativeSelector {
public:
    RepresentativeSelector(Dataset site_data, double epsilon, StopCriterion stop, SiteId site = 0,
                           IndexOptions options = {});

    std::optional<RepresentativeRecord> next();
    bool done() const;
    std::vector<RepresentativeRecord> drain();

    const SelectionState& state() const { return state_; }
    const StopCriterion& stop() const { return stop_; }
    /// Highest-ranked candidate (score, position); nullopt when none remain.
    std::optional<std::pair<double, Index>> best_candidate() const;

private:
    struct Entry {
        double score;
        ObjectId id;
        Index position;
    };
    struct Order {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.score != b.score) return a.score > b.score;
            return a.id < b.id;
        }
    };

    void rescore(Index position, double new_score);

    SelectionState state_;
    StopCriterion stop_;
    std::int64_t limit_;
    std::set<Entry, Order> queue_;
};

std::vector<RepresentativeRecord> select_representatives(const Dataset& ds, double epsilon,
                                                         StopCriterion stop, SiteId site = 0,
                                                         IndexOptions options = {});

/// Runs a selector on a producer thread and hands records to one consumer
/// through a bounded queue. The producer blocks when the queue is full;
/// close() (or destruction) stops it before its next record.
class RepresentativeStream {
public:
    explicit RepresentativeStream(RepresentativeSelector selector, std::size_t capacity = 64);
    ~RepresentativeStream();
    RepresentativeStream(const RepresentativeStream&) = delete;
    RepresentativeStream& operator=(const RepresentativeStream&) = delete;

    /// Blocks until a record is available; nullopt once the stream ended or was closed.
    std::optional<RepresentativeRecord> next();
    /// Closes the cursor. Safe to call repeatedly.
    void close();
    /// Number of records handed to the consumer so far.
    std::int64_t consumed() const;
    /// Joins the producer and returns the selector; only the first consumed()
    /// records are guaranteed to have been seen by the consumer.
    const RepresentativeSelector& finish();

private:
    void produce(std::stop_token token);

    RepresentativeSelector selector_;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::condition_variable_any cv_;
    std::deque<RepresentativeRecord> queue_;
    bool producer_done_ = false;
    bool closed_ = false;
    std::int64_t consumed_ = 0;
    std::jthread producer_;
};

}  // namespace sdbdc
