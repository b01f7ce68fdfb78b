#include "sdbdc/representatives.hpp"

#include <algorithm>
#include <cmath>

namespace sdbdc {

StopCriterion StopCriterion::max_count(std::int64_t count) {
    if (count < 1) throw InputError("stop criterion: size bound must be at least 1");
    return StopCriterion(MaxCount{count});
}

StopCriterion StopCriterion::max_fraction(double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InputError("stop criterion: fraction must lie in (0, 1]");
    }
    return StopCriterion(MaxFraction{fraction});
}

StopCriterion StopCriterion::error_bound(double theta) {
    if (!(theta >= 0.0)) throw InputError("stop criterion: theta must be non-negative");
    return StopCriterion(ErrorBound{theta});
}

std::int64_t StopCriterion::size_limit(std::int64_t n_objects) const {
    if (const auto* c = std::get_if<MaxCount>(&rule_)) return std::min(c->count, n_objects);
    if (const auto* f = std::get_if<MaxFraction>(&rule_)) {
        // the small offset keeps products like 0.07 * 100 from rounding up to 8
        const double raw = f->fraction * static_cast<double>(n_objects);
        const auto k = static_cast<std::int64_t>(std::ceil(raw - 1e-9));
        return std::clamp<std::int64_t>(k, n_objects > 0 ? 1 : 0, n_objects);
    }
    return n_objects;
}

double StopCriterion::theta() const {
    if (const auto* e = std::get_if<ErrorBound>(&rule_)) return e->theta;
    return -1.0;
}

double stat_rep_q(const Point& o, double epsilon, const RangeIndex& index) {
    if (!(epsilon > 0.0)) throw InputError("StatRepQ: epsilon must be positive");
    double sum = 0.0;
    for (const auto& n : index.query(o.coords, epsilon)) sum += epsilon - n.dist;
    return sum;
}

SelectionState::SelectionState(Dataset data_in, double eps, SiteId site_id, IndexOptions options)
    : data(std::move(data_in)),
      index(data, options.cell_side > 0.0 ? options : IndexOptions{options.kind, eps}),
      epsilon(eps),
      site(site_id) {
    if (!(eps > 0.0)) throw InputError("selection: epsilon must be positive");
    const auto n = static_cast<std::size_t>(data.size());
    covered.assign(n, 0);
    is_chosen.assign(n, 0);
    owner.assign(n, -1);
    scores.assign(n, 0.0);
}

Index SelectionState::n_covered() const {
    return static_cast<Index>(std::count(covered.begin(), covered.end(), char{1}));
}

CoverageOwner SelectionState::coverage_owner(Seq prefix) const {
    CoverageOwner out;
    for (Index i = 0; i < data.size(); ++i) {
        const Seq s = owner[static_cast<std::size_t>(i)];
        if (s >= 0 && (prefix < 0 || s < prefix)) out.emplace(data.id(i), s);
    }
    return out;
}

double dyn_rep_q(const Point& o, double epsilon, const SelectionState& state) {
    double sum = 0.0;
    for (const auto& n : state.index.query(o.coords, epsilon)) {
        if (!state.covered[static_cast<std::size_t>(n.position)]) sum += epsilon - n.dist;
    }
    return sum;
}

CoverStats covering_stats(const Point& rep, const SelectionState& state) {
    CoverStats stats;
    for (const auto& n : state.index.query(rep.coords, state.epsilon)) {
        if (state.covered[static_cast<std::size_t>(n.position)]) continue;
        stats.newly_covered.push_back(n.position);
        stats.cov_rad = std::max(stats.cov_rad, n.dist);
    }
    stats.cov_cnt = static_cast<std::int64_t>(stats.newly_covered.size());
    return stats;
}

// ---------------------------------------------------------------------------

RepresentativeSelector::RepresentativeSelector(Dataset site_data, double epsilon, StopCriterion stop,
                                               SiteId site, IndexOptions options)
    : state_(std::move(site_data), epsilon, site, options),
      stop_(stop),
      limit_(stop.size_limit(state_.data.size())) {
    const double eps = state_.epsilon;
    for (Index i = 0; i < state_.data.size(); ++i) {
        const auto si = static_cast<std::size_t>(i);
        double sum = 0.0;
        for (const auto& n : state_.index.query(state_.data.coords(i), eps)) sum += eps - n.dist;
        state_.scores[si] = sum;
        queue_.insert(Entry{sum, state_.data.id(i), i});
    }
}

bool RepresentativeSelector::done() const {
    if (queue_.empty()) return true;
    if (static_cast<std::int64_t>(state_.chosen.size()) >= limit_) return true;
    return stop_.theta() >= 0.0 && queue_.begin()->score <= stop_.theta();
}

std::optional<std::pair<double, Index>> RepresentativeSelector::best_candidate() const {
    if (queue_.empty()) return std::nullopt;
    return std::pair{queue_.begin()->score, queue_.begin()->position};
}

void RepresentativeSelector::rescore(Index position, double new_score) {
    auto& current = state_.scores[static_cast<std::size_t>(position)];
    if (new_score == current) return;
    queue_.erase(Entry{current, state_.data.id(position), position});
    current = new_score;
    queue_.insert(Entry{new_score, state_.data.id(position), position});
}

std::optional<RepresentativeRecord> RepresentativeSelector::next() {
    if (done()) return std::nullopt;

    const Entry top = *queue_.begin();
    queue_.erase(queue_.begin());
    const Index pos = top.position;
    state_.is_chosen[static_cast<std::size_t>(pos)] = 1;

    CoverStats stats = covering_stats(state_.data.point(pos), state_);
    RepresentativeRecord record{state_.data.point(pos), stats.cov_rad, stats.cov_cnt, state_.site,
                                static_cast<Seq>(state_.chosen.size())};

    for (Index c : stats.newly_covered) {
        state_.covered[static_cast<std::size_t>(c)] = 1;
        state_.owner[static_cast<std::size_t>(c)] = record.seq;
    }
    // Only candidates within eps of a newly covered object change. Their sums
    // are re-added in position order rather than decremented, so a score is
    // bit-identical to a from-scratch evaluation and exact ties stay ties.
    const double eps = state_.epsilon;
    std::vector<Index> affected;
    for (Index c : stats.newly_covered) {
        for (const auto& n : state_.index.query(state_.data.coords(c), eps)) {
            if (!state_.is_chosen[static_cast<std::size_t>(n.position)] && n.dist < eps) affected.push_back(n.position);
        }
    }
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
    for (Index q : affected) rescore(q, dyn_rep_q(state_.data.point(q), eps, state_));

    state_.chosen.push_back(record);
    return record;
}

std::vector<RepresentativeRecord> RepresentativeSelector::drain() {
    std::vector<RepresentativeRecord> out;
    while (auto r = next()) out.push_back(std::move(*r));
    return out;
}

std::vector<RepresentativeRecord> select_representatives(const Dataset& ds, double epsilon,
                                                         StopCriterion stop, SiteId site,
                                                         IndexOptions options) {
    return RepresentativeSelector(ds, epsilon, stop, site, options).drain();
}

// ---------------------------------------------------------------------------

RepresentativeStream::RepresentativeStream(RepresentativeSelector selector, std::size_t capacity)
    : selector_(std::move(selector)),
      capacity_(std::max<std::size_t>(capacity, 1)),
      producer_([this](std::stop_token token) { produce(token); }) {}

RepresentativeStream::~RepresentativeStream() { close(); }

void RepresentativeStream::produce(std::stop_token token) {
    while (!token.stop_requested()) {
        auto record = selector_.next();
        if (!record) break;
        std::unique_lock lock(mutex_);
        if (!cv_.wait(lock, token, [&] { return queue_.size() < capacity_; })) break;
        queue_.push_back(std::move(*record));
        cv_.notify_all();
    }
    std::lock_guard lock(mutex_);
    producer_done_ = true;
    cv_.notify_all();
}

std::optional<RepresentativeRecord> RepresentativeStream::next() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return closed_ || producer_done_ || !queue_.empty(); });
    if (closed_ || queue_.empty()) return std::nullopt;
    RepresentativeRecord record = std::move(queue_.front());
    queue_.pop_front();
    ++consumed_;
    cv_.notify_all();
    return record;
}

void RepresentativeStream::close() {
    producer_.request_stop();
    std::lock_guard lock(mutex_);
    closed_ = true;
    cv_.notify_all();
}

std::int64_t RepresentativeStream::consumed() const {
    std::lock_guard lock(mutex_);
    return consumed_;
}

const RepresentativeSelector& RepresentativeStream::finish() {
    close();
    if (producer_.joinable()) producer_.join();
    return selector_;
}

}  // namespace sdbdc
