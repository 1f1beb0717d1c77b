#include "ira/receiver.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ira/simd/mi_kernels.hpp"

namespace ira {

SicReceiver::SicReceiver(const TrafficTrace& trace, const SystemConfig& cfg, PickOrder order,
                         std::uint64_t order_seed)
    : cfg_(cfg),
      table_(cfg.snr_linear, 32),
      window_length_(cfg.window_length()),
      order_(order),
      order_rng_(order_seed)
{
    const auto& users = trace.users;
    std::size_t total = 0;
    for (const auto& u : users)
        total += u.replica_starts().size();

    std::vector<std::pair<double, std::uint32_t>> flat;
    flat.reserve(total);
    users_.reserve(users.size());
    vf_end_.reserve(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto& u = users[i];
        if (i > 0 && u.arrival() < users[i - 1].arrival())
            throw Error(ErrorCode::InvalidPhysicalParameter, "trace must be sorted by arrival");
        for (const double s : u.replica_starts())
            flat.emplace_back(s, static_cast<std::uint32_t>(i));
        users_.push_back({u.user_id(), u.degree(), UserStatus::Pending, 0.0});
        vf_end_.push_back(u.arrival() + cfg.vf_span);
    }
    std::sort(flat.begin(), flat.end());

    starts_.resize(total);
    owner_.resize(total);
    active_.assign(total, 1);
    queued_.assign(total, 0);
    first_.assign(users.size() + 1, 0);
    for (std::size_t r = 0; r < total; ++r) {
        starts_[r] = flat[r].first;
        owner_[r] = flat[r].second;
        ++first_[owner_[r] + 1];
    }
    std::partial_sum(first_.begin(), first_.end(), first_.begin());
    replica_of_.resize(total);
    std::vector<std::uint32_t> fill(first_.begin(), first_.end() - 1);
    for (std::size_t r = 0; r < total; ++r)
        replica_of_[fill[owner_[r]]++] = static_cast<std::uint32_t>(r);

    window_start_ = users.empty() ? 0.0 : users.front().arrival() - window_length_;
    admit_entering();
}

bool SicReceiver::in_window(std::size_t r) const noexcept
{
    return r < next_enter_ && starts_[r] >= window_start_;
}

void SicReceiver::enqueue(std::size_t r)
{
    if (queued_[r])
        return;
    queued_[r] = 1;
    queue_.push_back(r);
}

std::size_t SicReceiver::pop_candidate()
{
    if (order_ == PickOrder::Random) {
        const std::size_t span = queue_.size() - queue_head_;
        const std::size_t pick = queue_head_ + static_cast<std::size_t>(order_rng_.next() % span);
        std::swap(queue_[pick], queue_[queue_head_]);
    }
    const std::size_t r = queue_[queue_head_++];
    queued_[r] = 0;
    if (queue_head_ == queue_.size()) {
        queue_.clear();
        queue_head_ = 0;
    }
    return r;
}

void SicReceiver::admit_entering()
{
    const double window_end = window_start_ + window_length_;
    while (next_enter_ < starts_.size() && starts_[next_enter_] + kPacketDuration <= window_end) {
        if (active_[next_enter_] && starts_[next_enter_] >= window_start_)
            enqueue(next_enter_);
        ++next_enter_;
    }
}

double SicReceiver::replica_avg_mi(std::size_t r)
{
    const double s = starts_[r];
    left_ends_.clear();
    right_starts_.clear();
    for (std::size_t i = r; i-- > 0 && starts_[i] > s - kPacketDuration;)
        if (active_[i])
            left_ends_.push_back(starts_[i] + kPacketDuration);
    for (std::size_t i = r + 1; i < starts_.size() && starts_[i] < s + kPacketDuration; ++i)
        if (active_[i])
            right_starts_.push_back(starts_[i]);

    if (left_ends_.empty() && right_starts_.empty())
        return table_[0];

    // Left interferers cover [s, end); scanning went backwards so their ends descend.
    std::reverse(left_ends_.begin(), left_ends_.end());
    const std::size_t max_count = left_ends_.size() + right_starts_.size();
    if (max_count > table_.max_interferers())
        table_.grow_to(static_cast<std::uint32_t>(max_count));

    weights_.clear();
    counts_.clear();
    auto count = static_cast<std::uint32_t>(left_ends_.size());
    double cursor = s;
    std::size_t li = 0;
    std::size_t ri = 0;
    while (li < left_ends_.size() || ri < right_starts_.size()) {
        const bool take_left = ri == right_starts_.size() ||
                               (li < left_ends_.size() && left_ends_[li] <= right_starts_[ri]);
        const double at = take_left ? left_ends_[li++] : right_starts_[ri++];
        weights_.push_back((at - cursor) / kPacketDuration);
        counts_.push_back(count);
        cursor = at;
        count = take_left ? count - 1 : count + 1;
    }
    weights_.push_back((s + kPacketDuration - cursor) / kPacketDuration);
    counts_.push_back(count);
    return simd::weighted_lookup_sum(weights_, counts_, table_.values());
}

bool SicReceiver::decodable(std::size_t r) { return is_decodable(replica_avg_mi(r), cfg_.rate); }

void SicReceiver::deactivate_user(std::uint32_t user)
{
    for (std::uint32_t k = first_[user]; k < first_[user + 1]; ++k)
        active_[replica_of_[k]] = 0;
}

void SicReceiver::decode_user(std::uint32_t user)
{
    users_[user].status = UserStatus::Decoded;
    users_[user].window_start = window_start_;
    ++decoded_;
    deactivate_user(user);
    // Cancellation can only help replicas that overlapped the removed ones.
    for (std::uint32_t k = first_[user]; k < first_[user + 1]; ++k) {
        const std::size_t r = replica_of_[k];
        const double s = starts_[r];
        for (std::size_t i = r; i-- > 0 && starts_[i] > s - kPacketDuration;)
            if (active_[i] && in_window(i))
                enqueue(i);
        for (std::size_t i = r + 1; i < starts_.size() && starts_[i] < s + kPacketDuration; ++i)
            if (active_[i] && in_window(i))
                enqueue(i);
    }
}

bool SicReceiver::sic_pass()
{
    bool progressed = false;
    while (queue_head_ < queue_.size()) {
        const std::size_t r = pop_candidate();
        if (!active_[r] || !in_window(r))
            continue;
        if (decodable(r)) {
            decode_user(owner_[r]);
            progressed = true;
        }
    }
    return progressed;
}

bool SicReceiver::sic_pass_exhaustive(Rng* shuffle)
{
    const auto lo = static_cast<std::size_t>(
        std::lower_bound(starts_.begin(), starts_.begin() + static_cast<std::ptrdiff_t>(next_enter_),
                         window_start_) -
        starts_.begin());
    std::vector<std::size_t> scan;
    bool progressed = false;
    for (;;) {
        scan.clear();
        for (std::size_t r = lo; r < next_enter_; ++r)
            if (active_[r])
                scan.push_back(r);
        if (shuffle) {
            for (std::size_t i = scan.size(); i > 1; --i)
                std::swap(scan[i - 1], scan[static_cast<std::size_t>(shuffle->next() % i)]);
        }
        bool any = false;
        for (const std::size_t r : scan) {
            if (active_[r] && decodable(r)) {
                decode_user(owner_[r]);
                any = true;
            }
        }
        if (!any)
            break;
        progressed = true;
    }
    return progressed;
}

void SicReceiver::slide()
{
    window_start_ += cfg_.step_length();
    while (next_expiry_ < users_.size() && vf_end_[next_expiry_] < window_start_) {
        auto& u = users_[next_expiry_];
        if (u.status == UserStatus::Pending) {
            u.status = UserStatus::Lost;
            u.window_start = window_start_;
            ++lost_;
            deactivate_user(static_cast<std::uint32_t>(next_expiry_));
        }
        ++next_expiry_;
    }
    admit_entering();
}

void SicReceiver::run()
{
    while (!finished()) {
        sic_pass();
        slide();
    }
}

ReceiverResult run_receiver(const TrafficTrace& trace, const SystemConfig& cfg)
{
    SicReceiver rx(trace, cfg);
    rx.run();
    ReceiverResult result;
    result.outcomes.assign(rx.outcomes().begin(), rx.outcomes().end());
    for (const auto& o : result.outcomes)
        (o.status == UserStatus::Decoded ? result.decoded : result.lost).push_back(o.user_id);
    return result;
}

void write_outcomes_csv(std::ostream& out, std::span<const UserOutcome> outcomes)
{
    fmt::print(out, "user_id,degree,outcome,window_start\n");
    for (const auto& o : outcomes) {
        const char* label = o.status == UserStatus::Decoded ? "decoded"
                            : o.status == UserStatus::Lost  ? "lost"
                                                            : "pending";
        fmt::print(out, "{},{},{},{:.17g}\n", o.user_id, o.degree, label, o.window_start);
    }
}

}  // namespace ira
