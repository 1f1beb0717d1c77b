#pragma once

// Sliding-window SIC receiver.
//
// The window spans window_span * T_f and advances by window_step * T_f
// whenever no further replica inside it can be decoded. A replica is a
// decoding candidate only while it lies fully inside the window. Decoding a
// replica removes every replica of its user from the channel. A user whose
// virtual frame has left the trailing edge undecoded is lost and its
// replicas are dropped.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ira/channel.hpp"
#include "ira/model.hpp"
#include "ira/traffic.hpp"

namespace ira {

enum class UserStatus : std::uint8_t { Pending, Decoded, Lost };

struct UserOutcome {
    std::uint32_t user_id = 0;
    int degree = 0;
    UserStatus status = UserStatus::Pending;
    double window_start = 0.0;  // window position when the outcome was fixed
};

/// Order in which pending candidates are tried. The decoded set at the
/// fixed point does not depend on it.
enum class PickOrder { Fifo, Random };

class SicReceiver {
public:
    SicReceiver(const TrafficTrace& trace, const SystemConfig& cfg, PickOrder order = PickOrder::Fifo,
                std::uint64_t order_seed = 0);

    TimeInterval window() const noexcept { return {window_start_, window_start_ + window_length_}; }

    /// Decodes until no replica inside the window is decodable. Returns true
    /// if at least one user was decoded.
    bool sic_pass();

    /// Same fixed point computed by rescanning every replica in the window
    /// until a full scan decodes nothing; `shuffle` randomizes each scan.
    bool sic_pass_exhaustive(Rng* shuffle = nullptr);

    /// Advances the window one step and declares expired users lost.
    void slide();

    bool finished() const noexcept { return next_expiry_ == users_.size(); }

    /// Alternates sic_pass and slide until every user is classified.
    void run();

    std::span<const UserOutcome> outcomes() const noexcept { return users_; }
    std::size_t decoded_count() const noexcept { return decoded_; }
    std::size_t lost_count() const noexcept { return lost_; }

    std::size_t replica_count() const noexcept { return starts_.size(); }
    double replica_start(std::size_t r) const { return starts_[r]; }
    std::uint32_t replica_owner(std::size_t r) const { return owner_[r]; }
    bool replica_active(std::size_t r) const { return active_[r] != 0; }
    /// Average mutual information of replica r against currently active replicas.
    double replica_avg_mi(std::size_t r);

private:
    bool decodable(std::size_t r);
    void decode_user(std::uint32_t user);
    void deactivate_user(std::uint32_t user);
    void enqueue(std::size_t r);
    void admit_entering();
    bool in_window(std::size_t r) const noexcept;
    std::size_t pop_candidate();

    SystemConfig cfg_;
    MiTable table_;
    double window_length_;
    double window_start_ = 0.0;

    // Replicas sorted by start time.
    std::vector<double> starts_;
    std::vector<std::uint32_t> owner_;
    std::vector<std::uint8_t> active_;
    std::vector<std::uint8_t> queued_;
    // Replica indices of user u: replica_of_[first_[u] .. first_[u + 1]).
    std::vector<std::uint32_t> first_;
    std::vector<std::uint32_t> replica_of_;
    std::vector<double> vf_end_;

    std::vector<UserOutcome> users_;
    std::size_t decoded_ = 0;
    std::size_t lost_ = 0;

    std::size_t next_enter_ = 0;
    std::size_t next_expiry_ = 0;
    std::vector<std::size_t> queue_;
    std::size_t queue_head_ = 0;
    PickOrder order_;
    Rng order_rng_;

    // Scratch buffers for the mutual-information reduction.
    std::vector<double> left_ends_;
    std::vector<double> right_starts_;
    std::vector<double> weights_;
    std::vector<std::uint32_t> counts_;
};

struct ReceiverResult {
    std::vector<std::uint32_t> decoded;
    std::vector<std::uint32_t> lost;
    std::vector<UserOutcome> outcomes;
};

ReceiverResult run_receiver(const TrafficTrace& trace, const SystemConfig& cfg);

/// One line per user: user_id,degree,outcome,window_start
void write_outcomes_csv(std::ostream& out, std::span<const UserOutcome> outcomes);

}  // namespace ira
