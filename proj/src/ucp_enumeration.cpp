// Exhaustive oracle for the isomorphism counts of the pattern catalog.
//
// Vulnerable periods play the role of slots: each labeled user of degree l
// picks an l-subset of the labeled periods. A configuration realizes the
// pattern when exactly mu periods are used, every used period holds at least
// two replicas, the user/period graph is connected, and no proper subset of
// users is itself stuck (each of its replicas shares a period with another
// replica of the subset).

#include <bit>
#include <vector>

#include <fmt/core.h>

#include "ira/floor.hpp"

namespace ira::analytic {

namespace {

using Mask = std::uint32_t;

std::vector<Mask> subsets_of_size(int n, int k)
{
    std::vector<Mask> out;
    for (Mask m = 0; m < (Mask{1} << n); ++m)
        if (std::popcount(m) == k)
            out.push_back(m);
    return out;
}

bool stuck(const std::vector<Mask>& choice, std::uint32_t members, int n)
{
    for (int p = 0; p < n; ++p) {
        int count = 0;
        for (std::size_t u = 0; u < choice.size(); ++u)
            if ((members >> u) & 1U)
                count += (choice[u] >> p) & 1U;
        if (count == 1)
            return false;
    }
    return true;
}

bool connected(const std::vector<Mask>& choice)
{
    Mask reached = choice[0];
    std::uint32_t joined = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t u = 0; u < choice.size(); ++u)
            if (!((joined >> u) & 1U) && (choice[u] & reached)) {
                joined |= 1U << u;
                reached |= choice[u];
                grew = true;
            }
    }
    return joined == (1U << choice.size()) - 1;
}

bool realizes(const std::vector<Mask>& choice, int mu, int n)
{
    Mask used = 0;
    for (const Mask m : choice)
        used |= m;
    if (std::popcount(used) != mu)
        return false;
    const auto all = static_cast<std::uint32_t>((1U << choice.size()) - 1);
    if (!stuck(choice, all, n) || !connected(choice))
        return false;
    for (std::uint32_t sub = 1; sub < all; ++sub)
        if (stuck(choice, sub, n))
            return false;
    return true;
}

}  // namespace

std::uint64_t count_configurations(const UcpDescriptor& ucp, int n_periods)
{
    constexpr int kMaxPeriods = 10;
    constexpr double kMaxAssignments = 5e8;
    if (n_periods < 1 || n_periods > kMaxPeriods || ucp.nu() > 16)
        throw Error(ErrorCode::EnumerationTooLarge,
                    fmt::format("{} periods / {} users is beyond exhaustive enumeration", n_periods, ucp.nu()));

    std::vector<int> degrees;
    for (std::size_t i = 0; i < ucp.profile.size(); ++i)
        for (int k = 0; k < ucp.profile[i]; ++k)
            degrees.push_back(static_cast<int>(i + 1));

    std::vector<std::vector<Mask>> options;
    double assignments = 1.0;
    for (const int d : degrees) {
        options.push_back(subsets_of_size(n_periods, d));
        assignments *= static_cast<double>(options.back().size());
    }
    if (assignments > kMaxAssignments)
        throw Error(ErrorCode::EnumerationTooLarge, fmt::format("{:.3g} assignments to enumerate", assignments));
    if (degrees.empty() || assignments == 0.0)
        return 0;

    std::vector<std::size_t> index(degrees.size(), 0);
    std::vector<Mask> choice(degrees.size());
    std::uint64_t count = 0;
    for (;;) {
        for (std::size_t u = 0; u < degrees.size(); ++u)
            choice[u] = options[u][index[u]];
        if (realizes(choice, ucp.mu, n_periods))
            ++count;

        std::size_t u = 0;
        while (u < index.size() && ++index[u] == options[u].size())
            index[u++] = 0;
        if (u == index.size())
            break;
    }
    return count;
}

}  // namespace ira::analytic
