#pragma once

#include <limits>
#include <optional>
#include <set>

#include "cohmms/closure.hpp"
#include "cohmms/kernel.hpp"

namespace cohmms {

/// Incrementally extended cache of convolution powers d^{*1}, ..., d^{*k}.
/// The cell scans are O(n^4 N) and dominate; reusing powers is the only
/// optimization that matters at desk scale.
template <class T>
class PowerCache {
public:
    explicit PowerCache(SpacePtr<T> space) : space_(std::move(space)) {
        powers_.push_back(distance_kernel(space_));
    }

    const Matrix<T>& power(int k) {
        if (k < 1) throw DomainError("convolution powers start at k = 1");
        while (static_cast<int>(powers_.size()) < k) {
            powers_.push_back(convolve(powers_.back(), powers_.front()));
        }
        return powers_[k - 1].values;
    }

    const SpacePtr<T>& space() const { return space_; }

private:
    SpacePtr<T> space_;
    std::vector<Kernel<T>> powers_;
};

/// Outcome of the (N, m, p) separation scan. Pairs of cells related by a
/// flip are exempt: convolution powers of a symmetric kernel are themselves
/// symmetric, so no power can ever tell (x, y) from (y, x); flip separation
/// is the closure's job, not the powers'.
template <class T>
struct SeparationCertificate {
    bool satisfied = false;
    int N_used = 0;
    int m = 0;
    int p = 0;
    std::optional<T> min_margin;           // empty when no pair met the threshold
    std::optional<std::pair<Cell, Cell>> worst_pair;
    long long pairs_checked = 0;
};

template <class T>
SeparationCertificate<T> check_nmp(SpacePtr<T> space, int N, int m, int p,
                                   PowerCache<T>* cache = nullptr) {
    if (N < 1 || m < 1 || p < 1) throw StructuralError("check_nmp requires N, m, p >= 1");
    const int n = space->size();
    PowerCache<T> local(space);
    PowerCache<T>& powers = cache ? *cache : local;
    powers.power(N);

    const T threshold = T(1) / T(m);
    const T margin_floor = T(1) / T(p);

    SeparationCertificate<T> cert;
    cert.N_used = N;
    cert.m = m;
    cert.p = p;
    cert.satisfied = true;

    const auto& d = space->dist;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int xp = 0; xp < n; ++xp)
                for (int yp = 0; yp < n; ++yp) {
                    if (x == xp && y == yp) continue;
                    if (xp == y && yp == x) continue; // flip pair, see above
                    if (d(x, xp) + d(y, yp) < threshold) continue;
                    ++cert.pairs_checked;
                    T best(0);
                    for (int k = 1; k <= N; ++k) {
                        const auto& pw = powers.power(k);
                        best = std::max(best, scalar_abs(T(pw(x, y) - pw(xp, yp))));
                    }
                    if (!cert.min_margin || best < *cert.min_margin) {
                        cert.min_margin = best;
                        cert.worst_pair = std::make_pair(Cell{x, y}, Cell{xp, yp});
                    }
                    if (!(best > margin_floor)) cert.satisfied = false;
                }
    return cert;
}

template <class T>
struct SeparationProfile {
    std::optional<int> N_min;
    std::optional<T> margin; // minimal pairwise margin at N_min; empty if vacuous
};

/// Smallest N such that the power-signature map cell -> (d^{*1}, ..., d^{*N})
/// is injective on X x X modulo flips, with signature components compared by
/// the same grouping policy the closure engine uses.
template <class T>
SeparationProfile<T> separation_profile(SpacePtr<T> space, int N_max,
                                        const NumericPolicy& policy,
                                        PowerCache<T>* cache = nullptr) {
    if (N_max < 1) throw StructuralError("separation_profile requires N_max >= 1");
    const int n = space->size();
    PowerCache<T> local(space);
    PowerCache<T>& powers = cache ? *cache : local;

    std::vector<std::vector<int>> signatures(static_cast<size_t>(n) * n);
    for (int N = 1; N <= N_max; ++N) {
        const auto& pw = powers.power(N);
        std::vector<T> vals(pw.data());
        std::vector<int> gids = group_values(vals, policy);
        for (size_t c = 0; c < signatures.size(); ++c) signatures[c].push_back(gids[c]);

        bool injective = true;
        std::map<std::vector<int>, Cell> seen;
        for (int x = 0; x < n && injective; ++x)
            for (int y = 0; y < n; ++y) {
                auto [it, inserted] = seen.emplace(signatures[static_cast<size_t>(x) * n + y],
                                                   Cell{x, y});
                if (inserted) continue;
                const Cell other = it->second;
                if (other.x == y && other.y == x) continue; // flips share signatures
                injective = false;
                break;
            }
        if (!injective) continue;

        SeparationProfile<T> out;
        out.N_min = N;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int xp = 0; xp < n; ++xp)
                    for (int yp = 0; yp < n; ++yp) {
                        if (x == xp && y == yp) continue;
                        if (xp == y && yp == x) continue;
                        T best(0);
                        for (int k = 1; k <= N; ++k) {
                            const auto& pk = powers.power(k);
                            best = std::max(best, scalar_abs(T(pk(x, y) - pk(xp, yp))));
                        }
                        if (!out.margin || best < *out.margin) out.margin = best;
                    }
        return out;
    }
    return {};
}

struct DensityFlags {
    bool off_diag_injective = false;
    bool diag_power2_injective = false;
};

/// The two sufficient conditions from the density argument: d injective on
/// unordered off-diagonal pairs (the ordered reading is void, d being
/// symmetric) and d^{*2} injective on the diagonal.
template <class T>
DensityFlags density_condition(SpacePtr<T> space, const NumericPolicy& policy,
                               PowerCache<T>* cache = nullptr) {
    const int n = space->size();
    DensityFlags flags;

    std::vector<T> offdiag;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) offdiag.push_back(space->dist(x, y));
    auto off_ids = group_values(offdiag, policy);
    std::set<int> off_distinct(off_ids.begin(), off_ids.end());
    flags.off_diag_injective = off_distinct.size() == offdiag.size();

    PowerCache<T> local(space);
    PowerCache<T>& powers = cache ? *cache : local;
    const auto& d2 = powers.power(2);
    std::vector<T> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = d2(i, i);
    auto diag_ids = group_values(diag, policy);
    std::set<int> diag_distinct(diag_ids.begin(), diag_ids.end());
    flags.diag_power2_injective = diag_distinct.size() == diag.size();
    return flags;
}

} // namespace cohmms
