#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace tokmine {

struct PatchMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One maximal run of edits with zero context: the removed units, then the
/// added units, exactly as a unified diff at context 0 would group them.
/// old_start/new_start are 0-based unit indices of the run in each sequence.
template <class T>
struct Hunk {
    std::size_t old_start = 0;
    std::size_t new_start = 0;
    std::vector<T> removed;
    std::vector<T> added;
};

template <class T>
struct DiffResult {
    std::vector<Hunk<T>> hunks;
    std::size_t n_added = 0;
    std::size_t n_removed = 0;

    bool empty() const { return hunks.empty(); }
};

namespace detail {

// Linear-space Myers: locate one point on a minimal edit path by running the
// forward and backward searches until they overlap. Diagonals are indexed by
// i1 - i2 with an array offset so negative diagonals work. Ties prefer the
// move that consumes from the old sequence, so removals come first at equal
// cost (matching how git orders a modified region).
template <class T, class Eq>
struct MyersState {
    std::span<const T> a;
    std::span<const T> b;
    Eq eq;
    std::vector<char>& a_removed;
    std::vector<char>& b_added;
    std::vector<long> kvdf;
    std::vector<long> kvdb;
    long koff = 0;

    MyersState(std::span<const T> a_, std::span<const T> b_, Eq eq_,
               std::vector<char>& ar, std::vector<char>& ba)
        : a(a_), b(b_), eq(eq_), a_removed(ar), b_added(ba) {
        const std::size_t diags = a.size() + b.size() + 3;
        kvdf.assign(diags, 0);
        kvdb.assign(diags, 0);
        koff = static_cast<long>(b.size()) + 1;
    }

    long& vf(long k) { return kvdf[static_cast<std::size_t>(k + koff)]; }
    long& vb(long k) { return kvdb[static_cast<std::size_t>(k + koff)]; }

    void split(long off1, long lim1, long off2, long lim2, long& spl1, long& spl2) {
        const long dmin = off1 - lim2;
        const long dmax = lim1 - off2;
        const long fmid = off1 - off2;
        const long bmid = lim1 - lim2;
        const bool odd = ((fmid - bmid) & 1) != 0;
        long fmin = fmid, fmax = fmid;
        long bmin = bmid, bmax = bmid;
        constexpr long kFar = 1L << 62;
        vf(fmid) = off1;
        vb(bmid) = lim1;
        for (;;) {
            if (fmin > dmin) { --fmin; vf(fmin - 1) = -1; } else { ++fmin; }
            if (fmax < dmax) { ++fmax; vf(fmax + 1) = -1; } else { --fmax; }
            for (long d = fmax; d >= fmin; d -= 2) {
                long i1 = vf(d - 1) >= vf(d + 1) ? vf(d - 1) + 1 : vf(d + 1);
                long i2 = i1 - d;
                while (i1 < lim1 && i2 < lim2 &&
                       eq(a[static_cast<std::size_t>(i1)], b[static_cast<std::size_t>(i2)])) {
                    ++i1;
                    ++i2;
                }
                vf(d) = i1;
                if (odd && d >= bmin && d <= bmax && vb(d) <= i1) {
                    spl1 = i1;
                    spl2 = i2;
                    return;
                }
            }
            if (bmin > dmin) { --bmin; vb(bmin - 1) = kFar; } else { ++bmin; }
            if (bmax < dmax) { ++bmax; vb(bmax + 1) = kFar; } else { --bmax; }
            for (long d = bmax; d >= bmin; d -= 2) {
                long i1 = vb(d - 1) < vb(d + 1) ? vb(d - 1) : vb(d + 1) - 1;
                long i2 = i1 - d;
                while (i1 > off1 && i2 > off2 &&
                       eq(a[static_cast<std::size_t>(i1 - 1)], b[static_cast<std::size_t>(i2 - 1)])) {
                    --i1;
                    --i2;
                }
                vb(d) = i1;
                if (!odd && d >= fmin && d <= fmax && i1 <= vf(d)) {
                    spl1 = i1;
                    spl2 = i2;
                    return;
                }
            }
        }
    }

    void compare(long off1, long lim1, long off2, long lim2) {
        for (;;) {
            while (off1 < lim1 && off2 < lim2 &&
                   eq(a[static_cast<std::size_t>(off1)], b[static_cast<std::size_t>(off2)])) {
                ++off1;
                ++off2;
            }
            while (off1 < lim1 && off2 < lim2 &&
                   eq(a[static_cast<std::size_t>(lim1 - 1)], b[static_cast<std::size_t>(lim2 - 1)])) {
                --lim1;
                --lim2;
            }
            if (off1 == lim1) {
                for (long j = off2; j < lim2; ++j) b_added[static_cast<std::size_t>(j)] = 1;
                return;
            }
            if (off2 == lim2) {
                for (long i = off1; i < lim1; ++i) a_removed[static_cast<std::size_t>(i)] = 1;
                return;
            }
            long spl1 = 0, spl2 = 0;
            split(off1, lim1, off2, lim2, spl1, spl2);
            compare(off1, spl1, off2, spl2);
            off1 = spl1;  // tail-recurse on the second half
            off2 = spl2;
        }
    }
};

}  // namespace detail

/// Minimal edit script between two sequences, grouped into zero-context hunks.
/// The script length n_added + n_removed equals |old| + |new| - 2*LCS.
template <class T, class Eq = std::equal_to<T>>
DiffResult<T> diff(std::span<const T> old_units, std::span<const T> new_units, Eq eq = Eq{}) {
    std::vector<char> a_removed(old_units.size(), 0);
    std::vector<char> b_added(new_units.size(), 0);
    detail::MyersState<T, Eq> state(old_units, new_units, eq, a_removed, b_added);
    state.compare(0, static_cast<long>(old_units.size()), 0,
                  static_cast<long>(new_units.size()));

    DiffResult<T> result;
    std::size_t i = 0, j = 0;
    while (i < old_units.size() || j < new_units.size()) {
        const bool del = i < old_units.size() && a_removed[i];
        const bool ins = j < new_units.size() && b_added[j];
        if (!del && !ins) {
            ++i;
            ++j;
            continue;
        }
        Hunk<T> hunk;
        hunk.old_start = i;
        hunk.new_start = j;
        while ((i < old_units.size() && a_removed[i]) ||
               (j < new_units.size() && b_added[j])) {
            while (i < old_units.size() && a_removed[i]) hunk.removed.push_back(old_units[i++]);
            while (j < new_units.size() && b_added[j]) hunk.added.push_back(new_units[j++]);
        }
        result.n_removed += hunk.removed.size();
        result.n_added += hunk.added.size();
        result.hunks.push_back(std::move(hunk));
    }
    return result;
}

template <class T, class Eq = std::equal_to<T>>
DiffResult<T> diff(const std::vector<T>& old_units, const std::vector<T>& new_units, Eq eq = Eq{}) {
    return diff<T, Eq>(std::span<const T>(old_units), std::span<const T>(new_units), eq);
}

/// Apply a diff produced against old_units. Throws PatchMismatchError (before
/// producing any output) when the hunks do not line up with the input.
template <class T, class Eq = std::equal_to<T>>
std::vector<T> apply_diff(std::span<const T> old_units, const DiffResult<T>& d, Eq eq = Eq{}) {
    // validate first: no partial output on failure
    std::size_t prev_end = 0;
    for (const Hunk<T>& h : d.hunks) {
        if (h.removed.empty() && h.added.empty())
            throw PatchMismatchError("empty hunk");
        if (h.old_start < prev_end)
            throw PatchMismatchError("hunks overlap or are out of order");
        if (h.old_start + h.removed.size() > old_units.size())
            throw PatchMismatchError("hunk exceeds input length");
        for (std::size_t k = 0; k < h.removed.size(); ++k) {
            if (!eq(old_units[h.old_start + k], h.removed[k]))
                throw PatchMismatchError("removed units do not match input");
        }
        prev_end = h.old_start + h.removed.size();
    }
    std::vector<T> out;
    std::size_t i = 0;
    for (const Hunk<T>& h : d.hunks) {
        while (i < h.old_start) out.push_back(old_units[i++]);
        i += h.removed.size();
        for (const T& u : h.added) out.push_back(u);
    }
    while (i < old_units.size()) out.push_back(old_units[i++]);
    return out;
}

template <class T, class Eq = std::equal_to<T>>
std::vector<T> apply_diff(const std::vector<T>& old_units, const DiffResult<T>& d, Eq eq = Eq{}) {
    return apply_diff<T, Eq>(std::span<const T>(old_units), d, eq);
}

}  // namespace tokmine
