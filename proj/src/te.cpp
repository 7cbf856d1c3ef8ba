#include "netinfer/te.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "netinfer/errors.hpp"

namespace netinfer {

void TEConfig::validate() const {
    if (history_d < 1 || history_d > 16) throw ConfigError("history_d must be in [1,16]");
    if (source_history < 1 || source_history > 16)
        throw ConfigError("source_history must be in [1,16]");
}

namespace {

// Keys pack (target history, source history, next target bit), next bit in
// the lowest position, so ascending key order is the canonical term order.
inline std::uint64_t window_key(std::span<const std::uint8_t> src,
                                std::span<const std::uint8_t> tgt, long t, int d, int l) {
    std::uint64_t hist = 0;
    for (int a = 0; a < d; ++a) hist = (hist << 1) | (tgt[t - d + 1 + a] ? 1u : 0u);
    std::uint64_t y = 0;
    for (int a = 0; a < l; ++a) y = (y << 1) | (src[t - l + 1 + a] ? 1u : 0u);
    return ((hist << l) | y) << 1 | (tgt[t + 1] ? 1u : 0u);
}

inline double te_term(std::int64_t c1, std::int64_t c2, std::int64_t c3, std::int64_t c4,
                      std::int64_t total) {
    return (static_cast<double>(c1) / static_cast<double>(total)) *
           std::log2((static_cast<double>(c1) * static_cast<double>(c4)) /
                     (static_cast<double>(c2) * static_cast<double>(c3)));
}

// Shared counting body for the dense path; Counts must be zero-initialised
// and indexable up to 2^(d+l+1).
template <typename Counts>
double te_dense_body(std::span<const std::uint8_t> src, std::span<const std::uint8_t> tgt,
                     int d, int l, Counts& full, Counts& c_hy, Counts& c_hx, Counts& c_h) {
    const long len = static_cast<long>(tgt.size());
    const std::size_t slots = std::size_t{1} << (d + l + 1);
    const std::size_t y_slots = std::size_t{1} << l;

    const long t0 = std::max(d, l) - 1;
    std::int64_t total = 0;
    for (long t = t0; t + 1 < len; ++t) {
        ++full[window_key(src, tgt, t, d, l)];
        ++total;
    }
    for (std::size_t key = 0; key < slots; ++key) {
        std::int64_t c = full[key];
        if (c == 0) continue;
        std::uint64_t x = key & 1u;
        std::uint64_t y = (key >> 1) & (y_slots - 1);
        std::uint64_t h = key >> (1 + l);
        c_hy[h * y_slots + y] += c;
        c_hx[h * 2 + x] += c;
        c_h[h] += c;
    }

    double te = 0.0;
    for (std::size_t key = 0; key < slots; ++key) {
        std::int64_t c1 = full[key];
        if (c1 == 0) continue;  // 0 log 0 = 0
        std::uint64_t x = key & 1u;
        std::uint64_t y = (key >> 1) & (y_slots - 1);
        std::uint64_t h = key >> (1 + l);
        te += te_term(c1, c_hy[h * y_slots + y], c_hx[h * 2 + x], c_h[h], total);
    }
    return te;
}

double te_dense(std::span<const std::uint8_t> src, std::span<const std::uint8_t> tgt, int d,
                int l) {
    const int bits = d + l + 1;
    if (bits <= 10) {  // stack counters for the common small-context case
        std::array<std::int64_t, 1024> full{}, c_hy{}, c_hx{}, c_h{};
        return te_dense_body(src, tgt, d, l, full, c_hy, c_hx, c_h);
    }
    const std::size_t slots = std::size_t{1} << bits;
    std::vector<std::int64_t> full(slots, 0), c_hy(slots, 0), c_hx(slots, 0), c_h(slots, 0);
    return te_dense_body(src, tgt, d, l, full, c_hy, c_hx, c_h);
}

double te_sparse(std::span<const std::uint8_t> src, std::span<const std::uint8_t> tgt, int d,
                 int l) {
    const long len = static_cast<long>(tgt.size());
    const long t0 = std::max(d, l) - 1;
    std::vector<std::uint64_t> keys;
    keys.reserve(len);
    for (long t = t0; t + 1 < len; ++t) keys.push_back(window_key(src, tgt, t, d, l));
    const std::int64_t total = static_cast<std::int64_t>(keys.size());
    std::sort(keys.begin(), keys.end());

    std::unordered_map<std::uint64_t, std::int64_t> c_hy, c_hx, c_h;
    for (std::uint64_t key : keys) {
        std::uint64_t x = key & 1u;
        std::uint64_t y = (key >> 1) & ((std::uint64_t{1} << l) - 1);
        std::uint64_t h = key >> (1 + l);
        ++c_hy[(h << l) | y];
        ++c_hx[(h << 1) | x];
        ++c_h[h];
    }

    double te = 0.0;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        const std::int64_t c1 = static_cast<std::int64_t>(j - i);
        std::uint64_t key = keys[i];
        std::uint64_t x = key & 1u;
        std::uint64_t y = (key >> 1) & ((std::uint64_t{1} << l) - 1);
        std::uint64_t h = key >> (1 + l);
        te += te_term(c1, c_hy[(h << l) | y], c_hx[(h << 1) | x], c_h[h], total);
        i = j;
    }
    return te;
}

}  // namespace

namespace {

void check_pair(std::span<const std::uint8_t> source, std::span<const std::uint8_t> target,
                const TEConfig& cfg) {
    cfg.validate();
    if (source.size() != target.size())
        throw LengthMismatch("source length " + std::to_string(source.size()) +
                             " != target length " + std::to_string(target.size()));
    const long need = static_cast<long>(std::max(cfg.history_d, cfg.source_history)) + 1;
    if (static_cast<long>(target.size()) < need)
        throw SeriesTooShort("need length >= " + std::to_string(need));
}

}  // namespace

double transfer_entropy(std::span<const std::uint8_t> source,
                        std::span<const std::uint8_t> target, const TEConfig& cfg) {
    check_pair(source, target, cfg);
    if (cfg.history_d + cfg.source_history + 1 <= 22)
        return te_dense(source, target, cfg.history_d, cfg.source_history);
    return te_sparse(source, target, cfg.history_d, cfg.source_history);
}

double detail::transfer_entropy_sparse(std::span<const std::uint8_t> source,
                                       std::span<const std::uint8_t> target,
                                       const TEConfig& cfg) {
    check_pair(source, target, cfg);
    return te_sparse(source, target, cfg.history_d, cfg.source_history);
}

Mat te_matrix(const TimeSeries& ts, const TEConfig& cfg) {
    const int n = ts.n;
    Mat raw(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) raw(i, j) = transfer_entropy(ts.node_row(i), ts.node_row(j), cfg);
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) out(i, j) = 0.5 * (raw(i, j) + raw(j, i));
    return out;
}

}  // namespace netinfer
