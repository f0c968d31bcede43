#pragma once

// Block-structured rapidity vectors gamma = (gamma^(21), gamma^(31),
// gamma^(32), ..., gamma^(k k-1)) and the integer multi-indices giving the
// per-block sizes. Blocks are stored contiguously in the fixed lexicographic
// order (b, a): b = 2..k, a = 1..b-1.

#include <complex>
#include <numeric>
#include <span>
#include <vector>

#include "sgff/errors.hpp"
#include "sgff/special_functions.hpp"

namespace sgff {

constexpr int block_count(int k) { return k * (k - 1) / 2; }

// Index of block (b, a), k >= b > a >= 1, in canonical order.
constexpr int block_index(int b, int a) { return (b - 1) * (b - 2) / 2 + (a - 1); }

struct BlockId {
    int b, a;
};

inline BlockId block_id(int index) {
    int b = 2;
    while (block_index(b + 1, 1) <= index) ++b;
    return {b, index - block_index(b, 1) + 1};
}

// Per-block particle counts n_{ba}.
class MultiIndex {
  public:
    explicit MultiIndex(int k) : k_(k), n_(block_count(k), 0) {
        if (k < 1) throw config_error("MultiIndex: k must be >= 1");
    }

    int k() const { return k_; }
    int& at(int b, int a) { return n_[block_index(b, a)]; }
    int at(int b, int a) const { return n_[block_index(b, a)]; }
    std::span<const int> raw() const { return n_; }
    int& raw(int i) { return n_[i]; }

    int total() const { return std::accumulate(n_.begin(), n_.end(), 0); }

    // n! = prod n_{ba}!
    double factorial() const {
        double f = 1.0;
        for (int v : n_)
            for (int j = 2; j <= v; ++j) f *= j;
        return f;
    }

    // Cut sums r_p = sum over blocks with b > p >= a, p = 1..k-1.
    std::vector<int> cut_sums() const {
        std::vector<int> r(k_ - 1, 0);
        for (int b = 2; b <= k_; ++b)
            for (int a = 1; a < b; ++a)
                for (int p = a; p < b; ++p) r[p - 1] += at(b, a);
        return r;
    }

    bool operator==(const MultiIndex&) const = default;

  private:
    int k_;
    std::vector<int> n_;
};

// Complex rapidities grouped into the canonical blocks.
class RapidityLayout {
  public:
    explicit RapidityLayout(const MultiIndex& sizes)
        : k_(sizes.k()), sizes_(sizes), offsets_(block_count(sizes.k()) + 1, 0) {
        for (int i = 0; i < block_count(k_); ++i) offsets_[i + 1] = offsets_[i] + sizes_.raw()[i];
        data_.assign(offsets_.back(), cplx(0.0, 0.0));
    }

    int k() const { return k_; }
    int total() const { return static_cast<int>(data_.size()); }
    const MultiIndex& sizes() const { return sizes_; }
    int size(int b, int a) const { return sizes_.at(b, a); }

    std::span<cplx> block(int b, int a) {
        const int i = block_index(b, a);
        return {data_.data() + offsets_[i], static_cast<size_t>(sizes_.raw()[i])};
    }
    std::span<const cplx> block(int b, int a) const {
        const int i = block_index(b, a);
        return {data_.data() + offsets_[i], static_cast<size_t>(sizes_.raw()[i])};
    }

    std::span<cplx> flat() { return data_; }
    std::span<const cplx> flat() const { return data_; }

    void fill_flat(std::span<const double> values) {
        if (values.size() != data_.size())
            throw config_error("RapidityLayout: flat size mismatch");
        for (size_t i = 0; i < values.size(); ++i) data_[i] = values[i];
    }

    RapidityLayout shifted(cplx delta) const {
        RapidityLayout out = *this;
        for (cplx& v : out.data_) v += delta;
        return out;
    }

    // Per-flat-coordinate imaginary shifts (delta_S / delta_R deformations).
    RapidityLayout shifted_by(std::span<const double> imag_shift) const {
        if (imag_shift.size() != data_.size())
            throw config_error("RapidityLayout: shift size mismatch");
        RapidityLayout out = *this;
        for (size_t i = 0; i < imag_shift.size(); ++i) out.data_[i] += cplx(0.0, imag_shift[i]);
        return out;
    }

    // Block relabelling sigma_t: (p,t) <-> (p,t+1) for p >= t+2 and
    // (t,p) <-> (t+1,p) for p <= t-1. Sizes move with their contents.
    RapidityLayout transposed_pair(int t) const {
        if (t < 1 || t + 1 > k_) throw config_error("transposed_pair: t out of range");
        MultiIndex m = sizes_;
        for (int p = t + 2; p <= k_; ++p) std::swap(m.at(p, t), m.at(p, t + 1));
        for (int p = 1; p <= t - 1; ++p) std::swap(m.at(t, p), m.at(t + 1, p));
        RapidityLayout out(m);
        auto copy = [&](int bs, int as, int bd, int ad) {
            auto src = block(bs, as);
            auto dst = out.block(bd, ad);
            std::copy(src.begin(), src.end(), dst.begin());
        };
        for (int b = 2; b <= k_; ++b)
            for (int a = 1; a < b; ++a) {
                int bd = b, ad = a;
                if (b >= t + 2 && (a == t || a == t + 1)) ad = (a == t) ? t + 1 : t;
                if (a <= t - 1 && (b == t || b == t + 1)) bd = (b == t) ? t + 1 : t;
                copy(b, a, bd, ad);
            }
        return out;
    }

  private:
    int k_;
    MultiIndex sizes_;
    std::vector<int> offsets_;
    std::vector<cplx> data_;
};

}  // namespace sgff
