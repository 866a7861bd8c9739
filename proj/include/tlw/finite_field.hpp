#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace tlw {

/// The finite field F_{p^k}, realized as F_p[x]/(f) for the smallest monic
/// primitive polynomial f of degree k (coefficient vectors compared
/// lexicographically from the constant term upward, after the leading 1).
///
/// Elements are encoded as integers whose base-p digits are the coefficients
/// in the basis 1, x, ..., x^{k-1}; the encoding 0 is the zero element and x
/// itself is the fixed generator gamma of the multiplicative group.
/// Instances are immutable after construction and safe to share.
class FiniteField {
public:
    using Elem = std::uint32_t;

    FiniteField(std::uint32_t p, std::uint32_t k);

    /// Process-wide shared instance, built once per (p, k). When a cache
    /// directory is configured (see set_cache_dir) tables are loaded from or
    /// written to it.
    static std::shared_ptr<const FiniteField> get(std::uint32_t p, std::uint32_t k);
    static void set_cache_dir(std::filesystem::path dir);

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return k_; }
    std::uint64_t size() const { return size_; }
    std::uint64_t unit_order() const { return size_ - 1; }
    std::span<const std::uint32_t> polynomial() const { return poly_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem gamma() const { return exp_[1]; }
    Elem from_int(std::int64_t c) const;

    Elem add(Elem a, Elem b) const {
        if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * size_ + b];
        return add_slow(a, b);
    }
    Elem neg(Elem a) const;
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        std::uint64_t s = log_[a] + log_[b];
        if (s >= size_ - 1) s -= size_ - 1;
        return exp_[s];
    }
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::int64_t e) const;
    /// gamma^e for any integer e.
    Elem exp(std::int64_t e) const;
    /// Discrete log with respect to gamma; a must be nonzero.
    std::uint64_t log(Elem a) const;
    /// a^(p^j).
    Elem frobenius(Elem a, std::int64_t j) const;

    /// True iff a lies in the subfield with p^d elements (d | k).
    bool in_subfield(Elem a, std::uint32_t d) const;
    /// Generator of the unit group of the subfield with p^d elements.
    Elem subfield_generator(std::uint32_t d) const;
    /// Absolute trace from F_{p^d} to F_p of a subfield element, as 0..p-1.
    std::uint32_t trace_to_prime(Elem a, std::uint32_t d) const;
    /// Coordinate of a prime-field element (0..p-1); throws otherwise.
    std::uint32_t prime_value(Elem a) const;

    /// Binary cache I/O. The header records p, the residue cardinality q and
    /// the ambient degree n_amb with q^n_amb = p^k.
    void save(const std::filesystem::path& path, std::uint64_t q, std::uint64_t n_amb) const;
    static FiniteField load(const std::filesystem::path& path);
    static std::filesystem::path cache_file_name(std::uint32_t p, std::uint32_t k);

private:
    FiniteField() = default;
    Elem add_slow(Elem a, Elem b) const;
    void build_tables();

    std::uint32_t p_ = 0;
    std::uint32_t k_ = 0;
    std::uint64_t size_ = 0;
    std::vector<std::uint32_t> poly_;  // k+1 coefficients, constant term first
    std::vector<Elem> exp_;
    std::vector<std::uint64_t> log_;
    std::vector<Elem> add_table_;
    std::vector<Elem> neg_;
};

using FieldPtr = std::shared_ptr<const FiniteField>;

/// Primality test for small integers.
bool is_prime(std::uint64_t n);

}  // namespace tlw
