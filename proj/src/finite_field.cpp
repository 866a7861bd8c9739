#include "tlw/finite_field.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <string>

#include "tlw/errors.hpp"

namespace tlw {

namespace {

constexpr std::array<char, 4> kMagic = {'T', 'L', 'T', 'W'};
constexpr std::uint16_t kCacheVersion = 1;
constexpr std::uint64_t kAddTableLimit = 2048;

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Multiplies the element with digit vector `a` by x modulo the monic
// polynomial with lower coefficients `c`.
void times_x(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& c, std::uint32_t p) {
    const std::size_t k = a.size();
    const std::uint32_t top = a[k - 1];
    for (std::size_t i = k - 1; i > 0; --i) a[i] = a[i - 1];
    a[0] = 0;
    if (top != 0) {
        for (std::size_t i = 0; i < k; ++i) a[i] = (a[i] + (p - c[i]) * top) % p;
    }
}

std::uint64_t encode(const std::vector<std::uint32_t>& digits, std::uint32_t p) {
    std::uint64_t r = 0;
    for (std::size_t i = digits.size(); i-- > 0;) r = r * p + digits[i];
    return r;
}

bool is_primitive(const std::vector<std::uint32_t>& c, std::uint32_t p, std::uint64_t q) {
    const std::size_t k = c.size();
    std::vector<std::uint32_t> a(k, 0);
    a[0] = 1;
    for (std::uint64_t i = 1; i < q - 1; ++i) {
        times_x(a, c, p);
        if (encode(a, p) == 1) return false;
    }
    times_x(a, c, p);
    return encode(a, p) == 1;
}

void write_u64(std::ofstream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), 8);
    if (!in) throw Error("log-table cache: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

struct Registry {
    std::mutex mu;
    std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> fields;
    std::filesystem::path cache_dir;
};

Registry& registry() {
    static Registry r;
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FiniteField::FiniteField(std::uint32_t p, std::uint32_t k) : p_(p), k_(k) {
    if (!is_prime(p)) throw DomainError("FiniteField: characteristic " + std::to_string(p) + " is not prime");
    if (k == 0) throw DomainError("FiniteField: degree must be positive");
    size_ = ipow(p, k);
    if (size_ > (1u << 24)) throw DomainError("FiniteField: field too large for lookup tables");

    // Search in lexicographic order of (c_0, c_1, ..., c_{k-1}).
    std::vector<std::uint32_t> c(k, 0);
    bool found = false;
    for (std::uint64_t idx = 0; idx < size_ && !found; ++idx) {
        std::uint64_t t = idx;
        for (std::size_t i = k; i-- > 0;) {
            c[i] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        if (c[0] == 0) continue;
        if (is_primitive(c, p, size_)) found = true;
    }
    if (!found) throw ConsistencyError("FiniteField: no primitive polynomial found");
    poly_ = c;
    poly_.push_back(1);
    build_tables();
}

void FiniteField::build_tables() {
    exp_.assign(size_ - 1, 0);
    log_.assign(size_, 0);
    std::vector<std::uint32_t> c(poly_.begin(), poly_.end() - 1);
    std::vector<std::uint32_t> a(k_, 0);
    a[0] = 1;
    for (std::uint64_t i = 0; i < size_ - 1; ++i) {
        const auto e = static_cast<Elem>(encode(a, p_));
        exp_[i] = e;
        log_[e] = i;
        times_x(a, c, p_);
    }
    neg_.assign(size_, 0);
    for (std::uint64_t x = 0; x < size_; ++x) {
        std::uint64_t t = x, r = 0, pw = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            const std::uint64_t d = t % p_;
            t /= p_;
            r += ((p_ - d) % p_) * pw;
            pw *= p_;
        }
        neg_[x] = static_cast<Elem>(r);
    }
    if (size_ <= kAddTableLimit) {
        add_table_.assign(size_ * size_, 0);
        for (std::uint64_t a1 = 0; a1 < size_; ++a1)
            for (std::uint64_t b1 = 0; b1 < size_; ++b1)
                add_table_[a1 * size_ + b1] = add_slow(static_cast<Elem>(a1), static_cast<Elem>(b1));
    }
}

FiniteField::Elem FiniteField::add_slow(Elem a, Elem b) const {
    std::uint64_t r = 0, pw = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
        const std::uint64_t d = (a % p_ + b % p_) % p_;
        a /= p_;
        b /= p_;
        r += d * pw;
        pw *= p_;
    }
    return static_cast<Elem>(r);
}

FiniteField::Elem FiniteField::from_int(std::int64_t c) const {
    std::int64_t r = c % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r);
}

FiniteField::Elem FiniteField::neg(Elem a) const { return neg_[a]; }

FiniteField::Elem FiniteField::inv(Elem a) const {
    if (a == 0) throw DomainError("FiniteField: inverse of zero");
    const std::uint64_t l = log_[a];
    return exp_[l == 0 ? 0 : size_ - 1 - l];
}

FiniteField::Elem FiniteField::exp(std::int64_t e) const {
    const auto n = static_cast<std::int64_t>(size_ - 1);
    std::int64_t r = e % n;
    if (r < 0) r += n;
    return exp_[static_cast<std::size_t>(r)];
}

FiniteField::Elem FiniteField::pow(Elem a, std::int64_t e) const {
    if (a == 0) {
        if (e < 0) throw DomainError("FiniteField: negative power of zero");
        return e == 0 ? 1 : 0;
    }
    const auto n = static_cast<std::int64_t>(size_ - 1);
    std::int64_t ee = e % n;
    if (ee < 0) ee += n;
    return exp(static_cast<std::int64_t>(static_cast<__int128>(log_[a]) * ee % n));
}

std::uint64_t FiniteField::log(Elem a) const {
    if (a == 0) throw DomainError("FiniteField: log of zero");
    return log_[a];
}

FiniteField::Elem FiniteField::frobenius(Elem a, std::int64_t j) const {
    if (a == 0) return 0;
    std::int64_t jj = j % static_cast<std::int64_t>(k_);
    if (jj < 0) jj += k_;
    const std::uint64_t n = size_ - 1;
    std::uint64_t l = log_[a];
    for (std::int64_t i = 0; i < jj; ++i) l = l * p_ % n;
    return exp_[l];
}

bool FiniteField::in_subfield(Elem a, std::uint32_t d) const {
    if (d == 0 || k_ % d != 0) throw DomainError("FiniteField: subfield degree must divide the field degree");
    if (a == 0) return true;
    return log_[a] % ((size_ - 1) / (ipow(p_, d) - 1)) == 0;
}

FiniteField::Elem FiniteField::subfield_generator(std::uint32_t d) const {
    if (d == 0 || k_ % d != 0) throw DomainError("FiniteField: subfield degree must divide the field degree");
    return exp_[(size_ - 1) / (ipow(p_, d) - 1)];
}

std::uint32_t FiniteField::prime_value(Elem a) const {
    if (a >= p_) throw DomainError("FiniteField: element is not in the prime field");
    return a;
}

std::uint32_t FiniteField::trace_to_prime(Elem a, std::uint32_t d) const {
    if (!in_subfield(a, d)) throw DomainError("FiniteField: trace argument outside the subfield");
    Elem s = 0, x = a;
    for (std::uint32_t i = 0; i < d; ++i) {
        s = add(s, x);
        x = frobenius(x, 1);
    }
    return prime_value(s);
}

void FiniteField::save(const std::filesystem::path& path, std::uint64_t q, std::uint64_t n_amb) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("log-table cache: cannot write " + path.string());
    out.write(kMagic.data(), 4);
    const std::array<unsigned char, 2> v = {static_cast<unsigned char>(kCacheVersion & 0xff),
                                            static_cast<unsigned char>(kCacheVersion >> 8)};
    out.write(reinterpret_cast<const char*>(v.data()), 2);
    write_u64(out, p_);
    write_u64(out, q);
    write_u64(out, n_amb);
    write_u64(out, poly_.size());
    for (auto c : poly_) write_u64(out, c);
    write_u64(out, log_.size());
    for (std::uint64_t x = 0; x < size_; ++x) write_u64(out, x == 0 ? ~std::uint64_t{0} : log_[x]);
    if (!out) throw Error("log-table cache: write failed for " + path.string());
}

FiniteField FiniteField::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("log-table cache: cannot open " + path.string());
    std::array<char, 4> magic{};
    in.read(magic.data(), 4);
    if (!in || magic != kMagic) throw Error("log-table cache: bad magic in " + path.string());
    std::array<unsigned char, 2> v{};
    in.read(reinterpret_cast<char*>(v.data()), 2);
    const std::uint16_t version = static_cast<std::uint16_t>(v[0] | (v[1] << 8));
    if (version != kCacheVersion)
        throw Error("log-table cache: version mismatch (" + std::to_string(version) + ") in " + path.string());
    FiniteField f;
    f.p_ = static_cast<std::uint32_t>(read_u64(in));
    const std::uint64_t q = read_u64(in);
    const std::uint64_t n_amb = read_u64(in);
    const std::uint64_t plen = read_u64(in);
    if (!is_prime(f.p_) || plen < 2 || plen > 64) throw Error("log-table cache: corrupt header");
    f.k_ = static_cast<std::uint32_t>(plen - 1);
    f.size_ = ipow(f.p_, f.k_);
    std::uint64_t qn = 1;
    for (std::uint64_t i = 0; i < n_amb; ++i) qn *= q;
    if (qn != f.size_) throw Error("log-table cache: inconsistent (p, q, N_amb) header");
    for (std::uint64_t i = 0; i < plen; ++i) f.poly_.push_back(static_cast<std::uint32_t>(read_u64(in)));
    const std::uint64_t tlen = read_u64(in);
    if (tlen != f.size_) throw Error("log-table cache: table length mismatch");
    std::vector<std::uint64_t> stored(tlen);
    for (auto& x : stored) x = read_u64(in);
    f.build_tables();
    for (std::uint64_t x = 1; x < f.size_; ++x)
        if (stored[x] != f.log_[x]) throw Error("log-table cache: table does not match its polynomial");
    return f;
}

std::filesystem::path FiniteField::cache_file_name(std::uint32_t p, std::uint32_t k) {
    return "tltw_p" + std::to_string(p) + "_k" + std::to_string(k) + ".bin";
}

void FiniteField::set_cache_dir(std::filesystem::path dir) {
    auto& r = registry();
    std::lock_guard lock(r.mu);
    r.cache_dir = std::move(dir);
}

FieldPtr FiniteField::get(std::uint32_t p, std::uint32_t k) {
    auto& r = registry();
    std::lock_guard lock(r.mu);
    auto it = r.fields.find({p, k});
    if (it != r.fields.end()) return it->second;
    FieldPtr f;
    if (!r.cache_dir.empty()) {
        const auto path = r.cache_dir / cache_file_name(p, k);
        if (std::filesystem::exists(path)) {
            f = std::make_shared<const FiniteField>(load(path));
        } else {
            f = std::make_shared<const FiniteField>(p, k);
            std::filesystem::create_directories(r.cache_dir);
            f->save(path, p, k);
        }
    } else {
        f = std::make_shared<const FiniteField>(p, k);
    }
    r.fields.emplace(std::make_pair(p, k), f);
    return f;
}

}  // namespace tlw
