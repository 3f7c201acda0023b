#pragma once

// The embedding universe B = disjoint union of B_p over the primes p | (p),
// with the Frobenius sigma acting as a cyclic shift inside every block.

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hmfac {

using json = nlohmann::ordered_json;

/// One embedding beta, addressed by its prime block and its position in the
/// block. sigma moves position k to k+1 (mod f_p).
struct Embedding {
    int prime = 0;
    int position = 0;

    auto operator<=>(const Embedding&) const = default;

    std::string to_string() const { return std::to_string(prime) + "/" + std::to_string(position); }
};

inline bool is_prime(int n)
{
    if (n < 2)
        return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// A set of prime ids (the T and S of the Atkin-Lehner and gluing machinery).
class PrimeSet {
public:
    constexpr PrimeSet() = default;
    constexpr explicit PrimeSet(std::uint64_t bits) : bits_(bits) {}

    static PrimeSet of(std::initializer_list<int> ids)
    {
        PrimeSet s;
        for (int i : ids)
            s.insert(i);
        return s;
    }
    static PrimeSet all(int count) { return PrimeSet(count >= 64 ? ~0ULL : ((1ULL << count) - 1)); }

    bool contains(int id) const { return (bits_ >> id) & 1U; }
    void insert(int id) { bits_ |= 1ULL << id; }
    void erase(int id) { bits_ &= ~(1ULL << id); }
    bool empty() const { return bits_ == 0; }
    int size() const { return std::popcount(bits_); }
    std::uint64_t bits() const { return bits_; }

    PrimeSet operator|(PrimeSet o) const { return PrimeSet(bits_ | o.bits_); }
    PrimeSet operator&(PrimeSet o) const { return PrimeSet(bits_ & o.bits_); }
    PrimeSet operator^(PrimeSet o) const { return PrimeSet(bits_ ^ o.bits_); }
    bool subset_of(PrimeSet o) const { return (bits_ & ~o.bits_) == 0; }
    bool operator==(const PrimeSet&) const = default;
    auto operator<=>(const PrimeSet&) const = default;

    std::vector<int> ids() const
    {
        std::vector<int> out;
        for (int i = 0; i < 64; ++i)
            if (contains(i))
                out.push_back(i);
        return out;
    }

private:
    std::uint64_t bits_ = 0;
};

/// The residue-degree data of p in the totally real field: an odd (or, for
/// negative controls, even) rational prime and the list of f_p.
///
/// Immutable; copies share the underlying tables. Embeddings carry a
/// canonical total order (prime id, then position) used for flat indices.
class PrimeProfile {
public:
    static constexpr int max_embeddings = 64;

    PrimeProfile(int p, std::vector<int> degrees)
    {
        if (!is_prime(p))
            throw std::invalid_argument("profile: p=" + std::to_string(p) + " is not a prime");
        if (degrees.empty())
            throw std::invalid_argument("profile: at least one prime above p is required (g >= 1)");
        auto data = std::make_shared<Data>();
        data->p = p;
        data->degrees = std::move(degrees);
        int offset = 0;
        for (std::size_t i = 0; i < data->degrees.size(); ++i) {
            const int f = data->degrees[i];
            if (f < 1)
                throw std::invalid_argument("profile: residue degrees must be >= 1");
            data->offsets.push_back(offset);
            for (int k = 0; k < f; ++k)
                data->embeddings.push_back({static_cast<int>(i), k});
            offset += f;
        }
        if (offset > max_embeddings)
            throw std::invalid_argument("profile: g=" + std::to_string(offset) + " exceeds 64 embeddings");
        data->g = offset;
        data_ = std::move(data);
    }

    /// Parses "p=3;f=2,1,1". Whitespace around tokens is ignored.
    static PrimeProfile parse(std::string_view text)
    {
        auto strip = [](std::string s) {
            s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
            return s;
        };
        const std::string s = strip(std::string(text));
        const auto semi = s.find(';');
        if (semi == std::string::npos || s.rfind("p=", 0) != 0 || s.compare(semi + 1, 2, "f=") != 0)
            throw std::invalid_argument("malformed profile '" + std::string(text) + "', expected \"p=3;f=2,1\"");
        auto to_int = [&](const std::string& tok) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (tok.empty() || used != tok.size())
                throw std::invalid_argument("malformed profile '" + std::string(text) + "'");
            return v;
        };
        const int p = to_int(s.substr(2, semi - 2));
        std::vector<int> degrees;
        std::stringstream rest(s.substr(semi + 3));
        std::string tok;
        while (std::getline(rest, tok, ','))
            degrees.push_back(to_int(tok));
        if (degrees.empty())
            throw std::invalid_argument("malformed profile '" + std::string(text) + "': no residue degrees");
        return PrimeProfile(p, std::move(degrees));
    }

    static PrimeProfile from_json(const json& j)
    {
        return PrimeProfile(j.at("p").get<int>(), j.at("f").get<std::vector<int>>());
    }

    int p() const { return data_->p; }
    int g() const { return data_->g; }
    int prime_count() const { return static_cast<int>(data_->degrees.size()); }
    int degree(int prime) const { return data_->degrees.at(check_prime(prime)); }
    int max_degree() const { return *std::max_element(data_->degrees.begin(), data_->degrees.end()); }
    const std::vector<int>& degrees() const { return data_->degrees; }
    int block_offset(int prime) const { return data_->offsets.at(check_prime(prime)); }

    /// The standing hypothesis p != 2.
    bool odd() const { return data_->p != 2; }

    int index(Embedding e) const
    {
        check_prime(e.prime);
        if (e.position < 0 || e.position >= degree(e.prime))
            throw std::out_of_range("embedding " + e.to_string() + " outside its block");
        return data_->offsets[e.prime] + e.position;
    }
    Embedding embedding(int idx) const { return data_->embeddings.at(idx); }
    int prime_of(int idx) const { return data_->embeddings.at(idx).prime; }

    /// sigma^k applied to the embedding with flat index idx (k may be negative).
    int sigma(int idx, int k = 1) const
    {
        const Embedding e = embedding(idx);
        const int f = data_->degrees[e.prime];
        const int pos = ((e.position + k) % f + f) % f;
        return data_->offsets[e.prime] + pos;
    }
    int sigma_inv(int idx) const { return sigma(idx, -1); }

    std::string index_label(int idx) const { return embedding(idx).to_string(); }
    int parse_index_label(std::string_view label) const
    {
        const auto slash = label.find('/');
        if (slash == std::string_view::npos)
            throw std::invalid_argument("malformed embedding label '" + std::string(label) + "'");
        try {
            return index({std::stoi(std::string(label.substr(0, slash))), std::stoi(std::string(label.substr(slash + 1)))});
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("embedding label '" + std::string(label) + "' outside profile");
        }
    }

    std::string to_string() const
    {
        std::string s = "p=" + std::to_string(p()) + ";f=";
        for (int i = 0; i < prime_count(); ++i)
            s += (i ? "," : "") + std::to_string(data_->degrees[i]);
        return s;
    }
    json to_json() const { return json{{"p", p()}, {"f", data_->degrees}}; }

    bool operator==(const PrimeProfile& o) const
    {
        return data_ == o.data_ || (data_->p == o.data_->p && data_->degrees == o.data_->degrees);
    }

private:
    struct Data {
        int p = 0;
        int g = 0;
        std::vector<int> degrees;
        std::vector<int> offsets;
        std::vector<Embedding> embeddings;
    };

    int check_prime(int prime) const
    {
        if (prime < 0 || prime >= prime_count())
            throw std::invalid_argument("unknown prime id " + std::to_string(prime));
        return prime;
    }

    std::shared_ptr<const Data> data_;
};

/// A subset S of B for a fixed profile.
class EmbeddingSubset {
public:
    explicit EmbeddingSubset(PrimeProfile profile, std::uint64_t bits = 0) : profile_(std::move(profile)), bits_(bits)
    {
        if ((bits_ & ~universe_bits()) != 0)
            throw std::invalid_argument("subset contains indices outside B");
    }

    static EmbeddingSubset empty(const PrimeProfile& profile) { return EmbeddingSubset(profile, 0); }
    static EmbeddingSubset full(const PrimeProfile& profile)
    {
        return EmbeddingSubset(profile, mask_of_size(profile.g()));
    }
    static EmbeddingSubset of(const PrimeProfile& profile, std::initializer_list<int> indices)
    {
        EmbeddingSubset s(profile);
        for (int i : indices)
            s.insert(i);
        return s;
    }

    const PrimeProfile& profile() const { return profile_; }
    std::uint64_t bits() const { return bits_; }

    bool contains(int idx) const { return (bits_ >> idx) & 1U; }
    void insert(int idx)
    {
        if (idx < 0 || idx >= profile_.g())
            throw std::out_of_range("embedding index out of range");
        bits_ |= 1ULL << idx;
    }
    int size() const { return std::popcount(bits_); }
    bool empty() const { return bits_ == 0; }

    EmbeddingSubset complement() const { return EmbeddingSubset(profile_, ~bits_ & universe_bits()); }
    EmbeddingSubset operator|(const EmbeddingSubset& o) const { return EmbeddingSubset(profile_, bits_ | same(o).bits_); }
    EmbeddingSubset operator&(const EmbeddingSubset& o) const { return EmbeddingSubset(profile_, bits_ & same(o).bits_); }
    EmbeddingSubset minus(const EmbeddingSubset& o) const { return EmbeddingSubset(profile_, bits_ & ~same(o).bits_); }
    bool subset_of(const EmbeddingSubset& o) const { return (bits_ & ~same(o).bits_) == 0; }

    bool operator==(const EmbeddingSubset& o) const { return bits_ == o.bits_ && profile_ == o.profile_; }

    /// Restriction to the block B_p of one prime.
    EmbeddingSubset restrict_to(int prime) const;

    std::vector<int> indices() const
    {
        std::vector<int> out;
        for (int i = 0; i < profile_.g(); ++i)
            if (contains(i))
                out.push_back(i);
        return out;
    }

    json to_json() const
    {
        json arr = json::array();
        for (int i : indices())
            arr.push_back(profile_.index_label(i));
        return arr;
    }

private:
    EmbeddingSubset(const PrimeProfile& profile, std::uint64_t bits, int) : profile_(profile), bits_(bits) {}
    friend EmbeddingSubset prime_block(const PrimeProfile&, int);

    static std::uint64_t mask_of_size(int n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }
    std::uint64_t universe_bits() const { return mask_of_size(profile_.g()); }
    const EmbeddingSubset& same(const EmbeddingSubset& o) const
    {
        if (!(profile_ == o.profile_))
            throw std::invalid_argument("subsets belong to different profiles");
        return o;
    }

    PrimeProfile profile_;
    std::uint64_t bits_ = 0;
};

/// B_p as a subset.
inline EmbeddingSubset prime_block(const PrimeProfile& profile, int prime)
{
    const int f = profile.degree(prime);
    const int off = profile.block_offset(prime);
    const std::uint64_t block = (f >= 64 ? ~0ULL : ((1ULL << f) - 1)) << off;
    return EmbeddingSubset(profile, block, 0);
}

inline EmbeddingSubset EmbeddingSubset::restrict_to(int prime) const
{
    return *this & prime_block(profile_, prime);
}

/// Union of the blocks B_p for p in T.
inline EmbeddingSubset blocks_of(const PrimeProfile& profile, PrimeSet primes)
{
    EmbeddingSubset s = EmbeddingSubset::empty(profile);
    for (int id : primes.ids())
        s = s | prime_block(profile, id);
    return s;
}

/// l(S) = { sigma^{-1} beta : beta in S }.
inline EmbeddingSubset shift_left(const EmbeddingSubset& s)
{
    EmbeddingSubset out = EmbeddingSubset::empty(s.profile());
    for (int i : s.indices())
        out.insert(s.profile().sigma_inv(i));
    return out;
}

/// r(S) = { sigma beta : beta in S }, the inverse of shift_left.
inline EmbeddingSubset shift_right(const EmbeddingSubset& s)
{
    EmbeddingSubset out = EmbeddingSubset::empty(s.profile());
    for (int i : s.indices())
        out.insert(s.profile().sigma(i));
    return out;
}

} // namespace hmfac
