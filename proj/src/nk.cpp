#include "dynrbn/nk.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dynrbn {

NkLandscape::NkLandscape(std::size_t n, std::size_t k)
    : n_(n), k_(k), links_(n * k, 0), tables_(n * (std::size_t{1} << (k + 1)), 0.0)
{
    if (n == 0)
        throw std::invalid_argument("NK landscape needs N >= 1");
    if (k > n - 1)
        throw std::invalid_argument("NK landscape needs 0 <= K <= N-1 (N=" + std::to_string(n) +
                                    ", K=" + std::to_string(k) + ")");
    if (k + 1 >= 8 * sizeof(std::size_t))
        throw std::invalid_argument("K too large");
}

void NkLandscape::validate() const
{
    for (std::size_t i = 0; i < n_; ++i)
    {
        auto l = links(i);
        for (std::size_t a = 0; a < k_; ++a)
        {
            if (l[a] >= n_ || l[a] == i)
                throw std::invalid_argument("trait " + std::to_string(i) + " has an invalid link");
            for (std::size_t b = a + 1; b < k_; ++b)
                if (l[a] == l[b])
                    throw std::invalid_argument("trait " + std::to_string(i) + " has duplicate links");
        }
        for (double v : table(i))
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("trait " + std::to_string(i) + " has a table value outside [0,1]");
    }
}

NkLandscape generate_landscape(std::size_t n, std::size_t k, std::uint64_t seed)
{
    NkLandscape land(n, k);
    Rng rng(seed);
    std::vector<std::uint32_t> others(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i)
    {
        // Partial Fisher-Yates over the other N-1 traits.
        std::uint32_t v = 0;
        for (auto &o : others)
        {
            if (v == i)
                ++v;
            o = v++;
        }
        auto l = land.links(i);
        for (std::size_t a = 0; a < k; ++a)
        {
            const std::size_t j = a + rng.below(others.size() - a);
            std::swap(others[a], others[j]);
            l[a] = others[a];
        }
        for (double &x : land.table(i))
            x = rng.uniform();
    }
    return land;
}

double fitness_unchecked(const NkLandscape &land, std::span<const std::uint8_t> traits) noexcept
{
    double sum = 0.0;
    for (std::size_t i = 0; i < land.n(); ++i)
    {
        std::size_t idx = traits[i];
        for (std::uint32_t j : land.links(i))
            idx = (idx << 1) | traits[j];
        sum += land.table(i)[idx];
    }
    return sum / static_cast<double>(land.n());
}

double fitness(const NkLandscape &land, std::span<const std::uint8_t> traits)
{
    if (traits.size() != land.n())
        throw std::invalid_argument("trait vector length " + std::to_string(traits.size()) +
                                    " does not match landscape N=" + std::to_string(land.n()));
    return fitness_unchecked(land, traits);
}

TraitVector decode_traits(std::uint32_t code, std::size_t n)
{
    TraitVector t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = (code >> i) & 1U;
    return t;
}

std::uint32_t encode_traits(std::span<const std::uint8_t> traits)
{
    std::uint32_t code = 0;
    for (std::size_t i = 0; i < traits.size(); ++i)
        code |= static_cast<std::uint32_t>(traits[i] & 1U) << i;
    return code;
}

LandscapeAnalysis exhaustive_analysis(const NkLandscape &land)
{
    const std::size_t n = land.n();
    if (n > max_exhaustive_traits)
        throw std::invalid_argument("exhaustive analysis limited to N <= " + std::to_string(max_exhaustive_traits));
    const std::uint32_t count = std::uint32_t{1} << n;

    LandscapeAnalysis out;
    out.fitness_by_code.resize(count);
    TraitVector t(n);
    for (std::uint32_t code = 0; code < count; ++code)
    {
        for (std::size_t i = 0; i < n; ++i)
            t[i] = (code >> i) & 1U;
        out.fitness_by_code[code] = fitness_unchecked(land, t);
    }
    out.global_optimum_at = static_cast<std::uint32_t>(
        std::max_element(out.fitness_by_code.begin(), out.fitness_by_code.end()) - out.fitness_by_code.begin());
    out.global_optimum = out.fitness_by_code[out.global_optimum_at];

    for (std::uint32_t code = 0; code < count; ++code)
    {
        const double f = out.fitness_by_code[code];
        bool local = true;
        for (std::size_t i = 0; i < n && local; ++i)
            local = out.fitness_by_code[code ^ (std::uint32_t{1} << i)] <= f;
        if (local)
            out.local_optima.push_back(code);
    }
    return out;
}

namespace {

std::string hex_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
    return "0x" + std::string(buf, res.ptr);
}

double parse_hex_double(const std::string &tok)
{
    std::string_view s = tok;
    if (s.starts_with("0x") || s.starts_with("0X"))
        s.remove_prefix(2);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("landscape: malformed table value '" + tok + "'");
    return v;
}

void expect(std::istream &in, const char *word)
{
    std::string tok;
    if (!(in >> tok) || tok != word)
        throw std::runtime_error(std::string("landscape: expected '") + word + "', found '" + tok + "'");
}

} // namespace

void write_landscape(std::ostream &out, const NkLandscape &land)
{
    out << "nk-landscape 1\n";
    out << "n " << land.n() << " k " << land.k() << '\n';
    for (std::size_t i = 0; i < land.n(); ++i)
    {
        out << "trait " << i << " links";
        for (auto l : land.links(i))
            out << ' ' << l;
        out << " table";
        for (double v : land.table(i))
            out << ' ' << hex_double(v);
        out << '\n';
    }
}

NkLandscape read_landscape(std::istream &in)
{
    expect(in, "nk-landscape");
    int version = 0;
    if (!(in >> version) || version != 1)
        throw std::runtime_error("landscape: unsupported format version");
    std::size_t n = 0, k = 0;
    expect(in, "n");
    in >> n;
    expect(in, "k");
    in >> k;
    if (!in)
        throw std::runtime_error("landscape: malformed header");
    NkLandscape land(n, k);
    for (std::size_t i = 0; i < n; ++i)
    {
        expect(in, "trait");
        std::size_t idx = 0;
        if (!(in >> idx) || idx != i)
            throw std::runtime_error("landscape: traits out of order");
        expect(in, "links");
        for (auto &l : land.links(i))
            if (!(in >> l))
                throw std::runtime_error("landscape: malformed links for trait " + std::to_string(i));
        expect(in, "table");
        std::string tok;
        for (double &v : land.table(i))
        {
            if (!(in >> tok))
                throw std::runtime_error("landscape: truncated table for trait " + std::to_string(i));
            v = parse_hex_double(tok);
        }
    }
    land.validate();
    return land;
}

std::string landscape_to_string(const NkLandscape &land)
{
    std::ostringstream os;
    write_landscape(os, land);
    return os.str();
}

std::uint64_t landscape_checksum(const NkLandscape &land)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : landscape_to_string(land))
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace dynrbn
