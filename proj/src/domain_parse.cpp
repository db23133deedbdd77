#include <array>
#include <charconv>
#include <map>
#include <string>
#include <vector>

#include "exittime/geometry.hpp"

namespace exittime {
namespace {

constexpr std::array<std::string_view, 11> kind_names{
    "ellipse",
    "parabola",
    "annulus",
    "sector",
    "hyperbola-convex",
    "hyperbola-concave",
    "hdisk",
    "horodisk",
    "geodesic-nbhd",
    "geodesic-halfnbhd",
    "ideal-nbhd",
};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view key, std::string_view text)
{
    double value = 0;
    auto const* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end)
    {
        throw ParseError(std::string(key),
                         "invalid number '" + std::string(text) + "' for key '"
                             + std::string(key) + "'");
    }
    return value;
}

class KeyValues
{
  public:
    KeyValues(std::string_view kind, std::string_view body) : kind_(kind)
    {
        while (!body.empty())
        {
            auto comma = body.find(',');
            std::string_view item = trim(body.substr(0, comma));
            body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
            if (item.empty())
                throw ParseError(std::string(kind), "empty parameter in '" + std::string(kind) + "' spec");
            auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw ParseError(std::string(item), "expected key=value, got '" + std::string(item) + "'");
            std::string key(trim(item.substr(0, eq)));
            if (values_.count(key))
                throw ParseError(key, "duplicate key '" + key + "'");
            values_[key] = parse_number(key, trim(item.substr(eq + 1)));
        }
    }

    double required(std::string const& key)
    {
        auto it = values_.find(key);
        if (it == values_.end())
        {
            throw ParseError(key, "missing key '" + key + "' for domain '"
                                      + std::string(kind_) + "'");
        }
        double v = it->second;
        values_.erase(it);
        return v;
    }

    double optional(std::string const& key, double fallback)
    {
        auto it = values_.find(key);
        if (it == values_.end())
            return fallback;
        double v = it->second;
        values_.erase(it);
        return v;
    }

    void finish() const
    {
        if (!values_.empty())
        {
            auto const& key = values_.begin()->first;
            throw ParseError(key, "unknown key '" + key + "' for domain '"
                                      + std::string(kind_) + "'");
        }
    }

  private:
    std::string_view kind_;
    std::map<std::string, double> values_;
};

// Parameter range errors are reported as parse errors naming the key.
template<class T>
DomainSpec make(T shape)
{
    try
    {
        return DomainSpec(shape);
    }
    catch (ParameterError const& e)
    {
        std::string_view msg = e.what();
        auto open = msg.find('\'');
        auto close = msg.find('\'', open + 1);
        std::string key(open == std::string_view::npos ? std::string_view{}
                                                       : msg.substr(open + 1, close - open - 1));
        throw ParseError(key, e.what());
    }
}

std::string fmt(double v)
{
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

}  // namespace

std::string_view kind_name(DomainKind kind)
{
    return kind_names[static_cast<std::size_t>(kind)];
}

DomainSpec parse_domain(std::string_view text)
{
    text = trim(text);
    auto colon = text.find(':');
    std::string_view kind = trim(text.substr(0, colon));
    std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    KeyValues kv(kind, body);

    auto result = [&]() -> DomainSpec {
        if (kind == "ellipse")
        {
            Ellipse e{kv.required("a"), kv.required("b"), kv.optional("h", 0.0), kv.optional("k", 0.0)};
            kv.finish();
            return make(e);
        }
        if (kind == "parabola")
        {
            Parabola p{kv.required("p")};
            kv.finish();
            return make(p);
        }
        if (kind == "annulus")
        {
            Annulus an{kv.required("a"), kv.required("b")};
            kv.finish();
            return make(an);
        }
        if (kind == "sector")
        {
            AngularSector s{kv.required("alpha")};
            kv.finish();
            return make(s);
        }
        if (kind == "hyperbola-convex")
        {
            HyperbolaConvex h{kv.required("a"), kv.required("b")};
            kv.finish();
            return make(h);
        }
        if (kind == "hyperbola-concave")
        {
            HyperbolaConcave h{kv.required("a"), kv.required("b")};
            kv.finish();
            return make(h);
        }
        if (kind == "hdisk")
        {
            HyperbolicDisk d{kv.required("R")};
            kv.finish();
            return make(d);
        }
        if (kind == "horodisk")
        {
            Horodisk h{kv.required("R")};
            kv.finish();
            return make(h);
        }
        if (kind == "geodesic-nbhd")
        {
            GeodesicNbhd g{kv.required("alpha")};
            kv.finish();
            return make(g);
        }
        if (kind == "geodesic-halfnbhd")
        {
            GeodesicHalfNbhd g{kv.required("alpha")};
            kv.finish();
            return make(g);
        }
        if (kind == "ideal-nbhd")
        {
            kv.finish();
            return DomainSpec(IdealNbhd{});
        }
        throw ParseError(std::string(kind), "unknown domain kind '" + std::string(kind) + "'");
    };
    return result();
}

std::string DomainSpec::to_string() const
{
    std::string out(kind_name(kind()));
    std::vector<std::pair<char const*, double>> params;
    std::visit(
        [&](auto const& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ellipse>)
                params = {{"a", s.a}, {"b", s.b}, {"h", s.h}, {"k", s.k}};
            else if constexpr (std::is_same_v<T, Parabola>)
                params = {{"p", s.p}};
            else if constexpr (std::is_same_v<T, Annulus> || std::is_same_v<T, HyperbolaConvex>
                               || std::is_same_v<T, HyperbolaConcave>)
                params = {{"a", s.a}, {"b", s.b}};
            else if constexpr (std::is_same_v<T, AngularSector> || std::is_same_v<T, GeodesicNbhd>
                               || std::is_same_v<T, GeodesicHalfNbhd>)
                params = {{"alpha", s.alpha}};
            else if constexpr (std::is_same_v<T, HyperbolicDisk> || std::is_same_v<T, Horodisk>)
                params = {{"R", s.R}};
        },
        shape_);
    char sep = ':';
    for (auto const& [key, value] : params)
    {
        out += sep;
        out += key;
        out += '=';
        out += fmt(value);
        sep = ',';
    }
    return out;
}

}  // namespace exittime
