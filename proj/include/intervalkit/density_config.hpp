#ifndef INTERVALKIT_DENSITY_CONFIG_HPP
#define INTERVALKIT_DENSITY_CONFIG_HPP

#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "intervalkit/densities.hpp"
#include "intervalkit/errors.hpp"

namespace intervalkit {

/// Builds a built-in density from a plain-text config: whitespace-separated
/// `key=value` tokens with a `family` key, e.g.
/// "family=lognormal mu=0 sigma=1". Parameter names per family:
///   normal/lognormal: mu, sigma; gamma: shape, rate; beta: a, b;
///   exponential: rate.
inline UnimodalDensity parse_density_config(std::string_view config) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(config)};
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= token.size())
            throw DomainError("density config: expected key=value, got '" + token + "'");
        kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    auto take = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw DomainError(std::string("density config: missing '") + key + "'");
        const std::string& s = it->second;
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw DomainError("density config: bad number '" + s + "' for '" + key + "'");
        kv.erase(it);
        return v;
    };

    const auto fam_it = kv.find("family");
    if (fam_it == kv.end())
        throw DomainError("density config: missing 'family'");
    const std::string family = fam_it->second;
    kv.erase(fam_it);

    UnimodalDensity d = [&]() {
        if (family == "normal") return UnimodalDensity::normal(take("mu"), take("sigma"));
        if (family == "lognormal") return UnimodalDensity::lognormal(take("mu"), take("sigma"));
        if (family == "gamma") return UnimodalDensity::gamma(take("shape"), take("rate"));
        if (family == "beta") return UnimodalDensity::beta(take("a"), take("b"));
        if (family == "exponential") return UnimodalDensity::exponential(take("rate"));
        throw DomainError("density config: unknown family '" + family + "'");
    }();
    if (!kv.empty())
        throw DomainError("density config: unused key '" + kv.begin()->first + "'");
    return d;
}

} // namespace intervalkit

#endif // INTERVALKIT_DENSITY_CONFIG_HPP
