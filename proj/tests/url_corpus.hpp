#pragma once

#include <random>
#include <string>
#include <vector>

// Random-but-plausible URL generator used by the codec tests: hosts built
// from common words and dictionary-friendly TLDs, paths mixing dictionary
// tokens with literal word characters.
namespace corpus {

inline const std::vector<std::string>& words() {
    static const std::vector<std::string> w = {
        "news",  "mail",   "search", "index", "home",  "user",  "login",
        "shop",  "wiki",   "blog",   "image", "video", "file",  "page",
        "query", "archive", "data",  "media", "store", "cloud", "dev",
        "beta",  "app",    "web",    "site",  "host",  "zone",  "lab"};
    return w;
}

inline std::string random_host(std::mt19937_64& rng) {
    static const std::vector<std::string> tlds = {".com", ".org", ".net",
                                                  ".io",  ".de",  ".jp"};
    std::string host = "www.";
    host += words()[rng() % words().size()];
    if (rng() % 3 == 0)
        host += words()[rng() % words().size()];
    host += tlds[rng() % tlds.size()];
    return host;
}

inline std::string random_http(std::mt19937_64& rng) {
    std::string url = (rng() % 4 == 0) ? "https://" : "http://";
    url += random_host(rng);
    const int segments = static_cast<int>(rng() % 3);
    for (int s = 0; s < segments; ++s) {
        url += "/";
        url += words()[rng() % words().size()];
    }
    if (rng() % 4 == 0)
        url += ".html";
    if (rng() % 5 == 0) {
        url += "?";
        url += words()[rng() % words().size()];
        url += "=";
        url += std::to_string(rng() % 100);
    }
    return url;
}

inline std::string random_mailto(std::mt19937_64& rng) {
    std::string url = "mailto:";
    url += words()[rng() % words().size()];
    if (rng() % 3 == 0) {
        url += ".";
        url += words()[rng() % words().size()];
    }
    url += "@";
    url += words()[rng() % words().size()];
    static const std::vector<std::string> tlds = {".com", ".org", ".net", ".edu"};
    url += tlds[rng() % tlds.size()];
    return url;
}

} // namespace corpus
