#include "gregus/common.hpp"

#include <charconv>
#include <cstdlib>

namespace gregus {

double parse_real(const std::string& text) {
    auto trim = [](std::string s) {
        size_t b = s.find_first_not_of(" \t");
        size_t e = s.find_last_not_of(" \t");
        if (b == std::string::npos) return std::string();
        return s.substr(b, e - b + 1);
    };
    std::string s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty number literal");

    size_t slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = trim(s.substr(0, slash));
        std::string den = trim(s.substr(slash + 1));
        long long p = 0, q = 0;
        auto rp = std::from_chars(num.data(), num.data() + num.size(), p);
        auto rq = std::from_chars(den.data(), den.data() + den.size(), q);
        if (rp.ec != std::errc{} || rp.ptr != num.data() + num.size() ||
            rq.ec != std::errc{} || rq.ptr != den.data() + den.size() || q == 0)
            throw std::invalid_argument("bad fraction literal: " + text);
        // One correctly rounded division: nearest binary64 to p/q.
        return static_cast<double>(p) / static_cast<double>(q);
    }

    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw std::invalid_argument("bad number literal: " + text);
    return v;
}

uint64_t fnv1a(const std::string& bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace gregus
