#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace sg {

// Integer polynomial in z; c[i] holds the z^i coefficient.
struct ConwayPoly {
    std::vector<long long> c;

    static ConwayPoly zero() { return {}; }
    static ConwayPoly one() { return {{1}}; }

    long long coeff(int i) const { return i >= 0 && i < (int)c.size() ? c[i] : 0; }
    bool is_zero() const {
        for (long long x : c)
            if (x) return false;
        return true;
    }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    ConwayPoly& operator+=(const ConwayPoly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), 0);
        for (size_t i = 0; i < o.c.size(); i++) c[i] += o.c[i];
        trim();
        return *this;
    }
    ConwayPoly& operator-=(const ConwayPoly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), 0);
        for (size_t i = 0; i < o.c.size(); i++) c[i] -= o.c[i];
        trim();
        return *this;
    }
    // Multiplication by s * z^k.
    ConwayPoly shifted(int k, long long s = 1) const {
        ConwayPoly out;
        if (is_zero() || s == 0) return out;
        out.c.assign(c.size() + k, 0);
        for (size_t i = 0; i < c.size(); i++) out.c[i + k] = s * c[i];
        return out;
    }
    bool operator==(const ConwayPoly& o) const {
        ConwayPoly a = *this, b = o;
        a.trim();
        b.trim();
        return a.c == b.c;
    }
    std::string to_string() const {
        std::ostringstream os;
        bool any = false;
        for (size_t i = 0; i < c.size(); i++) {
            if (!c[i]) continue;
            if (any) os << (c[i] > 0 ? " + " : " - ");
            else if (c[i] < 0) os << "-";
            long long v = c[i] > 0 ? c[i] : -c[i];
            if (v != 1 || i == 0) os << v;
            if (i >= 1) os << "z";
            if (i >= 2) os << "^" << i;
            any = true;
        }
        if (!any) os << "0";
        return os.str();
    }
};

} // namespace sg
