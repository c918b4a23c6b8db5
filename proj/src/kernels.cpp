#include "kdvtbc/kernels.hpp"

#include "kdvtbc/error.hpp"
#include "kdvtbc/format.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace kdvtbc {

std::string_view to_string(Provenance p) { return p == Provenance::exact ? "exact" : "asymptotic"; }

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::none: return "none";
    case Variant::lkdv: return "lkdv";
    case Variant::general: return "general";
    }
    return "?";
}

void Kernels::check() const {
    const std::size_t n = ss.size();
    if (ps.size() != n || su.size() != n || pu.size() != n)
        throw NumericalError("kernel sequences have different lengths");
    for (const auto* v : {&ss, &ps, &su, &pu})
        for (std::size_t i = 0; i < n; ++i)
            if (!std::isfinite((*v)[i]))
                throw NumericalError("kernel entry " + std::to_string(i) + " is not finite");
}

void Kernels::truncate(std::size_t n) {
    for (auto* v : {&ss, &ps, &su, &pu})
        if (v->size() > n)
            v->resize(n);
    if (cond_log.size() + 1 > n && n > 0)
        cond_log.resize(n - 1);
}

void write_kernels_csv(std::ostream& os, const Kernels& k) {
    k.check();
    os << "n,ss,ps,su,pu,provenance\n";
    const auto prov = to_string(k.provenance);
    for (std::size_t i = 0; i < k.size(); ++i)
        os << i << ',' << format_double(k.ss[i]) << ',' << format_double(k.ps[i]) << ',' << format_double(k.su[i])
           << ',' << format_double(k.pu[i]) << ',' << prov << '\n';
}

Kernels read_kernels_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("n,ss,ps,su,pu", 0) != 0)
        throw ParameterError("kernel CSV: missing header n,ss,ps,su,pu");
    Kernels k;
    bool first = true;
    std::size_t expect = 0;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cols.push_back(cell);
        if (cols.size() < 5)
            throw ParameterError("kernel CSV: short row '" + line + "'");
        if (static_cast<std::size_t>(parse_double(cols[0])) != expect)
            throw ParameterError("kernel CSV: indices must be consecutive from 0");
        ++expect;
        k.ss.push_back(parse_double(cols[1]));
        k.ps.push_back(parse_double(cols[2]));
        k.su.push_back(parse_double(cols[3]));
        k.pu.push_back(parse_double(cols[4]));
        if (first && cols.size() > 5)
            k.provenance = cols[5] == "asymptotic" ? Provenance::asymptotic : Provenance::exact;
        first = false;
    }
    k.check();
    return k;
}

std::vector<double> cauchy_product(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n && i < a.size(); ++i)
        for (std::size_t j = 0; i + j < n && j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

} // namespace kdvtbc
