#include "spectral/io.hpp"

#include <charconv>

namespace spectral::io {

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

json window_to_json(const BandedWindow& a) {
    json j;
    j["offset"] = a.offset();
    j["n"] = a.n();
    j["w"] = a.w();
    j["side"] = a.side() == Side::half_line ? "half_line" : "whole_line";
    json diags = json::array();
    for (int d = -a.w(); d <= a.w(); ++d) {
        json diag = json::array();
        for (int i = std::max(0, -d); i < a.n() - std::max(0, d); ++i) diag.push_back(a.at(i, i + d));
        diags.push_back(std::move(diag));
    }
    j["diags"] = std::move(diags);
    return j;
}

BandedWindow window_from_json(const json& j) {
    const long offset = j.at("offset").get<long>();
    const int n = j.at("n").get<int>();
    const int w = j.at("w").get<int>();
    const std::string side = j.at("side").get<std::string>();
    if (side != "half_line" && side != "whole_line")
        throw InvalidInput("window_from_json: bad side");
    BandedWindow a(offset, n, w, side == "half_line" ? Side::half_line : Side::whole_line);
    const auto& diags = j.at("diags");
    if (static_cast<int>(diags.size()) != 2 * a.w() + 1)
        throw InvalidInput("window_from_json: wrong diagonal count");
    for (int d = -a.w(); d <= a.w(); ++d) {
        const auto& diag = diags.at(d + a.w());
        int idx = 0;
        for (int i = std::max(0, -d); i < n - std::max(0, d); ++i, ++idx)
            a.set(i, i + d, diag.at(idx).get<double>());
    }
    return a;
}

json covering_to_json(const BranchingData& b) {
    json j;
    j["d"] = b.degree;
    json pts = json::array();
    for (const auto& p : b.points) pts.push_back(json::array({p.real(), p.imag()}));
    j["points"] = std::move(pts);
    json sig = json::array();
    for (const auto& s : b.sigmas) {
        json one = json::array();
        for (int v : s) one.push_back(v + 1);
        sig.push_back(std::move(one));
    }
    j["sigmas"] = std::move(sig);
    return j;
}

BranchingData covering_from_json(const json& j) {
    BranchingData b;
    b.degree = j.at("d").get<int>();
    for (const auto& p : j.at("points"))
        b.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    for (const auto& s : j.at("sigmas")) {
        Perm perm;
        for (const auto& v : s) perm.push_back(v.get<int>() - 1);
        if (!is_permutation(perm) || static_cast<int>(perm.size()) != b.degree)
            throw InvalidInput("covering_from_json: malformed permutation");
        b.sigmas.push_back(std::move(perm));
    }
    return b;
}

json measure_to_json(const DiscreteMeasure& m) {
    json j;
    j["support"] = m.support;
    j["weights"] = m.weights;
    return j;
}

DiscreteMeasure measure_from_json(const json& j) {
    DiscreteMeasure m;
    m.support = j.at("support").get<std::vector<double>>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.validate();
    return m;
}

VerblunskySeq verblunsky_from_json(const json& j) {
    std::vector<std::complex<double>> a;
    for (const auto& v : j) a.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    return VerblunskySeq(std::move(a));
}

json verblunsky_to_json(const VerblunskySeq& a) {
    json j = json::array();
    for (const auto& v : a.a) j.push_back(json::array({v.real(), v.imag()}));
    return j;
}

std::string measure_to_csv(const DiscreteMeasure& m) {
    std::string out = "support,weight\n";
    for (size_t i = 0; i < m.support.size(); ++i) {
        out += format_double(m.support[i]);
        out += ',';
        out += format_double(m.weights[i]);
        out += '\n';
    }
    return out;
}

}  // namespace spectral::io
