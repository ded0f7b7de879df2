#include "stagedlt/wire.hpp"

namespace lt {

namespace {

std::int64_t get_i64(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        fail("UnknownFormat", std::string("missing integer field '") + key + "'");
    return j[key].get<std::int64_t>();
}

std::vector<Int> get_coords(const Json& j) {
    if (!j.is_array())
        fail("UnknownFormat", "expected a coordinate array");
    std::vector<Int> c;
    c.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number_integer())
            fail("UnknownFormat", "coordinate entries must be integers");
        c.emplace_back(v.get<std::int64_t>());
    }
    return c;
}

} // namespace

Json ring_to_json(const GaloisRingSpec& s) {
    Json j;
    j["p"] = s.p;
    j["a"] = s.a;
    j["n"] = s.n;
    Json f = Json::array();
    for (const auto& c : s.f) f.push_back(c.convert_to<std::int64_t>());
    j["f"] = std::move(f);
    return j;
}

GaloisRing ring_from_json(const Json& j) {
    std::int64_t p = get_i64(j, "p");
    int a = static_cast<int>(get_i64(j, "a"));
    int n = static_cast<int>(get_i64(j, "n"));
    if (!j.contains("f"))
        return GaloisRing(p, a, n);
    return GaloisRing(p, a, n, get_coords(j["f"]));
}

Json element_to_json(const GrElement& x) {
    Json j = Json::array();
    for (const auto& c : x.coords()) j.push_back(c.convert_to<std::int64_t>());
    return j;
}

GrElement element_from_json(const GaloisRing& R, const Json& j) {
    std::vector<Int> c = get_coords(j);
    if (static_cast<int>(c.size()) != R.n())
        fail("UnknownFormat", "coordinate array length does not match the ring degree");
    return R.make(std::move(c));
}

Json staged_spec_to_json(const StagedRingSpec& s) {
    Json j;
    j["coeff"] = ring_to_json(s.coeff.spec());
    j["h"] = s.h;
    j["heights"] = s.heights;
    j["D"] = s.prof.D;
    j["M"] = s.prof.M;
    j["Nx"] = s.prof.Nx;
    j["N"] = s.prof.N;
    return j;
}

StagedRing staged_ring_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("coeff") || !j.contains("heights") || !j["heights"].is_array())
        fail("UnknownFormat", "staged ring needs coeff and heights fields");
    GaloisRing coeff = ring_from_json(j["coeff"]);
    int h = static_cast<int>(get_i64(j, "h"));
    std::vector<int> heights;
    for (const auto& v : j["heights"]) {
        if (!v.is_number_integer()) fail("UnknownFormat", "heights entries must be integers");
        heights.push_back(v.get<int>());
    }
    TruncationProfile prof;
    prof.D = static_cast<int>(get_i64(j, "D"));
    prof.M = static_cast<int>(get_i64(j, "M"));
    prof.Nx = static_cast<int>(get_i64(j, "Nx"));
    if (!j.contains("N") || !j["N"].is_array())
        fail("UnknownFormat", "staged ring needs completion depths N");
    for (const auto& v : j["N"]) {
        if (!v.is_number_integer()) fail("UnknownFormat", "N entries must be integers");
        prof.N.push_back(v.get<int>());
    }
    return StagedRing(std::move(coeff), h, std::move(heights), std::move(prof));
}

Json staged_to_json(const StagedElement& x) {
    Json j;
    j["stage"] = x.stage();
    Json den = Json::object();
    const auto& d = x.dens();
    for (std::size_t g = 0; g < d.size(); ++g)
        if (d[g] > 0)
            den[g == 0 ? "p" : "u" + std::to_string(g)] = d[g];
    j["denoms"] = std::move(den);
    Json terms = Json::array();
    for (const auto& [e, c] : x.terms()) {
        Json t;
        t["e"] = e;
        t["c"] = element_to_json(c);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

StagedElement staged_from_json(const StagedRing& R, const Json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        fail("UnknownFormat", "staged element needs a terms array");
    int stage = static_cast<int>(get_i64(j, "stage"));
    std::vector<int> den(R.spec().h, 0);
    if (j.contains("denoms")) {
        if (!j["denoms"].is_object())
            fail("UnknownFormat", "denoms must be an object");
        for (const auto& [k, v] : j["denoms"].items()) {
            if (!v.is_number_integer())
                fail("UnknownFormat", "denominator exponents must be integers");
            int g = -1;
            if (k == "p")
                g = 0;
            else if (k.size() > 1 && k[0] == 'u')
                g = std::atoi(k.c_str() + 1);
            if (g < 0 || g >= R.spec().h)
                fail("UnknownFormat", "unknown denominator key '" + k + "'");
            den[g] = v.get<int>();
        }
    }
    std::map<std::vector<int>, GrElement> terms;
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("e") || !t.contains("c") || !t["e"].is_array())
            fail("UnknownFormat", "each term needs exponent vector e and coefficient c");
        std::vector<int> e;
        for (const auto& v : t["e"]) {
            if (!v.is_number_integer()) fail("UnknownFormat", "exponents must be integers");
            e.push_back(v.get<int>());
        }
        GrElement c = element_from_json(R.spec().coeff, t["c"]);
        auto it = terms.find(e);
        if (it == terms.end())
            terms.emplace(std::move(e), std::move(c));
        else
            it->second = it->second + c;
    }
    try {
        return R.make(stage, std::move(terms), std::move(den));
    } catch (const DomainError& err) {
        if (err.code() == std::string("BadInput"))
            fail("UnknownFormat", std::string("staged element rejected: ") + err.what());
        throw;
    }
}

Json series1_to_json(const TruncSeries1& f) {
    Json j;
    j["stage"] = f.stage();
    Json terms = Json::array();
    for (int i = 0; i < f.xcap(); ++i) {
        if (f.coeff(i).is_zero()) continue;
        Json t;
        t["i"] = i;
        t["c"] = staged_to_json(f.coeff(i));
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

TruncSeries1 series1_from_json(const StagedRing& R, const Json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        fail("UnknownFormat", "series needs a terms array");
    int stage = static_cast<int>(get_i64(j, "stage"));
    if (stage < 0 || stage > R.stages())
        fail("UnknownFormat", "series stage out of range");
    TruncSeries1 f(R, stage);
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("c"))
            fail("UnknownFormat", "each series term needs a degree and a coefficient");
        int i = static_cast<int>(get_i64(t, "i"));
        if (i < 0 || i >= f.xcap())
            fail("UnknownFormat", "series degree outside the window");
        StagedElement c = staged_from_json(R, t["c"]);
        if (c.stage() > stage)
            fail("UnknownFormat", "series coefficient above the series stage");
        f.set_coeff(i, (f.coeff(i) + c).promote(stage));
    }
    return f;
}

Json series2_to_json(const TruncSeries2& F) {
    Json j;
    j["stage"] = F.stage();
    Json terms = Json::array();
    for (int d = 0; d < F.xcap(); ++d) {
        for (int i = d; i >= 0; --i) {
            if (F.coeff(i, d - i).is_zero()) continue;
            Json t;
            t["i"] = i;
            t["j"] = d - i;
            t["c"] = staged_to_json(F.coeff(i, d - i));
            terms.push_back(std::move(t));
        }
    }
    j["terms"] = std::move(terms);
    return j;
}

TruncSeries2 series2_from_json(const StagedRing& R, const Json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        fail("UnknownFormat", "series needs a terms array");
    int stage = static_cast<int>(get_i64(j, "stage"));
    if (stage < 0 || stage > R.stages())
        fail("UnknownFormat", "series stage out of range");
    TruncSeries2 F(R, stage);
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("c"))
            fail("UnknownFormat", "each series term needs degrees and a coefficient");
        int i = static_cast<int>(get_i64(t, "i"));
        int k = static_cast<int>(get_i64(t, "j"));
        if (i < 0 || k < 0 || i + k >= F.xcap())
            fail("UnknownFormat", "series degree outside the window");
        StagedElement c = staged_from_json(R, t["c"]);
        if (c.stage() > stage)
            fail("UnknownFormat", "series coefficient above the series stage");
        F.set_coeff(i, k, (F.coeff(i, k) + c).promote(stage));
    }
    return F;
}

} // namespace lt
