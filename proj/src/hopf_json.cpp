#include <algorithm>
#include <optional>
#include <sstream>

#include "hopfkit/hopf.hpp"
#include "json.hpp"

namespace hopfkit {

using nlohmann::json;

std::string hopf_to_json(const HopfAlgebra& h) {
    const std::size_t d = h.dim();
    json mul = json::array(), comul = json::array(), counit = json::array(), antipode = json::array();
    for (const auto& e : h.algebra().mul_entries()) mul.push_back({e.i, e.j, e.k, e.c});
    for (const auto& e : h.comul_entries()) comul.push_back({e.i, e.j, e.k, e.c});
    for (std::size_t i = 0; i < d; ++i)
        if (h.counit()[i]) counit.push_back({i, h.counit()[i]});
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (h.antipode().at(j, i)) antipode.push_back({i, j, h.antipode().at(j, i)});
    std::ostringstream out;
    out << "{\n";
    out << "  \"p\": " << h.p() << ",\n";
    out << "  \"dim\": " << d << ",\n";
    out << "  \"basis\": " << json(h.algebra().labels()).dump() << ",\n";
    out << "  \"mul\": " << mul.dump() << ",\n";
    out << "  \"comul\": " << comul.dump() << ",\n";
    out << "  \"counit\": " << counit.dump() << ",\n";
    out << "  \"antipode\": " << antipode.dump() << "\n";
    out << "}\n";
    return out.str();
}

namespace {

const json& field(const json& obj, const std::string& key) {
    if (!obj.contains(key)) throw ParseError("missing field", "/" + key);
    return obj.at(key);
}

long long integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError("expected an integer", path);
    return v.get<long long>();
}

std::size_t index(const json& v, const std::string& path, std::size_t bound) {
    long long x = integer(v, path);
    if (x < 0 || static_cast<unsigned long long>(x) >= bound) throw ParseError("index out of range", path);
    return static_cast<std::size_t>(x);
}

// Array of fixed-arity integer tuples: `arity - 1` indices then a coefficient.
std::vector<std::vector<long long>> tuples(const json& obj, const std::string& key, std::size_t arity, std::size_t dim,
                                           unsigned p) {
    const json& arr = field(obj, key);
    if (!arr.is_array()) throw ParseError("expected an array", "/" + key);
    std::vector<std::vector<long long>> out;
    for (std::size_t n = 0; n < arr.size(); ++n) {
        std::string path = "/" + key + "/" + std::to_string(n);
        const json& t = arr[n];
        if (!t.is_array() || t.size() != arity)
            throw ParseError("expected an array of " + std::to_string(arity) + " integers", path);
        std::vector<long long> row;
        for (std::size_t q = 0; q + 1 < arity; ++q)
            row.push_back(static_cast<long long>(index(t[q], path + "/" + std::to_string(q), dim)));
        row.push_back(fp::reduce(integer(t[arity - 1], path + "/" + std::to_string(arity - 1)), p));
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace

HopfAlgebra hopf_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) throw ParseError("expected an object", "/");
    long long praw = integer(field(doc, "p"), "/p");
    if (praw < 2 || praw > static_cast<long long>(kMaxPrime) || !is_prime(static_cast<unsigned>(praw)))
        throw ParseError("p must be a prime at most " + std::to_string(kMaxPrime), "/p");
    const unsigned p = static_cast<unsigned>(praw);
    long long draw = integer(field(doc, "dim"), "/dim");
    if (draw < 1 || draw > static_cast<long long>(kDefaultDimensionCap)) throw ParseError("dimension out of range", "/dim");
    const std::size_t d = static_cast<std::size_t>(draw);

    const json& basis = field(doc, "basis");
    if (!basis.is_array() || basis.size() != d) throw ParseError("expected " + std::to_string(d) + " labels", "/basis");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < d; ++i) {
        if (!basis[i].is_string()) throw ParseError("expected a string", "/basis/" + std::to_string(i));
        labels.push_back(basis[i].get<std::string>());
    }

    std::vector<MulEntry> mul;
    for (const auto& t : tuples(doc, "mul", 4, d, p))
        mul.push_back({std::size_t(t[0]), std::size_t(t[1]), std::size_t(t[2]), Residue(t[3])});
    std::vector<ComulEntry> comul;
    for (const auto& t : tuples(doc, "comul", 4, d, p))
        comul.push_back({std::size_t(t[0]), std::size_t(t[1]), std::size_t(t[2]), Residue(t[3])});
    FpVector counit(d, 0);
    for (const auto& t : tuples(doc, "counit", 2, d, p)) counit[t[0]] = fp::add(counit[t[0]], Residue(t[1]), p);
    FpMatrix antipode(p, d, d);
    for (const auto& t : tuples(doc, "antipode", 3, d, p))
        antipode.at(t[1], t[0]) = fp::add(antipode.at(t[1], t[0]), Residue(t[2]), p);

    // The unit is implied: sum_k u_k e_k e_j = e_j, taking j in batches until u is determined.
    std::vector<std::vector<MulEntry>> by_right(d);
    for (const auto& e : mul) by_right[e.j].push_back(e);
    std::optional<FpVector> unit;
    for (std::size_t used = 0; used < d;) {
        std::size_t batch = std::min<std::size_t>(d - used, std::max<std::size_t>(8, used));
        used += batch;
        FpMatrix sys(p, used * d, d);
        FpVector rhs(used * d, 0);
        for (std::size_t j = 0; j < used; ++j) {
            for (const auto& e : by_right[j]) sys.at(j * d + e.k, e.i) = fp::add(sys.at(j * d + e.k, e.i), e.c, p);
            rhs[j * d + j] = 1;
        }
        unit = solve(sys, rhs);
        if (!unit) throw ValidationError("multiplication has no unit");
        if (rank(sys) == d) break;
    }

    FiniteAlgebra alg(p, std::move(labels), *unit, std::move(mul));
    return HopfAlgebra(std::move(alg), std::move(comul), std::move(counit), std::move(antipode), "imported");
}

HopfAlgebra import_hopf_json(const std::string& text) {
    HopfAlgebra h = hopf_from_json(text);
    auto report = verify_hopf_axioms(h);
    if (const AxiomCheck* bad = report.first_failure()) throw ValidationError(bad->axiom + ": " + bad->witness);
    return h;
}

}  // namespace hopfkit
