#include "ergolab/system_io.hpp"

#include <array>
#include <fstream>
#include <sstream>

namespace ergolab {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(std::string("system file: missing field '") + key + "'");
    return *it;
}

}  // namespace

GroupPtr group_from_descriptor(const json& j) {
    std::string kind = field(j, "kind").get<std::string>();
    if (kind == "trivial") return Group::trivial();
    if (kind == "integers") return nullptr;
    int n = field(j, "n").get<int>();
    if (kind == "cyclic") return Group::cyclic(n);
    if (kind == "symmetric") return Group::symmetric(n);
    if (kind == "dihedral") return Group::dihedral(n);
    throw Error("system file: unknown group kind '" + kind + "'");
}

GdSystem parse_system_json(const json& j) {
    const json& jp = field(j, "points");
    const json& jw = field(j, "weights");
    if (!jp.is_array() || !jw.is_array() || jp.size() != jw.size())
        throw Error("system file: points/weights must be arrays of equal length");
    std::vector<std::string> labels;
    std::vector<Rat> weights;
    for (const auto& p : jp) labels.push_back(p.get<std::string>());
    for (const auto& w : jw) weights.push_back(rat_from_string(w.get<std::string>()));
    SpacePtr space = ProbSpace::make(std::move(labels), std::move(weights));

    GroupPtr group = group_from_descriptor(field(j, "group"));
    const json& ja = field(j, "actions");
    if (!ja.is_array() || ja.empty()) throw Error("system file: actions must be a nonempty array");

    auto read_perm = [&](const json& arr, const std::string& where) {
        if (!arr.is_array() || static_cast<int>(arr.size()) != space->size())
            throw Error("system file: " + where + " must be an image array over all " +
                        std::to_string(space->size()) + " points");
        Perm p;
        for (const auto& v : arr) p.push_back(v.get<int>());
        if (!is_permutation(p, space->size()))
            throw Error("system file: " + where + " is not a permutation");
        return p;
    };

    if (!group) {  // integers
        std::vector<Perm> gens;
        for (size_t i = 0; i < ja.size(); ++i) {
            const json& jg = field(ja[i], "generators");
            if (jg.size() != 1 || !jg.contains("1"))
                throw Error("system file: integer actions take exactly one generator, key \"1\"");
            gens.push_back(read_perm(jg.at("1"),
                                     "action " + std::to_string(i + 1) + " generator"));
        }
        return GdSystem::lazy_z(space, std::move(gens));
    }

    std::vector<std::vector<std::pair<int, Perm>>> gens(ja.size());
    for (size_t i = 0; i < ja.size(); ++i) {
        const json& jg = field(ja[i], "generators");
        if (!jg.is_object() || jg.empty())
            throw Error("system file: action " + std::to_string(i + 1) +
                        " needs a generators object");
        for (auto it = jg.begin(); it != jg.end(); ++it) {
            int elem = group->index_of(it.key());
            if (elem < 0)
                throw Error("system file: action " + std::to_string(i + 1) +
                            ": unknown group element '" + it.key() + "'");
            gens[i].emplace_back(elem, read_perm(it.value(), "action " + std::to_string(i + 1) +
                                                                 " at element '" + it.key() + "'"));
        }
    }
    return GdSystem::from_generators(space, group, gens, GdSystem::Validation::Exhaustive);
}

GdSystem parse_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open system file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("system file '" + path + "': " + e.what());
    }
    return parse_system_json(j);
}

json serialize_system(const GdSystem& s) {
    json j;
    if (s.lazy()) {
        j["group"]["kind"] = "integers";
    } else {
        const std::string& desc = s.group()->descriptor();
        if (desc.empty())
            throw Error("serialize_system: group has no file descriptor (custom table)");
        auto colon = desc.find(':');
        j["group"]["kind"] = desc.substr(0, colon);
        if (colon != std::string::npos)
            j["group"]["n"] = std::stoi(desc.substr(colon + 1));
    }
    j["points"] = json::array();
    j["weights"] = json::array();
    for (int p = 0; p < s.points(); ++p) {
        j["points"].push_back(s.space()->label(p));
        j["weights"].push_back(rat_to_string(s.space()->weight(p)));
    }
    j["actions"] = json::array();
    for (int i = 1; i <= s.d(); ++i) {
        json ja;
        ja["generators"] = json::object();
        if (s.lazy()) {
            ja["generators"]["1"] = s.lazy_gen(i);
        } else {
            for (int g : s.group()->generating_set())
                ja["generators"][s.group()->name(g)] = s.action(i, g);
        }
        j["actions"].push_back(std::move(ja));
    }
    return j;
}

long long system_budget(const json& j, long long fallback) {
    if (j.contains("options") && j["options"].contains("budget"))
        return j["options"]["budget"].get<long long>();
    return fallback;
}

Obs parse_obs_csv(std::istream& in, const SpacePtr& base) {
    std::string line;
    if (!std::getline(in, line)) throw Error("observable csv: empty input");
    // Tolerate an optional header row.
    auto split3 = [](const std::string& row) {
        std::array<std::string, 3> out;
        std::stringstream ss(row);
        for (int i = 0; i < 3; ++i)
            if (!std::getline(ss, out[i], ',')) throw Error("observable csv: expected 3 columns");
        std::string extra;
        if (std::getline(ss, extra, ',')) throw Error("observable csv: expected 3 columns");
        return out;
    };
    std::vector<GaussRat> vals(base->size());
    std::vector<char> seen(base->size(), 0);
    auto take = [&](const std::string& row) {
        auto [pt, re, im] = split3(row);
        int p = base->index_of(pt);
        if (p < 0) throw Error("observable csv: unknown point '" + pt + "'");
        if (seen[p]) throw Error("observable csv: duplicate point '" + pt + "'");
        seen[p] = 1;
        vals[p] = GaussRat(rat_from_string(re), rat_from_string(im));
    };
    if (line != "point,real,imag" && !line.empty()) take(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        take(line);
    }
    for (int p : base->support())
        if (!seen[p]) throw Error("observable csv: support point '" + base->label(p) +
                                  "' has no value");
    return Obs(base, std::move(vals));
}

Obs parse_obs_file(const std::string& path, const SpacePtr& base) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open observable file '" + path + "'");
    return parse_obs_csv(in, base);
}

void write_obs_csv(std::ostream& os, const Obs& f) {
    os << "point,real,imag\n";
    for (int p = 0; p < f.base()->size(); ++p)
        os << f.base()->label(p) << "," << rat_to_string(f.value(p).re) << ","
           << rat_to_string(f.value(p).im) << "\n";
}

}  // namespace ergolab
