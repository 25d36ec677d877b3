#include "mvsg/augment/benchmark.hpp"

#include <fstream>
#include <json.hpp>

#include "mvsg/knowledge/descriptor.hpp"

namespace mvsg::augment {

using nlohmann::json;
using world::Kind;

std::vector<BenchmarkConcept> default_benchmark_concepts() {
    return {
        {"cementing", "relation", 12, false}, {"cutting", "relation", 12, false},
        {"drilling", "relation", 12, false},  {"hammering", "relation", 12, false},
        {"sawing", "relation", 12, false},    {"suturing", "relation", 12, false},
        {"robot", "equipment", 10, true},     {"cart", "equipment", 10, true},
        {"lasering", "relation", 10, true},
    };
}

namespace {

graph::Triplet normalized_close_to(const std::string& a, const std::string& b) {
    return a < b ? graph::Triplet{a, b, "closeTo"} : graph::Triplet{b, a, "closeTo"};
}

}  // namespace

std::vector<BenchmarkSample> build_adaptability_benchmark(
    const std::vector<world::Take>& takes, const world::WorldConfig& config,
    const std::vector<BenchmarkConcept>& concepts, std::uint64_t seed) {
    if (takes.empty()) throw world::InvalidConfig("build_adaptability_benchmark: no takes");
    for (const auto& c : concepts) {
        if (c.count < 0) throw world::InvalidConfig("negative sample count");
        if (c.kind != "relation" && c.kind != "equipment")
            throw world::InvalidConfig("unknown concept kind '" + c.kind + "'");
    }

    std::vector<BenchmarkSample> out;
    int sample_index = 0;
    for (std::size_t ci = 0; ci < concepts.size(); ++ci) {
        const auto& cpt = concepts[ci];
        const bool relation = cpt.kind == "relation";

        for (int k = 0; k < cpt.count; ++k, ++sample_index) {
            Rng rng(Rng::mix(seed, ci, static_cast<std::uint64_t>(k)));

            BenchmarkSample s;
            s.id = "bench" + std::to_string(sample_index);
            s.concept_name = cpt.name;
            s.concept_kind = cpt.kind;

            if (relation && !cpt.novel) {
                // Known relation, altered look: keep sampling until the color
                // differs from the canonical tool.
                const auto& canonical = config.predicate_descriptor(cpt.name);
                do {
                    s.attributes = sample_attributes(rng, "tool");
                } while (s.attributes.color == canonical.color);
            } else {
                s.attributes = sample_attributes(rng, relation ? "tool" : "equipment");
            }
            s.sprite = render_object_sprite(s.attributes, rng);

            PlacementPolicy policy{relation ? PlacementKind::tool_on_hand
                                            : PlacementKind::equipment_on_anchor};

            const world::Frame* frame = nullptr;
            const world::Take* take = nullptr;
            const world::SceneEntity* host = nullptr;
            for (int attempt = 0; attempt < 100 && !host; ++attempt) {
                take = &takes[rng.uniform_u64(takes.size())];
                frame = &take->frames[rng.uniform_u64(take->frames.size())];
                const auto hosts = compatible_hosts(*take, *frame, policy);
                if (!hosts.empty()) host = hosts[rng.uniform_u64(hosts.size())];
            }
            if (!host)
                throw world::InvalidConfig("no compatible host for benchmark concept '" +
                                           cpt.name + "'");

            if (relation)
                s.target_triplets.insert(graph::Triplet{host->name, "patient", cpt.name});
            else
                s.target_triplets.insert(normalized_close_to(cpt.name, host->name));

            const auto pos =
                composite(*frame, config.views, s.sprite, policy, *host,
                          {*s.target_triplets.begin()});
            s.positive_frames = pos.images;
            s.negative_frames = frame->images;
            s.take_id = take->take_id;
            s.t = frame->t;

            // Symbol map over the sample vocabulary: base catalog plus the
            // concept when it is not already a catalog name.
            auto entities = config.graph_entity_names();
            auto predicates = config.predicates;
            if (relation) {
                if (std::find(predicates.begin(), predicates.end(), cpt.name) ==
                    predicates.end())
                    predicates.push_back(cpt.name);
            } else {
                entities.push_back(cpt.name);
            }
            s.symbol_map = graph::sample_symbol_map(graph::Vocabulary(entities, predicates), rng);

            const std::string& sym = relation ? s.symbol_map.predicate_map.at(cpt.name)
                                              : s.symbol_map.entity_map.at(cpt.name);
            s.textual_descriptor = knowledge::format_textual_descriptor(sym, s.attributes);
            s.visual_descriptor = sprite_on_canvas(s.sprite, config.image_size);
            out.push_back(std::move(s));
        }
    }
    return out;
}

void export_benchmark(const std::vector<BenchmarkSample>& samples,
                      const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    fs::create_directories(root);
    std::string index;
    for (const auto& s : samples) {
        const auto dir = root / s.id;
        fs::create_directories(dir / "pos");
        fs::create_directories(dir / "neg");
        for (const auto& [view_id, img] : s.positive_frames)
            write_png(dir / "pos" / ("view" + std::to_string(view_id) + ".png"), img);
        for (const auto& [view_id, img] : s.negative_frames)
            write_png(dir / "neg" / ("view" + std::to_string(view_id) + ".png"), img);
        write_png(dir / "visual_descriptor.png", s.visual_descriptor);
        write_png(dir / "sprite.png", s.sprite.image);

        json j{{"id", s.id},
               {"concept", s.concept_name},
               {"concept_kind", s.concept_kind},
               {"take_id", s.take_id},
               {"t", s.t},
               {"textual_descriptor", s.textual_descriptor}};
        j["symbol_map"] = {{"entities", s.symbol_map.entity_map},
                           {"predicates", s.symbol_map.predicate_map}};
        j["target_triplets"] = json::array();
        for (const auto& t : s.target_triplets)
            j["target_triplets"].push_back(json::array({t.subject, t.object, t.predicate}));

        std::ofstream out(dir / "prompt.json", std::ios::binary);
        out << j.dump(2) << "\n";
        index += s.id + "\n";
    }
    std::ofstream idx(root / "index.txt", std::ios::binary);
    idx << index;
}

std::vector<BenchmarkSample> load_benchmark(const std::filesystem::path& root) {
    std::ifstream idx(root / "index.txt");
    if (!idx) throw IOFailure("load_benchmark: missing " + (root / "index.txt").string());

    std::vector<BenchmarkSample> out;
    std::string id;
    while (std::getline(idx, id)) {
        if (id.empty()) continue;
        const auto dir = root / id;
        std::ifstream in(dir / "prompt.json");
        json j;
        in >> j;

        BenchmarkSample s;
        s.id = j.at("id");
        s.concept_name = j.at("concept");
        s.concept_kind = j.at("concept_kind");
        s.take_id = j.at("take_id");
        s.t = j.at("t");
        s.textual_descriptor = j.at("textual_descriptor");
        s.symbol_map.entity_map =
            j.at("symbol_map").at("entities").get<std::map<std::string, std::string>>();
        s.symbol_map.predicate_map =
            j.at("symbol_map").at("predicates").get<std::map<std::string, std::string>>();
        for (const auto& jt : j.at("target_triplets"))
            s.target_triplets.insert(graph::Triplet{jt.at(0), jt.at(1), jt.at(2)});

        const auto parsed = knowledge::parse_textual_descriptor(s.textual_descriptor);
        if (!parsed) throw IOFailure("load_benchmark: bad descriptor in " + id);
        s.attributes = parsed->second;
        s.sprite.attributes = s.attributes;
        s.sprite.image = read_png(dir / "sprite.png");
        s.visual_descriptor = read_png(dir / "visual_descriptor.png");
        for (const char* part : {"pos", "neg"}) {
            auto& dst = std::string(part) == "pos" ? s.positive_frames : s.negative_frames;
            for (const auto& entry : std::filesystem::directory_iterator(dir / part)) {
                const auto name = entry.path().filename().string();
                if (name.rfind("view", 0) == 0)
                    dst[std::stoi(name.substr(4))] = read_png(entry.path());
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace mvsg::augment
