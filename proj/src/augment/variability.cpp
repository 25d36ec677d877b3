#include "mvsg/augment/variability.hpp"

#include <fstream>
#include <iostream>
#include <json.hpp>

#include "mvsg/knowledge/descriptor.hpp"

namespace mvsg::augment {

using nlohmann::json;
using world::Kind;

namespace {

graph::Triplet normalized_close_to(const std::string& a, const std::string& b) {
    return a < b ? graph::Triplet{a, b, "closeTo"} : graph::Triplet{b, a, "closeTo"};
}

}  // namespace

std::vector<AugSample> build_variability_dataset(const std::vector<world::Take>& takes,
                                                 const world::WorldConfig& config, int n_samples,
                                                 std::uint64_t seed, int n_distractors) {
    if (takes.empty()) throw world::InvalidConfig("build_variability_dataset: no base takes");

    std::vector<AugSample> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    int skipped = 0;

    for (int i = 0; i < n_samples; ++i) {
        Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(i), 0x617567));

        const bool tool_kind = rng.bernoulli(0.5);
        AugSample s;
        s.id = "aug" + std::to_string(i);
        s.concept_kind = tool_kind ? "tool" : "equipment";
        s.concept_name = tool_kind ? "augpred" : "augent";
        s.attributes = sample_attributes(rng, s.concept_kind);
        s.sprite = render_object_sprite(s.attributes, rng);

        PlacementPolicy policy{tool_kind ? PlacementKind::tool_on_hand
                                         : PlacementKind::equipment_on_anchor};

        bool placed = false;
        for (int attempt = 0; attempt < 10 && !placed; ++attempt) {
            const auto& take = takes[rng.uniform_u64(takes.size())];
            const auto& frame = take.frames[rng.uniform_u64(take.frames.size())];
            const auto hosts = compatible_hosts(take, frame, policy);
            if (hosts.empty()) continue;
            const auto* host = hosts[rng.uniform_u64(hosts.size())];

            if (tool_kind)
                s.new_triplet = graph::Triplet{host->name, "patient", s.concept_name};
            else
                s.new_triplet = normalized_close_to(s.concept_name, host->name);

            const auto composited =
                composite(frame, config.views, s.sprite, policy, *host, {s.new_triplet});
            s.take_id = take.take_id;
            s.t = frame.t;
            s.images = composited.images;
            s.graph = composited.graph;
            placed = true;
        }
        if (!placed) {
            ++skipped;
            std::cerr << "build_variability_dataset: no compatible host for sample " << i
                      << ", skipping\n";
            continue;
        }

        for (int d = 0; d < n_distractors; ++d) {
            world::AttributeSet attrs;
            do {
                attrs = sample_attributes(rng, rng.bernoulli(0.5) ? "tool" : "equipment");
            } while (attrs == s.attributes);
            s.distractors.push_back(attrs);
        }
        out.push_back(std::move(s));
    }

    if (skipped > 0)
        std::cerr << "build_variability_dataset: skipped " << skipped << " of " << n_samples
                  << " samples\n";
    return out;
}

void export_aug_dataset(const std::vector<AugSample>& samples,
                        const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    fs::create_directories(root);
    std::string index;
    for (const auto& s : samples) {
        const auto dir = root / s.id;
        fs::create_directories(dir);
        for (const auto& [view_id, img] : s.images)
            write_png(dir / ("view" + std::to_string(view_id) + ".png"), img);
        write_png(dir / "sprite.png", s.sprite.image);

        json j{{"id", s.id},
               {"take_id", s.take_id},
               {"t", s.t},
               {"concept_kind", s.concept_kind},
               {"concept_name", s.concept_name},
               {"descriptor",
                knowledge::format_textual_descriptor(s.concept_name, s.attributes)}};
        j["triplets"] = json::array();
        for (const auto& t : s.graph)
            j["triplets"].push_back(json::array({t.subject, t.object, t.predicate}));
        j["new_triplet"] =
            json::array({s.new_triplet.subject, s.new_triplet.object, s.new_triplet.predicate});
        j["distractors"] = json::array();
        for (const auto& a : s.distractors)
            j["distractors"].push_back(knowledge::format_textual_descriptor("x", a));

        std::ofstream out(dir / "sample.json", std::ios::binary);
        out << j.dump(2) << "\n";
        index += s.id + "\n";
    }
    std::ofstream idx(root / "index.txt", std::ios::binary);
    idx << index;
}

std::vector<AugSample> load_aug_dataset(const std::filesystem::path& root) {
    std::ifstream idx(root / "index.txt");
    if (!idx) throw IOFailure("load_aug_dataset: missing " + (root / "index.txt").string());

    std::vector<AugSample> out;
    std::string id;
    while (std::getline(idx, id)) {
        if (id.empty()) continue;
        const auto dir = root / id;
        std::ifstream in(dir / "sample.json");
        json j;
        in >> j;

        AugSample s;
        s.id = j.at("id");
        s.take_id = j.at("take_id");
        s.t = j.at("t");
        s.concept_kind = j.at("concept_kind");
        s.concept_name = j.at("concept_name");
        const auto parsed = knowledge::parse_textual_descriptor(j.at("descriptor"));
        if (!parsed) throw IOFailure("load_aug_dataset: bad descriptor in " + id);
        s.attributes = parsed->second;
        for (const auto& jt : j.at("triplets"))
            s.graph.insert(graph::Triplet{jt.at(0), jt.at(1), jt.at(2)});
        const auto& nt = j.at("new_triplet");
        s.new_triplet = graph::Triplet{nt.at(0), nt.at(1), nt.at(2)};
        for (const auto& jd : j.at("distractors")) {
            const auto pd = knowledge::parse_textual_descriptor(jd);
            if (!pd) throw IOFailure("load_aug_dataset: bad distractor in " + id);
            s.distractors.push_back(pd->second);
        }
        s.sprite.attributes = s.attributes;
        s.sprite.image = read_png(dir / "sprite.png");
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            const auto name = entry.path().filename().string();
            if (name.rfind("view", 0) == 0 && entry.path().extension() == ".png") {
                const int view_id = std::stoi(name.substr(4));
                s.images[view_id] = read_png(entry.path());
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace mvsg::augment
