#include "mvsg/world/dataset.hpp"

#include <fstream>
#include <json.hpp>
#include <set>

#include "mvsg/graph/grammar.hpp"
#include "mvsg/world/generate.hpp"

namespace mvsg::world {

using nlohmann::json;

namespace {

json vec2_json(const Vec2& v) { return json::array({v.x(), v.y()}); }
Vec2 vec2_from(const json& j) { return Vec2(j.at(0).get<double>(), j.at(1).get<double>()); }

json attrs_json(const AttributeSet& a) {
    return json{{"object_type", a.object_type},
                {"color", a.color},
                {"size", a.size},
                {"shape", a.shape},
                {"texture", a.texture}};
}

AttributeSet attrs_from(const json& j) {
    return AttributeSet{j.at("object_type"), j.at("color"), j.at("size"), j.at("shape"),
                        j.at("texture")};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOFailure("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IOFailure("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOFailure("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

std::string world_config_to_json(const WorldConfig& c) {
    json j;
    j["image_size"] = c.image_size;
    j["proximity_threshold"] = c.proximity_threshold;
    j["proximity_kinds"] = c.proximity_kinds;
    j["actor_jitter"] = c.actor_jitter;
    j["camera_jitter_px"] = c.camera_jitter_px;
    j["hidden_tool_frames"] = c.hidden_tool_frames;
    j["hidden_tool_at"] = c.hidden_tool_at;
    j["predicates"] = c.predicates;
    j["train_views"] = c.train_views;

    j["entities"] = json::array();
    for (const auto& e : c.entities) {
        json je{{"name", e.name},
                {"kind", kind_name(e.kind)},
                {"attributes", attrs_json(e.attributes)},
                {"position", vec2_json(e.position)}};
        je["anchor_offsets"] = json::array();
        for (const auto& a : e.anchor_offsets) je["anchor_offsets"].push_back(vec2_json(a));
        j["entities"].push_back(je);
    }

    j["tool_for_predicate"] = c.tool_for_predicate;
    j["relation_descriptors"] = json::object();
    for (const auto& [pred, attrs] : c.relation_descriptors)
        j["relation_descriptors"][pred] = attrs_json(attrs);

    j["phases"] = json::array();
    for (const auto& p : c.phases) {
        json jp{{"name", p.name},
                {"duration", json::array({p.min_duration, p.max_duration})},
                {"tool", p.tool}};
        jp["signatures"] = json::array();
        for (const auto& s : p.signatures)
            jp["signatures"].push_back(
                json::array({s.subject.to_string(), s.predicate, s.object.to_string()}));
        jp["waypoints"] = json::object();
        for (const auto& [name, cands] : p.waypoints) {
            json jc = json::array();
            for (const auto& v : cands) jc.push_back(vec2_json(v));
            jp["waypoints"][name] = jc;
        }
        j["phases"].push_back(jp);
    }

    j["views"] = json::array();
    for (const auto& v : c.views) {
        json jv{{"view_id", v.view_id},
                {"linear", json::array({v.linear(0, 0), v.linear(0, 1), v.linear(1, 0),
                                        v.linear(1, 1)})},
                {"offset", vec2_json(v.offset)},
                {"background", static_cast<int>(v.background)}};
        jv["occluder"] = nullptr;
        if (v.occluder)
            jv["occluder"] = json::array(
                {(*v.occluder)[0], (*v.occluder)[1], (*v.occluder)[2], (*v.occluder)[3]});
        j["views"].push_back(jv);
    }
    return j.dump(2) + "\n";
}

WorldConfig world_config_from_json(const std::string& text) {
    const json j = json::parse(text);
    WorldConfig c;
    c.image_size = j.at("image_size");
    c.proximity_threshold = j.at("proximity_threshold");
    c.proximity_kinds = j.at("proximity_kinds").get<std::vector<std::string>>();
    c.actor_jitter = j.at("actor_jitter");
    c.camera_jitter_px = j.at("camera_jitter_px");
    c.hidden_tool_frames = j.at("hidden_tool_frames");
    c.hidden_tool_at = j.at("hidden_tool_at");
    c.predicates = j.at("predicates").get<std::vector<std::string>>();
    c.train_views = j.at("train_views").get<std::vector<int>>();

    for (const auto& je : j.at("entities")) {
        SceneEntity e;
        e.name = je.at("name");
        e.kind = kind_from_name(je.at("kind"));
        e.attributes = attrs_from(je.at("attributes"));
        e.position = vec2_from(je.at("position"));
        for (const auto& ja : je.at("anchor_offsets")) e.anchor_offsets.push_back(vec2_from(ja));
        c.entities.push_back(std::move(e));
    }

    c.tool_for_predicate = j.at("tool_for_predicate").get<std::map<std::string, std::string>>();
    for (const auto& [pred, ja] : j.at("relation_descriptors").items())
        c.relation_descriptors[pred] = attrs_from(ja);

    for (const auto& jp : j.at("phases")) {
        Phase p;
        p.name = jp.at("name");
        p.min_duration = jp.at("duration").at(0);
        p.max_duration = jp.at("duration").at(1);
        p.tool = jp.at("tool");
        for (const auto& js : jp.at("signatures"))
            p.signatures.push_back(PhaseSignature{EntitySelector::from_string(js.at(0)),
                                                  js.at(1),
                                                  EntitySelector::from_string(js.at(2))});
        for (const auto& [name, jc] : jp.at("waypoints").items()) {
            std::vector<Vec2> cands;
            for (const auto& jv : jc) cands.push_back(vec2_from(jv));
            p.waypoints[name] = std::move(cands);
        }
        c.phases.push_back(std::move(p));
    }

    for (const auto& jv : j.at("views")) {
        ViewSpec v;
        v.view_id = jv.at("view_id");
        const auto& l = jv.at("linear");
        v.linear << l.at(0).get<double>(), l.at(1).get<double>(), l.at(2).get<double>(),
            l.at(3).get<double>();
        v.offset = vec2_from(jv.at("offset"));
        v.background = static_cast<std::uint8_t>(jv.at("background").get<int>());
        if (!jv.at("occluder").is_null()) {
            const auto& o = jv.at("occluder");
            v.occluder = Eigen::Vector4d(o.at(0), o.at(1), o.at(2), o.at(3));
        }
        c.views.push_back(std::move(v));
    }
    return c;
}

void export_dataset(const std::vector<Take>& takes, const SplitSpec& split,
                    const WorldConfig& config, const std::filesystem::path& root) {
    if (takes.empty()) throw InvalidConfig("export_dataset: no takes");

    std::set<std::string> seen;
    std::vector<std::pair<const char*, const std::vector<std::string>*>> parts = {
        {"train", &split.train}, {"val", &split.val}, {"test", &split.test}};
    std::size_t listed = 0;
    for (const auto& [name, ids] : parts) {
        for (const auto& id : *ids) {
            if (!seen.insert(id).second)
                throw OverlappingSplits("take '" + id + "' appears in more than one split");
            ++listed;
        }
    }
    if (listed != takes.size())
        throw OverlappingSplits("splits do not cover the take set exactly");
    for (const auto& t : takes)
        if (!seen.count(t.take_id))
            throw OverlappingSplits("take '" + t.take_id + "' missing from the splits");

    std::filesystem::create_directories(root / "splits");
    write_file(root / "world_config.json", world_config_to_json(config));
    for (const auto& [name, ids] : parts) {
        std::string text;
        for (const auto& id : *ids) text += id + "\n";
        write_file(root / "splits" / (std::string(name) + ".txt"), text);
    }

    for (const auto& take : takes) {
        const auto dir = root / "takes" / take.take_id;
        std::string graphs, phases;
        for (const auto& frame : take.frames) {
            json jg{{"take_id", take.take_id}, {"t", frame.t}};
            jg["triplets"] = json::array();
            for (const auto& tr : frame.graph)
                jg["triplets"].push_back(json::array({tr.subject, tr.object, tr.predicate}));
            graphs += jg.dump() + "\n";
            phases += json{{"t", frame.t}, {"phase", frame.phase}}.dump() + "\n";

            for (const auto& [view_id, img] : frame.images) {
                const auto vdir = dir / ("view" + std::to_string(view_id));
                std::filesystem::create_directories(vdir);
                write_png(vdir / (std::to_string(frame.t) + ".png"), img);
            }
        }
        write_file(dir / "graphs.jsonl", graphs);
        write_file(dir / "phases.jsonl", phases);
    }
}

Image DatasetFrame::image(int view_id) const {
    return read_png(take_dir / ("view" + std::to_string(view_id)) /
                    (std::to_string(t) + ".png"));
}

std::vector<const DatasetFrame*> Dataset::split_frames(const std::string& which) const {
    const std::vector<std::string>* ids = nullptr;
    if (which == "train") ids = &split.train;
    else if (which == "val") ids = &split.val;
    else if (which == "test") ids = &split.test;
    else throw InvalidConfig("unknown split '" + which + "'");
    std::vector<const DatasetFrame*> out;
    for (const auto& id : *ids)
        for (const auto& f : take(id)) out.push_back(&f);
    return out;
}

const std::vector<DatasetFrame>& Dataset::take(const std::string& id) const {
    const auto it = takes.find(id);
    if (it == takes.end()) throw InvalidConfig("unknown take '" + id + "'");
    return it->second;
}

Dataset load_dataset(const std::filesystem::path& root) {
    Dataset ds;
    ds.root = root;
    ds.config = world_config_from_json(read_file(root / "world_config.json"));

    auto read_split = [&](const char* name) {
        std::vector<std::string> ids;
        std::istringstream in(read_file(root / "splits" / (std::string(name) + ".txt")));
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) ids.push_back(line);
        return ids;
    };
    ds.split.train = read_split("train");
    ds.split.val = read_split("val");
    ds.split.test = read_split("test");

    std::vector<std::string> all_ids;
    for (const auto* ids : {&ds.split.train, &ds.split.val, &ds.split.test})
        all_ids.insert(all_ids.end(), ids->begin(), ids->end());

    for (const auto& id : all_ids) {
        const auto dir = root / "takes" / id;
        std::map<int, std::string> phase_of;
        {
            std::istringstream in(read_file(dir / "phases.jsonl"));
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const json j = json::parse(line);
                phase_of[j.at("t")] = j.at("phase");
            }
        }
        std::vector<DatasetFrame> frames;
        std::istringstream in(read_file(dir / "graphs.jsonl"));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const json j = json::parse(line);
            DatasetFrame f;
            f.take_id = j.at("take_id");
            f.t = j.at("t");
            for (const auto& jt : j.at("triplets"))
                f.graph.insert(graph::Triplet{jt.at(0), jt.at(1), jt.at(2)});
            f.phase = phase_of.at(f.t);
            f.take_dir = dir;
            frames.push_back(std::move(f));
        }
        ds.takes[id] = std::move(frames);
    }
    return ds;
}

}  // namespace mvsg::world
