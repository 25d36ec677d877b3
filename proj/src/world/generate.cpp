#include "mvsg/world/generate.hpp"

#include <algorithm>

namespace mvsg::world {

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::actor: return "actor";
        case Kind::tool: return "tool";
        case Kind::equipment: return "equipment";
    }
    throw std::logic_error("bad kind");
}

Kind kind_from_name(const std::string& s) {
    if (s == "actor") return Kind::actor;
    if (s == "tool") return Kind::tool;
    if (s == "equipment") return Kind::equipment;
    throw InvalidConfig("unknown kind '" + s + "'");
}

EntitySelector EntitySelector::from_string(const std::string& s) {
    const auto pos = s.find(':');
    if (pos == std::string::npos) throw InvalidConfig("bad selector '" + s + "'");
    return EntitySelector{kind_from_name(s.substr(0, pos)), s.substr(pos + 1)};
}

std::string EntitySelector::to_string() const { return kind_name(kind) + ":" + name; }

const SceneEntity& WorldConfig::entity(const std::string& name) const {
    for (const auto& e : entities)
        if (e.name == name) return e;
    throw InvalidConfig("unknown entity '" + name + "'");
}

const ViewSpec& WorldConfig::view(int id) const {
    for (const auto& v : views)
        if (v.view_id == id) return v;
    throw InvalidConfig("unknown view " + std::to_string(id));
}

graph::Vocabulary WorldConfig::vocabulary() const {
    return graph::Vocabulary(graph_entity_names(), predicates);
}

std::vector<std::string> WorldConfig::graph_entity_names() const {
    std::vector<std::string> names;
    for (const auto& e : entities)
        if (e.kind != Kind::tool) names.push_back(e.name);
    return names;
}

std::vector<std::string> WorldConfig::actor_names() const {
    std::vector<std::string> names;
    for (const auto& e : entities)
        if (e.kind == Kind::actor) names.push_back(e.name);
    return names;
}

const AttributeSet& WorldConfig::predicate_descriptor(const std::string& predicate) const {
    const auto tool_it = tool_for_predicate.find(predicate);
    if (tool_it != tool_for_predicate.end()) return entity(tool_it->second).attributes;
    const auto rel_it = relation_descriptors.find(predicate);
    if (rel_it != relation_descriptors.end()) return rel_it->second;
    throw InvalidConfig("no descriptor source for predicate '" + predicate + "'");
}

void WorldConfig::validate() const {
    if (entities.empty()) throw InvalidConfig("empty entity catalog");
    if (predicates.empty()) throw InvalidConfig("empty predicate catalog");
    if (phases.empty()) throw InvalidConfig("empty phase list");
    if (views.empty()) throw InvalidConfig("no views configured");
    vocabulary();  // throws on malformed names
    for (const auto& p : phases) {
        if (p.min_duration < 1 || p.max_duration < p.min_duration)
            throw InvalidConfig("phase '" + p.name + "' has a zero or inverted duration range");
        if (p.signatures.empty())
            throw InvalidConfig("phase '" + p.name + "' has no signature relations");
        for (const auto& s : p.signatures) {
            if (std::find(predicates.begin(), predicates.end(), s.predicate) == predicates.end())
                throw InvalidConfig("signature predicate '" + s.predicate + "' not in catalog");
            entity(s.subject.name);
            entity(s.object.name);
        }
        if (!p.tool.empty() && entity(p.tool).kind != Kind::tool)
            throw InvalidConfig("phase tool '" + p.tool + "' is not a tool entity");
    }
    for (const auto& e : entities) {
        if (e.position.minCoeff() < 0.0 || e.position.maxCoeff() > 1.0)
            throw InvalidConfig("entity '" + e.name + "' outside the canonical frame");
        if (e.kind == Kind::actor && e.anchor_offsets.empty())
            throw InvalidConfig("actor '" + e.name + "' has no hand anchor");
    }
    for (const auto& pred : predicates)
        predicate_descriptor(pred);
    for (int id : train_views) view(id);
}

graph::SceneGraph ground_truth_graph(const FrameState& state, const Phase& phase,
                                     const WorldConfig& config) {
    graph::SceneGraph g;
    for (const auto& sig : phase.signatures)
        g.insert(graph::Triplet{sig.subject.name, sig.object.name, sig.predicate});

    std::vector<const SceneEntity*> near_kind;
    for (const auto& e : config.entities) {
        if (std::find(config.proximity_kinds.begin(), config.proximity_kinds.end(),
                      kind_name(e.kind)) == config.proximity_kinds.end())
            continue;
        near_kind.push_back(&e);
    }
    for (std::size_t i = 0; i < near_kind.size(); ++i) {
        for (std::size_t j = i + 1; j < near_kind.size(); ++j) {
            const auto& a = *near_kind[i];
            const auto& b = *near_kind[j];
            const auto pa = state.positions.find(a.name);
            const auto pb = state.positions.find(b.name);
            if (pa == state.positions.end() || pb == state.positions.end()) continue;
            if ((pa->second - pb->second).norm() <= config.proximity_threshold) {
                const bool a_first = a.name < b.name;
                g.insert(graph::Triplet{a_first ? a.name : b.name, a_first ? b.name : a.name,
                                        "closeTo"});
            }
        }
    }
    return g;
}

namespace {

struct PhaseRun {
    const Phase* phase;
    int length;
    int hidden_begin;  // frame offset within the phase, -1 if none
    int hidden_len;
    std::map<std::string, Vec2> waypoint_choice;
};

}  // namespace

Take generate_take(std::uint64_t seed, const WorldConfig& config) {
    config.validate();
    Rng rng(Rng::mix(seed, 0x74616b65));

    Take take;
    take.take_id = "take" + std::to_string(seed);
    take.seed = seed;
    take.entities = config.entities;

    // Phase schedule and per-phase waypoint choices.
    std::vector<PhaseRun> runs;
    for (const auto& phase : config.phases) {
        PhaseRun run;
        run.phase = &phase;
        run.length = rng.uniform_int(phase.min_duration, phase.max_duration);
        run.hidden_begin = -1;
        run.hidden_len = 0;
        if (!phase.tool.empty() && config.hidden_tool_frames > 0) {
            run.hidden_len = std::min(config.hidden_tool_frames, run.length - 1);
            run.hidden_begin = static_cast<int>(config.hidden_tool_at * run.length);
            run.hidden_begin = std::min(run.hidden_begin, run.length - run.hidden_len);
        }
        for (const auto& [name, candidates] : phase.waypoints)
            run.waypoint_choice[name] = candidates[rng.uniform_u64(candidates.size())];
        runs.push_back(run);
    }

    int t = 0;
    for (const auto& run : runs) {
        for (int k = 0; k < run.length; ++k, ++t) {
            Frame frame;
            frame.t = t;
            frame.phase = run.phase->name;

            FrameState& st = frame.state;
            const bool tool_hidden =
                run.hidden_begin >= 0 && k >= run.hidden_begin && k < run.hidden_begin + run.hidden_len;

            for (const auto& e : take.entities) {
                Vec2 pos = e.position;
                const auto wp = run.waypoint_choice.find(e.name);
                if (wp != run.waypoint_choice.end()) pos = wp->second;
                if (e.kind == Kind::actor) {
                    pos.x() += rng.uniform(-config.actor_jitter, config.actor_jitter);
                    pos.y() += rng.uniform(-config.actor_jitter, config.actor_jitter);
                    pos = pos.cwiseMax(0.0).cwiseMin(1.0);
                }
                st.positions[e.name] = pos;
                st.visible[e.name] = e.kind != Kind::tool;
                if (e.kind == Kind::actor) st.hand_occupied[e.name] = false;
            }

            // The phase's tool rides the lead actor's hand unless hidden.
            if (!run.phase->tool.empty()) {
                const auto& holder = config.entity(run.phase->signatures.front().subject.name);
                const Vec2 hand = holder.anchor_at(st.positions.at(holder.name));
                st.positions[run.phase->tool] = hand;
                st.visible[run.phase->tool] = !tool_hidden;
                st.hand_occupied[holder.name] = true;  // in use even while out of sight
            }

            for (const auto& view : config.views) {
                const std::uint64_t key = Rng::mix(seed, static_cast<std::uint64_t>(t),
                                                   static_cast<std::uint64_t>(view.view_id));
                const double jx = (static_cast<double>(key & 0xffff) / 65535.0 * 2.0 - 1.0) *
                                  config.camera_jitter_px;
                const double jy =
                    (static_cast<double>((key >> 16) & 0xffff) / 65535.0 * 2.0 - 1.0) *
                    config.camera_jitter_px;
                st.camera_jitter[view.view_id] = Vec2(jx, jy);
            }

            frame.graph = ground_truth_graph(st, *run.phase, config);
            frame.images = render_views(take.entities, st, config.views, config.image_size);
            take.frames.push_back(std::move(frame));
        }
    }
    return take;
}

const SceneEntity& Take::entity(const std::string& name) const {
    for (const auto& e : entities)
        if (e.name == name) return e;
    throw InvalidConfig("unknown entity '" + name + "' in take " + take_id);
}

WorldConfig default_world_config() {
    WorldConfig c;

    auto actor = [](std::string name, std::string color, std::string size, Vec2 pos) {
        SceneEntity e;
        e.name = std::move(name);
        e.kind = Kind::actor;
        e.attributes = {"actor", std::move(color), std::move(size), "disc", "solid"};
        e.position = pos;
        e.anchor_offsets = {Vec2(0.045, -0.02)};
        return e;
    };
    auto equip = [](std::string name, std::string color, std::string size, std::string shape,
                    std::string texture, Vec2 pos) {
        SceneEntity e;
        e.name = std::move(name);
        e.kind = Kind::equipment;
        e.attributes = {"equipment", std::move(color), std::move(size), std::move(shape),
                        std::move(texture)};
        e.position = pos;
        e.anchor_offsets = {Vec2(0.0, -0.055)};
        return e;
    };
    auto tool = [](std::string name, std::string color, std::string shape) {
        SceneEntity e;
        e.name = std::move(name);
        e.kind = Kind::tool;
        e.attributes = {"tool", std::move(color), "small", std::move(shape), "solid"};
        e.position = Vec2(0.5, 0.5);
        return e;
    };

    c.entities = {
        actor("lead", "blue", "medium", Vec2(0.38, 0.38)),
        actor("assistant", "cyan", "medium", Vec2(0.72, 0.78)),
        actor("nurse", "magenta", "medium", Vec2(0.50, 0.12)),
        actor("patient", "white", "large", Vec2(0.60, 0.62)),
        equip("table", "gray", "large", "slab", "solid", Vec2(0.60, 0.64)),
        equip("tray", "silver", "medium", "slab", "banded", Vec2(0.18, 0.22)),
        equip("monitor", "black", "medium", "panel", "solid", Vec2(0.16, 0.76)),
        equip("machine", "teal", "large", "cross", "solid", Vec2(0.82, 0.20)),
        // drill and saw share shape and size so color is the only cue
        tool("drill", "orange", "rod"),
        tool("saw", "green", "rod"),
        tool("scalpel", "silver", "blade"),
        tool("hammer", "brown", "tee"),
        tool("needle", "yellow", "hook"),
        tool("cementgun", "purple", "wedge"),
    };

    c.predicates = {"assisting", "cementing", "closeTo",  "cutting", "drilling",
                    "hammering", "holding",   "sawing", "suturing"};
    c.tool_for_predicate = {{"drilling", "drill"},   {"sawing", "saw"},
                            {"cutting", "scalpel"},  {"hammering", "hammer"},
                            {"suturing", "needle"},  {"cementing", "cementgun"}};
    c.relation_descriptors = {
        {"holding", {"relation", "white", "small", "cross", "solid"}},
        {"assisting", {"relation", "black", "small", "cross", "solid"}},
        {"closeTo", {"relation", "gray", "small", "cross", "solid"}},
    };

    auto sig = [](const std::string& s, const std::string& p, const std::string& o) {
        return PhaseSignature{EntitySelector::from_string(s), p, EntitySelector::from_string(o)};
    };

    const Vec2 lead_active(0.52, 0.56), lead_idle(0.38, 0.38);
    const Vec2 asst_assist(0.44, 0.50), asst_prep(0.20, 0.29), asst_idle(0.72, 0.78);
    const Vec2 nurse_tray(0.22, 0.26);
    const std::vector<Vec2> nurse_roam = {Vec2(0.79, 0.25), Vec2(0.19, 0.71), Vec2(0.50, 0.12)};

    auto phase = [&](std::string name, int lo, int hi, std::vector<PhaseSignature> sigs,
                     std::string tool_name, Vec2 lead_pos, Vec2 asst_pos,
                     std::vector<Vec2> nurse_pos) {
        Phase p;
        p.name = std::move(name);
        p.min_duration = lo;
        p.max_duration = hi;
        p.signatures = std::move(sigs);
        p.tool = std::move(tool_name);
        p.waypoints["lead"] = {lead_pos};
        p.waypoints["assistant"] = {asst_pos};
        p.waypoints["nurse"] = std::move(nurse_pos);
        return p;
    };

    c.phases = {
        phase("prep", 3, 5, {sig("actor:assistant", "holding", "equipment:tray")}, "", lead_idle,
              asst_prep, nurse_roam),
        phase("incision", 5, 8,
              {sig("actor:lead", "cutting", "actor:patient"),
               sig("actor:assistant", "assisting", "actor:lead")},
              "scalpel", lead_active, asst_assist, nurse_roam),
        phase("drilling", 5, 8,
              {sig("actor:lead", "drilling", "actor:patient"),
               sig("actor:assistant", "assisting", "actor:lead")},
              "drill", lead_active, asst_assist, nurse_roam),
        phase("sawing", 5, 8,
              {sig("actor:lead", "sawing", "actor:patient"),
               sig("actor:assistant", "assisting", "actor:lead")},
              "saw", lead_active, asst_assist, nurse_roam),
        phase("hammering", 5, 8,
              {sig("actor:lead", "hammering", "actor:patient"),
               sig("actor:assistant", "assisting", "actor:lead")},
              "hammer", lead_active, asst_assist, nurse_roam),
        phase("cementing", 5, 8,
              {sig("actor:lead", "cementing", "actor:patient"),
               sig("actor:nurse", "holding", "equipment:tray")},
              "cementgun", lead_active, asst_idle, {nurse_tray}),
        phase("suturing", 5, 8,
              {sig("actor:lead", "suturing", "actor:patient"),
               sig("actor:nurse", "holding", "equipment:tray")},
              "needle", lead_active, asst_idle, {nurse_tray}),
        phase("close", 3, 5, {sig("actor:nurse", "holding", "equipment:tray")}, "", lead_idle,
              asst_idle, {nurse_tray}),
    };

    auto view = [](int id, double a, double b, double c2, double d, double tx, double ty,
                   std::optional<Eigen::Vector4d> occ, std::uint8_t bg) {
        ViewSpec v;
        v.view_id = id;
        v.linear << a, b, c2, d;
        v.offset = Vec2(tx, ty);
        v.occluder = occ;
        v.background = bg;
        return v;
    };

    c.views = {
        view(1, 64, 0, 0, 64, 0, 0, Eigen::Vector4d(50, 0, 64, 64), 205),
        view(2, 58, 0, 0, 58, 3, 3, Eigen::Vector4d(0, 0, 30, 30), 200),
        view(3, -64, 0, 0, 64, 64, 0, Eigen::Vector4d(0, 52, 64, 64), 210),
        view(4, 0, -64, 64, 0, 64, 0, Eigen::Vector4d(0, 0, 12, 64), 198),
        view(5, -52, 0, 0, -52, 58, 58, std::nullopt, 215),
        view(6, 0, 52, -52, 0, 6, 58, std::nullopt, 203),
    };
    c.train_views = {1, 2, 3, 4};
    return c;
}

}  // namespace mvsg::world
