#include "mvsg/model/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace mvsg::model {

using nlohmann::json;

nlohmann::json ModelConfig::to_json() const {
    return json{{"d", d},
                {"enc_layers", enc_layers},
                {"pool_layers", pool_layers},
                {"dec_layers", dec_layers},
                {"heads", heads},
                {"patch", patch},
                {"image_size", image_size},
                {"context", context},
                {"mlp_ratio", mlp_ratio},
                {"max_views", max_views},
                {"init_seed", init_seed}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.d = j.value("d", c.d);
    c.enc_layers = j.value("enc_layers", c.enc_layers);
    c.pool_layers = j.value("pool_layers", c.pool_layers);
    c.dec_layers = j.value("dec_layers", c.dec_layers);
    c.heads = j.value("heads", c.heads);
    c.patch = j.value("patch", c.patch);
    c.image_size = j.value("image_size", c.image_size);
    c.context = j.value("context", c.context);
    c.mlp_ratio = j.value("mlp_ratio", c.mlp_ratio);
    c.max_views = j.value("max_views", c.max_views);
    c.init_seed = j.value("init_seed", c.init_seed);
    return c;
}

nlohmann::json TrainConfig::to_json() const {
    return json{{"steps", steps},
                {"batch_size", batch_size},
                {"lr", lr},
                {"warmup_steps", warmup_steps},
                {"grad_clip", grad_clip},
                {"threads", threads},
                {"seed", seed},
                {"view_augmentation", view_augmentation},
                {"single_view", single_view},
                {"single_view_id", single_view_id},
                {"symbolic", symbolic},
                {"modality", modality},
                {"n_distractors", n_distractors},
                {"temporal", temporal},
                {"temporal_history", temporal_history},
                {"short_window", short_window},
                {"max_long_triplets", max_long_triplets},
                {"instruction", instruction},
                {"log_every", log_every},
                {"max_generate_len", max_generate_len}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.steps = j.value("steps", c.steps);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.lr = j.value("lr", c.lr);
    c.warmup_steps = j.value("warmup_steps", c.warmup_steps);
    c.grad_clip = j.value("grad_clip", c.grad_clip);
    c.threads = j.value("threads", c.threads);
    c.seed = j.value("seed", c.seed);
    c.view_augmentation = j.value("view_augmentation", c.view_augmentation);
    c.single_view = j.value("single_view", c.single_view);
    c.single_view_id = j.value("single_view_id", c.single_view_id);
    c.symbolic = j.value("symbolic", c.symbolic);
    c.modality = j.value("modality", c.modality);
    c.n_distractors = j.value("n_distractors", c.n_distractors);
    c.temporal = j.value("temporal", c.temporal);
    c.temporal_history = j.value("temporal_history", c.temporal_history);
    c.short_window = j.value("short_window", c.short_window);
    c.max_long_triplets = j.value("max_long_triplets", c.max_long_triplets);
    c.instruction = j.value("instruction", c.instruction);
    c.log_every = j.value("log_every", c.log_every);
    c.max_generate_len = j.value("max_generate_len", c.max_generate_len);
    return c;
}

namespace {
constexpr char kMagic[8] = {'M', 'V', 'S', 'G', 'C', 'K', 'P', 'T'};
}

Checkpoint Checkpoint::from_net(Net<float>& source, const Tokenizer& tok,
                                const TrainConfig& train_cfg) {
    Checkpoint ckpt;
    ckpt.model = source.config();
    ckpt.train = train_cfg;
    ckpt.tokenizer = tok;
    ckpt.net = std::make_unique<Net<float>>(source.config(), tok.size());
    auto dst = ckpt.net->parameters();
    auto src = source.parameters();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i]->value = src[i]->value;
    return ckpt;
}

void save_checkpoint(Checkpoint& ckpt, const std::filesystem::path& path) {
    json header;
    header["model"] = ckpt.model.to_json();
    header["train"] = ckpt.train.to_json();
    header["vocab"] = ckpt.tokenizer.vocab();
    const std::string htext = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOFailure("cannot open checkpoint " + path.string());
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t hlen = htext.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));

    for (auto* p : ckpt.net->parameters()) {
        const std::uint64_t count = static_cast<std::uint64_t>(p->value.size());
        out.write(reinterpret_cast<const char*>(&count), sizeof(count));
        out.write(reinterpret_cast<const char*>(p->value.data()),
                  static_cast<std::streamsize>(count * sizeof(float)));
    }
    if (!out) throw IOFailure("checkpoint write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOFailure("cannot open checkpoint " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IOFailure(path.string() + " is not a checkpoint");
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    std::string htext(hlen, '\0');
    in.read(htext.data(), static_cast<std::streamsize>(hlen));
    const json header = json::parse(htext);

    Checkpoint ckpt;
    ckpt.model = ModelConfig::from_json(header.at("model"));
    ckpt.train = TrainConfig::from_json(header.at("train"));
    ckpt.tokenizer = Tokenizer(header.at("vocab").get<std::vector<std::string>>());
    ckpt.net = std::make_unique<Net<float>>(ckpt.model, ckpt.tokenizer.size());

    for (auto* p : ckpt.net->parameters()) {
        std::uint64_t count = 0;
        in.read(reinterpret_cast<char*>(&count), sizeof(count));
        if (count != static_cast<std::uint64_t>(p->value.size()))
            throw IOFailure("checkpoint parameter size mismatch for " + p->name);
        in.read(reinterpret_cast<char*>(p->value.data()),
                static_cast<std::streamsize>(count * sizeof(float)));
    }
    if (!in) throw IOFailure("checkpoint read failed for " + path.string());
    return ckpt;
}

}  // namespace mvsg::model
