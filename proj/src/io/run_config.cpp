#include "uagan/io/run_config.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "uagan/errors.hpp"

namespace uagan {

std::string format_real(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

double parse_real(std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw FormatError(FormatErrorCode::malformed, "not a real number: '" + std::string(s) + "'");
    }
    return v;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

using KeyValues = std::map<std::string, std::pair<std::string, std::size_t>>;

KeyValues parse_lines(std::string_view text, const std::set<std::string>& allowed) {
    KeyValues kv;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!allowed.contains(key)) throw ConfigError(where + "unknown key '" + key + "'");
        if (kv.contains(key)) throw ConfigError(where + "duplicate key '" + key + "'");
        kv[key] = {value, line_no};
    }
    return kv;
}

std::string where(const KeyValues::value_type& e) {
    return "line " + std::to_string(e.second.second) + " (" + e.first + "): ";
}

std::uint64_t to_u64(const KeyValues::value_type& e) {
    const std::string& s = e.second.first;
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError(where(e) + "expected an integer");
    return v;
}

double to_real(const KeyValues::value_type& e) {
    try {
        return parse_real(e.second.first);
    } catch (const FormatError&) {
        throw ConfigError(where(e) + "expected a real number");
    }
}

std::vector<std::uint64_t> to_list(const KeyValues::value_type& e) {
    std::vector<std::uint64_t> out;
    std::string_view s = e.second.first;
    if (trim(s).empty()) return out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        std::uint64_t v = 0;
        const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || r.ec != std::errc() || r.ptr != item.data() + item.size()) {
            throw ConfigError(where(e) + "expected a comma-separated integer list");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        s = s.substr(comma + 1);
    }
    return out;
}

std::string render_list(const std::vector<std::uint64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out;
}

template <typename T>
std::vector<std::uint64_t> widen(const std::vector<T>& v) {
    return {v.begin(), v.end()};
}

Domain to_dataset(const KeyValues::value_type& e) {
    if (e.second.first == "ring2d") return Domain::ring2d;
    if (e.second.first == "sprites") return Domain::sprites;
    throw ConfigError(where(e) + "dataset must be ring2d or sprites");
}

}  // namespace

TrainConfig parse_train_config(std::string_view text) {
    static const std::set<std::string> keys{"dataset", "latent_dim", "g_layers", "d_layers",
                                            "lr_g", "lr_d", "batch_size", "iterations",
                                            "checkpoint_every", "seed"};
    const auto kv = parse_lines(text, keys);
    TrainConfig cfg;
    if (const auto it = kv.find("dataset"); it != kv.end()) cfg = default_train_config(to_dataset(*it));
    for (const auto& e : kv) {
        const auto& k = e.first;
        if (k == "latent_dim") cfg.latent_dim = to_u64(e);
        else if (k == "g_layers") { auto l = to_list(e); cfg.g_layers.assign(l.begin(), l.end()); }
        else if (k == "d_layers") { auto l = to_list(e); cfg.d_layers.assign(l.begin(), l.end()); }
        else if (k == "lr_g") cfg.lr_g = to_real(e);
        else if (k == "lr_d") cfg.lr_d = to_real(e);
        else if (k == "batch_size") cfg.batch_size = to_u64(e);
        else if (k == "iterations") cfg.iterations = to_u64(e);
        else if (k == "checkpoint_every") cfg.checkpoint_every = to_u64(e);
        else if (k == "seed") cfg.seed = to_u64(e);
    }
    validate(cfg);
    return cfg;
}

std::string render_train_config(const TrainConfig& cfg) {
    std::ostringstream out;
    out << "dataset = " << to_string(cfg.dataset) << '\n'
        << "latent_dim = " << cfg.latent_dim << '\n'
        << "g_layers = " << render_list(widen(cfg.g_layers)) << '\n'
        << "d_layers = " << render_list(widen(cfg.d_layers)) << '\n'
        << "lr_g = " << format_real(cfg.lr_g) << '\n'
        << "lr_d = " << format_real(cfg.lr_d) << '\n'
        << "batch_size = " << cfg.batch_size << '\n'
        << "iterations = " << cfg.iterations << '\n'
        << "checkpoint_every = " << cfg.checkpoint_every << '\n'
        << "seed = " << cfg.seed << '\n';
    return out.str();
}

FinetuneConfig parse_finetune_config(std::string_view text) {
    static const std::set<std::string> keys{"base_checkpoint", "loss_variant", "lr_g", "batch_size",
                                            "iterations", "snapshot_schedule", "grad_clip", "seed"};
    const auto kv = parse_lines(text, keys);
    FinetuneConfig cfg;
    for (const auto& e : kv) {
        const auto& k = e.first;
        const std::string& v = e.second.first;
        if (k == "base_checkpoint") cfg.base_checkpoint = v;
        else if (k == "loss_variant") cfg.loss_variant = parse_variant(v);
        else if (k == "lr_g") cfg.lr_g = v == "base" ? std::nullopt : std::optional<double>(to_real(e));
        else if (k == "batch_size") cfg.batch_size = to_u64(e);
        else if (k == "iterations") cfg.iterations = to_u64(e);
        else if (k == "grad_clip") cfg.grad_clip = v == "off" ? std::nullopt : std::optional<double>(to_real(e));
        else if (k == "seed") cfg.seed = to_u64(e);
        else if (k == "snapshot_schedule") {
            if (v.rfind("every", 0) == 0) {
                KeyValues::value_type stride{k, {std::string(trim(std::string_view(v).substr(5))), e.second.second}};
                cfg.snapshot_schedule = SnapshotSchedule{to_u64(stride), {}};
            } else {
                cfg.snapshot_schedule = SnapshotSchedule{std::nullopt, to_list(e)};
            }
        }
    }
    validate(cfg);
    return cfg;
}

std::string render_finetune_config(const FinetuneConfig& cfg) {
    std::ostringstream out;
    out << "base_checkpoint = " << cfg.base_checkpoint << '\n'
        << "loss_variant = " << to_string(cfg.loss_variant) << '\n'
        << "lr_g = " << (cfg.lr_g ? format_real(*cfg.lr_g) : std::string("base")) << '\n'
        << "batch_size = " << cfg.batch_size << '\n'
        << "iterations = " << cfg.iterations << '\n'
        << "snapshot_schedule = "
        << (cfg.snapshot_schedule.stride ? "every " + std::to_string(*cfg.snapshot_schedule.stride)
                                         : render_list(cfg.snapshot_schedule.iterations))
        << '\n'
        << "grad_clip = " << (cfg.grad_clip ? format_real(*cfg.grad_clip) : std::string("off")) << '\n'
        << "seed = " << cfg.seed << '\n';
    return out.str();
}

namespace {

std::string read_text(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return {bytes.begin(), bytes.end()};
}

}  // namespace

TrainConfig load_train_config(const std::filesystem::path& path) { return parse_train_config(read_text(path)); }

FinetuneConfig load_finetune_config(const std::filesystem::path& path) {
    return parse_finetune_config(read_text(path));
}

}  // namespace uagan
