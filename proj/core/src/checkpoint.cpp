#include "parafine/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace parafine {

using nlohmann::json;

Tensor ParamSet::add(const std::string& name, Tensor tensor) {
    if (contains(name)) throw std::invalid_argument("parameter registered twice: " + name);
    entries_.emplace_back(name, tensor);
    return tensor;
}

const Tensor& ParamSet::find(const std::string& name) const {
    for (const auto& [n, t] : entries_) {
        if (n == name) return t;
    }
    throw std::out_of_range("no parameter named " + name);
}

bool ParamSet::contains(const std::string& name) const {
    for (const auto& [n, t] : entries_) {
        if (n == name) return true;
    }
    return false;
}

std::vector<Tensor> ParamSet::tensors() const {
    std::vector<Tensor> out;
    out.reserve(entries_.size());
    for (const auto& [n, t] : entries_) out.push_back(t);
    return out;
}

std::size_t ParamSet::total_values() const {
    std::size_t total = 0;
    for (const auto& [n, t] : entries_) total += t.numel();
    return total;
}

namespace {

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("checkpoint " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
        throw std::runtime_error("checkpoint " + path + " has no format_version");
    }
    const int version = doc["format_version"].get<int>();
    if (version != kCheckpointVersion) {
        throw std::runtime_error("checkpoint " + path + " has format_version " +
                                 std::to_string(version) + ", expected " +
                                 std::to_string(kCheckpointVersion));
    }
    return doc;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamSet& params,
                     const std::map<std::string, std::string>& metadata) {
    json doc;
    doc["format_version"] = kCheckpointVersion;
    doc["metadata"] = metadata;
    json tensors = json::object();
    for (const auto& [name, tensor] : params.entries()) {
        json entry;
        entry["shape"] = tensor.shape();
        entry["values"] = std::vector<Real>(tensor.data().begin(), tensor.data().end());
        tensors[name] = std::move(entry);
    }
    doc["params"] = std::move(tensors);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << doc.dump();
    out << '\n';
    if (!out) throw std::runtime_error("short write on checkpoint: " + path);
}

std::map<std::string, std::string> load_checkpoint(const std::string& path, ParamSet& params) {
    const json doc = parse_file(path);
    if (!doc.contains("params") || !doc["params"].is_object()) {
        throw std::runtime_error("checkpoint " + path + " has no params map");
    }
    const json& stored = doc["params"];

    for (const auto& [name, tensor] : params.entries()) {
        if (!stored.contains(name)) {
            throw std::runtime_error("checkpoint " + path + " is missing parameter " + name);
        }
        const json& entry = stored[name];
        const Shape shape = entry.at("shape").get<Shape>();
        if (shape != tensor.shape()) {
            throw std::runtime_error("checkpoint " + path + ": parameter " + name + " has shape " +
                                     shape_str(shape) + ", model expects " +
                                     shape_str(tensor.shape()));
        }
        const auto values = entry.at("values").get<std::vector<Real>>();
        if (values.size() != tensor.numel()) {
            throw std::runtime_error("checkpoint " + path + ": parameter " + name + " has " +
                                     std::to_string(values.size()) + " values for shape " +
                                     shape_str(shape));
        }
        Tensor t = tensor;
        std::copy(values.begin(), values.end(), t.mutable_data().begin());
    }
    for (const auto& [name, entry] : stored.items()) {
        if (!params.contains(name)) {
            throw std::runtime_error("checkpoint " + path + " carries unknown parameter " + name);
        }
    }

    std::map<std::string, std::string> metadata;
    if (doc.contains("metadata")) metadata = doc["metadata"].get<std::map<std::string, std::string>>();
    return metadata;
}

std::map<std::string, std::string> read_checkpoint_metadata(const std::string& path) {
    const json doc = parse_file(path);
    if (!doc.contains("metadata")) return {};
    return doc["metadata"].get<std::map<std::string, std::string>>();
}

}  // namespace parafine
