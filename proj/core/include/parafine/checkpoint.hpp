#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "parafine/tensor.hpp"

namespace parafine {

// Named parameter registry. Models register their trainables here once;
// the optimizer and the checkpoint code both walk the same list, so a
// loaded model and a freshly trained one cannot disagree about ordering.
class ParamSet {
public:
    Tensor add(const std::string& name, Tensor tensor);
    const Tensor& find(const std::string& name) const;
    bool contains(const std::string& name) const;

    const std::vector<std::pair<std::string, Tensor>>& entries() const { return entries_; }
    std::vector<Tensor> tensors() const;
    std::vector<std::pair<std::string, Tensor>> named_tensors() const { return entries_; }
    std::size_t total_values() const;

private:
    std::vector<std::pair<std::string, Tensor>> entries_;
};

// Flat JSON checkpoint: format version, free-form string metadata, and a
// map from parameter name to shape + row-major values. Doubles survive the
// round trip exactly (shortest-representation printing).
inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const ParamSet& params,
                     const std::map<std::string, std::string>& metadata);

// Fills the tensors already registered in `params` and returns the stored
// metadata. Version or shape mismatch and missing/extra parameters are
// all load failures: a silently partial model is worse than none.
std::map<std::string, std::string> load_checkpoint(const std::string& path, ParamSet& params);

// Metadata stored alongside a checkpoint without touching tensors.
std::map<std::string, std::string> read_checkpoint_metadata(const std::string& path);

}  // namespace parafine
