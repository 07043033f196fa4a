#pragma once

#include <string>
#include <vector>

#include "parafine/tensor.hpp"
#include "parafine/text.hpp"

namespace parafine {

struct Lexicons;

inline constexpr int kAttributeCount = 40;

enum class AttrGroup { lexical, syntactic, discourse };

const char* attr_group_name(AttrGroup group);

struct AttributeSpec {
    int id;
    const char* name;
    AttrGroup group;
    const char* unit;
    // The trailing four indices complete the controlled set to 40; the
    // leading 36 follow the published index list verbatim.
    bool supplemental;
};

const std::vector<AttributeSpec>& attribute_registry();
AttrGroup group_of(int attribute_id);
int attribute_id(const std::string& name);

// Registry serialized as JSON text: [{id, name, group, unit, supplemental}].
std::string registry_json();

// All 40 raw attribute values in registry order. Throws when the text has
// no word tokens; ratios with zero denominators are 0.
std::vector<Real> extract_attributes(const TokenizedText& text, const Lexicons& lexicons);
std::vector<Real> extract_attributes(const std::string& text, const Lexicons& lexicons);

}  // namespace parafine
