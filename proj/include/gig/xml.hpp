#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gig::xml {

// Minimal DOM for pathway documents. Element and attribute names are stored
// without namespace prefixes.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::string text;        // concatenated character data directly inside this element
    std::size_t offset = 0;  // byte position of the start tag

    const std::string* attribute(std::string_view key) const;
    // First attribute present among keys, compared case-insensitively.
    std::optional<std::string> attribute_any(std::initializer_list<std::string_view> keys) const;
    const Element* child(std::string_view child_name) const;
};

// Parses a complete document. Throws XmlParseError (with byte offset) for
// malformed input. Returns nullopt when the document has no root element.
std::optional<Element> parse(std::string_view bytes);

std::string escape(std::string_view raw);

} // namespace gig::xml
