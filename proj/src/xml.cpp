#include "gig/xml.hpp"

#include "gig/errors.hpp"
#include "gig/io.hpp"

#include <expat.h>

#include <algorithm>
#include <memory>
#include <new>

namespace gig::xml {

namespace {

std::string local_name(std::string_view qname) {
    auto colon = qname.rfind(':');
    return std::string(colon == std::string_view::npos ? qname : qname.substr(colon + 1));
}

// Expat callbacks assembling the element tree.
struct Builder {
    XML_Parser parser = nullptr;
    std::vector<Element> stack;
    std::optional<Element> root;
    bool saw_element = false;

    static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
        auto& b = *static_cast<Builder*>(self);
        b.saw_element = true;
        Element e;
        e.name = local_name(name);
        e.offset = static_cast<std::size_t>(std::max<XML_Index>(0, XML_GetCurrentByteIndex(b.parser)));
        for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
            std::string_view key = attrs[i];
            if (key == "xmlns" || key.starts_with("xmlns:")) continue;
            e.attributes.emplace_back(local_name(key), attrs[i + 1]);
        }
        b.stack.push_back(std::move(e));
    }

    static void on_end(void* self, const XML_Char*) {
        auto& b = *static_cast<Builder*>(self);
        Element done = std::move(b.stack.back());
        b.stack.pop_back();
        if (b.stack.empty()) b.root = std::move(done);
        else b.stack.back().children.push_back(std::move(done));
    }

    static void on_text(void* self, const XML_Char* text, int len) {
        auto& b = *static_cast<Builder*>(self);
        if (!b.stack.empty()) b.stack.back().text.append(text, static_cast<std::size_t>(len));
    }
};

} // namespace

const std::string* Element::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return &v;
    }
    return nullptr;
}

std::optional<std::string> Element::attribute_any(std::initializer_list<std::string_view> keys) const {
    for (auto key : keys) {
        for (const auto& [k, v] : attributes) {
            if (to_lower(k) == to_lower(key)) return v;
        }
    }
    return std::nullopt;
}

const Element* Element::child(std::string_view child_name) const {
    for (const auto& c : children) {
        if (c.name == child_name) return &c;
    }
    return nullptr;
}

std::optional<Element> parse(std::string_view bytes) {
    Builder b;
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate(nullptr), XML_ParserFree);
    if (!parser) throw std::bad_alloc();
    XML_SetUserData(parser.get(), &b);
    XML_SetElementHandler(parser.get(), Builder::on_start, Builder::on_end);
    XML_SetCharacterDataHandler(parser.get(), Builder::on_text);
    b.parser = parser.get();

    constexpr std::size_t chunk = std::size_t{1} << 30;
    std::size_t pos = 0;
    do {
        auto len = std::min(chunk, bytes.size() - pos);
        bool last = pos + len == bytes.size();
        if (XML_Parse(parser.get(), bytes.data() + pos, static_cast<int>(len), last) == XML_STATUS_ERROR) {
            auto code = XML_GetErrorCode(parser.get());
            if (code == XML_ERROR_NO_ELEMENTS && !b.saw_element) return std::nullopt;
            auto at = XML_GetCurrentByteIndex(parser.get());
            throw XmlParseError(at < 0 ? pos : static_cast<std::size_t>(at), XML_ErrorString(code));
        }
        pos += len;
    } while (pos < bytes.size());
    return std::move(b.root);
}

std::string escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace gig::xml
