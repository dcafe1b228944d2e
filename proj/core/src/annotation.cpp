#include "roadocc/annotation.hpp"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "roadocc/error.hpp"

namespace roadocc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

enum class Text { none, filename, name, user };

struct PolygonLine {
  std::size_t object, polygon;
  long line;
};

class Reader {
 public:
  explicit Reader(XML_Parser parser) : parser_(parser) {}

  static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    static_cast<Reader*>(self)->start(name, attrs);
  }
  static void on_end(void* self, const XML_Char* name) { static_cast<Reader*>(self)->end(name); }
  static void on_text(void* self, const XML_Char* text, int len) {
    auto* r = static_cast<Reader*>(self);
    if (r->text_ != Text::none) r->buffer_.append(text, static_cast<std::size_t>(len));
  }

  ParsedAnnotation result;
  std::string error;
  long error_line = 0;
  bool saw_root = false, saw_filename = false, saw_size = false;
  std::vector<PolygonLine> polygon_lines;

 private:
  long line() const { return static_cast<long>(XML_GetCurrentLineNumber(parser_)); }

  void fail(std::string message) {
    if (error.empty()) {
      error = std::move(message);
      error_line = line();
    }
    XML_StopParser(parser_, XML_FALSE);
  }

  void warn(const std::string& message) {
    result.warnings.push_back("line " + std::to_string(line()) + ": " + message);
  }

  static const char* attribute(const XML_Char** attrs, std::string_view want) {
    for (int i = 0; attrs[i] != nullptr; i += 2) {
      if (std::string_view(attrs[i]) == want) return attrs[i + 1];
    }
    return nullptr;
  }

  void check_attributes(const XML_Char** attrs, std::string_view element,
                        std::initializer_list<std::string_view> known) {
    for (int i = 0; attrs[i] != nullptr; i += 2) {
      const std::string_view key = attrs[i];
      bool ok = false;
      for (auto k : known) ok = ok || k == key;
      if (!ok) warn("unknown attribute '" + std::string(key) + "' on <" + std::string(element) + ">");
    }
  }

  template <typename T>
  bool number(const char* text, T& out) {
    if (text == nullptr) return false;
    const std::string_view s = trim(text);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
  }

  void start(const XML_Char* raw, const XML_Char** attrs) {
    // Expat may still deliver the matching end event after a stop request.
    if (!error.empty()) return;
    const std::string_view name = raw;
    if (skip_depth_ > 0) {
      ++skip_depth_;
      return;
    }
    const std::string_view parent = stack_.empty() ? std::string_view{} : std::string_view(stack_.back());
    auto& doc = result.document;
    bool known = true;
    if (stack_.empty()) {
      if (name != "annotation") return fail("root element must be <annotation>, found <" + std::string(name) + ">");
      saw_root = true;
      check_attributes(attrs, name, {});
    } else if (parent == "annotation" && name == "filename") {
      begin_text(Text::filename);
      check_attributes(attrs, name, {});
    } else if (parent == "annotation" && name == "size") {
      check_attributes(attrs, name, {"width", "height"});
      if (!number(attribute(attrs, "width"), doc.width) ||
          !number(attribute(attrs, "height"), doc.height)) {
        return fail("<size> needs integer width and height attributes");
      }
      if (doc.width <= 0 || doc.height <= 0) return fail("<size> must be positive");
      saw_size = true;
    } else if (parent == "annotation" && name == "object") {
      check_attributes(attrs, name, {});
      doc.objects.emplace_back();
    } else if (parent == "object" && name == "name") {
      check_attributes(attrs, name, {});
      begin_text(Text::name);
    } else if (parent == "object" && name == "user") {
      check_attributes(attrs, name, {});
      begin_text(Text::user);
    } else if (parent == "object" && name == "polygon") {
      check_attributes(attrs, name, {});
      doc.objects.back().polygons.emplace_back();
      polygon_lines.push_back({doc.objects.size() - 1, doc.objects.back().polygons.size() - 1, line()});
    } else if (parent == "polygon" && name == "pt") {
      check_attributes(attrs, name, {"x", "y"});
      Point2 p;
      if (!number(attribute(attrs, "x"), p.x) || !number(attribute(attrs, "y"), p.y) ||
          !std::isfinite(p.x) || !std::isfinite(p.y)) {
        return fail("<pt> needs numeric x and y attributes");
      }
      doc.objects.back().polygons.back().vertices.push_back(p);
    } else {
      known = false;
    }
    if (!known) {
      warn("unknown element <" + std::string(name) + "> ignored");
      skip_depth_ = 1;
      return;
    }
    stack_.emplace_back(name);
  }

  void end(const XML_Char* raw) {
    if (!error.empty()) return;
    if (skip_depth_ > 0) {
      --skip_depth_;
      return;
    }
    const std::string_view name = raw;
    auto& doc = result.document;
    if (text_ != Text::none) {
      std::string value(trim(buffer_));
      switch (text_) {
        case Text::filename: doc.filename = std::move(value); saw_filename = true; break;
        case Text::name: doc.objects.back().name = std::move(value); break;
        case Text::user: doc.objects.back().user = std::move(value); break;
        case Text::none: break;
      }
      text_ = Text::none;
    }
    if (name == "polygon") {
      const auto& obj = doc.objects.back();
      const auto& poly = obj.polygons.back();
      if (poly.vertices.size() < 3) {
        return fail("object " + std::to_string(doc.objects.size() - 1) + " polygon " +
                    std::to_string(obj.polygons.size() - 1) + " has " +
                    std::to_string(poly.vertices.size()) + " points, at least 3 are required");
      }
    }
    stack_.pop_back();
  }

  void begin_text(Text which) {
    text_ = which;
    buffer_.clear();
  }

  XML_Parser parser_;
  std::vector<std::string> stack_;
  int skip_depth_ = 0;
  Text text_ = Text::none;
  std::string buffer_;
};

void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
}

void append_number(std::string& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

}  // namespace

void AnnotationDocument::validate() const {
  if (filename.empty()) throw Error("annotation filename is empty");
  if (width <= 0 || height <= 0) throw Error("annotation size must be positive");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& obj = objects[i];
    const std::string where = "object " + std::to_string(i);
    if (obj.name.empty()) throw Error(where + " has no name");
    if (obj.polygons.empty()) throw Error(where + " has no polygon");
    for (std::size_t j = 0; j < obj.polygons.size(); ++j) {
      const auto& poly = obj.polygons[j];
      if (poly.vertices.size() < 3) {
        throw Error(where + " polygon " + std::to_string(j) + " has fewer than 3 points");
      }
      for (const auto& p : poly.vertices) {
        if (!(p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height)) {
          throw Error(where + " polygon " + std::to_string(j) + " has a vertex outside the image");
        }
      }
    }
  }
}

std::vector<std::string> AnnotationDocument::users_for(std::string_view label) const {
  std::vector<std::string> users;
  for (const auto& obj : objects) {
    if (obj.name != label) continue;
    if (std::find(users.begin(), users.end(), obj.user) == users.end()) users.push_back(obj.user);
  }
  return users;
}

ParsedAnnotation parse_annotation(std::string_view xml) {
  XML_Parser parser = XML_ParserCreate("UTF-8");
  if (parser == nullptr) throw Error("cannot create XML parser");
  Reader reader(parser);
  XML_SetUserData(parser, &reader);
  XML_SetElementHandler(parser, &Reader::on_start, &Reader::on_end);
  XML_SetCharacterDataHandler(parser, &Reader::on_text);
  const auto status = XML_Parse(parser, xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  std::string message;
  long line = 0;
  if (!reader.error.empty()) {
    message = reader.error;
    line = reader.error_line;
  } else if (status != XML_STATUS_OK) {
    message = std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser));
    line = static_cast<long>(XML_GetCurrentLineNumber(parser));
  }
  XML_ParserFree(parser);
  if (!message.empty()) throw ParseError(message, line);

  const auto& doc = reader.result.document;
  if (!reader.saw_root) throw ParseError("missing <annotation> root", 1);
  if (!reader.saw_filename || doc.filename.empty()) throw ParseError("missing <filename>", 1);
  if (!reader.saw_size) throw ParseError("missing <size>", 1);
  for (const auto& [oi, pi, pl] : reader.polygon_lines) {
    const auto& obj = doc.objects[oi];
    for (const auto& p : obj.polygons[pi].vertices) {
      if (!(p.x >= 0.0 && p.x <= doc.width && p.y >= 0.0 && p.y <= doc.height)) {
        throw ParseError("object " + std::to_string(oi) + " polygon " + std::to_string(pi) +
                             " has a vertex outside the " + std::to_string(doc.width) + "x" +
                             std::to_string(doc.height) + " image",
                         pl);
      }
    }
  }
  for (std::size_t i = 0; i < doc.objects.size(); ++i) {
    if (doc.objects[i].name.empty()) throw ParseError("object " + std::to_string(i) + " has no <name>", 0);
    if (doc.objects[i].polygons.empty()) {
      throw ParseError("object " + std::to_string(i) + " has no <polygon>", 0);
    }
  }
  return std::move(reader.result);
}

ParsedAnnotation load_annotation(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotation '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_annotation(buffer.str());
}

std::string write_annotation(const AnnotationDocument& doc) {
  doc.validate();
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<annotation>\n  <filename>";
  append_escaped(out, doc.filename);
  out += "</filename>\n  <size width=\"" + std::to_string(doc.width) + "\" height=\"" +
         std::to_string(doc.height) + "\"/>\n";
  for (const auto& obj : doc.objects) {
    out += "  <object>\n    <name>";
    append_escaped(out, obj.name);
    out += "</name>\n    <user>";
    append_escaped(out, obj.user);
    out += "</user>\n";
    for (const auto& poly : obj.polygons) {
      out += "    <polygon>\n";
      for (const auto& p : poly.vertices) {
        out += "      <pt x=\"";
        append_number(out, p.x);
        out += "\" y=\"";
        append_number(out, p.y);
        out += "\"/>\n";
      }
      out += "    </polygon>\n";
    }
    out += "  </object>\n";
  }
  out += "</annotation>\n";
  return out;
}

}  // namespace roadocc
