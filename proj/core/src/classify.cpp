#include "pcgeval/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace pcgeval {

ProbabilityVector softmax(const Logits& logits) {
  ProbabilityVector out;
  if (logits.z.empty()) return out;
  const double shift = *std::max_element(logits.z.begin(), logits.z.end());
  out.v.resize(logits.z.size());
  double total = 0.0;
  for (std::size_t c = 0; c < logits.z.size(); ++c) {
    out.v[c] = std::exp(logits.z[c] - shift);
    total += out.v[c];
  }
  for (auto& p : out.v) p /= total;
  return out;
}

Glyph downsample(const Bitmap& image) {
  Glyph glyph{};
  if (image.width_px <= 0 || image.height_px <= 0) return glyph;
  const long w = image.width_px;
  const long h = image.height_px;
  for (long gy = 0; gy < kGlyphSide; ++gy) {
    const long y0 = gy * h / kGlyphSide;
    const long y1 = std::max(y0 + 1, (gy + 1) * h / kGlyphSide);
    for (long gx = 0; gx < kGlyphSide; ++gx) {
      const long x0 = gx * w / kGlyphSide;
      const long x1 = std::max(x0 + 1, (gx + 1) * w / kGlyphSide);
      long sum = 0;
      for (long y = y0; y < y1; ++y) {
        for (long x = x0; x < x1; ++x) sum += image.at(static_cast<int>(x), static_cast<int>(y));
      }
      const long area = (y1 - y0) * (x1 - x0);
      glyph[static_cast<std::size_t>(gy * kGlyphSide + gx)] = 2 * sum < 255 * area;
    }
  }
  return glyph;
}

TemplateSet::TemplateSet(std::vector<char> alphabet) : alphabet_(std::move(alphabet)), glyphs_(alphabet_.size()) {}

void TemplateSet::add(char character, const Bitmap& image) { add(character, downsample(image)); }

void TemplateSet::add(char character, const Glyph& glyph) {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), character);
  if (it == alphabet_.end()) {
    throw ConfigError(fmt::format("template for '{}' which is not in the alphabet", character));
  }
  glyphs_[static_cast<std::size_t>(it - alphabet_.begin())].push_back(glyph);
}

void TemplateSet::require_complete() const {
  for (std::size_t c = 0; c < alphabet_.size(); ++c) {
    if (glyphs_[c].empty()) throw ConfigError(fmt::format("no template for character '{}'", alphabet_[c]));
  }
}

Logits template_classify(const Bitmap& image, const TemplateSet& templates, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError(fmt::format("alpha must be positive, got {}", alpha));
  const auto probe = downsample(image);
  Logits out;
  out.z.reserve(templates.alphabet().size());
  for (std::size_t c = 0; c < templates.alphabet().size(); ++c) {
    int best = 0;
    for (const auto& glyph : templates.templates_for(static_cast<int>(c))) {
      int same = 0;
      for (std::size_t p = 0; p < glyph.size(); ++p) same += glyph[p] == probe[p];
      best = std::max(best, same);
    }
    out.z.push_back(alpha * best / static_cast<double>(probe.size()));
  }
  return out;
}

std::map<std::string, Logits> parse_external_logits(std::string_view json_text, int arity) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(fmt::format("external logits are not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw LoadError("external logits must be a JSON object of image -> array");

  std::map<std::string, Logits> table;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_array() || value.size() != static_cast<std::size_t>(arity)) {
      throw LoadError(fmt::format("logits for '{}' must be an array of {} numbers", key, arity));
    }
    Logits logits;
    for (const auto& entry : value) {
      if (!entry.is_number() || !std::isfinite(entry.get<double>())) {
        throw LoadError(fmt::format("logits for '{}' contain a non-finite or non-numeric value", key));
      }
      logits.z.push_back(entry.get<double>());
    }
    table.emplace(key, std::move(logits));
  }
  return table;
}

std::map<std::string, Logits> load_external_logits(const std::filesystem::path& path, int arity) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(fmt::format("cannot open external logits file {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_external_logits(text.str(), arity);
}

TemplateClassifier::TemplateClassifier(TemplateSet templates, double alpha)
    : templates_(std::move(templates)), alpha_(alpha) {
  templates_.require_complete();
  if (!(alpha_ > 0.0)) throw ConfigError(fmt::format("alpha must be positive, got {}", alpha_));
}

std::optional<Logits> TemplateClassifier::classify(const Bitmap& image, std::string_view) const {
  return template_classify(image, templates_, alpha_);
}

ExternalLogitsClassifier::ExternalLogitsClassifier(std::map<std::string, Logits> table)
    : table_(table.begin(), table.end()) {}

std::optional<Logits> ExternalLogitsClassifier::classify(const Bitmap&, std::string_view image_id) const {
  if (auto it = table_.find(image_id); it != table_.end()) return it->second;
  return std::nullopt;
}

}  // namespace pcgeval
